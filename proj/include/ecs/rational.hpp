#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ecs/errors.hpp"

namespace ecs {

using bigint = boost::multiprecision::cpp_int;

// Exact rational scalar: always in lowest terms, denominator > 0.
// Equality and ordering are exact value comparisons.
class rational {
public:
    rational() : v_(0) {}
    rational(long long n) : v_(n) {}  // NOLINT: implicit by design
    rational(const bigint& n) : v_(n) {}
    rational(const bigint& num, const bigint& den) {
        if (den == 0) throw divide_by_zero();
        if (den < 0)
            v_ = boost::multiprecision::cpp_rational(-num, bigint(-den));
        else
            v_ = boost::multiprecision::cpp_rational(num, den);
    }

    bigint numerator() const { return boost::multiprecision::numerator(v_); }
    bigint denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return denominator() == 1; }
    bool is_nonneg_integer() const { return is_integer() && v_ >= 0; }
    bool is_positive_integer() const { return is_integer() && v_ > 0; }

    int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

    // Valid only when is_integer(); the value as a bigint.
    bigint as_integer() const { return numerator(); }

    rational operator-() const {
        rational r;
        r.v_ = -v_;
        return r;
    }
    rational& operator+=(const rational& o) {
        v_ += o.v_;
        return *this;
    }
    rational& operator-=(const rational& o) {
        v_ -= o.v_;
        return *this;
    }
    rational& operator*=(const rational& o) {
        v_ *= o.v_;
        return *this;
    }
    rational& operator/=(const rational& o) {
        if (o.is_zero()) throw divide_by_zero();
        v_ /= o.v_;
        return *this;
    }
    friend rational operator+(rational a, const rational& b) { return a += b; }
    friend rational operator-(rational a, const rational& b) { return a -= b; }
    friend rational operator*(rational a, const rational& b) { return a *= b; }
    friend rational operator/(rational a, const rational& b) { return a /= b; }

    friend bool operator==(const rational& a, const rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const rational& a, const rational& b) {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ == b.v_) return std::strong_ordering::equal;
        return std::strong_ordering::greater;
    }

    // "n" or "n/d"; the grammar accepted by parse().
    std::string str() const {
        std::string s = numerator().str();
        if (!is_integer()) s += "/" + denominator().str();
        return s;
    }

    // Grammar: optional sign, digits, optionally "/" digits.
    static std::optional<rational> parse(std::string_view text) {
        if (text.empty()) return std::nullopt;
        std::size_t pos = 0;
        bool negative = false;
        if (text[pos] == '+' || text[pos] == '-') {
            negative = text[pos] == '-';
            ++pos;
        }
        std::size_t digits_begin = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == digits_begin) return std::nullopt;
        bigint num(std::string(text.substr(digits_begin, pos - digits_begin)));
        bigint den = 1;
        if (pos < text.size()) {
            if (text[pos] != '/') return std::nullopt;
            ++pos;
            std::size_t den_begin = pos;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
            if (pos == den_begin || pos != text.size()) return std::nullopt;
            den = bigint(std::string(text.substr(den_begin, pos - den_begin)));
            if (den == 0) return std::nullopt;
        }
        if (negative) num = -num;
        return rational(num, den);
    }

private:
    boost::multiprecision::cpp_rational v_;
};

}  // namespace ecs
