#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ecs/errors.hpp"
#include "ecs/rational.hpp"

namespace ecs {

enum class indet { x, y, z };

// Exponent key of one term: per-axis x exponents (one slot per grid axis,
// a single slot in the barcode setting), a y exponent and a z power.
// Total order: lexicographic ascending on (x..., y, z).
struct exp_key {
    std::vector<rational> x;
    rational y;
    std::int64_t z = 0;

    static exp_key unit(int axes = 1) { return exp_key{std::vector<rational>(static_cast<std::size_t>(axes)), rational(), 0}; }
    static exp_key pure_x(const rational& a) { return exp_key{{a}, rational(), 0}; }
    static exp_key pure_y(const rational& b) { return exp_key{{rational()}, b, 0}; }
    static exp_key pure_z(std::int64_t k) { return exp_key{{rational()}, rational(), k}; }
    static exp_key xy(const rational& a, const rational& b) { return exp_key{{a}, b, 0}; }
    static exp_key xz(const rational& a, std::int64_t k) { return exp_key{{a}, rational(), k}; }
    static exp_key grade_vector(std::vector<rational> g) { return exp_key{std::move(g), rational(), 0}; }

    int axes() const { return static_cast<int>(x.size()); }
    bool is_unit() const {
        if (y != 0 || z != 0) return false;
        for (const auto& a : x)
            if (a != 0) return false;
        return true;
    }
    bool is_pure_x() const { return y == 0 && z == 0; }

    friend exp_key operator+(const exp_key& a, const exp_key& b) {
        if (a.x.size() != b.x.size()) throw axis_mismatch("exponent keys have different x arities");
        exp_key r = a;
        for (std::size_t i = 0; i < r.x.size(); ++i) r.x[i] += b.x[i];
        r.y += b.y;
        r.z += b.z;
        return r;
    }
    friend exp_key operator-(const exp_key& a, const exp_key& b) {
        if (a.x.size() != b.x.size()) throw axis_mismatch("exponent keys have different x arities");
        exp_key r = a;
        for (std::size_t i = 0; i < r.x.size(); ++i) r.x[i] -= b.x[i];
        r.y -= b.y;
        r.z -= b.z;
        return r;
    }

    friend bool operator==(const exp_key& a, const exp_key& b) {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
    friend std::strong_ordering operator<=>(const exp_key& a, const exp_key& b) {
        if (auto c = a.x.size() <=> b.x.size(); c != 0) return c;
        for (std::size_t i = 0; i < a.x.size(); ++i)
            if (auto c = a.x[i] <=> b.x[i]; c != 0) return c;
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.z <=> b.z;
    }
};

// Sparse formal polynomial with rational coefficients over exp_key exponents.
// Canonical: no stored coefficient is zero; iteration follows the key order.
// Equality is term-by-term exact equality.
class formal_sum {
public:
    using term_map = std::map<exp_key, rational>;

    explicit formal_sum(int axes = 1) : axes_(axes) {}

    static formal_sum zero(int axes = 1) { return formal_sum(axes); }
    static formal_sum one(int axes = 1) { return monomial(exp_key::unit(axes), 1); }
    static formal_sum monomial(const exp_key& k, const rational& c) {
        formal_sum s(k.axes());
        s.add_term(k, c);
        return s;
    }

    int axes() const { return axes_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const term_map& terms() const { return terms_; }

    rational coeff(const exp_key& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? rational() : it->second;
    }

    void add_term(const exp_key& k, const rational& c) {
        if (c.is_zero()) return;
        if (k.axes() != axes_) throw axis_mismatch("term arity does not match sum arity");
        auto [it, inserted] = terms_.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    formal_sum& operator+=(const formal_sum& o) {
        check_axes(o);
        if (terms_.empty()) axes_ = o.axes_;
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    formal_sum& operator-=(const formal_sum& o) {
        check_axes(o);
        if (terms_.empty()) axes_ = o.axes_;
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    friend formal_sum operator+(formal_sum a, const formal_sum& b) { return a += b; }
    friend formal_sum operator-(formal_sum a, const formal_sum& b) { return a -= b; }
    formal_sum operator-() const {
        formal_sum r(axes_);
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }

    // Convolution product: exponent keys add componentwise.
    friend formal_sum operator*(const formal_sum& a, const formal_sum& b) {
        if (a.is_zero()) return zero(b.axes_);
        if (b.is_zero()) return zero(a.axes_);
        a.check_axes(b);
        formal_sum r(a.axes_);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) r.add_term(ka + kb, ca * cb);
        return r;
    }
    friend formal_sum operator*(const rational& c, const formal_sum& s) {
        formal_sum r(s.axes_);
        if (c.is_zero()) return r;
        for (const auto& [k, v] : s.terms_) r.terms_.emplace(k, c * v);
        return r;
    }

    // Zero sums are equal regardless of arity; otherwise keys carry the arity.
    friend bool operator==(const formal_sum& a, const formal_sum& b) {
        return a.terms_ == b.terms_;
    }

    bool is_pure_x() const {
        for (const auto& [k, c] : terms_)
            if (!k.is_pure_x()) return false;
        return true;
    }

    bool has_integer_coeffs() const {
        for (const auto& [k, c] : terms_)
            if (!c.is_integer()) return false;
        return true;
    }

    rational coefficient_sum() const {
        rational s;
        for (const auto& [k, c] : terms_) s += c;
        return s;
    }

    // Drops the chosen exponent from every key; colliding keys merge.
    formal_sum substitute_one(indet which) const {
        formal_sum r(axes_);
        for (const auto& [k, c] : terms_) {
            exp_key nk = k;
            switch (which) {
                case indet::x:
                    nk.x.assign(nk.x.size(), rational());
                    break;
                case indet::y:
                    nk.y = rational();
                    break;
                case indet::z:
                    nk.z = 0;
                    break;
            }
            r.add_term(nk, c);
        }
        return r;
    }

    // Negates every x exponent; y and z exponents unchanged.
    formal_sum invert_x() const {
        formal_sum r(axes_);
        for (const auto& [k, c] : terms_) {
            exp_key nk = k;
            for (auto& a : nk.x) a = -a;
            r.terms_.emplace(nk, c);
        }
        return r;
    }

    // Sum of coefficient * x-exponent; defined for single-axis pure-x sums.
    rational moment() const {
        rational m;
        for (const auto& [k, c] : terms_) {
            if (!k.is_pure_x() || k.axes() != 1) throw not_pure_x();
            m += c * k.x[0];
        }
        return m;
    }

    // Sum of coefficient * x-exponent^2 over a single-axis pure-x sum.
    rational second_moment() const {
        rational m;
        for (const auto& [k, c] : terms_) {
            if (!k.is_pure_x() || k.axes() != 1) throw not_pure_x();
            m += c * k.x[0] * k.x[0];
        }
        return m;
    }

    // Exact division: returns q with q * d == *this, else throws non_exact.
    // Cancels least terms repeatedly; the iteration bound turns a
    // non-terminating division into a diagnosable error.
    formal_sum divide_exact(const formal_sum& d) const {
        if (d.is_zero()) throw divide_by_zero();
        if (is_zero()) return zero(d.axes_);
        check_axes(d);
        const std::size_t bound = term_count() * 4 * d.term_count() + 64;
        formal_sum q(axes_);
        formal_sum r = *this;
        const auto& [dk, dc] = *d.terms_.begin();
        for (std::size_t iter = 0; !r.is_zero(); ++iter) {
            if (iter >= bound) throw non_exact();
            const auto& [rk, rc] = *r.terms_.begin();
            exp_key tk = rk - dk;
            if (tk.z < 0) throw non_exact();
            rational tc = rc / dc;
            q.add_term(tk, tc);
            r -= formal_sum::monomial(tk, tc) * d;
        }
        return q;
    }

    // The unique key when the sum is a single term with coefficient 1.
    exp_key monomial_exponent() const {
        if (terms_.size() != 1 || terms_.begin()->second != rational(1)) throw not_monomial();
        return terms_.begin()->first;
    }

private:
    void check_axes(const formal_sum& o) const {
        if (!terms_.empty() && !o.terms_.empty() && axes_ != o.axes_)
            throw axis_mismatch("formal sums have different x arities");
    }

    int axes_;
    term_map terms_;
};

}  // namespace ecs
