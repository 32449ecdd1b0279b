#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecs/combinatorics.hpp"
#include "ecs/errors.hpp"
#include "ecs/formal_sum.hpp"
#include "ecs/rational.hpp"

namespace ecs {

inline constexpr std::uint64_t default_budget = std::uint64_t{1} << 20;

// One bar: birth grade and strictly positive lifespan; dies at birth + lifespan.
struct bar {
    rational birth;
    rational lifespan;

    rational death() const { return birth + lifespan; }

    friend bool operator==(const bar&, const bar&) = default;
    // Canonical order: ascending lifespan, then birth.
    friend std::strong_ordering operator<=>(const bar& a, const bar& b) {
        if (auto c = a.lifespan <=> b.lifespan; c != 0) return c;
        return a.birth <=> b.birth;
    }
};

// Finite multiset of bars kept in canonical order (duplicates permitted).
class barcode {
public:
    barcode() = default;
    explicit barcode(std::vector<bar> bars) : bars_(std::move(bars)) {
        for (std::size_t i = 0; i < bars_.size(); ++i)
            if (bars_[i].lifespan.sign() <= 0)
                throw invalid_input("bar " + std::to_string(i) + " (birth " + bars_[i].birth.str() +
                                    ", lifespan " + bars_[i].lifespan.str() + ") has lifespan <= 0");
        std::sort(bars_.begin(), bars_.end());
    }

    const std::vector<bar>& bars() const { return bars_; }
    std::size_t size() const { return bars_.size(); }
    bool empty() const { return bars_.empty(); }
    auto begin() const { return bars_.begin(); }
    auto end() const { return bars_.end(); }

    friend bool operator==(const barcode&, const barcode&) = default;

    // The barcode as a formal sum:  sum of x^birth y^lifespan.
    formal_sum to_series() const {
        formal_sum s(1);
        for (const auto& b : bars_) s.add_term(exp_key::xy(b.birth, b.lifespan), 1);
        return s;
    }

private:
    std::vector<bar> bars_;
};

inline formal_sum birth_series(const barcode& f) {
    formal_sum s(1);
    for (const auto& b : f) s.add_term(exp_key::pure_x(b.birth), 1);
    return s;
}

inline formal_sum death_series(const barcode& f) {
    formal_sum s(1);
    for (const auto& b : f) s.add_term(exp_key::pure_x(b.death()), 1);
    return s;
}

inline formal_sum critical_series(const barcode& f) {
    return birth_series(f) - death_series(f);
}

inline formal_sum lifespan_series(const barcode& f) {
    formal_sum s(1);
    for (const auto& b : f) s.add_term(exp_key::pure_x(b.lifespan), 1);
    return s;
}

// Sum of all birth grades.
inline rational drift(const barcode& f) {
    rational d;
    for (const auto& b : f) d += b.birth;
    return d;
}

namespace detail {

inline void check_power_budget(const bigint& projected, std::uint64_t budget, const char* op) {
    if (projected > bigint(budget))
        throw budget_exceeded(std::string(op) + " would generate " + projected.str() + " bars (cap " +
                              std::to_string(budget) + ")");
}

}  // namespace detail

// p-th exterior power: one bar per size-p combination of the canonical bar
// list; birth = sum of births, lifespan = min of lifespans.
inline barcode exterior_power(const barcode& f, int p, std::uint64_t budget = default_budget) {
    if (p < 1) throw error("exterior_power: p must be >= 1");
    const auto& bars = f.bars();
    const std::size_t n = bars.size();
    if (static_cast<std::size_t>(p) > n) return barcode();
    detail::check_power_budget(binomial(static_cast<std::int64_t>(n), p), budget, "exterior power");
    std::vector<bar> out;
    for_each_combination(n, static_cast<std::size_t>(p), [&](const std::vector<std::size_t>& idx) {
        rational birth;
        for (std::size_t i : idx) birth += bars[i].birth;
        // Canonical order makes the first chosen bar the lifespan minimum.
        out.push_back(bar{birth, bars[idx.front()].lifespan});
    });
    return barcode(std::move(out));
}

inline barcode symmetric_power(const barcode& f, int p, std::uint64_t budget = default_budget) {
    if (p < 1) throw error("symmetric_power: p must be >= 1");
    const auto& bars = f.bars();
    const std::size_t n = bars.size();
    if (n == 0) return barcode();
    detail::check_power_budget(binomial(static_cast<std::int64_t>(n) + p - 1, p), budget, "symmetric power");
    std::vector<bar> out;
    for_each_multicombination(n, static_cast<std::size_t>(p), [&](const std::vector<std::size_t>& idx) {
        rational birth;
        for (std::size_t i : idx) birth += bars[i].birth;
        out.push_back(bar{birth, bars[idx.front()].lifespan});
    });
    return barcode(std::move(out));
}

inline barcode tensor_power(const barcode& f, int p, std::uint64_t budget = default_budget) {
    if (p < 1) throw error("tensor_power: p must be >= 1");
    const auto& bars = f.bars();
    const std::size_t n = bars.size();
    if (n == 0) return barcode();
    bigint projected = 1;
    for (int i = 0; i < p; ++i) projected *= n;
    detail::check_power_budget(projected, budget, "tensor power");
    std::vector<bar> out;
    for_each_tuple(n, static_cast<std::size_t>(p), [&](const std::vector<std::size_t>& idx) {
        rational birth;
        rational life = bars[idx.front()].lifespan;
        for (std::size_t i : idx) {
            birth += bars[i].birth;
            life = std::min(life, bars[i].lifespan);
        }
        out.push_back(bar{birth, life});
    });
    return barcode(std::move(out));
}

// Exterior power of a grade multiset: B must be pure in x with non-negative
// integer coefficients. Convention: p = 0 gives the unit.
inline formal_sum series_exterior_power(const formal_sum& B, int p, std::uint64_t budget = default_budget) {
    if (p < 0) throw error("series_exterior_power: p must be >= 0");
    if (p == 0) return formal_sum::one(B.axes());
    std::vector<exp_key> grades;
    for (const auto& [k, c] : B.terms()) {
        if (!k.is_pure_x() || !c.is_positive_integer()) throw not_multiset();
        bigint mult = c.as_integer();
        if (bigint(grades.size()) + mult > bigint(budget))
            throw budget_exceeded("grade multiset larger than cap " + std::to_string(budget));
        for (bigint i = 0; i < mult; ++i) grades.push_back(k);
    }
    const std::size_t n = grades.size();
    if (static_cast<std::size_t>(p) > n) return formal_sum::zero(B.axes());
    detail::check_power_budget(binomial(static_cast<std::int64_t>(n), p), budget, "series exterior power");
    formal_sum out(B.axes());
    for_each_combination(n, static_cast<std::size_t>(p), [&](const std::vector<std::size_t>& idx) {
        exp_key k = exp_key::unit(B.axes());
        for (std::size_t i : idx) k = k + grades[i];
        out.add_term(k, 1);
    });
    return out;
}

// Exterior critical series: sum over p of critical_series(f^wedge p) z^p,
// truncated at p_max when given. The projected bar count across all powers
// is checked against the budget before any enumeration.
inline formal_sum exterior_critical_series(const barcode& f, std::optional<int> p_max = std::nullopt,
                                           std::uint64_t budget = default_budget) {
    const auto n = static_cast<std::int64_t>(f.size());
    std::int64_t top = n;
    if (p_max && *p_max < top) top = std::max<std::int64_t>(*p_max, 0);
    bigint projected = 0;
    for (std::int64_t p = 1; p <= top; ++p) projected += binomial(n, p);
    detail::check_power_budget(projected, budget, "exterior critical series");
    formal_sum out(1);
    for (std::int64_t p = 1; p <= top; ++p) {
        formal_sum cp = critical_series(exterior_power(f, static_cast<int>(p), budget));
        out += cp * formal_sum::monomial(exp_key::pure_z(p), 1);
    }
    return out;
}

}  // namespace ecs
