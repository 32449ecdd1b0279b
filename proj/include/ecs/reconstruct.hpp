#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ecs/barcode.hpp"
#include "ecs/combinatorics.hpp"
#include "ecs/errors.hpp"
#include "ecs/formal_sum.hpp"

namespace ecs {

// Per-power view of an exterior critical series: powers[p-1] is the pure-x
// critical series attached to z^p. Construction rejects series that cannot
// be an exterior critical series on syntactic grounds.
struct ecs_view {
    std::vector<formal_sum> powers;

    static ecs_view from_series(const formal_sum& e) {
        ecs_view v;
        for (const auto& [k, c] : e.terms()) {
            if (k.axes() != 1) throw malformed_ecs("parse", "series must be single-axis");
            if (k.y != 0) throw malformed_ecs("parse", "series carries a y exponent");
            if (k.z < 1) throw malformed_ecs("parse", "term with z power < 1");
            if (!c.is_integer()) throw malformed_ecs("parse", "non-integer coefficient " + c.str());
            if (static_cast<std::size_t>(k.z) > v.powers.size()) v.powers.resize(static_cast<std::size_t>(k.z), formal_sum(1));
            v.powers[static_cast<std::size_t>(k.z) - 1].add_term(exp_key::pure_x(k.x[0]), c);
        }
        return v;
    }

    const formal_sum& cp(int p) const {
        static const formal_sum empty(1);
        if (p < 1 || static_cast<std::size_t>(p) > powers.size()) return empty;
        return powers[static_cast<std::size_t>(p) - 1];
    }

    int max_power() const { return static_cast<int>(powers.size()); }
};

// Number of bars: the largest p with a nonzero p-th critical series.
// A zero series below a nonzero one cannot occur for a real barcode.
inline int count_bars(const ecs_view& e) {
    int n = 0;
    for (int p = e.max_power(); p >= 1; --p)
        if (!e.cp(p).is_zero()) {
            n = p;
            break;
        }
    for (int p = 1; p < n; ++p)
        if (e.cp(p).is_zero())
            throw malformed_ecs("count-bars", "zero critical series at power " + std::to_string(p) +
                                                  " below nonzero power " + std::to_string(n));
    return n;
}

// Recovers the ascending lifespans l_1 <= ... <= l_n from the moments of the
// per-power critical series:
//   l_i = -moment(C_{n-i+1}) - sum_{j<i} binom(n-j, n-i) l_j.
inline std::vector<rational> lifespans(const ecs_view& e, int n) {
    if (n < 1) throw malformed_ecs("lifespans", "bar count must be >= 1");
    std::vector<rational> ls;
    ls.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        rational li = -e.cp(n - i + 1).moment();
        for (int j = 1; j < i; ++j) li -= rational(binomial(n - j, n - i)) * ls[static_cast<std::size_t>(j) - 1];
        if (li.sign() <= 0)
            throw malformed_ecs("lifespans", "recovered lifespan " + li.str() + " at position " + std::to_string(i) +
                                                 " is not positive");
        if (i > 1 && li < ls.back())
            throw malformed_ecs("lifespans", "recovered lifespans are not ascending");
        ls.push_back(li);
    }
    return ls;
}

// The drift: C(f^n) must factor as x^drift (1 - x^{l1}).
inline rational top_drift(const formal_sum& cn, const rational& l1) {
    if (cn.is_zero()) throw malformed_ecs("top-drift", "top critical series is zero");
    try {
        formal_sum unit_minus = formal_sum::one(1) - formal_sum::monomial(exp_key::pure_x(l1), 1);
        exp_key k = cn.divide_exact(unit_minus).monomial_exponent();
        if (!k.is_pure_x()) throw not_monomial();
        return k.x[0];
    } catch (const non_exact&) {
        throw malformed_ecs("top-drift", "top critical series does not factor as x^drift (1 - x^l1)");
    } catch (const not_monomial&) {
        throw malformed_ecs("top-drift", "quotient of top critical series is not a unit monomial");
    }
}

// Drift of the p-th exterior power: binom(n-1, p-1) * drift.
inline rational power_drift(const rational& delta, int n, int p) {
    if (p < 1 || p > n) throw error("power_drift: need 1 <= p <= n");
    return rational(binomial(n - 1, p - 1)) * delta;
}

// Inverts the critical series of a barcode whose bars all share lifespan l:
// the quotient C / (1 - x^l) is the birth series.
inline barcode solve_single(const formal_sum& c, const rational& l) {
    if (c.is_zero()) return barcode();
    if (l.sign() <= 0) throw malformed_ecs("solve-single", "lifespan must be positive");
    formal_sum births;
    try {
        births = c.divide_exact(formal_sum::one(1) - formal_sum::monomial(exp_key::pure_x(l), 1));
    } catch (const non_exact&) {
        throw malformed_ecs("solve-single", "critical series is not divisible by 1 - x^" + l.str());
    }
    std::vector<bar> bars;
    for (const auto& [k, mult] : births.terms()) {
        if (!k.is_pure_x() || !mult.is_positive_integer())
            throw malformed_ecs("solve-single", "birth series has coefficient " + mult.str() +
                                                    ", expected a positive integer");
        for (bigint i = 0; i < mult.as_integer(); ++i) bars.push_back(bar{k.x[0], l});
    }
    return barcode(std::move(bars));
}

// Inverts the critical series of a barcode with exactly one bar of lifespan
// lt and n-1 bars of lifespan l != lt, given its drift. The outlier's birth
// is determined by the second moment; the rest reduces to solve_single.
inline barcode solve_two(const formal_sum& c, const rational& l, const rational& lt, const rational& delta,
                         long long n) {
    if (l == lt) throw error("solve_two: the two lifespans must differ");
    rational sm;
    try {
        sm = c.second_moment();
    } catch (const not_pure_x&) {
        throw malformed_ecs("solve-two", "critical series is not pure in x");
    }
    rational alpha = (sm - (l + lt) * (l - lt) + rational(2) * l * delta + rational(n) * l * l) /
                     (rational(2) * (l - lt));
    formal_sum outlier = formal_sum::monomial(exp_key::pure_x(alpha), 1) -
                         formal_sum::monomial(exp_key::pure_x(alpha + lt), 1);
    barcode rest = solve_single(c - outlier, l);
    if (rest.size() + 1 != static_cast<std::size_t>(n))
        throw malformed_ecs("solve-two", "recovered " + std::to_string(rest.size() + 1) + " bars, expected " +
                                             std::to_string(n));
    std::vector<bar> bars = rest.bars();
    bars.push_back(bar{alpha, lt});
    barcode out(std::move(bars));
    if (critical_series(out) != c || drift(out) != delta)
        throw malformed_ecs("solve-two", "re-expanded critical series does not match the input");
    return out;
}

// Birth series of the full barcode, recovered through f^(n-1): that power
// has one bar of lifespan l2 and n-1 bars of lifespan l1, so one of the two
// fixed-lifespan solvers applies; then B(f) = x^drift B(f^(n-1))|_{1/x}.
inline formal_sum birth_series_of(const ecs_view& e, int n, const std::vector<rational>& ls,
                                  const rational& delta) {
    if (n < 1) throw malformed_ecs("birth-series", "bar count must be >= 1");
    if (n == 1) return formal_sum::monomial(exp_key::pure_x(delta), 1);
    barcode h = ls[0] == ls[1] ? solve_single(e.cp(n - 1), ls[0])
                               : solve_two(e.cp(n - 1), ls[0], ls[1], power_drift(delta, n, n - 1), n);
    if (h.size() != static_cast<std::size_t>(n))
        throw malformed_ecs("birth-series", "power n-1 has " + std::to_string(h.size()) + " bars, expected " +
                                                std::to_string(n));
    return formal_sum::monomial(exp_key::pure_x(delta), 1) * birth_series(h).invert_x();
}

namespace detail {

// The proof's induction on the number of distinct lifespans.
inline barcode reconstruct_core(const ecs_view& e, std::uint64_t budget) {
    const int n = count_bars(e);
    if (n == 0) return barcode();
    const std::vector<rational> ls = lifespans(e, n);
    const rational delta = top_drift(e.cp(n), ls[0]);
    const formal_sum births = birth_series_of(e, n, ls, delta);

    const rational l = ls[0];
    int m = 1;
    while (m < n && ls[static_cast<std::size_t>(m)] == l) ++m;

    if (m == n) {
        // Single lifespan: solve directly.
        barcode f = solve_single(e.cp(1), l);
        if (f.size() != static_cast<std::size_t>(n))
            throw malformed_ecs("solve-single", "recovered " + std::to_string(f.size()) + " bars, expected " +
                                                    std::to_string(n));
        return f;
    }

    // Recover f^(n-m): exactly one bar of lifespan l_{m+1}, the rest l.
    bigint h_bars = binomial(n, m);
    if (h_bars > bigint(budget))
        throw budget_exceeded("power n-m has " + h_bars.str() + " bars (cap " + std::to_string(budget) + ")");
    const rational l_next = ls[static_cast<std::size_t>(m)];
    barcode h = solve_two(e.cp(n - m), l, l_next, power_drift(delta, n, n - m),
                          static_cast<long long>(h_bars));

    // delta_tail = alpha_{m+1} + ... + alpha_n, from
    //   f^(n-m) - y^l B(f)^(wedge n-m) = x^delta_tail (y^{l_{m+1}} - y^l).
    rational delta_tail;
    try {
        formal_sum numer = h.to_series() - formal_sum::monomial(exp_key::pure_y(l), 1) *
                                               series_exterior_power(births, n - m, budget);
        formal_sum denom = formal_sum::monomial(exp_key::pure_y(l_next), 1) -
                           formal_sum::monomial(exp_key::pure_y(l), 1);
        exp_key k = numer.divide_exact(denom).monomial_exponent();
        if (!k.is_pure_x()) throw not_monomial();
        delta_tail = k.x[0];
    } catch (const non_exact&) {
        throw malformed_ecs("delta-extraction", "power n-m is inconsistent with the birth series");
    } catch (const not_monomial&) {
        throw malformed_ecs("delta-extraction", "quotient is not a unit monomial");
    }

    formal_sum tail_births;  // B of the bars above the minimal lifespan
    barcode direct_tail;
    if (m == n - 1) {
        direct_tail = barcode({bar{delta_tail, ls.back()}});
        tail_births = formal_sum::monomial(exp_key::pure_x(delta_tail), 1);
    } else {
        // Auxiliary barcode g: bars of f^(n-m-1) shortened by l, minus those
        // that vanish; its critical series comes from the known data.
        formal_sum cg;
        try {
            formal_sum correction = series_exterior_power(births, n - m - 1, budget) *
                                    (formal_sum::one(1) - formal_sum::monomial(exp_key::pure_x(l), 1));
            cg = formal_sum::monomial(exp_key::pure_x(-l), 1) * (e.cp(n - m - 1) - correction);
        } catch (const not_multiset&) {
            throw malformed_ecs("critical-of-g", "birth series is not a grade multiset");
        }
        const rational lg = l_next - l;
        const rational lg_out = ls[static_cast<std::size_t>(m) + 1] - l;
        barcode g = lg == lg_out ? solve_single(cg, lg)
                                 : solve_two(cg, lg, lg_out, rational(n - m - 1) * delta_tail, n - m);
        if (g.size() != static_cast<std::size_t>(n - m))
            throw malformed_ecs("critical-of-g", "auxiliary barcode has " + std::to_string(g.size()) +
                                                     " bars, expected " + std::to_string(n - m));
        tail_births = formal_sum::monomial(exp_key::pure_x(delta_tail), 1) * birth_series(g).invert_x();
    }

    // B-bar: births of the bars at the minimal lifespan.
    formal_sum bbar = births - tail_births;
    rational bbar_count;
    for (const auto& [k, cm] : bbar.terms()) {
        if (!k.is_pure_x() || !cm.is_positive_integer())
            throw malformed_ecs("split", "minimal-lifespan births have coefficient " + cm.str());
        bbar_count += cm;
    }
    if (bbar_count != rational(m))
        throw malformed_ecs("split", "minimal-lifespan births count " + bbar_count.str() + ", expected " +
                                         std::to_string(m));

    // Sub-problem: C(tail^p) = C(f^p) - (1 - x^l) sum_i bbar^(wedge i) B(tail)^(wedge p-i).
    formal_sum one_minus = formal_sum::one(1) - formal_sum::monomial(exp_key::pure_x(l), 1);
    ecs_view sub;
    sub.powers.assign(static_cast<std::size_t>(n - m), formal_sum(1));
    try {
        std::vector<formal_sum> bbar_pows, tail_pows;
        for (int i = 0; i <= n; ++i) {
            bbar_pows.push_back(series_exterior_power(bbar, i, budget));
            tail_pows.push_back(series_exterior_power(tail_births, i, budget));
        }
        for (int p = 1; p <= n; ++p) {
            formal_sum mixed(1);
            for (int i = 1; i <= p; ++i)
                mixed += bbar_pows[static_cast<std::size_t>(i)] * tail_pows[static_cast<std::size_t>(p - i)];
            formal_sum cp = e.cp(p) - one_minus * mixed;
            if (p <= n - m)
                sub.powers[static_cast<std::size_t>(p) - 1] = std::move(cp);
            else if (!cp.is_zero())
                throw malformed_ecs("sub-series", "power " + std::to_string(p) +
                                                      " of the remainder should vanish but does not");
        }
    } catch (const not_multiset&) {
        throw malformed_ecs("sub-series", "split births are not grade multisets");
    }

    barcode tail;
    if (m == n - 1) {
        tail = direct_tail;
        if (sub.powers[0] != critical_series(tail))
            throw malformed_ecs("sub-series", "remainder bar is inconsistent with the split");
    } else {
        tail = reconstruct_core(sub, budget);
    }
    if (tail.size() != static_cast<std::size_t>(n - m))
        throw malformed_ecs("sub-series", "remainder has " + std::to_string(tail.size()) + " bars, expected " +
                                              std::to_string(n - m));

    std::vector<bar> bars = tail.bars();
    for (const auto& [k, cm] : bbar.terms())
        for (bigint i = 0; i < cm.as_integer(); ++i) bars.push_back(bar{k.x[0], l});
    return barcode(std::move(bars));
}

}  // namespace detail

// Inverse of ecs(): rebuilds the unique barcode whose exterior critical
// series equals e. Every step verifies its own consistency and the final
// result is re-expanded and compared against the input, so any series
// outside the image is rejected with malformed_ecs.
inline barcode reconstruct(const ecs_view& e, std::uint64_t budget = default_budget) {
    barcode f = detail::reconstruct_core(e, budget);
    ecs_view check = ecs_view::from_series(exterior_critical_series(f, std::nullopt, budget));
    int top = std::max(check.max_power(), e.max_power());
    for (int p = 1; p <= top; ++p)
        if (check.cp(p) != e.cp(p))
            throw malformed_ecs("final-verification", "re-expanded series differs at power " + std::to_string(p));
    return f;
}

inline barcode reconstruct(const formal_sum& e, std::uint64_t budget = default_budget) {
    return reconstruct(ecs_view::from_series(e), budget);
}

}  // namespace ecs
