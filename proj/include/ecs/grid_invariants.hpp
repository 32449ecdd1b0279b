#pragma once

#include <cassert>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecs/barcode.hpp"
#include "ecs/errors.hpp"
#include "ecs/formal_sum.hpp"
#include "ecs/grid_module.hpp"
#include "ecs/grid_powers.hpp"
#include "ecs/linalg.hpp"

namespace ecs {

// Ranks of all composite maps between comparable grades inside the box.
// Only positive ranks are stored; absent pairs have rank zero.
struct rank_invariant {
    std::map<std::pair<grade, grade>, int> ranks;

    int rank(const grade& from, const grade& to) const {
        auto it = ranks.find({from, to});
        return it == ranks.end() ? 0 : it->second;
    }

    friend bool operator==(const rank_invariant&, const rank_invariant&) = default;
};

// Composite matrices by dynamic programming over monotone lattice paths;
// path independence is a consequence of the commuting squares (asserted in
// debug builds by comparing two extension axes).
inline rank_invariant rank_invariant_of(const grid_module& m) {
    const auto n = static_cast<std::size_t>(m.axes());
    rank_invariant out;
    m.box().for_each([&](const grade& from) {
        if (m.dim(from) == 0) return;
        std::map<grade, rat_matrix> composite;
        composite[from] = rat_matrix::identity(static_cast<std::size_t>(m.dim(from)));
        grid_box upper{from, m.box().hi};
        upper.for_each([&](const grade& to) {
            if (to == from) return;
            std::optional<rat_matrix> comp;
            for (std::size_t i = 0; i < n; ++i) {
                if (to[i] == from[i]) continue;
                grade prev = grade_shift(to, i, -1);
                auto it = composite.find(prev);
                rat_matrix from_prev =
                    it == composite.end()
                        ? rat_matrix(static_cast<std::size_t>(m.dim(prev)), static_cast<std::size_t>(m.dim(from)))
                        : it->second;
                rat_matrix via = m.step(prev, i) * from_prev;
                if (!comp) comp = std::move(via);
#ifndef NDEBUG
                else
                    assert(*comp == via && "composite map depends on the path");
#else
                else
                    break;
#endif
            }
            if (comp && !comp->is_zero()) composite[to] = *comp;
            int r = comp ? static_cast<int>(matrix_rank(*comp)) : 0;
            if (r > 0) out.ranks[{from, to}] = r;
        });
        out.ranks[{from, from}] = m.dim(from);
    });
    return out;
}

// dim of the grade-g quotient by everything arriving from strictly below;
// immediate predecessors suffice since any lower image factors through them.
inline int onset_dim(const grid_module& m, const grade& g) {
    const int d = m.dim(g);
    if (d == 0) return 0;
    const auto n = static_cast<std::size_t>(m.axes());
    row_reducer incoming(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n && !incoming.full_rank(); ++i) {
        grade prev = grade_shift(g, i, -1);
        if (m.dim(prev) == 0) continue;
        rat_matrix s = m.step(prev, i);
        for (std::size_t c = 0; c < s.cols() && !incoming.full_rank(); ++c) {
            rat_vec col(static_cast<std::size_t>(d));
            for (std::size_t r = 0; r < s.rows(); ++r) col[r] = s.at(r, c);
            incoming.add(std::move(col));
        }
    }
    return d - static_cast<int>(incoming.rank());
}

// Total number of minimal generators.
inline std::int64_t onset_total(const grid_module& m) {
    std::int64_t t = 0;
    m.box().for_each([&](const grade& g) { t += onset_dim(m, g); });
    return t;
}

// Grade-indexed Euler characteristic of the onset homology, computed by
// inclusion-exclusion over coordinate subsets:
//   sum_{S subset of axes} (-1)^|S| dim(g - e_S)  at every grade g.
// For one axis this is the barcode critical series; for n >= 2 the x
// exponent of each term is the grade vector.
inline formal_sum critical_series(const grid_module& m) {
    const auto n = static_cast<std::size_t>(m.axes());
    formal_sum out(static_cast<int>(n));
    m.box().for_each(
        [&](const grade& g) {
            std::int64_t value = 0;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                grade h = g;
                int bits = 0;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask >> i & 1) {
                        --h[i];
                        ++bits;
                    }
                value += (bits % 2 ? -1 : 1) * m.dim(h);
            }
            if (value == 0) return;
            std::vector<rational> xs(n);
            for (std::size_t i = 0; i < n; ++i) xs[i] = rational(g[i]);
            out.add_term(exp_key::grade_vector(std::move(xs)), rational(value));
        },
        /*pad=*/1);
    return out;
}

// Exterior critical series of a grid module, up to z^p_max. Powers above
// the number of minimal generators vanish and are skipped.
inline formal_sum module_ecs(const grid_module& m, int p_max, std::uint64_t budget = default_budget) {
    if (p_max < 1) throw error("module_ecs: p_max must be >= 1");
    formal_sum out(static_cast<int>(m.axes()));
    const std::int64_t top = std::min<std::int64_t>(p_max, onset_total(m));
    for (std::int64_t p = 1; p <= top; ++p) {
        formal_sum cp = critical_series(exterior_power(m, static_cast<int>(p), budget));
        for (const auto& [k, c] : cp.terms()) {
            exp_key shifted = k;
            shifted.z = p;
            out.add_term(shifted, c);
        }
    }
    return out;
}

// Interval multiplicities of a one-axis module by inclusion-exclusion on
// the rank invariant; a negative multiplicity signals invalid input.
inline barcode barcode_of_1d(const grid_module& m) {
    if (m.axes() != 1) throw axis_mismatch("barcode_of_1d requires a one-axis module");
    rank_invariant ri = rank_invariant_of(m);
    const std::int64_t lo = m.box().lo[0], hi = m.box().hi[0];
    auto rank = [&](std::int64_t a, std::int64_t b) -> int {
        if (a < lo || b > hi || a > b) return 0;
        return ri.rank({a}, {b});
    };
    std::vector<bar> bars;
    for (std::int64_t a = lo; a <= hi; ++a)
        for (std::int64_t b = a + 1; b <= hi + 1; ++b) {
            int mult = rank(a, b - 1) - rank(a, b) - rank(a - 1, b - 1) + rank(a - 1, b);
            if (mult < 0)
                throw negative_multiplicity("negative multiplicity for interval [" + std::to_string(a) + "," +
                                            std::to_string(b) + ")");
            for (int i = 0; i < mult; ++i) bars.push_back(bar{rational(a), rational(b - a)});
        }
    return barcode(std::move(bars));
}

}  // namespace ecs
