#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ecs/barcode.hpp"
#include "ecs/combinatorics.hpp"
#include "ecs/errors.hpp"
#include "ecs/grid_module.hpp"
#include "ecs/linalg.hpp"

namespace ecs {

namespace detail {

// Homogeneous basis of a grid module flattened into one indexed list, with
// the expansion of every unit step precomputed per basis element.
struct flat_basis {
    std::vector<grade> grades;  // basis index -> grade
    // step_exp[axis][index] = expansion of x_axis * b_index in the basis
    std::vector<std::vector<std::vector<std::pair<std::size_t, rational>>>> step_exp;

    explicit flat_basis(const grid_module& m) {
        std::map<grade, std::size_t> offset;
        for (const auto& [g, d] : m.dims()) {
            offset[g] = grades.size();
            for (int u = 0; u < d; ++u) grades.push_back(g);
        }
        const auto n = static_cast<std::size_t>(m.axes());
        step_exp.assign(n, std::vector<std::vector<std::pair<std::size_t, rational>>>(grades.size()));
        for (const auto& [g, d] : m.dims()) {
            for (std::size_t i = 0; i < n; ++i) {
                grade t = grade_shift(g, i, 1);
                if (m.dim(t) == 0) continue;
                rat_matrix s = m.step(g, i);
                for (int u = 0; u < d; ++u) {
                    auto& exp = step_exp[i][offset[g] + static_cast<std::size_t>(u)];
                    for (std::size_t k = 0; k < s.rows(); ++k)
                        if (!s.at(k, static_cast<std::size_t>(u)).is_zero())
                            exp.emplace_back(offset[t] + k, s.at(k, static_cast<std::size_t>(u)));
                }
            }
        }
    }

    grade wedge_grade(const std::vector<std::size_t>& idx) const {
        grade g(grades.front().size(), 0);
        for (std::size_t i : idx)
            for (std::size_t c = 0; c < g.size(); ++c) g[c] += grades[i][c];
        return g;
    }
};

// Sorts wedge slots ascending; returns the permutation sign, or nullopt
// when a repeated slot makes the wedge vanish.
inline std::optional<int> canonicalize_wedge(std::vector<std::size_t>& slots) {
    int sign = 1;
    for (std::size_t i = 1; i < slots.size(); ++i) {
        std::size_t j = i;
        while (j > 0 && slots[j] < slots[j - 1]) {
            std::swap(slots[j], slots[j - 1]);
            sign = -sign;
            --j;
        }
        if (j > 0 && slots[j] == slots[j - 1]) return std::nullopt;
    }
    return sign;
}

// One graded quotient under construction: raw basis with an index, the
// relation span, and (once sealed) the chosen complement basis.
struct graded_quotient {
    std::vector<std::size_t> free_cols;
    std::optional<row_reducer> reducer;
    std::size_t raw_size = 0;

    void seal() {
        if (reducer)
            free_cols = reducer->free_columns();
        else {
            free_cols.resize(raw_size);
            for (std::size_t i = 0; i < raw_size; ++i) free_cols[i] = i;
        }
    }

    // Quotient coordinates of a raw vector.
    rat_vec project(rat_vec raw) const {
        if (reducer) raw = reducer->reduce(std::move(raw));
        rat_vec out(free_cols.size());
        for (std::size_t i = 0; i < free_cols.size(); ++i) out[i] = raw[free_cols[i]];
        return out;
    }

    void add_relation(rat_vec rel) {
        if (!reducer) reducer.emplace(raw_size);
        reducer->add(std::move(rel));
    }

    bool saturated() const { return reducer && reducer->full_rank(); }
};

}  // namespace detail

// Gradewise tensor product over the polynomial action: the direct sum of
// M_h (x) M'_{h'} over h + h' = g, quotiented at every grade by the span of
// the single-step scalar-moving relations (x_i m)(x)m' - m(x)(x_i m').
inline grid_module tensor_product(const grid_module& a, const grid_module& b,
                                  std::uint64_t budget = default_budget) {
    if (a.axes() != b.axes()) throw axis_mismatch("tensor product of modules with different axis counts");
    const auto n = static_cast<std::size_t>(a.axes());
    if (a.total_dim() == 0 || b.total_dim() == 0) return grid_module::zero(a.axes());
    if (bigint(a.total_dim()) * b.total_dim() > bigint(budget))
        throw budget_exceeded("tensor product raw dimension " +
                              (bigint(a.total_dim()) * b.total_dim()).str() + " (cap " + std::to_string(budget) +
                              ")");

    // Raw basis per grade: (h, u, v) with h' = g - h, in lexicographic order.
    using raw_key = std::tuple<grade, int, int>;
    std::map<grade, std::vector<raw_key>> raw;
    std::map<grade, std::map<raw_key, std::size_t>> raw_index;
    for (const auto& [h, da] : a.dims())
        for (const auto& [hp, db] : b.dims()) {
            grade g(n);
            for (std::size_t i = 0; i < n; ++i) g[i] = h[i] + hp[i];
            auto& list = raw[g];
            auto& idx = raw_index[g];
            for (int u = 0; u < da; ++u)
                for (int v = 0; v < db; ++v) {
                    idx[{h, u, v}] = list.size();
                    list.emplace_back(h, u, v);
                }
        }

    std::map<grade, detail::graded_quotient> spaces;
    for (const auto& [g, list] : raw) spaces[g].raw_size = list.size();

    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [h, da] : a.dims())
            for (const auto& [hp, db] : b.dims()) {
                grade g(n);
                for (std::size_t c = 0; c < n; ++c) g[c] = h[c] + hp[c];
                ++g[i];
                auto sp = spaces.find(g);
                if (sp == spaces.end() || sp->second.saturated()) continue;
                rat_matrix sa = a.step(h, i);
                rat_matrix sb = b.step(hp, i);
                if (sa.is_zero() && sb.is_zero()) continue;
                const auto& idx = raw_index[g];
                grade ha = grade_shift(h, i, 1);
                for (int u = 0; u < da && !sp->second.saturated(); ++u)
                    for (int v = 0; v < db; ++v) {
                        rat_vec rel(sp->second.raw_size);
                        bool nonzero = false;
                        for (std::size_t k = 0; k < sa.rows(); ++k) {
                            const rational& c = sa.at(k, static_cast<std::size_t>(u));
                            if (c.is_zero()) continue;
                            rel[idx.at({ha, static_cast<int>(k), v})] += c;
                            nonzero = true;
                        }
                        for (std::size_t l = 0; l < sb.rows(); ++l) {
                            const rational& c = sb.at(l, static_cast<std::size_t>(v));
                            if (c.is_zero()) continue;
                            rel[idx.at({h, u, static_cast<int>(l)})] -= c;
                            nonzero = true;
                        }
                        if (nonzero) sp->second.add_relation(std::move(rel));
                        if (sp->second.saturated()) break;
                    }
            }

    grade lo, hi;
    bool any = false;
    for (auto& [g, sp] : spaces) {
        sp.seal();
        if (sp.free_cols.empty()) continue;
        if (!any) {
            lo = hi = g;
            any = true;
        } else
            for (std::size_t c = 0; c < n; ++c) {
                lo[c] = std::min(lo[c], g[c]);
                hi[c] = std::max(hi[c], g[c]);
            }
    }
    if (!any) return grid_module::zero(a.axes());

    grid_module out(a.axes(), grid_box{lo, hi});
    for (const auto& [g, sp] : spaces)
        if (!sp.free_cols.empty() && out.box().contains(g)) out.set_dim(g, static_cast<int>(sp.free_cols.size()));

    // Induced steps: act on the first tensor factor, then project.
    for (const auto& [g, sp] : spaces) {
        if (sp.free_cols.empty()) continue;
        for (std::size_t i = 0; i < n; ++i) {
            grade t = grade_shift(g, i, 1);
            auto tq = spaces.find(t);
            if (tq == spaces.end() || tq->second.free_cols.empty()) continue;
            const auto& tidx = raw_index[t];
            rat_matrix step(tq->second.free_cols.size(), sp.free_cols.size());
            for (std::size_t col = 0; col < sp.free_cols.size(); ++col) {
                const auto& [h, u, v] = raw[g][sp.free_cols[col]];
                rat_matrix sa = a.step(h, i);
                rat_vec img(tq->second.raw_size);
                grade ha = grade_shift(h, i, 1);
                for (std::size_t k = 0; k < sa.rows(); ++k) {
                    const rational& c = sa.at(k, static_cast<std::size_t>(u));
                    if (!c.is_zero()) img[tidx.at({ha, static_cast<int>(k), v})] += c;
                }
                rat_vec coords = tq->second.project(std::move(img));
                for (std::size_t row = 0; row < coords.size(); ++row) step.at(row, col) = coords[row];
            }
            out.set_step(g, i, std::move(step));
        }
    }
    validate(out);
    return out;
}

// p-th exterior power, gradewise. The antisymmetry quotient is realized
// combinatorially (wedge basis over strictly increasing basis tuples) and
// the scalar-moving relations are projected into wedge coordinates; the
// composite is the quotient of the p-fold tensor power by both families.
inline grid_module exterior_power(const grid_module& m, int p, std::uint64_t budget = default_budget) {
    if (p < 1) throw error("exterior_power: p must be >= 1");
    const auto n = static_cast<std::size_t>(m.axes());
    const std::int64_t total = m.total_dim();
    if (total == 0 || p > total) return grid_module::zero(m.axes());
    if (binomial(total, p) > bigint(budget))
        throw budget_exceeded("exterior power would need " + binomial(total, p).str() + " wedges (cap " +
                              std::to_string(budget) + ")");

    detail::flat_basis basis(m);
    const std::size_t T = basis.grades.size();
    const auto sp = static_cast<std::size_t>(p);

    std::map<grade, std::vector<std::vector<std::size_t>>> wedges;
    std::map<grade, std::map<std::vector<std::size_t>, std::size_t>> wedge_index;
    for_each_combination(T, sp, [&](const std::vector<std::size_t>& idx) {
        grade g = basis.wedge_grade(idx);
        auto& list = wedges[g];
        wedge_index[g][idx] = list.size();
        list.push_back(idx);
    });

    std::map<grade, detail::graded_quotient> spaces;
    for (const auto& [g, list] : wedges) spaces[g].raw_size = list.size();

    // Scalar-moving relations projected onto the wedge basis: for every
    // axis i, (p-2)-subset W and basis pair u <= u',
    //   (x_i u) ^ u' ^ W  -  u ^ (x_i u') ^ W.
    if (sp >= 2) {
        std::vector<std::size_t> slots(sp);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t u = 0; u < T; ++u)
                for (std::size_t up = u; up < T; ++up) {
                    const auto& eu = basis.step_exp[i][u];
                    const auto& eup = basis.step_exp[i][up];
                    if (eu.empty() && eup.empty()) continue;
                    grade base(n, 0);
                    for (std::size_t c = 0; c < n; ++c)
                        base[c] = basis.grades[u][c] + basis.grades[up][c];
                    ++base[i];
                    for_each_combination(T, sp - 2, [&](const std::vector<std::size_t>& w) {
                        grade g = base;
                        for (std::size_t wi : w)
                            for (std::size_t c = 0; c < n; ++c) g[c] += basis.grades[wi][c];
                        auto it = spaces.find(g);
                        if (it == spaces.end() || it->second.saturated()) return;
                        const auto& widx = wedge_index[g];
                        rat_vec rel(it->second.raw_size);
                        bool nonzero = false;
                        auto accumulate = [&](std::size_t first, std::size_t second, const rational& coeff) {
                            slots[0] = first;
                            slots[1] = second;
                            for (std::size_t k = 0; k < w.size(); ++k) slots[k + 2] = w[k];
                            std::vector<std::size_t> sorted = slots;
                            auto sign = detail::canonicalize_wedge(sorted);
                            if (!sign) return;
                            auto pos = widx.find(sorted);
                            rel[pos->second] += *sign < 0 ? -coeff : coeff;
                            nonzero = true;
                        };
                        for (const auto& [k, c] : eu) accumulate(k, up, c);
                        for (const auto& [l, c] : eup) accumulate(u, l, -c);
                        if (nonzero) it->second.add_relation(std::move(rel));
                    });
                }
    }

    grade lo, hi;
    bool any = false;
    for (auto& [g, sq] : spaces) {
        sq.seal();
        if (sq.free_cols.empty()) continue;
        if (!any) {
            lo = hi = g;
            any = true;
        } else
            for (std::size_t c = 0; c < n; ++c) {
                lo[c] = std::min(lo[c], g[c]);
                hi[c] = std::max(hi[c], g[c]);
            }
    }
    if (!any) return grid_module::zero(m.axes());

    grid_module out(m.axes(), grid_box{lo, hi});
    for (const auto& [g, sq] : spaces)
        if (!sq.free_cols.empty()) out.set_dim(g, static_cast<int>(sq.free_cols.size()));

    // Induced steps: act on the first wedge slot, canonicalize, project.
    for (const auto& [g, sq] : spaces) {
        if (sq.free_cols.empty()) continue;
        for (std::size_t i = 0; i < n; ++i) {
            grade t = grade_shift(g, i, 1);
            auto tq = spaces.find(t);
            if (tq == spaces.end() || tq->second.free_cols.empty()) continue;
            const auto& tidx = wedge_index[t];
            rat_matrix step(tq->second.free_cols.size(), sq.free_cols.size());
            for (std::size_t col = 0; col < sq.free_cols.size(); ++col) {
                const auto& w = wedges[g][sq.free_cols[col]];
                rat_vec img(tq->second.raw_size);
                for (const auto& [k, c] : basis.step_exp[i][w[0]]) {
                    std::vector<std::size_t> slots = w;
                    slots[0] = k;
                    auto sign = detail::canonicalize_wedge(slots);
                    if (!sign) continue;
                    img[tidx.at(slots)] += *sign < 0 ? -c : c;
                }
                rat_vec coords = tq->second.project(std::move(img));
                for (std::size_t row = 0; row < coords.size(); ++row) step.at(row, col) = coords[row];
            }
            out.set_step(g, i, std::move(step));
        }
    }
    validate(out);
    return out;
}

}  // namespace ecs
