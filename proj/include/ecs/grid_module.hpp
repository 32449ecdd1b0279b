#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ecs/errors.hpp"
#include "ecs/linalg.hpp"
#include "ecs/rational.hpp"

namespace ecs {

// A point of the integer grid Z^n, ordered componentwise.
using grade = std::vector<std::int64_t>;

inline bool grade_leq(const grade& a, const grade& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline grade grade_shift(grade g, std::size_t axis, std::int64_t by) {
    g[axis] += by;
    return g;
}

inline std::string grade_str(const grade& g) {
    std::string s = "(";
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(g[i]);
    }
    return s + ")";
}

// Inclusive bounding box in Z^n.
struct grid_box {
    grade lo, hi;

    bool contains(const grade& g) const { return grade_leq(lo, g) && grade_leq(g, hi); }

    // Lexicographic sweep over every grade of the box (hi extended by `pad`).
    template <typename Fn>
    void for_each(Fn&& fn, std::int64_t pad = 0) const {
        grade g = lo;
        const std::size_t n = lo.size();
        while (true) {
            fn(static_cast<const grade&>(g));
            std::size_t i = n;
            while (i > 0 && g[i - 1] == hi[i - 1] + pad) --i;
            if (i == 0) return;
            ++g[i - 1];
            for (std::size_t j = i; j < n; ++j) g[j] = lo[j];
        }
    }
};

// Finite-support persistence module on Z^n: dimensions per grade plus one
// step matrix per grade and axis. Absent steps are zero matrices of the
// implied shape. Instances are immutable once built and validated.
class grid_module {
public:
    explicit grid_module(int axes, grid_box box)
        : axes_(axes), box_(std::move(box)) {
        if (axes < 1 || box_.lo.size() != static_cast<std::size_t>(axes) ||
            box_.hi.size() != static_cast<std::size_t>(axes) || !grade_leq(box_.lo, box_.hi))
            throw invalid_module("malformed bounding box");
    }

    static grid_module zero(int axes) {
        return grid_module(axes, grid_box{grade(static_cast<std::size_t>(axes), 0),
                                          grade(static_cast<std::size_t>(axes), 0)});
    }

    int axes() const { return axes_; }
    const grid_box& box() const { return box_; }

    int dim(const grade& g) const {
        auto it = dims_.find(g);
        return it == dims_.end() ? 0 : it->second;
    }

    std::int64_t total_dim() const {
        std::int64_t t = 0;
        for (const auto& [g, d] : dims_) t += d;
        return t;
    }

    const std::map<grade, int>& dims() const { return dims_; }

    void set_dim(const grade& g, int d) {
        if (d < 0) throw invalid_module("negative dimension at " + grade_str(g));
        if (d == 0) {
            dims_.erase(g);
            return;
        }
        if (!box_.contains(g)) throw invalid_module("dimension outside the box at " + grade_str(g));
        dims_[g] = d;
    }

    // Step along `axis` out of grade g; zero matrix when not stored.
    rat_matrix step(const grade& g, std::size_t axis) const {
        auto it = steps_.find({g, axis});
        if (it != steps_.end()) return it->second;
        return rat_matrix(static_cast<std::size_t>(dim(grade_shift(g, axis, 1))),
                          static_cast<std::size_t>(dim(g)));
    }

    void set_step(const grade& g, std::size_t axis, rat_matrix m) {
        const auto target = static_cast<std::size_t>(dim(grade_shift(g, axis, 1)));
        const auto source = static_cast<std::size_t>(dim(g));
        if (m.rows() != target || m.cols() != source)
            throw invalid_module("step at " + grade_str(g) + " axis " + std::to_string(axis) +
                                 " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                 ", expected " + std::to_string(target) + "x" + std::to_string(source));
        if (m.is_zero()) {
            steps_.erase({g, axis});
            return;
        }
        steps_[{g, axis}] = std::move(m);
    }

    friend bool operator==(const grid_module& a, const grid_module& b) {
        return a.axes_ == b.axes_ && a.dims_ == b.dims_ && a.steps_ == b.steps_;
    }

private:
    int axes_;
    grid_box box_;
    std::map<grade, int> dims_;
    std::map<std::pair<grade, std::size_t>, rat_matrix> steps_;
};

// Checks shape consistency and every commuting square; throws invalid_module
// naming the first failure.
inline void validate(const grid_module& m) {
    const auto n = static_cast<std::size_t>(m.axes());
    m.box().for_each([&](const grade& g) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                grade gi = grade_shift(g, i, 1);
                grade gj = grade_shift(g, j, 1);
                rat_matrix via_i = m.step(gi, j) * m.step(g, i);
                rat_matrix via_j = m.step(gj, i) * m.step(g, j);
                if (!(via_i == via_j))
                    throw invalid_module("square at " + grade_str(g) + " axes " + std::to_string(i) + "," +
                                         std::to_string(j) + " does not commute");
            }
    });
}

// Interval module [a, b) on Z: dimension 1 with identity steps inside.
inline grid_module interval_module(std::int64_t a, std::int64_t b) {
    if (a >= b) throw empty_interval();
    grid_module m(1, grid_box{{a}, {b - 1}});
    for (std::int64_t g = a; g < b; ++g) m.set_dim({g}, 1);
    for (std::int64_t g = a; g + 1 < b; ++g) m.set_step({g}, 0, rat_matrix::identity(1));
    return m;
}

// Region module of a finite grade set S: dimension 1 on S, a unit step is
// the identity exactly when both of its endpoints lie in S. No implicit
// validation; a non-convex S may fail validate().
inline grid_module region_module(const std::set<grade>& s) {
    if (s.empty()) return grid_module::zero(1);
    const std::size_t n = s.begin()->size();
    grade lo = *s.begin(), hi = *s.begin();
    for (const auto& g : s) {
        if (g.size() != n) throw axis_mismatch("grades of mixed arity in region set");
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = std::min(lo[i], g[i]);
            hi[i] = std::max(hi[i], g[i]);
        }
    }
    grid_module m(static_cast<int>(n), grid_box{lo, hi});
    for (const auto& g : s) m.set_dim(g, 1);
    for (const auto& g : s)
        for (std::size_t i = 0; i < n; ++i)
            if (s.count(grade_shift(g, i, 1))) m.set_step(g, i, rat_matrix::identity(1));
    return m;
}

inline bool is_convex(const std::set<grade>& s) {
    for (const auto& a : s)
        for (const auto& b : s) {
            if (!grade_leq(a, b)) continue;
            grid_box between{a, b};
            bool ok = true;
            between.for_each([&](const grade& h) {
                if (!s.count(h)) ok = false;
            });
            if (!ok) return false;
        }
    return true;
}

// Block-diagonal direct sum.
inline grid_module direct_sum(const grid_module& a, const grid_module& b) {
    if (a.axes() != b.axes()) throw axis_mismatch("direct sum of modules with different axis counts");
    const auto n = static_cast<std::size_t>(a.axes());
    grade lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = std::min(a.box().lo[i], b.box().lo[i]);
        hi[i] = std::max(a.box().hi[i], b.box().hi[i]);
    }
    grid_module m(a.axes(), grid_box{lo, hi});
    grid_box{lo, hi}.for_each([&](const grade& g) {
        int d = a.dim(g) + b.dim(g);
        if (d) m.set_dim(g, d);
    });
    grid_box{lo, hi}.for_each([&](const grade& g) {
        for (std::size_t i = 0; i < n; ++i) {
            grade t = grade_shift(g, i, 1);
            if (m.dim(g) == 0 || m.dim(t) == 0) continue;
            rat_matrix sa = a.step(g, i), sb = b.step(g, i);
            rat_matrix s(static_cast<std::size_t>(m.dim(t)), static_cast<std::size_t>(m.dim(g)));
            for (std::size_t r = 0; r < sa.rows(); ++r)
                for (std::size_t c = 0; c < sa.cols(); ++c) s.at(r, c) = sa.at(r, c);
            for (std::size_t r = 0; r < sb.rows(); ++r)
                for (std::size_t c = 0; c < sb.cols(); ++c)
                    s.at(sa.rows() + r, sa.cols() + c) = sb.at(r, c);
            m.set_step(g, i, std::move(s));
        }
    });
    return m;
}

// Pointwise dimension; only nonzero grades are reported.
inline std::map<grade, int> hilbert(const grid_module& m) { return m.dims(); }

}  // namespace ecs
