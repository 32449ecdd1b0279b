#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "ecs/errors.hpp"
#include "ecs/rational.hpp"

namespace ecs {

using rat_vec = std::vector<rational>;

// Dense matrix over the rationals. Row-major.
class rat_matrix {
public:
    rat_matrix() : rows_(0), cols_(0) {}
    rat_matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static rat_matrix identity(std::size_t n) {
        rat_matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    rational& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const rational& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    bool is_zero() const {
        for (const auto& v : a_)
            if (!v.is_zero()) return false;
        return true;
    }

    friend bool operator==(const rat_matrix&, const rat_matrix&) = default;

    friend rat_matrix operator*(const rat_matrix& a, const rat_matrix& b) {
        if (a.cols_ != b.rows_) throw error("matrix shapes do not compose");
        rat_matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const rational& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const rational& bkj = b.at(k, j);
                    if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
                }
            }
        return r;
    }

private:
    std::size_t rows_, cols_;
    std::vector<rational> a_;
};

// Incremental reduced row echelon form with leftmost-pivot order.
// Rows are kept fully back-eliminated, so reduce() maps any vector to its
// unique representative supported on the non-pivot coordinates.
class row_reducer {
public:
    explicit row_reducer(std::size_t cols) : cols_(cols) {}

    std::size_t cols() const { return cols_; }
    std::size_t rank() const { return rows_.size(); }

    // Residue of v modulo the current row space.
    rat_vec reduce(rat_vec v) const {
        for (const auto& [p, row] : rows_) {
            if (v[p].is_zero()) continue;
            rational factor = v[p];
            for (std::size_t c = p; c < cols_; ++c)
                if (!row[c].is_zero()) v[c] -= factor * row[c];
        }
        return v;
    }

    // Adds v to the row space; returns true when v was independent.
    bool add(rat_vec v) {
        v = reduce(std::move(v));
        std::size_t p = 0;
        while (p < cols_ && v[p].is_zero()) ++p;
        if (p == cols_) return false;
        rational lead = v[p];
        for (std::size_t c = p; c < cols_; ++c)
            if (!v[c].is_zero()) v[c] /= lead;
        for (auto& [q, row] : rows_) {
            if (row[p].is_zero()) continue;
            rational factor = row[p];
            for (std::size_t c = p; c < cols_; ++c)
                if (!v[c].is_zero()) row[c] -= factor * v[c];
        }
        rows_.emplace(p, std::move(v));
        return true;
    }

    bool full_rank() const { return rows_.size() == cols_; }

    // Non-pivot coordinates in ascending order; a basis of the complement.
    std::vector<std::size_t> free_columns() const {
        std::vector<std::size_t> free;
        auto it = rows_.begin();
        for (std::size_t c = 0; c < cols_; ++c) {
            if (it != rows_.end() && it->first == c)
                ++it;
            else
                free.push_back(c);
        }
        return free;
    }

private:
    std::size_t cols_;
    std::map<std::size_t, rat_vec> rows_;  // pivot column -> row
};

inline std::size_t matrix_rank(const rat_matrix& m) {
    row_reducer red(m.cols());
    for (std::size_t r = 0; r < m.rows() && !red.full_rank(); ++r) {
        rat_vec row(m.cols());
        for (std::size_t c = 0; c < m.cols(); ++c) row[c] = m.at(r, c);
        red.add(std::move(row));
    }
    return red.rank();
}

}  // namespace ecs
