#pragma once

#include <cstdint>
#include <vector>

#include "ecs/rational.hpp"

namespace ecs {

inline bigint binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    bigint r = 1;
    for (std::int64_t i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

// Calls fn once per strictly increasing index vector of length p drawn
// from {0, ..., n-1}, in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t p, Fn&& fn) {
    if (p > n) return;
    std::vector<std::size_t> idx(p);
    for (std::size_t i = 0; i < p; ++i) idx[i] = i;
    while (true) {
        fn(static_cast<const std::vector<std::size_t>&>(idx));
        std::size_t i = p;
        while (i > 0 && idx[i - 1] == n - p + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < p; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Weakly increasing index vectors of length p from {0, ..., n-1}.
template <typename Fn>
void for_each_multicombination(std::size_t n, std::size_t p, Fn&& fn) {
    if (n == 0) return;
    std::vector<std::size_t> idx(p, 0);
    while (true) {
        fn(static_cast<const std::vector<std::size_t>&>(idx));
        std::size_t i = p;
        while (i > 0 && idx[i - 1] == n - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < p; ++j) idx[j] = idx[i - 1];
    }
}

// All index vectors of length p from {0, ..., n-1} (odometer order).
template <typename Fn>
void for_each_tuple(std::size_t n, std::size_t p, Fn&& fn) {
    if (n == 0) return;
    std::vector<std::size_t> idx(p, 0);
    while (true) {
        fn(static_cast<const std::vector<std::size_t>&>(idx));
        std::size_t i = p;
        while (i > 0 && idx[i - 1] == n - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < p; ++j) idx[j] = 0;
    }
}

}  // namespace ecs
