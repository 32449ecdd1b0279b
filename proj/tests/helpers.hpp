#pragma once

// Shared test utilities: independent oracles (brute-force enumerations that
// never reuse the library's own combination machinery), random generators,
// and a tiny subprocess runner for CLI-level checks.

#include <array>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <sys/wait.h>
#include <utility>
#include <vector>

#include "ecs/barcode.hpp"
#include "ecs/formal_sum.hpp"
#include "ecs/grid_module.hpp"
#include "ecs/rational.hpp"

namespace testutil {

using namespace ecs;

// ---- oracles ----------------------------------------------------------

// Expected series built by direct per-bar summation into a plain map.
inline formal_sum oracle_series(const std::vector<bar>& bars, char kind) {
    std::map<rational, long> acc;
    for (const auto& b : bars) {
        switch (kind) {
            case 'B': acc[b.birth] += 1; break;
            case 'D': acc[b.birth + b.lifespan] += 1; break;
            case 'L': acc[b.lifespan] += 1; break;
            case 'C':
                acc[b.birth] += 1;
                acc[b.birth + b.lifespan] -= 1;
                break;
        }
    }
    formal_sum s(1);
    for (const auto& [e, c] : acc) s.add_term(exp_key::pure_x(e), rational(c));
    return s;
}

// Brute-force power enumeration by recursion over index sequences.
// mode: '^' strictly increasing, 'o' weakly increasing, 't' arbitrary.
inline void enumerate_tuples(std::size_t n, std::size_t p, char mode, std::size_t start,
                             std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == p) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = (mode == 't' ? 0 : start); i < n; ++i) {
        cur.push_back(i);
        enumerate_tuples(n, p, mode, mode == '^' ? i + 1 : i, cur, out);
        cur.pop_back();
    }
}

inline std::multiset<std::pair<rational, rational>> oracle_power_bars(const std::vector<bar>& bars,
                                                                      std::size_t p, char mode) {
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<std::size_t> cur;
    enumerate_tuples(bars.size(), p, mode, 0, cur, tuples);
    std::multiset<std::pair<rational, rational>> out;
    for (const auto& t : tuples) {
        rational birth;
        rational life = bars[t.front()].lifespan;
        for (std::size_t i : t) {
            birth += bars[i].birth;
            if (bars[i].lifespan < life) life = bars[i].lifespan;
        }
        out.insert({birth, life});
    }
    return out;
}

inline std::multiset<std::pair<rational, rational>> as_multiset(const barcode& f) {
    std::multiset<std::pair<rational, rational>> out;
    for (const auto& b : f) out.insert({b.birth, b.lifespan});
    return out;
}

// The exterior critical series by brute force over combinations.
inline formal_sum oracle_ecs(const std::vector<bar>& bars, std::size_t p_max) {
    formal_sum out(1);
    for (std::size_t p = 1; p <= p_max; ++p) {
        for (const auto& [birth, life] : oracle_power_bars(bars, p, '^')) {
            out.add_term(exp_key::xz(birth, static_cast<std::int64_t>(p)), 1);
            out.add_term(exp_key::xz(birth + life, static_cast<std::int64_t>(p)), -1);
        }
    }
    return out;
}

// ---- random generators -------------------------------------------------

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return n ? rng() % n : 0; }

inline rational random_rational(std::mt19937_64& rng, long lo, long hi) {
    static const std::array<long, 5> dens = {1, 1, 2, 3, 4};
    long den = dens[below(rng, dens.size())];
    long span = (hi - lo) * den + 1;
    long num = lo * den + static_cast<long>(below(rng, static_cast<std::uint64_t>(span)));
    return rational(num, den);
}

inline rational random_positive_rational(std::mt19937_64& rng, long hi) {
    static const std::array<long, 5> dens = {1, 1, 2, 3, 4};
    long den = dens[below(rng, dens.size())];
    long num = 1 + static_cast<long>(below(rng, static_cast<std::uint64_t>(hi * den)));
    return rational(num, den);
}

// Rational barcode with forced duplicates and lifespan ties.
inline std::vector<bar> random_bars(std::mt19937_64& rng, int max_bars, long grade_hi = 8,
                                    long lifespan_hi = 8) {
    int n = static_cast<int>(below(rng, static_cast<std::uint64_t>(max_bars) + 1));
    std::vector<bar> bars;
    for (int i = 0; i < n; ++i) {
        std::uint64_t roll = below(rng, 5);
        if (roll == 0 && !bars.empty())
            bars.push_back(bars[below(rng, bars.size())]);
        else if (roll == 1 && !bars.empty())
            bars.push_back(bar{random_rational(rng, -grade_hi, grade_hi), bars[below(rng, bars.size())].lifespan});
        else
            bars.push_back(bar{random_rational(rng, -grade_hi, grade_hi), random_positive_rational(rng, lifespan_hi)});
    }
    return bars;
}

// Integer barcode with births in [0, birth_hi] and lifespans in [1, life_hi];
// all grades stay within [0, birth_hi + life_hi].
inline barcode random_integer_barcode(std::mt19937_64& rng, int max_bars, long birth_hi, long life_hi) {
    int n = static_cast<int>(below(rng, static_cast<std::uint64_t>(max_bars) + 1));
    std::vector<bar> bars;
    for (int i = 0; i < n; ++i) {
        std::uint64_t roll = below(rng, 5);
        if (roll == 0 && !bars.empty()) {
            bars.push_back(bars[below(rng, bars.size())]);
        } else {
            long birth = static_cast<long>(below(rng, static_cast<std::uint64_t>(birth_hi) + 1));
            long life = 1 + static_cast<long>(below(rng, static_cast<std::uint64_t>(life_hi)));
            bars.push_back(bar{rational(birth), rational(life)});
        }
    }
    return barcode(std::move(bars));
}

// 1-D grid module realizing an integer barcode as a direct sum of intervals.
inline grid_module module_of(const barcode& f) {
    grid_module m = grid_module::zero(1);
    bool first = true;
    for (const auto& b : f) {
        grid_module iv = interval_module(b.birth.numerator().convert_to<std::int64_t>(),
                                         b.death().numerator().convert_to<std::int64_t>());
        m = first ? std::move(iv) : direct_sum(m, iv);
        first = false;
    }
    return m;
}

// ---- subprocess runner --------------------------------------------------

struct cli_result {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

inline cli_result run_cli(const std::string& command) {
    cli_result res;
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    if (!pipe) return res;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.output.append(buf.data(), got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

}  // namespace testutil
