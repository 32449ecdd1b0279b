#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ecs/barcode.hpp"
#include "ecs/errors.hpp"
#include "ecs/rational.hpp"
#include "ecs/reconstruct.hpp"

namespace ecs {

// Draws are made with explicit modular arithmetic on the raw engine output
// so that a seed determines the corpus independently of the standard
// library's distribution implementations.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) { return n ? rng() % n : 0; }

struct barcode_gen_options {
    int max_bars = 8;
    rational birth_lo = rational(-8);
    rational birth_hi = rational(8);
    rational lifespan_hi = rational(8);  // lifespans in (0, lifespan_hi]
    std::vector<std::int64_t> denominators = {1, 1, 2, 3, 4};
};

namespace detail {

// Uniform-ish rational in [lo, hi] with a denominator from the option list.
inline rational draw_rational(std::mt19937_64& rng, const rational& lo, const rational& hi,
                              const std::vector<std::int64_t>& denominators) {
    const std::int64_t den = denominators[draw_below(rng, denominators.size())];
    // Integer numerators between ceil(lo*den) and floor(hi*den); cpp_int
    // division truncates toward zero, so only one direction needs fixing up.
    bigint lo_num = lo.numerator() * den;
    bigint lo_den = lo.denominator();
    bigint lo_int = lo_num / lo_den;
    if (lo_int * lo_den < lo_num) lo_int += 1;
    bigint hi_num = hi.numerator() * den;
    bigint hi_den = hi.denominator();
    bigint hi_int = hi_num / hi_den;
    if (hi_int * hi_den > hi_num) hi_int -= 1;
    bigint span = hi_int - lo_int + 1;
    if (span <= 0) return rational(lo_int, den);
    std::uint64_t width = span.convert_to<std::uint64_t>();
    bigint pick = lo_int + bigint(draw_below(rng, width));
    return rational(pick, den);
}

}  // namespace detail

// Random barcode with duplicate bars and tied lifespans forced in with
// probability 1/5 each once a first bar exists.
inline barcode random_barcode(std::mt19937_64& rng, const barcode_gen_options& opt) {
    const int n = static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(opt.max_bars) + 1));
    std::vector<bar> bars;
    rational life_lo = rational(1, 1000);  // small positive floor keeps draws in (0, hi]
    for (int i = 0; i < n; ++i) {
        const std::uint64_t roll = draw_below(rng, 5);
        if (roll == 0 && !bars.empty()) {
            bars.push_back(bars[draw_below(rng, bars.size())]);
        } else if (roll == 1 && !bars.empty()) {
            bars.push_back(bar{detail::draw_rational(rng, opt.birth_lo, opt.birth_hi, opt.denominators),
                               bars[draw_below(rng, bars.size())].lifespan});
        } else {
            rational life = detail::draw_rational(rng, life_lo, opt.lifespan_hi, opt.denominators);
            bars.push_back(bar{detail::draw_rational(rng, opt.birth_lo, opt.birth_hi, opt.denominators), life});
        }
    }
    return barcode(std::move(bars));
}

struct roundtrip_failure {
    std::uint64_t case_index = 0;
    std::string barcode_text;
    std::string detail;
};

struct roundtrip_report {
    std::uint64_t total = 0;
    std::uint64_t passed = 0;
    std::optional<roundtrip_failure> first_failure;

    bool all_passed() const { return passed == total; }
};

// Generates `count` seeded barcodes and checks reconstruct(ecs(f)) == f.
inline roundtrip_report run_roundtrip(std::uint64_t count, std::uint64_t seed, const barcode_gen_options& opt,
                                      std::uint64_t budget = default_budget) {
    roundtrip_report report;
    report.total = count;
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < count; ++i) {
        barcode f = random_barcode(rng, opt);
        std::string failure;
        try {
            barcode back = reconstruct(exterior_critical_series(f, std::nullopt, budget), budget);
            if (back == f)
                ++report.passed;
            else
                failure = "reconstructed a different barcode";
        } catch (const error& ex) {
            failure = ex.what();
        }
        if (!failure.empty() && !report.first_failure) {
            std::string text;
            for (const auto& b : f) text += "(" + b.birth.str() + "," + b.lifespan.str() + ") ";
            report.first_failure = roundtrip_failure{i, text, failure};
        }
    }
    return report;
}

}  // namespace ecs
