#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ecs/barcode.hpp"
#include "helpers.hpp"

using namespace ecs;

namespace {

barcode bc(std::initializer_list<std::pair<long, long>> pairs) {
    std::vector<bar> bars;
    for (auto [b, l] : pairs) bars.push_back(bar{rational(b), rational(l)});
    return barcode(std::move(bars));
}

formal_sum x_pow(long long e) { return formal_sum::monomial(exp_key::pure_x(rational(e)), 1); }

}  // namespace

TEST_CASE("bars are canonically ordered by (lifespan, birth)") {
    barcode f = bc({{2, 1}, {0, 1}, {1, 3}});
    CHECK(f.bars()[0] == bar{rational(0), rational(1)});
    CHECK(f.bars()[1] == bar{rational(2), rational(1)});
    CHECK(f.bars()[2] == bar{rational(1), rational(3)});
    CHECK_THROWS_AS(bc({{0, 0}}), invalid_input);
    CHECK_THROWS_AS(bc({{0, -1}}), invalid_input);
}

TEST_CASE("series of a worked barcode") {
    barcode f = bc({{0, 1}, {1, 2}});
    CHECK(birth_series(f) == formal_sum::one(1) + x_pow(1));
    CHECK(death_series(f) == x_pow(1) + x_pow(3));
    CHECK(critical_series(f) == formal_sum::one(1) - x_pow(3));
    CHECK(lifespan_series(f) == x_pow(1) + x_pow(2));
    CHECK(critical_series(bc({{0, 1}, {2, 1}, {1, 3}})) ==
          formal_sum::one(1) + x_pow(2) - x_pow(3) - x_pow(4));
    barcode empty;
    CHECK(birth_series(empty).is_zero());
    CHECK(death_series(empty).is_zero());
    CHECK(critical_series(empty).is_zero());
    CHECK(lifespan_series(empty).is_zero());
}

TEST_CASE("series match the per-bar summation oracle on random barcodes") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        std::vector<bar> bars = testutil::random_bars(rng, 8);
        barcode f(bars);
        CHECK(birth_series(f) == testutil::oracle_series(bars, 'B'));
        CHECK(death_series(f) == testutil::oracle_series(bars, 'D'));
        CHECK(critical_series(f) == testutil::oracle_series(bars, 'C'));
        CHECK(lifespan_series(f) == testutil::oracle_series(bars, 'L'));
        CHECK(critical_series(f) == birth_series(f) - death_series(f));
    }
}

TEST_CASE("drift sums the birth grades") {
    CHECK(drift(bc({{0, 1}, {1, 2}})) == rational(1));
    CHECK(drift(barcode()) == rational(0));
    CHECK(drift(bc({{0, 1}, {2, 1}, {1, 3}})) == rational(3));
}

TEST_CASE("exterior power worked examples") {
    CHECK(exterior_power(bc({{0, 1}, {1, 2}}), 2) == bc({{1, 1}}));
    CHECK(exterior_power(bc({{0, 1}, {2, 1}, {1, 3}}), 2) == bc({{1, 1}, {2, 1}, {3, 1}}));
    CHECK(exterior_power(bc({{0, 1}, {1, 2}}), 3).empty());
}

TEST_CASE("symmetric and tensor power worked examples") {
    CHECK(symmetric_power(bc({{0, 1}}), 2) == bc({{0, 1}}));
    CHECK(tensor_power(bc({{0, 1}, {1, 2}}), 2) == bc({{0, 1}, {1, 1}, {1, 1}, {2, 2}}));
    CHECK(symmetric_power(bc({{0, 1}, {1, 2}}), 2) == bc({{0, 1}, {1, 1}, {2, 2}}));
}

TEST_CASE("powers match the brute-force oracle") {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 60; ++i) {
        std::vector<bar> bars = testutil::random_bars(rng, 5);
        barcode f(bars);
        for (std::size_t p = 1; p <= bars.size() + 1; ++p) {
            CHECK(testutil::as_multiset(exterior_power(f, static_cast<int>(p))) ==
                  testutil::oracle_power_bars(bars, p, '^'));
            if (p <= 3) {
                CHECK(testutil::as_multiset(symmetric_power(f, static_cast<int>(p))) ==
                      testutil::oracle_power_bars(bars, p, 'o'));
                CHECK(testutil::as_multiset(tensor_power(f, static_cast<int>(p))) ==
                      testutil::oracle_power_bars(bars, p, 't'));
            }
        }
    }
}

TEST_CASE("power cardinalities") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 50; ++i) {
        std::vector<bar> bars = testutil::random_bars(rng, 5);
        if (bars.empty()) continue;
        barcode f(bars);
        auto n = static_cast<std::int64_t>(bars.size());
        for (int p = 1; p <= 4; ++p) {
            CHECK(bigint(exterior_power(f, p).size()) == binomial(n, p));
            if (p <= 3) {
                bigint tensor_count = 1;
                for (int q = 0; q < p; ++q) tensor_count *= n;
                CHECK(bigint(tensor_power(f, p).size()) == tensor_count);
                CHECK(bigint(symmetric_power(f, p).size()) == binomial(n + p - 1, p));
            }
        }
    }
}

TEST_CASE("series exterior power") {
    CHECK(series_exterior_power(formal_sum::one(1) + x_pow(1), 2) == x_pow(1));
    CHECK(series_exterior_power(x_pow(1) + x_pow(2) + x_pow(3), 2) == x_pow(3) + x_pow(4) + x_pow(5));
    CHECK(series_exterior_power(x_pow(1) + x_pow(2), 0) == formal_sum::one(1));
    CHECK(series_exterior_power(x_pow(1), 5).is_zero());
    CHECK_THROWS_AS(series_exterior_power(formal_sum::one(1) - x_pow(1), 1), not_multiset);
    CHECK_THROWS_AS(series_exterior_power(rational(bigint(1), bigint(2)) * x_pow(1), 1), not_multiset);
}

TEST_CASE("birth series of a power equals the series power of the births") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 100; ++i) {
        std::vector<bar> bars = testutil::random_bars(rng, 6);
        barcode f(bars);
        for (int p = 1; p <= static_cast<int>(bars.size()); ++p)
            CHECK(birth_series(exterior_power(f, p)) == series_exterior_power(birth_series(f), p));
    }
}

TEST_CASE("exterior critical series worked examples") {
    barcode f = bc({{0, 1}, {1, 2}});
    formal_sum expected(1);
    expected.add_term(exp_key::xz(0, 1), 1);
    expected.add_term(exp_key::xz(3, 1), -1);
    expected.add_term(exp_key::xz(1, 2), 1);
    expected.add_term(exp_key::xz(2, 2), -1);
    CHECK(exterior_critical_series(f) == expected);
    CHECK(exterior_critical_series(barcode()).is_zero());
    CHECK(exterior_critical_series(bc({{0, 1}, {2, 1}, {1, 3}})) ==
          testutil::oracle_ecs(bc({{0, 1}, {2, 1}, {1, 3}}).bars(), 3));
}

TEST_CASE("exterior critical series matches the brute-force oracle") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 60; ++i) {
        std::vector<bar> bars = testutil::random_bars(rng, 6);
        barcode f(bars);
        CHECK(exterior_critical_series(f) == testutil::oracle_ecs(bars, bars.size()));
    }
}

TEST_CASE("p_max truncates the exterior critical series") {
    barcode f = bc({{0, 1}, {2, 1}, {1, 3}});
    formal_sum full = exterior_critical_series(f);
    formal_sum truncated = exterior_critical_series(f, 2);
    formal_sum expected(1);
    for (const auto& [k, c] : full.terms())
        if (k.z <= 2) expected.add_term(k, c);
    CHECK(truncated == expected);
}

TEST_CASE("bar count identities") {
    std::mt19937_64 rng(53);
    for (int i = 0; i < 100; ++i) {
        std::vector<bar> bars = testutil::random_bars(rng, 6);
        if (bars.empty()) continue;
        barcode f(bars);
        auto n = static_cast<int>(bars.size());
        formal_sum counted = f.to_series().substitute_one(indet::x).substitute_one(indet::y);
        CHECK(counted == rational(n) * formal_sum::one(1));
        CHECK(exterior_power(f, n).size() == 1);
        CHECK(exterior_power(f, n + 1).empty());
    }
}

TEST_CASE("moment identities for critical and lifespan series") {
    std::mt19937_64 rng(59);
    for (int i = 0; i < 500; ++i) {
        std::vector<bar> bars = testutil::random_bars(rng, 8);
        barcode f(bars);
        // first moment of C(f) is minus the total lifespan
        CHECK(critical_series(f).moment() == -lifespan_series(f).moment());
        auto n = static_cast<int>(bars.size());
        const auto& sorted = f.bars();
        for (int p = 1; p <= n; ++p) {
            rational expected;
            for (int idx = 1; idx <= n - p + 1; ++idx)
                expected -= rational(binomial(n - idx, p - 1)) * sorted[static_cast<std::size_t>(idx) - 1].lifespan;
            CHECK(critical_series(exterior_power(f, p)).moment() == expected);
            CHECK(drift(exterior_power(f, p)) == rational(binomial(n - 1, p - 1)) * drift(f));
        }
    }
}

TEST_CASE("budget guards the power blowup") {
    std::vector<bar> bars;
    for (int i = 0; i < 24; ++i) bars.push_back(bar{rational(i % 7), rational(1 + i % 3)});
    barcode big(bars);
    CHECK_THROWS_AS(exterior_critical_series(big), budget_exceeded);
    CHECK_THROWS_AS(exterior_power(big, 12, /*budget=*/1000), budget_exceeded);
    // 12 bars stay comfortably inside the default budget
    std::vector<bar> twelve(bars.begin(), bars.begin() + 12);
    CHECK_NOTHROW(exterior_critical_series(barcode(twelve)));
}
