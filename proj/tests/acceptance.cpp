// Acceptance suite: runs every acceptance check end to end, prints one
// PASS/FAIL line per criterion with its wall time against the stated limit,
// and exits nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "ecs/grid_invariants.hpp"
#include "ecs/grid_powers.hpp"
#include "ecs/json_io.hpp"
#include "ecs/random_barcode.hpp"
#include "ecs/reconstruct.hpp"
#include "helpers.hpp"

using namespace ecs;
namespace fs = std::filesystem;

namespace {

const std::string kit = ECS_KIT_BIN;
const std::string fixtures = ECS_FIXTURE_DIR;

struct timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

int failures = 0;

void report(int index, bool pass, const std::string& what, double seconds, double limit = 0.0) {
    if (!pass) ++failures;
    if (limit > 0.0)
        std::printf("[%d] %s %s (%.2fs, limit %.0fs)\n", index, pass ? "PASS" : "FAIL", what.c_str(), seconds,
                    limit);
    else
        std::printf("[%d] %s %s (%.2fs)\n", index, pass ? "PASS" : "FAIL", what.c_str(), seconds);
    std::fflush(stdout);
}

// Shared corpus for the module-vs-barcode checks: integer barcodes with up
// to 5 bars, births in [0,9] and lifespans in [1,3], so every grade lies in
// [0,12]; duplicates are forced in by the generator.
std::vector<barcode> integer_corpus(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<barcode> out;
    out.reserve(count);
    while (out.size() < count) out.push_back(testutil::random_integer_barcode(rng, 5, 9, 3));
    return out;
}

std::map<grade, int> hilbert_of_barcode(const barcode& f) {
    std::map<grade, int> h;
    for (const auto& b : f) {
        std::int64_t lo = b.birth.numerator().convert_to<std::int64_t>();
        std::int64_t hi = b.death().numerator().convert_to<std::int64_t>();
        for (std::int64_t g = lo; g < hi; ++g) ++h[{g}];
    }
    return h;
}

void criterion_1_roundtrip() {
    timer t;
    auto res = testutil::run_cli(kit + " roundtrip --count 1000 --seed 7 --max-bars 8");
    double secs = t.seconds();
    bool pass = res.exit_code == 0 && res.output.find("passed 1000/1000") != std::string::npos && secs < 60.0;
    std::string what = "round trip, 1000 seeded rational barcodes (duplicates and ties forced): ";
    what += res.exit_code == 0 ? "1000/1000" : ("exit " + std::to_string(res.exit_code) + "; " + res.output);
    report(1, pass, what, secs, 60.0);
}

void criterion_2_critical_match() {
    timer t;
    auto corpus = integer_corpus(200, 20260809);
    std::size_t ok = 0;
    for (const auto& f : corpus)
        if (critical_series(testutil::module_of(f)) == critical_series(f)) ++ok;
    double secs = t.seconds();
    bool pass = ok == corpus.size() && secs < 30.0;
    report(2, pass,
           "grid critical series equals barcode critical series: " + std::to_string(ok) + "/" +
               std::to_string(corpus.size()),
           secs, 30.0);
}

void criterion_3_power_coherence() {
    timer t;
    auto corpus = integer_corpus(200, 20260809);
    std::size_t ok = 0, checked = 0;
    for (const auto& f : corpus) {
        grid_module m = testutil::module_of(f);
        bool good = true;
        for (int p = 1; p <= static_cast<int>(f.size()); ++p) {
            ++checked;
            grid_module lp = exterior_power(m, p);
            barcode fp = exterior_power(f, p);
            if (hilbert(lp) != hilbert_of_barcode(fp) || critical_series(lp) != critical_series(fp))
                good = false;
        }
        if (good) ++ok;
    }
    double secs = t.seconds();
    bool pass = ok == corpus.size() && secs < 120.0;
    report(3, pass,
           "exterior-power Hilbert functions and critical series match the barcode route for all p (" +
               std::to_string(checked) + " powers over " + std::to_string(corpus.size()) + " modules)",
           secs, 120.0);
}

void criterion_4_module_pair() {
    timer t;
    bool pass = true;
    std::string notes;
    try {
        grid_module m = parse_module(load_json_file(fixtures + "/same_rank_M.json"));
        grid_module mp = parse_module(load_json_file(fixtures + "/same_rank_Mprime.json"));
        validate(m);
        validate(mp);
        if (!(rank_invariant_of(m) == rank_invariant_of(mp))) {
            pass = false;
            notes += "rank invariants differ; ";
        }
        std::int64_t om = onset_total(m), omp = onset_total(mp);
        if (om != 3 || omp != 2) {
            pass = false;
            notes += "onset totals " + std::to_string(om) + "/" + std::to_string(omp) + ", expected 3/2; ";
        }
        formal_sum em = module_ecs(m, 3), emp = module_ecs(mp, 3);
        if (em == emp) {
            pass = false;
            notes += "exterior critical series do not differ; ";
        }
        int first_diff = 0;
        for (int p = 1; p <= 3 && first_diff == 0; ++p) {
            formal_sum pa(2), pb(2);
            for (const auto& [k, c] : em.terms())
                if (k.z == p) pa.add_term(exp_key::grade_vector(k.x), c);
            for (const auto& [k, c] : emp.terms())
                if (k.z == p) pb.add_term(exp_key::grade_vector(k.x), c);
            if (!(pa == pb)) first_diff = p;
        }
        if (first_diff != 2) {
            pass = false;
            notes += "first ECS difference at z^" + std::to_string(first_diff) + ", stated expectation z^2; ";
        }
        auto cmp = testutil::run_cli(kit + " module compare " + fixtures + "/same_rank_M.json " + fixtures +
                                     "/same_rank_Mprime.json");
        if (cmp.exit_code != 1) {
            pass = false;
            notes += "compare exited " + std::to_string(cmp.exit_code) + ", expected 1; ";
        }
    } catch (const std::exception& ex) {
        pass = false;
        notes += ex.what();
    }
    double secs = t.seconds();
    if (secs >= 5.0) pass = false;
    report(4, pass,
           "module pair fixtures: equal rank invariants, onsets 3 vs 2, differing ECS located at z^2, compare "
           "exits 1" +
               (notes.empty() ? std::string() : " [" + notes + "]"),
           secs, 5.0);
}

void criterion_5_moment_identities() {
    timer t;
    std::mt19937_64 rng(424242);
    std::size_t cases = 0, ok = 0;
    while (cases < 500) {
        std::vector<bar> bars = testutil::random_bars(rng, 8);
        barcode f(bars);
        ++cases;
        bool good = true;
        auto n = static_cast<int>(f.size());
        const auto& sorted = f.bars();
        for (int p = 1; p <= n; ++p) {
            rational expected_moment;
            for (int i = 1; i <= n - p + 1; ++i)
                expected_moment -=
                    rational(binomial(n - i, p - 1)) * sorted[static_cast<std::size_t>(i) - 1].lifespan;
            if (critical_series(exterior_power(f, p)).moment() != expected_moment) good = false;
            if (drift(exterior_power(f, p)) != rational(binomial(n - 1, p - 1)) * drift(f)) good = false;
        }
        if (good) ++ok;
    }
    double secs = t.seconds();
    bool pass = ok == cases && secs < 30.0;
    report(5, pass,
           "lifespan-moment and drift-of-power identities on " + std::to_string(ok) + "/" +
               std::to_string(cases) + " random barcodes, all powers",
           secs, 30.0);
}

void criterion_6_scale_guard(const fs::path& tmp) {
    timer t;
    json bars12 = json::array();
    for (int i = 0; i < 12; ++i)
        bars12.push_back({{"birth", std::to_string(i % 7)}, {"lifespan", std::to_string(1 + i % 5)}});
    fs::path p12 = tmp / "bars12.json";
    std::ofstream(p12) << json{{"bars", bars12}}.dump();
    timer t12;
    auto full = testutil::run_cli(kit + " barcode invariants " + p12.string() + " --ecs");
    double secs12 = t12.seconds();

    json bars24 = json::array();
    for (int i = 0; i < 24; ++i)
        bars24.push_back({{"birth", std::to_string(i % 7)}, {"lifespan", std::to_string(1 + i % 5)}});
    fs::path p24 = tmp / "bars24.json";
    std::ofstream(p24) << json{{"bars", bars24}}.dump();
    auto capped = testutil::run_cli(kit + " barcode invariants " + p24.string() + " --ecs");

    bool pass = full.exit_code == 0 && secs12 < 10.0 && capped.exit_code == 4;
    report(6, pass,
           "scale guard: 12-bar full ECS in " + std::to_string(secs12).substr(0, 4) +
               "s (exit " + std::to_string(full.exit_code) + "), 24-bar exits " +
               std::to_string(capped.exit_code) + " on the default budget",
           t.seconds(), 10.0);
}

void criterion_7_rejection(const fs::path& tmp) {
    timer t;
    std::mt19937_64 rng(777);
    int rejected = 0, wrong = 0, total = 0;
    while (total < 60) {
        std::vector<bar> bars = testutil::random_bars(rng, 6);
        if (bars.empty()) continue;
        barcode f(bars);
        formal_sum e = exterior_critical_series(f);
        if (e.is_zero()) continue;
        auto it = e.terms().begin();
        std::advance(it, static_cast<long>(testutil::below(rng, e.term_count())));
        formal_sum mutated = e;
        switch (total % 3) {
            case 0: mutated.add_term(it->first, 1); break;                          // perturb coefficient
            case 1: mutated.add_term(it->first, -it->second); break;                // drop term
            default: mutated.add_term(it->first, rational(-2) * it->second); break;  // flip sign
        }
        ++total;
        fs::path file = tmp / ("mut" + std::to_string(total) + ".json");
        std::ofstream(file) << series_to_json(mutated).dump();
        auto res = testutil::run_cli(kit + " barcode reconstruct " + file.string());
        if (res.exit_code == 5) {
            ++rejected;
        } else if (res.exit_code == 0) {
            // any returned barcode must re-expand to the mutated input
            barcode back = parse_barcode(json::parse(res.output));
            if (exterior_critical_series(back) != mutated) ++wrong;
        }
    }
    double secs = t.seconds();
    bool pass = rejected == total && wrong == 0;
    report(7, pass,
           "rejection: " + std::to_string(rejected) + "/" + std::to_string(total) +
               " mutated series exit 5, wrong barcodes " + std::to_string(wrong),
           secs);
}

}  // namespace

int main() {
    fs::path tmp = fs::temp_directory_path() / ("ecs_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(tmp);

    criterion_1_roundtrip();
    criterion_2_critical_match();
    criterion_3_power_coherence();
    criterion_4_module_pair();
    criterion_5_moment_identities();
    criterion_6_scale_guard(tmp);
    criterion_7_rejection(tmp);

    std::error_code ec;
    fs::remove_all(tmp, ec);

    if (failures == 0) {
        std::printf("acceptance: all 7 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d of 7 criteria failed\n", failures);
    return 1;
}
