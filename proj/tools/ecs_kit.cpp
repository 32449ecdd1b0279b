// ecs-kit: exact invariants of persistence barcodes and grid modules on
// the command line. All I/O is UTF-8 JSON with rationals as strings; every
// output is byte-deterministic given the input, flags and seed.
//
// Exit codes: 0 success/equal, 1 semantic difference or harness failure,
// 2 parse error, 3 validation error, 4 budget exceeded, 5 malformed ECS.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ecs/barcode.hpp"
#include "ecs/grid_invariants.hpp"
#include "ecs/grid_module.hpp"
#include "ecs/grid_powers.hpp"
#include "ecs/json_io.hpp"
#include "ecs/random_barcode.hpp"
#include "ecs/reconstruct.hpp"

namespace {

using namespace ecs;

struct series_flags {
    bool birth = false, death = false, critical = false, lifespan = false, drift_flag = false, ecs_flag = false;
};

std::string key_str(const exp_key& k) {
    std::string s;
    bool any_x = false;
    for (const auto& a : k.x)
        if (a != 0) any_x = true;
    if (any_x) {
        if (k.axes() == 1) {
            s += "x^" + k.x[0].str();
        } else {
            s += "x^(";
            for (std::size_t i = 0; i < k.x.size(); ++i) s += (i ? "," : "") + k.x[i].str();
            s += ")";
        }
    }
    if (k.y != 0) s += std::string(s.empty() ? "" : " ") + "y^" + k.y.str();
    if (k.z != 0) s += std::string(s.empty() ? "" : " ") + "z^" + std::to_string(k.z);
    return s.empty() ? "1" : s;
}

// First key at which two sums differ, in key order.
std::optional<exp_key> first_difference(const formal_sum& a, const formal_sum& b) {
    auto ia = a.terms().begin(), ib = b.terms().begin();
    while (ia != a.terms().end() && ib != b.terms().end()) {
        if (ia->first < ib->first) return ia->first;
        if (ib->first < ia->first) return ib->first;
        if (ia->second != ib->second) return ia->first;
        ++ia;
        ++ib;
    }
    if (ia != a.terms().end()) return ia->first;
    if (ib != b.terms().end()) return ib->first;
    return std::nullopt;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_barcode_invariants(const std::string& path, const series_flags& want, std::optional<int> p_max,
                           std::uint64_t budget) {
    barcode f = parse_barcode(load_json_file(path));
    std::map<std::string, json> out;
    if (want.birth) out["birth"] = series_to_json(birth_series(f));
    if (want.death) out["death"] = series_to_json(death_series(f));
    if (want.critical) out["critical"] = series_to_json(critical_series(f));
    if (want.lifespan) out["lifespan"] = series_to_json(lifespan_series(f));
    if (want.drift_flag) out["drift"] = json{{"drift", drift(f).str()}};
    if (want.ecs_flag) out["ecs"] = series_to_json(exterior_critical_series(f, p_max, budget));
    if (out.empty()) throw parse_error("no invariant requested; pass at least one of --birth --death --critical --lifespan --drift --ecs");
    if (out.size() == 1) {
        emit(out.begin()->second);
    } else {
        json j;
        for (auto& [k, v] : out) j[k] = std::move(v);
        emit(j);
    }
    return 0;
}

int cmd_barcode_reconstruct(const std::string& path, std::uint64_t budget) {
    formal_sum e = parse_series(load_json_file(path));
    barcode f = reconstruct(e, budget);
    emit(barcode_to_json(f));
    return 0;
}

int cmd_barcode_compare(const std::string& a_path, const std::string& b_path, std::optional<int> p_max,
                        std::uint64_t budget) {
    barcode a = parse_barcode(load_json_file(a_path));
    barcode b = parse_barcode(load_json_file(b_path));
    bool all_equal = true;
    auto report = [&](const std::string& name, const formal_sum& sa, const formal_sum& sb) {
        if (sa == sb) {
            std::cout << name << ": EQUAL\n";
        } else {
            all_equal = false;
            std::cout << name << ": DIFFER first at " << key_str(*first_difference(sa, sb)) << "\n";
        }
    };
    report("birth-series", birth_series(a), birth_series(b));
    report("death-series", death_series(a), death_series(b));
    report("critical-series", critical_series(a), critical_series(b));
    report("lifespan-series", lifespan_series(a), lifespan_series(b));
    report("ecs", exterior_critical_series(a, p_max, budget), exterior_critical_series(b, p_max, budget));
    return all_equal ? 0 : 1;
}

struct module_flags {
    bool hilbert_flag = false, rank_flag = false, onset = false, critical = false, ecs_flag = false;
};

json grade_to_json(const grade& g) {
    json a = json::array();
    for (auto c : g) a.push_back(c);
    return a;
}

int cmd_module_invariants(const std::string& path, const module_flags& want, std::optional<int> p_max,
                          std::uint64_t budget) {
    grid_module m = parse_module(load_json_file(path));
    validate(m);
    std::map<std::string, json> out;
    if (want.hilbert_flag) {
        json rows = json::array();
        for (const auto& [g, d] : hilbert(m)) rows.push_back({{"grade", grade_to_json(g)}, {"dim", d}});
        out["hilbert"] = std::move(rows);
    }
    if (want.rank_flag) {
        json rows = json::array();
        for (const auto& [pair, r] : rank_invariant_of(m).ranks)
            rows.push_back({{"from", grade_to_json(pair.first)}, {"to", grade_to_json(pair.second)}, {"rank", r}});
        out["rank-invariant"] = std::move(rows);
    }
    if (want.onset) {
        json rows = json::array();
        std::int64_t total = 0;
        m.box().for_each([&](const grade& g) {
            int d = onset_dim(m, g);
            if (d > 0) {
                rows.push_back({{"grade", grade_to_json(g)}, {"dim", d}});
                total += d;
            }
        });
        out["onset"] = json{{"by_grade", std::move(rows)}, {"total", total}};
    }
    if (want.critical) out["critical"] = series_to_json(critical_series(m));
    if (want.ecs_flag) {
        const std::int64_t all = onset_total(m);
        int top = static_cast<int>(p_max ? std::min<std::int64_t>(*p_max, all) : all);
        out["ecs"] = series_to_json(top < 1 ? formal_sum(m.axes()) : module_ecs(m, top, budget));
    }
    if (out.empty())
        throw parse_error("no invariant requested; pass at least one of --hilbert --rank-invariant --onset --critical --ecs");
    if (out.size() == 1) {
        emit(out.begin()->second);
    } else {
        json j;
        for (auto& [k, v] : out) j[k] = std::move(v);
        emit(j);
    }
    return 0;
}

int cmd_module_compare(const std::string& a_path, const std::string& b_path, std::optional<int> p_max,
                       std::uint64_t budget) {
    grid_module a = parse_module(load_json_file(a_path));
    grid_module b = parse_module(load_json_file(b_path));
    validate(a);
    validate(b);
    if (a.axes() != b.axes()) throw axis_mismatch("modules have different axis counts");
    bool all_equal = true;

    if (hilbert(a) == hilbert(b)) {
        std::cout << "hilbert: EQUAL\n";
    } else {
        all_equal = false;
        grade where;
        for (const auto& [g, d] : hilbert(a))
            if (hilbert(b).count(g) == 0 || hilbert(b).at(g) != d) {
                where = g;
                break;
            }
        if (where.empty())
            for (const auto& [g, d] : hilbert(b))
                if (hilbert(a).count(g) == 0) {
                    where = g;
                    break;
                }
        std::cout << "hilbert: DIFFER first at grade " << grade_str(where) << "\n";
    }

    rank_invariant ra = rank_invariant_of(a), rb = rank_invariant_of(b);
    if (ra == rb) {
        std::cout << "rank-invariant: EQUAL\n";
    } else {
        all_equal = false;
        std::string where = "?";
        for (const auto& [pair, r] : ra.ranks)
            if (rb.rank(pair.first, pair.second) != r) {
                where = grade_str(pair.first) + " -> " + grade_str(pair.second);
                break;
            }
        if (where == "?")
            for (const auto& [pair, r] : rb.ranks)
                if (ra.rank(pair.first, pair.second) != r) {
                    where = grade_str(pair.first) + " -> " + grade_str(pair.second);
                    break;
                }
        std::cout << "rank-invariant: DIFFER first at " << where << "\n";
    }

    formal_sum ca = critical_series(a), cb = critical_series(b);
    if (ca == cb) {
        std::cout << "critical-series: EQUAL\n";
    } else {
        all_equal = false;
        std::cout << "critical-series: DIFFER first at " << key_str(*first_difference(ca, cb)) << "\n";
    }

    const std::int64_t all_powers = std::max<std::int64_t>({onset_total(a), onset_total(b), 1});
    int top = static_cast<int>(p_max ? std::min<std::int64_t>(*p_max, all_powers) : all_powers);
    formal_sum ea = top < 1 ? formal_sum(a.axes()) : module_ecs(a, top, budget);
    formal_sum eb = top < 1 ? formal_sum(b.axes()) : module_ecs(b, top, budget);
    if (ea == eb) {
        std::cout << "ecs: EQUAL (up to z^" << top << ")\n";
    } else {
        all_equal = false;
        // First differing power, then the first differing grade inside it.
        for (int p = 1; p <= top; ++p) {
            formal_sum pa(a.axes()), pb(b.axes());
            for (const auto& [k, c] : ea.terms())
                if (k.z == p) pa.add_term(exp_key::grade_vector(k.x), c);
            for (const auto& [k, c] : eb.terms())
                if (k.z == p) pb.add_term(exp_key::grade_vector(k.x), c);
            if (!(pa == pb)) {
                std::cout << "ecs: DIFFER first at z^" << p << ", grade "
                          << key_str(*first_difference(pa, pb)) << "\n";
                break;
            }
        }
    }
    return all_equal ? 0 : 1;
}

std::pair<rational, rational> parse_range(const std::string& text, const std::string& flag) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw parse_error(flag + " expects LO:HI");
    auto lo = rational::parse(text.substr(0, colon));
    auto hi = rational::parse(text.substr(colon + 1));
    if (!lo || !hi || *hi < *lo) throw parse_error(flag + " expects rationals LO:HI with LO <= HI");
    return {*lo, *hi};
}

int cmd_roundtrip(std::uint64_t count, std::uint64_t seed, int max_bars, const std::string& grade_range,
                  const std::string& lifespan_range, std::uint64_t budget) {
    barcode_gen_options opt;
    opt.max_bars = max_bars;
    auto [glo, ghi] = parse_range(grade_range, "--grade-range");
    opt.birth_lo = glo;
    opt.birth_hi = ghi;
    auto [llo, lhi] = parse_range(lifespan_range, "--lifespan-range");
    if (lhi.sign() <= 0) throw parse_error("--lifespan-range upper bound must be positive");
    opt.lifespan_hi = lhi;
    (void)llo;  // lifespans are drawn from (0, hi]

    roundtrip_report report = run_roundtrip(count, seed, opt, budget);
    std::cout << "roundtrip: passed " << report.passed << "/" << report.total << " (seed " << seed
              << ", max-bars " << max_bars << ", grades [" << glo.str() << "," << ghi.str() << "], lifespans (0,"
              << lhi.str() << "])\n";
    if (report.first_failure) {
        const auto& fail = *report.first_failure;
        std::cout << "first failure: case " << fail.case_index << ": bars " << fail.barcode_text << "-> "
                  << fail.detail << "\n";
    }
    return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact exterior critical series toolkit for barcodes and grid modules"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --budget appear after a subcommand too

    std::uint64_t budget = default_budget;
    app.add_option("--budget", budget, "term/dimension cap for power expansions")->capture_default_str();

    // barcode ...
    auto* barcode_cmd = app.add_subcommand("barcode", "barcode-level invariants and reconstruction");
    barcode_cmd->require_subcommand(1);

    std::string in_path, in_b_path;
    series_flags sflags;
    int p_max_val = 0;
    bool p_max_set = false;

    auto* b_inv = barcode_cmd->add_subcommand("invariants", "series invariants of a barcode file");
    b_inv->add_option("input", in_path, "barcode JSON file")->required();
    b_inv->add_flag("--birth", sflags.birth, "birth series");
    b_inv->add_flag("--death", sflags.death, "death series");
    b_inv->add_flag("--critical", sflags.critical, "critical series");
    b_inv->add_flag("--lifespan", sflags.lifespan, "lifespan series");
    b_inv->add_flag("--drift", sflags.drift_flag, "sum of birth grades");
    b_inv->add_flag("--ecs", sflags.ecs_flag, "exterior critical series");
    b_inv->add_option("--p-max", p_max_val, "cap on exterior powers")->check(CLI::PositiveNumber)->each([&](const std::string&) { p_max_set = true; });

    auto* b_rec = barcode_cmd->add_subcommand("reconstruct", "rebuild the barcode from its exterior critical series");
    b_rec->add_option("input", in_path, "series JSON file in x and z")->required();

    auto* b_cmp = barcode_cmd->add_subcommand("compare", "compare the invariants of two barcode files");
    b_cmp->add_option("a", in_path, "first barcode JSON file")->required();
    b_cmp->add_option("b", in_b_path, "second barcode JSON file")->required();
    b_cmp->add_option("--p-max", p_max_val, "cap on exterior powers")->check(CLI::PositiveNumber)->each([&](const std::string&) { p_max_set = true; });

    // module ...
    auto* module_cmd = app.add_subcommand("module", "grid-module invariants and comparison");
    module_cmd->require_subcommand(1);

    module_flags mflags;
    auto* m_inv = module_cmd->add_subcommand("invariants", "invariants of a grid-module file");
    m_inv->add_option("input", in_path, "module JSON file")->required();
    m_inv->add_flag("--hilbert", mflags.hilbert_flag, "pointwise dimensions");
    m_inv->add_flag("--rank-invariant", mflags.rank_flag, "ranks of all composite maps");
    m_inv->add_flag("--onset", mflags.onset, "minimal generator counts per grade");
    m_inv->add_flag("--critical", mflags.critical, "critical series");
    m_inv->add_flag("--ecs", mflags.ecs_flag, "exterior critical series");
    m_inv->add_option("--p-max", p_max_val, "cap on exterior powers")->check(CLI::PositiveNumber)->each([&](const std::string&) { p_max_set = true; });

    auto* m_cmp = module_cmd->add_subcommand("compare", "compare the invariants of two module files");
    m_cmp->add_option("a", in_path, "first module JSON file")->required();
    m_cmp->add_option("b", in_b_path, "second module JSON file")->required();
    m_cmp->add_option("--p-max", p_max_val, "cap on exterior powers")->check(CLI::PositiveNumber)->each([&](const std::string&) { p_max_set = true; });

    // roundtrip ...
    std::uint64_t count = 1000, seed = 0;
    int max_bars = 8;
    std::string grade_range = "-8:8", lifespan_range = "0:8";
    auto* rt = app.add_subcommand("roundtrip", "seeded random reconstruct(ecs(f)) == f harness");
    rt->add_option("--count", count, "number of random barcodes")->capture_default_str();
    rt->add_option("--seed", seed, "RNG seed")->capture_default_str();
    rt->add_option("--max-bars", max_bars, "maximum bars per barcode")->check(CLI::NonNegativeNumber)->capture_default_str();
    rt->add_option("--grade-range", grade_range, "birth range LO:HI (rationals)")->capture_default_str();
    rt->add_option("--lifespan-range", lifespan_range, "lifespan range LO:HI, drawn from (0, HI]")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::optional<int> p_max;
    if (p_max_set) p_max = p_max_val;

    try {
        if (b_inv->parsed()) return cmd_barcode_invariants(in_path, sflags, p_max, budget);
        if (b_rec->parsed()) return cmd_barcode_reconstruct(in_path, budget);
        if (b_cmp->parsed()) return cmd_barcode_compare(in_path, in_b_path, p_max, budget);
        if (m_inv->parsed()) return cmd_module_invariants(in_path, mflags, p_max, budget);
        if (m_cmp->parsed()) return cmd_module_compare(in_path, in_b_path, p_max, budget);
        if (rt->parsed()) return cmd_roundtrip(count, seed, max_bars, grade_range, lifespan_range, budget);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const parse_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const budget_exceeded& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 4;
    } catch (const malformed_ecs& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 5;
    } catch (const error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "internal error: " << ex.what() << "\n";
        return 70;
    }
}
