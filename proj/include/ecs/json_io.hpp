#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ecs/barcode.hpp"
#include "ecs/errors.hpp"
#include "ecs/formal_sum.hpp"
#include "ecs/grid_module.hpp"
#include "ecs/rational.hpp"

namespace ecs {

using nlohmann::json;

inline rational parse_rational(const json& j, const std::string& where) {
    if (!j.is_string())
        throw parse_error(where + ": rationals are strings like \"-3/2\", got " + j.dump());
    auto r = rational::parse(j.get<std::string>());
    if (!r) throw parse_error(where + ": bad rational literal " + j.dump());
    return *r;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw parse_error(path + ": " + ex.what());
    }
    return j;
}

// ---- BarcodeFile: {"bars": [{"birth": "r", "lifespan": "r"}, ...]} ----

inline barcode parse_barcode(const json& j) {
    if (!j.is_object() || !j.contains("bars") || !j["bars"].is_array())
        throw parse_error("barcode file must be an object with a \"bars\" array");
    std::vector<bar> bars;
    std::size_t i = 0;
    for (const auto& jb : j["bars"]) {
        if (!jb.is_object() || !jb.contains("birth") || !jb.contains("lifespan"))
            throw parse_error("bar " + std::to_string(i) + " must carry \"birth\" and \"lifespan\"");
        bars.push_back(bar{parse_rational(jb["birth"], "bar " + std::to_string(i) + " birth"),
                           parse_rational(jb["lifespan"], "bar " + std::to_string(i) + " lifespan")});
        ++i;
    }
    return barcode(std::move(bars));  // enforces lifespan > 0
}

inline json barcode_to_json(const barcode& f) {
    json bars = json::array();
    for (const auto& b : f) bars.push_back({{"birth", b.birth.str()}, {"lifespan", b.lifespan.str()}});
    return json{{"bars", std::move(bars)}};
}

// ---- SeriesFile ----
// {"indeterminates": subset of ["x","y","z"], "axes": N,
//  "terms": [{"x": "r" or ["r",...], "y": "r", "z": k, "coeff": "r"}, ...]}
// Absent exponents are zero. Emission orders terms by ascending (z, x, y).

inline formal_sum parse_series(const json& j) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        throw parse_error("series file must be an object with a \"terms\" array");
    int axes = 1;
    if (j.contains("axes")) {
        if (!j["axes"].is_number_integer() || j["axes"].get<int>() < 1)
            throw parse_error("\"axes\" must be a positive integer");
        axes = j["axes"].get<int>();
    }
    formal_sum s(axes);
    std::size_t i = 0;
    for (const auto& jt : j["terms"]) {
        const std::string where = "term " + std::to_string(i);
        if (!jt.is_object() || !jt.contains("coeff")) throw parse_error(where + " must carry \"coeff\"");
        exp_key k = exp_key::unit(axes);
        if (jt.contains("x")) {
            if (jt["x"].is_array()) {
                if (jt["x"].size() != static_cast<std::size_t>(axes))
                    throw parse_error(where + ": \"x\" array must have " + std::to_string(axes) + " entries");
                for (int a = 0; a < axes; ++a) k.x[static_cast<std::size_t>(a)] = parse_rational(jt["x"][a], where);
            } else if (axes == 1) {
                k.x[0] = parse_rational(jt["x"], where);
            } else {
                throw parse_error(where + ": \"x\" must be an array for a multi-axis series");
            }
        }
        if (jt.contains("y")) k.y = parse_rational(jt["y"], where);
        if (jt.contains("z")) {
            if (!jt["z"].is_number_integer() || jt["z"].get<std::int64_t>() < 0)
                throw parse_error(where + ": \"z\" must be a non-negative integer");
            k.z = jt["z"].get<std::int64_t>();
        }
        rational c = parse_rational(jt["coeff"], where + " coeff");
        if (c.is_zero()) throw invalid_input(where + " has a zero coefficient");
        if (!s.coeff(k).is_zero()) throw invalid_input(where + " duplicates an earlier exponent key");
        s.add_term(k, c);
        ++i;
    }
    return s;
}

inline json series_to_json(const formal_sum& s) {
    bool use_x = false, use_y = false, use_z = false;
    for (const auto& [k, c] : s.terms()) {
        for (const auto& a : k.x)
            if (a != 0) use_x = true;
        if (k.y != 0) use_y = true;
        if (k.z != 0) use_z = true;
    }
    // Output order: ascending z, then grade key, then y.
    std::vector<std::pair<exp_key, rational>> terms(s.terms().begin(), s.terms().end());
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        if (a.first.z != b.first.z) return a.first.z < b.first.z;
        if (a.first.x != b.first.x) return a.first.x < b.first.x;
        return a.first.y < b.first.y;
    });
    json out;
    json indets = json::array();
    if (use_x) indets.push_back("x");
    if (use_y) indets.push_back("y");
    if (use_z) indets.push_back("z");
    out["indeterminates"] = std::move(indets);
    out["axes"] = s.axes();
    json jterms = json::array();
    for (const auto& [k, c] : terms) {
        json jt;
        bool any_x = false;
        for (const auto& a : k.x)
            if (a != 0) any_x = true;
        if (any_x) {
            if (s.axes() == 1) {
                jt["x"] = k.x[0].str();
            } else {
                json xs = json::array();
                for (const auto& a : k.x) xs.push_back(a.str());
                jt["x"] = std::move(xs);
            }
        }
        if (k.y != 0) jt["y"] = k.y.str();
        if (k.z != 0) jt["z"] = k.z;
        jt["coeff"] = c.str();
        jterms.push_back(std::move(jt));
    }
    out["terms"] = std::move(jterms);
    return out;
}

// ---- ModuleFile ----
// {"n": axes, "lo": [...], "hi": [...], "dims": {"g1,...,gn": d, ...},
//  "maps": [{"from": [...], "axis": a, "matrix": [["r", ...], ...]}, ...]}
// Omitted dims are zero; omitted maps are zero matrices.

inline grade parse_grade(const json& j, std::size_t n, const std::string& where) {
    if (!j.is_array() || j.size() != n) throw parse_error(where + ": expected an array of " + std::to_string(n) + " integers");
    grade g(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_number_integer()) throw parse_error(where + ": coordinates must be integers");
        g[i] = j[i].get<std::int64_t>();
    }
    return g;
}

inline grade parse_grade_key(const std::string& key, std::size_t n) {
    grade g;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            g.push_back(std::stoll(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw parse_error("bad grade key \"" + key + "\"");
        }
    }
    if (g.size() != n) throw parse_error("grade key \"" + key + "\" must have " + std::to_string(n) + " coordinates");
    return g;
}

inline grid_module parse_module(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        throw parse_error("module file must carry an integer \"n\"");
    const int axes = j["n"].get<int>();
    if (axes < 1) throw parse_error("\"n\" must be >= 1");
    const auto n = static_cast<std::size_t>(axes);
    if (!j.contains("lo") || !j.contains("hi")) throw parse_error("module file must carry \"lo\" and \"hi\"");
    grid_box box{parse_grade(j["lo"], n, "lo"), parse_grade(j["hi"], n, "hi")};
    grid_module m(axes, box);
    if (j.contains("dims")) {
        if (!j["dims"].is_object()) throw parse_error("\"dims\" must be an object");
        for (const auto& [key, val] : j["dims"].items()) {
            if (!val.is_number_integer() || val.get<int>() < 0)
                throw parse_error("dimension at \"" + key + "\" must be a non-negative integer");
            m.set_dim(parse_grade_key(key, n), val.get<int>());
        }
    }
    if (j.contains("maps")) {
        if (!j["maps"].is_array()) throw parse_error("\"maps\" must be an array");
        std::size_t i = 0;
        for (const auto& jm : j["maps"]) {
            const std::string where = "map " + std::to_string(i);
            if (!jm.is_object() || !jm.contains("from") || !jm.contains("axis") || !jm.contains("matrix"))
                throw parse_error(where + " must carry \"from\", \"axis\" and \"matrix\"");
            grade from = parse_grade(jm["from"], n, where + " from");
            if (!jm["axis"].is_number_integer()) throw parse_error(where + ": \"axis\" must be an integer");
            const auto axis = jm["axis"].get<std::int64_t>();
            if (axis < 0 || axis >= axes) throw parse_error(where + ": axis out of range");
            if (!jm["matrix"].is_array()) throw parse_error(where + ": \"matrix\" must be an array of rows");
            const std::size_t rows = jm["matrix"].size();
            std::size_t cols = 0;
            if (rows > 0) {
                if (!jm["matrix"][0].is_array()) throw parse_error(where + ": matrix rows must be arrays");
                cols = jm["matrix"][0].size();
            }
            rat_matrix mat(rows, cols);
            for (std::size_t r = 0; r < rows; ++r) {
                const auto& jr = jm["matrix"][r];
                if (!jr.is_array() || jr.size() != cols) throw parse_error(where + ": ragged matrix");
                for (std::size_t c = 0; c < cols; ++c)
                    mat.at(r, c) = parse_rational(jr[c], where);
            }
            m.set_step(from, static_cast<std::size_t>(axis), std::move(mat));
            ++i;
        }
    }
    return m;
}

}  // namespace ecs
