#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "denjoy/classify.hpp"
#include "denjoy/comb.hpp"
#include "denjoy/common.hpp"
#include "denjoy/cover.hpp"
#include "denjoy/dirichlet.hpp"
#include "denjoy/equilibrium.hpp"
#include "denjoy/gap_system.hpp"
#include "denjoy/interval_set.hpp"
#include "denjoy/modulus.hpp"

namespace denjoy {

using json = nlohmann::ordered_json;

// ---- interval sets ----

inline json to_json(const IntervalSet& s) {
    json j;
    j["intervals"] = json::array();
    for (const auto& iv : s.intervals()) j["intervals"].push_back({iv.lo, iv.hi});
    return j;
}

inline IntervalSet interval_set_from_json(const json& j) {
    if (!j.contains("intervals") || !j["intervals"].is_array())
        throw domain_error("interval set JSON: missing \"intervals\" array");
    std::vector<std::pair<double, double>> raw;
    for (const auto& e : j["intervals"]) {
        if (!e.is_array() || e.size() != 2)
            throw domain_error("interval set JSON: each interval is [lo, hi]");
        raw.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return IntervalSet::normalize(std::move(raw));
}

// ---- gap systems ----

namespace detail {

inline double endpoint_from_json(const json& e) {
    if (e.is_string()) {
        std::string s = e.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw domain_error("gap JSON: endpoint string must be \"inf\" or \"-inf\"");
    }
    return e.get<double>();
}

inline json endpoint_to_json(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

} // namespace detail

inline json to_json(const GapSystem& E) {
    json j;
    j["gaps"] = json::array();
    for (const auto& g : E.gaps())
        j["gaps"].push_back({detail::endpoint_to_json(g.lo), detail::endpoint_to_json(g.hi)});
    j["origin_margin"] = E.origin_margin();
    j["truncation"] = E.truncation();
    return j;
}

inline GapSystem gap_system_from_json(const json& j) {
    if (!j.contains("gaps") || !j["gaps"].is_array())
        throw domain_error("gap system JSON: missing \"gaps\" array");
    std::vector<Interval> gaps;
    for (const auto& e : j["gaps"]) {
        if (!e.is_array() || e.size() != 2)
            throw domain_error("gap system JSON: each gap is [c, d]");
        gaps.push_back({detail::endpoint_from_json(e[0]), detail::endpoint_from_json(e[1])});
    }
    double truncation = j.value("truncation", 1e4);
    std::optional<double> margin;
    if (j.contains("origin_margin")) margin = j["origin_margin"].get<double>();
    return GapSystem(std::move(gaps), truncation, margin);
}

// ---- measures, comb data ----

inline json to_json(const EquilibriumMeasure& mu) {
    json j;
    j["nodes"] = mu.nodes;
    j["weights"] = mu.weights;
    j["capacity"] = mu.capacity;
    return j;
}

inline json to_json(const CombData& cd) {
    json j;
    j["slits"] = json::array();
    for (const auto& s : cd.slits)
        j["slits"].push_back({{"gap", s.gap_index}, {"u", s.u}, {"v", s.v}});
    if (cd.u0) j["u0"] = *cd.u0;
    else j["u0"] = nullptr;
    return j;
}

// ---- quadrilaterals ----

inline Quadrilateral quadrilateral_from_json(const json& j) {
    if (!j.contains("rect") || !j["rect"].is_array() || j["rect"].size() != 4)
        throw domain_error("quadrilateral JSON: missing \"rect\": [x0,x1,y0,y1]");
    Quadrilateral Q{j["rect"][0].get<double>(), j["rect"][1].get<double>(),
                    j["rect"][2].get<double>(), j["rect"][3].get<double>(),
                    {}, {}, {}};
    auto parse_arcs = [&](const json& arr, std::vector<BoundaryArc>& out) {
        for (const auto& a : arr) {
            std::string side = a.at("side").get<std::string>();
            BoundaryArc arc{};
            if (side == "bottom") arc.side = BoundaryArc::Bottom;
            else if (side == "top") arc.side = BoundaryArc::Top;
            else if (side == "left") arc.side = BoundaryArc::Left;
            else if (side == "right") arc.side = BoundaryArc::Right;
            else throw domain_error("quadrilateral JSON: bad arc side " + side);
            arc.from = a.at("from").get<double>();
            arc.to = a.at("to").get<double>();
            out.push_back(arc);
        }
    };
    if (j.contains("arcs")) {
        for (const auto& a : j["arcs"]) {
            double value = a.at("value").get<double>();
            std::vector<BoundaryArc> tmp;
            parse_arcs(json::array({a}), tmp);
            auto& dst = value >= 0.5 ? Q.arc_one : Q.arc_zero;
            dst.insert(dst.end(), tmp.begin(), tmp.end());
        }
    }
    if (j.contains("slits")) {
        for (const auto& pl : j["slits"]) {
            std::vector<std::pair<double, double>> poly;
            for (const auto& pt : pl)
                poly.emplace_back(pt[0].get<double>(), pt[1].get<double>());
            if (poly.size() >= 2) Q.barriers.push_back(std::move(poly));
        }
    }
    return Q;
}

// ---- classification report ----

inline json to_json(const SeriesLadder& s) {
    json j;
    j["R"] = s.R;
    j["partial"] = s.partial;
    return j;
}

inline json to_json(const TheoremResult& t) {
    json j;
    j["series"] = to_json(t.series);
    j["ratio_extreme"] = t.ratio_extreme;
    json br = json::object();
    for (const auto& [k, v] : t.block_ratio) br[std::to_string(k)] = v;
    j["block_ratio"] = br;
    j["tail"] = std::isfinite(t.tail) ? json(t.tail) : json("inf");
    j["growth"] = std::isfinite(t.growth) ? json(t.growth) : json("inf");
    j["evidence"] = t.evidence;
    j["half_line"] = t.half_line;
    j["notes"] = t.notes;
    return j;
}

inline json to_json(const CoverSystem& c) {
    json j;
    j["blocks"] = json::array();
    for (const auto& b : c.blocks)
        j["blocks"].push_back({{"a", b.a}, {"b", b.b}, {"tag", to_string(b.tag)}});
    j["log"] = c.log;
    return j;
}

inline json to_json(const ClassifyOptions& o) {
    json j;
    j["truncations"] = o.truncations;
    j["methods"] = std::vector<std::string>(o.methods.begin(), o.methods.end());
    j["alpha"] = o.alpha;
    j["grid_n"] = o.grid_n;
    j["block_n"] = o.block_n;
    j["smoothness_n"] = o.smoothness_n;
    j["smoothness_y"] = o.smoothness_y;
    j["eps_tail"] = o.eps_tail;
    j["growth_min"] = o.growth_min;
    j["ratio_floor"] = o.ratio_floor;
    j["q_sup"] = o.q_sup;
    j["density_floor"] = o.density_floor;
    j["benedicks_flat"] = o.benedicks_flat;
    j["benedicks_grow"] = o.benedicks_grow;
    j["remark3_shrink"] = o.remark3_shrink;
    j["comb_base_spacing"] = o.comb_base_spacing;
    j["greedy_upper"] = o.greedy_upper;
    j["greedy_lower"] = o.greedy_lower;
    return j;
}

inline json to_json(const BenedicksScan& b) {
    json j;
    j["alpha"] = b.alpha;
    j["grid_n"] = b.grid_n;
    j["x"] = json::array();
    j["beta"] = json::array();
    for (const auto& s : b.samples) {
        j["x"].push_back(s.x);
        j["beta"].push_back(s.beta);
    }
    j["ladder_R"] = b.ladder_R;
    j["ladder_I"] = b.ladder_I;
    return j;
}

inline json to_json(const ClassificationReport& r) {
    json j;
    j["verdict"] = to_string(r.verdict);
    j["rationale"] = r.rationale;
    j["evidence"] = json::array();
    for (const auto& e : r.evidence)
        j["evidence"].push_back(
            {{"method", e.method}, {"direction", e.direction}, {"detail", e.detail}});
    if (r.theorem1) j["theorem1"] = to_json(*r.theorem1);
    if (r.theorem2) j["theorem2"] = to_json(*r.theorem2);
    if (r.theorem1_comb) j["theorem1_comb"] = to_json(*r.theorem1_comb);
    if (r.theorem2_comb) j["theorem2_comb"] = to_json(*r.theorem2_comb);
    if (r.remark1) {
        j["remark1"] = {{"min_density", r.remark1->min_density},
                        {"densities", r.remark1->densities}};
    }
    if (r.remark3) {
        j["remark3"] = {{"ladder", to_json(r.remark3->ladder)},
                        {"convergent", r.remark3->convergent}};
    }
    if (r.benedicks) j["benedicks"] = to_json(*r.benedicks);
    if (!r.smoothness_R.empty()) {
        j["smoothness"] = {{"R", r.smoothness_R}, {"ratios", r.smoothness_ratios},
                           {"y", r.options.smoothness_y}};
    }
    j["options"] = to_json(r.options);
    j["notes"] = r.notes;
    return j;
}

// ---- CSV ----

inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_ladder(const SeriesLadder& s) {
    std::ostringstream os;
    os << "R,partial_sum\n";
    for (std::size_t i = 0; i < s.R.size(); ++i)
        os << csv_number(s.R[i]) << ',' << csv_number(s.partial[i]) << '\n';
    return os.str();
}

inline std::string csv_smoothness(const std::vector<double>& y,
                                  const std::vector<double>& ratios) {
    std::ostringstream os;
    os << "y,ratio\n";
    for (std::size_t i = 0; i < y.size(); ++i)
        os << csv_number(y[i]) << ',' << csv_number(ratios[i]) << '\n';
    return os.str();
}

inline std::string csv_benedicks(const BenedicksScan& b) {
    std::ostringstream os;
    os << "x,beta,R,partial_integral\n";
    std::size_t rows = std::max(b.samples.size(), b.ladder_R.size());
    for (std::size_t i = 0; i < rows; ++i) {
        if (i < b.samples.size())
            os << csv_number(b.samples[i].x) << ',' << csv_number(b.samples[i].beta);
        else
            os << ',';
        os << ',';
        if (i < b.ladder_R.size())
            os << csv_number(b.ladder_R[i]) << ',' << csv_number(b.ladder_I[i]);
        else
            os << ',';
        os << '\n';
    }
    return os.str();
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw file_error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw file_error("cannot write file: " + path);
    out << text;
}

} // namespace denjoy
