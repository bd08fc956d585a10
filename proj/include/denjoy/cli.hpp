#pragma once

#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "denjoy/classify.hpp"
#include "denjoy/comb.hpp"
#include "denjoy/common.hpp"
#include "denjoy/dirichlet.hpp"
#include "denjoy/equilibrium.hpp"
#include "denjoy/json_io.hpp"
#include "denjoy/modulus.hpp"

namespace denjoy::cli {

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

inline std::map<std::string, double> parse_params(const std::string& s) {
    std::map<std::string, double> out;
    for (const auto& kv : split(s, ',')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw domain_error("parameter list must be key=value,key=value");
        out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return out;
}

inline std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) out.push_back(std::stod(tok));
    return out;
}

inline IntervalSet load_set(const std::string& inline_json, const std::string& file) {
    if (!inline_json.empty()) return interval_set_from_json(json::parse(inline_json));
    if (!file.empty()) return interval_set_from_json(load_json_file(file));
    throw domain_error("provide --set or --set-file");
}

inline std::string num(double v) { return csv_number(v); }

} // namespace detail

// Entry point shared by the binary and the tests. Exit codes: 0 success,
// 1 domain/solver error, 2 usage error.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"potential-theory toolkit for interval-union sets on the real line"};
    app.require_subcommand(1);

    // capacity
    std::string set_json, set_file;
    int cap_n = 256;
    auto* cap = app.add_subcommand("capacity", "logarithmic capacity of an interval union");
    cap->add_option("--set", set_json, "interval set as inline JSON");
    cap->add_option("--set-file", set_file, "interval set JSON file");
    cap->add_option("-n,--nodes", cap_n, "nodes per component")->capture_default_str();

    // green
    std::vector<std::string> at_points;
    int green_n = 256;
    std::string g_set, g_file;
    auto* grn = app.add_subcommand("green", "Green function values g(z) with pole at infinity");
    grn->add_option("--set", g_set, "interval set as inline JSON");
    grn->add_option("--set-file", g_file, "interval set JSON file");
    grn->add_option("--at", at_points, "evaluation point \"re,im\" (repeatable)")->required();
    grn->add_option("-n,--nodes", green_n, "nodes per component")->capture_default_str();

    // comb
    std::string c_set, c_file, c_out;
    int comb_n = 256;
    auto* cmb = app.add_subcommand("comb", "slit data of the comb domain");
    cmb->add_option("--set", c_set, "interval set as inline JSON");
    cmb->add_option("--set-file", c_file, "interval set JSON file");
    cmb->add_option("--out", c_out, "write JSON here instead of stdout");
    cmb->add_option("-n,--nodes", comb_n, "nodes per component")->capture_default_str();

    // modulus
    std::string family, params_str, quad_file, mod_set_file;
    int quad_grid = 129;
    auto* mod = app.add_subcommand("modulus", "module formulas and the numeric estimator");
    mod->add_option("--family", family, "formula family (gamma1..gamma10, groetzsch_mu)");
    mod->add_option("--params", params_str, "family parameters key=value,...");
    mod->add_option("--set-file", mod_set_file, "interval set S for gamma10");
    mod->add_option("--quad", quad_file, "quadrilateral JSON for the numeric estimator");
    mod->add_option("--grid", quad_grid, "estimator grid")->capture_default_str();

    // classify
    std::string gaps_file, methods_str = "cover,metric,benedicks,smoothness";
    std::string trunc_str = "1e2,1e3,1e4", report_out, csv_prefix;
    double cl_alpha = 0.5;
    int cl_grid = 129;
    auto* cls = app.add_subcommand("classify", "dimension of the cone of positive harmonic functions");
    cls->add_option("gaps", gaps_file, "gap system JSON file")->required();
    cls->add_option("--methods", methods_str, "comma list: cover,metric,comb,benedicks,smoothness")
        ->capture_default_str();
    cls->add_option("--truncations", trunc_str, "truncation ladder")->capture_default_str();
    cls->add_option("--alpha", cl_alpha, "Benedicks window ratio")->capture_default_str();
    cls->add_option("--grid", cl_grid, "Benedicks grid")->capture_default_str();
    cls->add_option("--out", report_out, "write the JSON report here");
    cls->add_option("--csv", csv_prefix, "write CSV ladders with this path prefix");

    // benedicks
    std::string b_gaps, b_csv;
    double b_alpha = 0.5, b_rmax = 1e4;
    int b_grid = 129;
    auto* ben = app.add_subcommand("benedicks", "harmonic-measure scan of the criterion integral");
    ben->add_option("gaps", b_gaps, "gap system JSON file")->required();
    ben->add_option("--alpha", b_alpha, "window ratio")->capture_default_str();
    ben->add_option("--rmax", b_rmax, "scan radius")->capture_default_str();
    ben->add_option("--grid", b_grid, "grid nodes per window")->capture_default_str();
    ben->add_option("--csv", b_csv, "CSV output path");

    // construct
    std::string theta_str, gaps_out;
    int levels = 12;
    auto* con = app.add_subcommand("construct", "gap family with prescribed gap budget theta");
    con->add_option("--theta", theta_str, "\"power:<gamma>[:<scale>]\" or \"table:<csv file>\"")
        ->required();
    con->add_option("--levels", levels, "number of dyadic levels")->capture_default_str();
    con->add_option("--out", gaps_out, "write gaps JSON here instead of stdout");

    // smoothness
    std::string s_set, s_file, s_gaps, s_y = "1e-1,1e-2,1e-3", s_csv;
    double s_trunc = 1e3;
    int s_n = 256;
    auto* smo = app.add_subcommand("smoothness", "g(iy)/y ratios near the origin");
    smo->add_option("--set", s_set, "compact set as inline JSON (0 must lie in it)");
    smo->add_option("--set-file", s_file, "compact set JSON file");
    smo->add_option("--gaps", s_gaps, "gap system JSON file (reduced via the pivot gap)");
    smo->add_option("--truncation", s_trunc, "truncation for --gaps")->capture_default_str();
    smo->add_option("--y", s_y, "comma list of y values")->capture_default_str();
    smo->add_option("-n,--nodes", s_n, "nodes per component")->capture_default_str();
    smo->add_option("--csv", s_csv, "CSV output path");

    try {
        std::reverse(args.begin(), args.end()); // CLI11 consumes from the back
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n' << app.get_name() << ": usage error\n";
        return 2;
    }

    try {
        if (*cap) {
            out << detail::num(capacity(detail::load_set(set_json, set_file), cap_n)) << '\n';
        } else if (*grn) {
            CombMap comb(detail::load_set(g_set, g_file), green_n);
            for (const auto& p : at_points) {
                auto xy = detail::parse_doubles(p);
                if (xy.size() != 2) throw domain_error("--at needs \"re,im\"");
                out << detail::num(comb.green(Complex(xy[0], xy[1]))) << '\n';
            }
        } else if (*cmb) {
            CombData cd = comb_data(detail::load_set(c_set, c_file), comb_n);
            std::string text = to_json(cd).dump(2) + "\n";
            if (c_out.empty()) out << text;
            else write_text_file(c_out, text);
        } else if (*mod) {
            if (!quad_file.empty()) {
                Quadrilateral Q = quadrilateral_from_json(load_json_file(quad_file));
                out << detail::num(numeric_modulus(Q, quad_grid)) << '\n';
            } else if (!family.empty()) {
                ModuleBound mb;
                if (family == "gamma10" && !mod_set_file.empty()) {
                    auto P = detail::parse_params(params_str);
                    mb = gamma10_upper(P.at("a"), P.at("b"),
                                       interval_set_from_json(load_json_file(mod_set_file)));
                } else {
                    mb = module_formula(family, detail::parse_params(params_str));
                }
                out << detail::num(mb.value) << ' ' << to_string(mb.kind) << '\n';
            } else {
                throw domain_error("modulus: provide --family or --quad");
            }
        } else if (*cls) {
            GapSystem E = gap_system_from_json(load_json_file(gaps_file));
            ClassifyOptions o;
            o.methods.clear();
            for (const auto& m : detail::split(methods_str, ',')) o.methods.insert(m);
            o.truncations = detail::parse_doubles(trunc_str);
            o.alpha = cl_alpha;
            o.grid_n = cl_grid;
            ClassificationReport rep = classify(E, o);
            std::string text = to_json(rep).dump(2) + "\n";
            if (report_out.empty()) out << text;
            else write_text_file(report_out, text);
            if (!csv_prefix.empty()) {
                if (rep.theorem1)
                    write_text_file(csv_prefix + "_series15.csv", csv_ladder(rep.theorem1->series));
                if (rep.theorem2)
                    write_text_file(csv_prefix + "_series17.csv", csv_ladder(rep.theorem2->series));
                if (rep.remark3)
                    write_text_file(csv_prefix + "_remark3.csv", csv_ladder(rep.remark3->ladder));
                if (rep.benedicks)
                    write_text_file(csv_prefix + "_benedicks.csv", csv_benedicks(*rep.benedicks));
            }
            out << "verdict: " << to_string(rep.verdict) << '\n';
        } else if (*ben) {
            GapSystem E = gap_system_from_json(load_json_file(b_gaps));
            BenedicksScan scan = benedicks_scan(E, b_alpha, b_rmax, b_grid);
            std::string text = csv_benedicks(scan);
            if (b_csv.empty()) out << text;
            else write_text_file(b_csv, text);
        } else if (*con) {
            auto parts = detail::split(theta_str, ':');
            ThetaSpec theta = ThetaSpec::power(1.0);
            if (parts.size() >= 2 && parts[0] == "power") {
                double gamma = std::stod(parts[1]);
                double scale = parts.size() >= 3 ? std::stod(parts[2]) : 1.0;
                theta = ThetaSpec::power(gamma, scale);
            } else if (parts.size() == 2 && parts[0] == "table") {
                std::ifstream in(parts[1]);
                if (!in) throw file_error("cannot open file: " + parts[1]);
                std::vector<std::pair<double, double>> samples;
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-')) continue;
                    auto vals = detail::parse_doubles(line);
                    if (vals.size() == 2) samples.emplace_back(vals[0], vals[1]);
                }
                theta = ThetaSpec::table(std::move(samples));
            } else {
                throw domain_error("--theta must be power:<gamma>[:<scale>] or table:<file>");
            }
            GapSystem E = construct_remark4(theta, levels);
            std::string text = to_json(E).dump(2) + "\n";
            if (gaps_out.empty()) out << text;
            else write_text_file(gaps_out, text);
        } else if (*smo) {
            IntervalSet F = [&] {
                if (!s_gaps.empty()) {
                    GapSystem E = gap_system_from_json(load_json_file(s_gaps));
                    GapSystem ER(E.gaps_within(s_trunc), s_trunc);
                    return gaps_to_compact(ER, default_pivot(ER)).first;
                }
                return detail::load_set(s_set, s_file);
            }();
            auto ys = detail::parse_doubles(s_y);
            auto ratios = smoothness_ratio(F, ys, s_n);
            std::string text = csv_smoothness(ys, ratios);
            if (s_csv.empty()) out << text;
            else write_text_file(s_csv, text);
        }
    } catch (const file_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const solver_error& e) {
        err << "solver error: " << e.what() << '\n';
        return 1;
    } catch (const nlohmann::json::exception& e) {
        err << "input error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace denjoy::cli
