#include "ergopt/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ergopt/errors.hpp"

namespace ergopt {

using nlohmann::ordered_json;

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Trim to the shortest representation that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

namespace {

std::string trop_string(MaxPlusValue v) {
    return v.is_bottom() ? "-inf" : format_double(v.value());
}

Rational parse_value(const nlohmann::json& j, const std::string& where) {
    try {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_number_float()) return Rational::from_double(j.get<double>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    }
    throw ParseError(where + ": expected a number or a rational string");
}

} // namespace

SystemSpec parse_system_text(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    auto require = [&](const char* key) {
        if (!j.contains(key)) throw ParseError(origin + ": missing top-level key \"" + std::string(key) + "\"");
        return j.at(key);
    };

    int d;
    std::vector<std::vector<int>> transitions;
    try {
        d = require("alphabet").get<int>();
        transitions = require("transitions").get<std::vector<std::vector<int>>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (d > 10) throw ParseError(origin + ": the word-keyed file format supports alphabets up to 10 symbols");

    SymbolicSystem system(d, std::move(transitions));

    auto jpot = require("potential");
    if (!jpot.contains("range") || !jpot.contains("values"))
        throw ParseError(origin + ": potential needs \"range\" and \"values\"");
    int k = jpot.at("range").get<int>();
    std::map<Word, Rational> values;
    for (auto it = jpot.at("values").begin(); it != jpot.at("values").end(); ++it) {
        Word w = word_from_string(it.key());
        values.emplace(std::move(w), parse_value(it.value(), origin + ": value of \"" + it.key() + "\""));
    }

    // Every admissible k-word must be priced; report all gaps at once.
    std::vector<std::string> missing;
    for (const Word& w : enumerate_words(system, k))
        if (!values.count(w)) missing.push_back(word_to_string(w));
    if (!missing.empty()) {
        std::string msg = origin + ": missing potential values for";
        for (const auto& s : missing) msg += " \"" + s + "\"";
        throw ValidationError(msg);
    }

    RunOptions opt;
    if (j.contains("options")) {
        const auto& o = j.at("options");
        auto get_num = [&](const char* key, double def) {
            return o.contains(key) ? o.at(key).get<double>() : def;
        };
        opt.precision_bits = static_cast<long>(get_num("precision_bits", static_cast<double>(opt.precision_bits)));
        opt.beta_min = get_num("beta_min", opt.beta_min);
        opt.beta_max = get_num("beta_max", opt.beta_max);
        opt.beta_steps = static_cast<long>(get_num("beta_steps", static_cast<double>(opt.beta_steps)));
        opt.tol_h = get_num("tol_h", opt.tol_h);
        opt.tol_zero = get_num("tol_zero", opt.tol_zero);
        opt.tol_verify = get_num("tol_verify", opt.tol_verify);
    }

    return SystemSpec{std::move(system), LocallyConstantPotential(k, std::move(values)), opt};
}

SystemSpec parse_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open \"" + path + "\"");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_system_text(ss.str(), path);
}

std::string serialize_system(const SystemSpec& spec) {
    ordered_json j;
    j["alphabet"] = spec.system.alphabet_size();
    j["transitions"] = spec.system.transitions();
    ordered_json values;
    for (const auto& [w, q] : spec.potential.exact_values()) {
        if (q.is_integer() && q.fits_long())
            values[word_to_string(w)] = q.num_long();
        else
            values[word_to_string(w)] = q.to_string();
    }
    j["potential"] = ordered_json{{"range", spec.potential.range()}, {"values", values}};
    j["options"] = ordered_json{{"precision_bits", spec.options.precision_bits},
                                {"beta_min", spec.options.beta_min},
                                {"beta_max", spec.options.beta_max},
                                {"beta_steps", spec.options.beta_steps},
                                {"tol_h", spec.options.tol_h},
                                {"tol_zero", spec.options.tol_zero},
                                {"tol_verify", spec.options.tol_verify}};
    return j.dump(2) + "\n";
}

Analysis analyze_spec(const SystemSpec& spec) {
    WeightedEdgeGraph graph =
        attach_potential(recode(spec.system, spec.potential.range()), spec.potential);
    // The exact-rational route keeps maximizing cycles at weight exactly 0,
    // so residual sweeps stay clean for inputs like 1/3 that doubles cannot
    // represent. The double route is cross-checked against it by `oracle`.
    NormalizationData norm = exact_normalize(graph, spec.potential);
    WeightedEdgeGraph gbar = normalized_graph(graph, norm);
    AubryDecomposition decomp =
        irreducible_components(gbar, norm.subaction, spec.options.tol_zero, spec.options.tol_h);
    ManeData mane = mane_matrix(gbar, decomp, spec.options.tol_zero);
    ExtCostMatrix ext = ext_cost_matrix(decomp, mane, gbar, spec.options.tol_zero);
    RateBound rate = rate_bound(ext, decomp, spec.options.tol_h);
    return Analysis{std::move(graph), std::move(norm), std::move(gbar),
                    std::move(decomp), std::move(mane), std::move(ext), std::move(rate)};
}

std::vector<double> beta_grid(const RunOptions& options) {
    std::vector<double> grid;
    const long steps = std::max<long>(1, options.beta_steps);
    if (steps == 1) return {options.beta_min};
    grid.reserve(steps);
    for (long t = 0; t < steps; ++t)
        grid.push_back(options.beta_min +
                       (options.beta_max - options.beta_min) * static_cast<double>(t) /
                           static_cast<double>(steps - 1));
    return grid;
}

std::string analysis_text_report(const SystemSpec& spec, const Analysis& a) {
    std::ostringstream out;
    out << "system: alphabet " << spec.system.alphabet_size() << ", range "
        << spec.potential.range() << ", " << a.graph.vertex_count() << " vertices, "
        << a.graph.edge_count() << " edges\n";
    out << "m(A) = " << format_double(a.norm.m) << "\n";
    out << "subaction V per vertex:\n";
    for (int v = 0; v < a.graph.vertex_count(); ++v)
        out << "  [" << (a.graph.range() == 1 ? "." : word_to_string(a.graph.vertex_word(v)))
            << "] " << format_double(a.norm.subaction[v]) << "\n";

    out << "irreducible components of the Aubry set:\n";
    for (const auto& c : a.decomp.components) {
        out << "  " << (c.id + 1) << ": vertices {";
        for (size_t t = 0; t < c.vertices.size(); ++t)
            out << (t ? "," : "")
                << (a.graph.range() == 1 ? "." : word_to_string(a.graph.vertex_word(c.vertices[t])));
        out << "}, edges " << c.edges.size() << ", entropy " << format_double(c.entropy)
            << ", V = " << format_double(c.subaction_value);
        if (c.subaction_spread > 1e-9)
            out << " (varies by " << format_double(c.subaction_spread)
                << " across the component; shown at its first vertex)";
        out << "\n";
    }
    out << "h = " << format_double(a.decomp.h) << ", maximal-entropy components:";
    for (int id : a.decomp.max_entropy_ids) out << " " << (id + 1);
    out << "\n";

    const int n = a.ext.n;
    out << "entry costs S_ext(j,i) (row j = source component):\n";
    for (int j = 0; j < n; ++j) {
        out << " ";
        for (int i = 0; i < n; ++i) out << " " << trop_string(a.ext.entries.at(j, i));
        out << "\n";
    }
    bool any_skip = false;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (!a.ext.skipped_vertices[j][i].empty()) {
                if (!any_skip) out << "skipped vertices (empty inner max):\n";
                any_skip = true;
                out << "  S_ext(" << (j + 1) << "," << (i + 1) << "): ";
                for (int v : a.ext.skipped_vertices[j][i])
                    out << word_to_string(a.graph.vertex_word(v)) << " ";
                out << "\n";
            }

    if (a.rate.no_finite_cycle) {
        out << "lambda = -inf (no finite cycle in the restricted cost matrix; "
               "nothing lies outside the Aubry set)\n";
    } else {
        out << "lambda = " << trop_string(a.rate.lambda) << ", witness cycle:";
        for (int id : a.rate.witness_cycle) out << " " << (id + 1);
        out << "\n";
    }
    out << "note: pressures refer to the normalized potential; recover the original via "
           "P_A(beta) = P(beta) + beta*m(A)\n";
    return out.str();
}

std::string analysis_json_report(const SystemSpec& spec, const Analysis& a) {
    ordered_json j;
    j["alphabet"] = spec.system.alphabet_size();
    j["range"] = spec.potential.range();
    j["m"] = a.norm.m;
    ordered_json sub;
    for (int v = 0; v < a.graph.vertex_count(); ++v)
        sub[word_to_string(a.graph.vertex_word(v))] = a.norm.subaction[v];
    j["subaction"] = sub;
    j["components"] = ordered_json::array();
    for (const auto& c : a.decomp.components) {
        ordered_json jc;
        jc["id"] = c.id + 1;
        jc["vertices"] = ordered_json::array();
        for (int v : c.vertices) jc["vertices"].push_back(word_to_string(a.graph.vertex_word(v)));
        jc["edges"] = ordered_json::array();
        for (int e : c.edges) jc["edges"].push_back(word_to_string(a.graph.edge(e).label));
        jc["entropy"] = c.entropy;
        jc["subaction_value"] = c.subaction_value;
        jc["subaction_spread"] = c.subaction_spread;
        j["components"].push_back(jc);
    }
    j["h"] = a.decomp.h;
    j["max_entropy_components"] = ordered_json::array();
    for (int id : a.decomp.max_entropy_ids) j["max_entropy_components"].push_back(id + 1);
    j["s_ext"] = ordered_json::array();
    for (int row = 0; row < a.ext.n; ++row) {
        ordered_json r = ordered_json::array();
        for (int col = 0; col < a.ext.n; ++col) {
            MaxPlusValue v = a.ext.entries.at(row, col);
            if (v.is_bottom())
                r.push_back(nullptr);
            else
                r.push_back(v.value());
        }
        j["s_ext"].push_back(r);
    }
    ordered_json skips = ordered_json::array();
    for (int row = 0; row < a.ext.n; ++row)
        for (int col = 0; col < a.ext.n; ++col)
            if (!a.ext.skipped_vertices[row][col].empty()) {
                ordered_json s;
                s["j"] = row + 1;
                s["i"] = col + 1;
                s["vertices"] = ordered_json::array();
                for (int v : a.ext.skipped_vertices[row][col])
                    s["vertices"].push_back(word_to_string(a.graph.vertex_word(v)));
                skips.push_back(s);
            }
    j["skipped_vertices"] = skips;
    if (a.rate.lambda.is_bottom())
        j["lambda"] = nullptr;
    else
        j["lambda"] = a.rate.lambda.value();
    j["witness_cycle"] = ordered_json::array();
    for (int id : a.rate.witness_cycle) j["witness_cycle"].push_back(id + 1);
    j["pressure_convention"] = "normalized potential; P_A(beta) = P(beta) + beta*m";
    return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<PressurePoint>& points, const std::vector<double>& slopes) {
    std::ostringstream out;
    out << "beta,pressure,residual,log_residual,slope,trusted\n";
    for (size_t t = 0; t < points.size(); ++t) {
        const auto& p = points[t];
        out << format_double(p.beta) << "," << p.pressure.to_string(25) << ","
            << p.residual.to_string(25) << "," << format_double(p.log_residual) << ",";
        if (t < slopes.size() && !std::isnan(slopes[t])) out << format_double(slopes[t]);
        out << "," << (p.trusted ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string proposition_diagnostic_table(const Analysis& a, const RateReport& report,
                                         const EigenfunctionResult& eig, double beta_used) {
    std::ostringstream out;
    out << "entry-cost inequality diagnostic (gamma + V(O_i) >= S_ext(j,i) + V(O_j)),\n"
        << "with V = (1/beta) log H at beta = " << format_double(beta_used)
        << " and gamma = " << format_double(report.gamma_estimate) << ":\n";
    for (int i : a.decomp.max_entropy_ids) {
        double vi = eig.log_scaled[a.decomp.components[i].vertices.front()];
        for (const auto& cj : a.decomp.components) {
            MaxPlusValue s = a.ext.entries.at(cj.id, i);
            if (s.is_bottom()) continue;
            double vj = eig.log_scaled[cj.vertices.front()];
            double lhs = report.gamma_estimate + vi;
            double rhs = s.value() + vj;
            out << "  i=" << (i + 1) << " j=" << (cj.id + 1) << ": " << format_double(lhs)
                << (lhs >= rhs - 1e-6 ? " >= " : " <  ") << format_double(rhs)
                << (lhs >= rhs - 1e-6 ? "" : "   [gap]") << "\n";
        }
    }
    out << "  caveat: diagnostic only. V here is the finite-beta eigenfunction, not the\n"
           "  subaction the inequality is stated for; the asserted bound is the cycle-summed\n"
           "  one (gamma >= lambda), which is V-free.\n";
    return out.str();
}

} // namespace ergopt
