#pragma once

// Configuration loading (TOML or JSON) and artifact writers (JSON, CSV, DOT, SVG).

#include "morseflow/chain.hpp"
#include "morseflow/error.hpp"
#include "morseflow/field.hpp"
#include "morseflow/format.hpp"
#include "morseflow/graph.hpp"
#include "morseflow/hybrid.hpp"
#include "morseflow/limits.hpp"
#include "morseflow/morse.hpp"
#include "morseflow/scenarios.hpp"
#include "morseflow/signal.hpp"

#include "json.hpp"
#include "toml.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace morseflow {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- loading

inline Json toml_to_json(const toml::node& node)
{
    if (const auto* t = node.as_table()) {
        Json out = Json::object();
        for (const auto& [k, v] : *t) {
            out[std::string(k.str())] = toml_to_json(v);
        }
        return out;
    }
    if (const auto* a = node.as_array()) {
        Json out = Json::array();
        for (const auto& v : *a) {
            out.push_back(toml_to_json(v));
        }
        return out;
    }
    if (const auto* v = node.as_integer()) {
        return v->get();
    }
    if (const auto* v = node.as_floating_point()) {
        return v->get();
    }
    if (const auto* v = node.as_boolean()) {
        return v->get();
    }
    if (const auto* v = node.as_string()) {
        return v->get();
    }
    throw ConfigError("unsupported TOML value (dates and times are not accepted)");
}

/// Reads a .toml or .json file into one JSON tree.
inline Json load_config(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) {
        throw ConfigError("config file not found: " + path.string());
    }
    const auto ext = path.extension().string();
    if (ext == ".json") {
        std::ifstream in(path);
        try {
            return Json::parse(in);
        } catch (const Json::exception& e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }
    if (ext == ".toml") {
        try {
            return toml_to_json(toml::parse_file(path.string()));
        } catch (const toml::parse_error& e) {
            std::ostringstream os;
            os << path.string() << ":" << e.source().begin.line << ": " << e.description();
            throw ConfigError(os.str());
        }
    }
    throw ConfigError("config must be .toml or .json: " + path.string());
}

namespace cfg {

inline const Json& need(const Json& j, const std::string& key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError(where + ": missing '" + key + "'");
    }
    return j.at(key);
}

inline double number(const Json& j, const std::string& where)
{
    if (!j.is_number()) {
        throw ConfigError(where + ": expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError(where + ": expected a finite number");
    }
    return v;
}

inline double number_or(const Json& j, const std::string& key, double fallback, const std::string& where)
{
    return j.is_object() && j.contains(key) ? number(j.at(key), where + "." + key) : fallback;
}

inline std::int64_t integer(const Json& j, const std::string& where)
{
    if (!j.is_number_integer()) {
        throw ConfigError(where + ": expected an integer");
    }
    return j.get<std::int64_t>();
}

inline std::int64_t integer_or(const Json& j, const std::string& key, std::int64_t fallback, const std::string& where)
{
    return j.is_object() && j.contains(key) ? integer(j.at(key), where + "." + key) : fallback;
}

inline std::string text_or(const Json& j, const std::string& key, const std::string& fallback, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_string()) {
        throw ConfigError(where + "." + key + ": expected a string");
    }
    return j.at(key).get<std::string>();
}

inline std::vector<double> numbers(const Json& j, const std::string& where)
{
    if (!j.is_array()) {
        throw ConfigError(where + ": expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline std::vector<std::int64_t> integers(const Json& j, const std::string& where)
{
    if (!j.is_array()) {
        throw ConfigError(where + ": expected an array of integers");
    }
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(integer(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

/// 0 or 1: the label of the first vertex in this config.
inline int index_base(const Json& root)
{
    const auto b = integer_or(root, "index_base", 0, "config");
    if (b != 0 && b != 1) {
        throw ConfigError("config.index_base: must be 0 or 1");
    }
    return static_cast<int>(b);
}

inline Vertex vertex(const Json& j, int base, const std::string& where)
{
    return static_cast<Vertex>(integer(j, where) - base);
}

} // namespace cfg

/// [graph]: vertices = n plus either edges = [[a,b],...] or complete = true
/// (self_loops = true by default).
inline DirectedGraph parse_graph(const Json& j, int base, const std::string& where = "graph")
{
    const auto n = cfg::integer(cfg::need(j, "vertices", where), where + ".vertices");
    if (n < 1 || n > 100000) {
        throw ConfigError(where + ".vertices: out of range");
    }
    try {
        if (j.contains("complete") && j.at("complete").is_boolean() && j.at("complete").get<bool>()) {
            bool loops = true;
            if (j.contains("self_loops")) {
                if (!j.at("self_loops").is_boolean()) {
                    throw ConfigError(where + ".self_loops: expected true or false");
                }
                loops = j.at("self_loops").get<bool>();
            }
            return DirectedGraph::complete(static_cast<int>(n), loops);
        }
        const auto& edges = cfg::need(j, "edges", where);
        if (!edges.is_array()) {
            throw ConfigError(where + ".edges: expected an array of [from, to] pairs");
        }
        std::vector<Edge> out;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const std::string w = where + ".edges[" + std::to_string(i) + "]";
            if (!edges[i].is_array() || edges[i].size() != 2) {
                throw ConfigError(w + ": expected [from, to]");
            }
            out.push_back({cfg::vertex(edges[i][0], base, w), cfg::vertex(edges[i][1], base, w)});
        }
        return DirectedGraph(static_cast<int>(n), out);
    } catch (const PreconditionError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

inline StateSpace parse_space(const Json& j)
{
    const std::string where = "space";
    const auto kind = cfg::text_or(j, "kind", "interval", where);
    if (kind == "interval") {
        const double lo = cfg::number(cfg::need(j, "lo", where), where + ".lo");
        const double hi = cfg::number(cfg::need(j, "hi", where), where + ".hi");
        if (!(lo < hi)) {
            throw ConfigError(where + ": need lo < hi");
        }
        return StateSpace::interval(lo, hi);
    }
    if (kind == "circle") {
        const double period = cfg::number_or(j, "period", 2.0 * std::numbers::pi, where);
        if (!(period > 0.0)) {
            throw ConfigError(where + ".period: must be positive");
        }
        return StateSpace::circle(period);
    }
    throw ConfigError(where + ".kind: expected \"interval\" or \"circle\"");
}

/// kind = "polynomial" (coeffs, constant term first), "trig" (cos, sin,
/// omega) or "arc" (attractor, repeller, k); optional rho and u.
inline VectorField parse_field(const Json& j, const std::string& where)
{
    const auto kind = cfg::text_or(j, "kind", "polynomial", where);
    VectorField f;
    try {
        if (kind == "polynomial") {
            f = VectorField::polynomial(cfg::numbers(cfg::need(j, "coeffs", where), where + ".coeffs"));
        } else if (kind == "trig") {
            f = VectorField::trig(cfg::numbers(cfg::need(j, "cos", where), where + ".cos"),
                                  j.contains("sin") ? cfg::numbers(j.at("sin"), where + ".sin") : std::vector<double>{},
                                  cfg::number_or(j, "omega", 1.0, where));
        } else if (kind == "arc") {
            f = arc_field(cfg::number(cfg::need(j, "attractor", where), where + ".attractor"),
                          cfg::number(cfg::need(j, "repeller", where), where + ".repeller"),
                          cfg::number_or(j, "k", 1.0, where));
        } else {
            throw ConfigError(where + ".kind: expected \"polynomial\", \"trig\" or \"arc\"");
        }
    } catch (const PreconditionError& e) {
        throw ConfigError(where + ": " + e.what());
    }
    const double rho = cfg::number_or(j, "rho", 0.0, where);
    const double u = cfg::number_or(j, "u", 0.0, where);
    return rho == 0.0 && u == 0.0 ? f : f.perturbed(rho, u);
}

/// [system] with h, steps_per_dwell, [system.space], [system.graph] and
/// [[system.fields]], one per vertex.
inline HybridSystem parse_system(const Json& root)
{
    const int base = cfg::index_base(root);
    const auto& j = cfg::need(root, "system", "config");
    const std::string where = "system";
    const double h = cfg::number(cfg::need(j, "h", where), where + ".h");
    const auto steps = cfg::integer_or(j, "steps_per_dwell", default_steps_per_dwell, where);
    const auto graph = parse_graph(cfg::need(j, "graph", where), base, where + ".graph");
    const auto space = parse_space(cfg::need(j, "space", where));
    const auto& fj = cfg::need(j, "fields", where);
    if (!fj.is_array()) {
        throw ConfigError(where + ".fields: expected an array of tables");
    }
    std::vector<VectorField> fields;
    for (std::size_t i = 0; i < fj.size(); ++i) {
        fields.push_back(parse_field(fj[i], where + ".fields[" + std::to_string(i) + "]"));
    }
    try {
        return HybridSystem(graph, std::move(fields), space, h, static_cast<int>(steps));
    } catch (const PreconditionError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

/// word, h (defaults to the system's), tau, anchor, extension.
inline SymbolicSignal parse_signal(const Json& j, int base, double default_h, const std::string& where = "signal")
{
    std::vector<Vertex> word;
    const auto& wj = cfg::need(j, "word", where);
    if (!wj.is_array() || wj.empty()) {
        throw ConfigError(where + ".word: expected a non-empty array of vertices");
    }
    for (std::size_t i = 0; i < wj.size(); ++i) {
        word.push_back(cfg::vertex(wj[i], base, where + ".word[" + std::to_string(i) + "]"));
    }
    const auto ext_name = cfg::text_or(j, "extension", "periodic", where);
    Extension ext;
    if (ext_name == "periodic") {
        ext = Extension::PeriodicWord;
    } else if (ext_name == "constant-ends") {
        ext = Extension::ConstantEnds;
    } else {
        throw ConfigError(where + ".extension: expected \"periodic\" or \"constant-ends\"");
    }
    try {
        return SymbolicSignal(word, cfg::number_or(j, "h", default_h, where), cfg::number_or(j, "tau", 0.0, where),
                              cfg::integer_or(j, "anchor", 0, where), ext);
    } catch (const PreconditionError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

inline MPart parse_mpart(const Json& j, const std::string& where)
{
    if (!j.is_array() || j.empty()) {
        throw ConfigError(where + ": expected a non-empty array of [lo, hi] pieces or points");
    }
    MPart m;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        if (j[i].is_number()) {
            const double p = cfg::number(j[i], w);
            m.pieces.emplace_back(p, p);
        } else if (j[i].is_array() && j[i].size() == 2) {
            const double a = cfg::number(j[i][0], w);
            const double b = cfg::number(j[i][1], w);
            if (a > b) {
                throw ConfigError(w + ": need lo <= hi");
            }
            m.pieces.emplace_back(a, b);
        } else {
            throw ConfigError(w + ": expected a number or [lo, hi]");
        }
    }
    return m;
}

/// [[morse.candidates]]: name, m = [...], delta = "all" | "constant"
/// (vertex) | "lift" (members).
inline std::vector<MorseCandidate> parse_candidates(const Json& j, int base)
{
    const std::string where = "morse.candidates";
    if (!j.is_array() || j.empty()) {
        throw ConfigError(where + ": expected a non-empty array of tables");
    }
    std::vector<MorseCandidate> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        MorseCandidate c;
        c.name = cfg::text_or(j[i], "name", "M" + std::to_string(i + 1), w);
        c.m = parse_mpart(cfg::need(j[i], "m", w), w + ".m");
        const auto kind = cfg::text_or(j[i], "delta", "all", w);
        if (kind == "all") {
            c.delta = DeltaPart::all();
        } else if (kind == "constant") {
            c.delta = DeltaPart::constant_at(cfg::vertex(cfg::need(j[i], "vertex", w), base, w + ".vertex"));
        } else if (kind == "lift") {
            CommClass cls;
            for (auto v : cfg::integers(cfg::need(j[i], "members", w), w + ".members")) {
                cls.members.push_back(static_cast<Vertex>(v - base));
            }
            std::sort(cls.members.begin(), cls.members.end());
            c.delta = DeltaPart::lift_of(cls);
        } else {
            throw ConfigError(w + ".delta: expected \"all\", \"constant\" or \"lift\"");
        }
        out.push_back(std::move(c));
    }
    return out;
}

inline SamplingPlan parse_plan(const Json& j)
{
    const std::string where = "morse";
    SamplingPlan p;
    if (j.contains("x_grid")) {
        p.x_grid = cfg::numbers(j.at("x_grid"), where + ".x_grid");
    }
    p.grid_n = static_cast<int>(cfg::integer_or(j, "grid_n", p.grid_n, where));
    p.word_len = static_cast<int>(cfg::integer_or(j, "word_len", p.word_len, where));
    if (j.contains("taus")) {
        p.taus = cfg::numbers(j.at("taus"), where + ".taus");
    }
    if (j.contains("anchors")) {
        p.anchors = cfg::integers(j.at("anchors"), where + ".anchors");
    }
    p.burn = cfg::number_or(j, "burn", p.burn, where);
    p.horizon = cfg::number_or(j, "horizon", p.horizon, where);
    p.limit_tol = cfg::number_or(j, "limit_tol", p.limit_tol, where);
    p.invariance_tol = cfg::number_or(j, "invariance_tol", p.invariance_tol, where);
    p.invariance_horizon = cfg::number_or(j, "invariance_horizon", p.invariance_horizon, where);
    p.shell_radius = cfg::number_or(j, "shell_radius", p.shell_radius, where);
    p.escape_horizon = cfg::number_or(j, "escape_horizon", p.escape_horizon, where);
    if (p.grid_n < 1 || p.word_len < 1) {
        throw ConfigError(where + ": grid_n and word_len must be positive");
    }
    return p;
}

// ---------------------------------------------------------------- writing

/// A number rounded to 12 significant digits for stable output.
inline Json num(double x)
{
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return round12(x);
}

inline Json to_json(const SymbolicSignal& s)
{
    return Json{{"word", s.word()},
                {"h", num(s.h())},
                {"tau", num(s.tau())},
                {"anchor", s.anchor()},
                {"extension", to_string(s.extension())}};
}

inline Json to_json(const CommClass& c)
{
    return Json{{"members", c.members}, {"kind", to_string(c.kind)}};
}

inline Json to_json(const LimitSetEstimate& e)
{
    Json pts = Json::array();
    for (double p : e.points) {
        pts.push_back(num(p));
    }
    return Json{{"points", pts},
                {"lo", num(e.lo)},
                {"hi", num(e.hi)},
                {"full_circle", e.full_circle},
                {"cluster_radius", num(e.cluster_radius)},
                {"burn_time", num(e.burn_time)},
                {"horizon", num(e.horizon)},
                {"clamp_events", e.clamp_events}};
}

inline Json to_json(const MorseCandidate& c)
{
    Json pieces = Json::array();
    for (const auto& [a, b] : c.m.pieces) {
        pieces.push_back(Json::array({num(a), num(b)}));
    }
    return Json{{"name", c.name}, {"m", pieces}, {"delta", c.delta.describe()}};
}

inline Json to_json(const MorseReport& r)
{
    Json conds = Json::array();
    for (const auto& c : r.conditions) {
        conds.push_back(Json{{"name", c.name},
                             {"passed", c.passed},
                             {"checks", c.checks},
                             {"failures", c.failures},
                             {"witnesses", c.witnesses}});
    }
    Json edges = Json::array();
    for (const auto& e : r.order_edges) {
        edges.push_back(Json{{"from", r.candidate_names[e.from]},
                             {"to", r.candidate_names[e.to]},
                             {"count", e.count},
                             {"x", num(e.x)},
                             {"signal", to_json(e.sig)}});
    }
    return Json{{"passed", r.passed()}, {"samples", r.samples}, {"conditions", conds}, {"order_edges", edges}};
}

inline Json to_json(const ScenarioReport& r)
{
    Json params = Json::object();
    for (const auto& [k, v] : r.parameters) {
        params[k] = num(v);
    }
    Json claims = Json::array();
    for (const auto& c : r.claims) {
        claims.push_back(Json{{"name", c.name},
                              {"statement", c.statement},
                              {"passed", c.passed},
                              {"measured", num(c.measured)},
                              {"threshold", num(c.threshold)},
                              {"detail", c.detail}});
    }
    return Json{{"scenario", r.id}, {"passed", r.passed()}, {"parameters", params}, {"claims", claims},
                {"notes", r.notes}};
}

inline Json to_json(const ChainGraph& cg, const ChainSetResult& sets)
{
    Json comps = Json::array();
    for (const auto& c : sets.components) {
        Json item{{"members", c.members}, {"lo", num(c.lo)}, {"hi", num(c.hi)}};
        if (c.witness_signal) {
            item["witness_member"] = c.witness_member;
            item["witness_signal"] = to_json(cg.signals[*c.witness_signal]);
        } else {
            item["witness_signal"] = nullptr;
        }
        comps.push_back(item);
    }
    return Json{{"grid_points", cg.size()},
                {"spacing", num(cg.spacing)},
                {"eps", num(cg.eps)},
                {"T", num(cg.T)},
                {"T_max", num(cg.T_max)},
                {"word_len", cg.word_len},
                {"signals", cg.signals.size()},
                {"edges", cg.edges.size()},
                {"components", comps}};
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
}

inline void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::string trajectory_csv(const std::vector<TrajectorySample>& samples)
{
    std::string out = "t,x,vertex\n";
    for (const auto& s : samples) {
        out += fmt(s.t) + "," + fmt(s.x) + "," + std::to_string(s.vertex) + "\n";
    }
    return out;
}

inline std::string components_csv(const ChainGraph& cg, const ChainSetResult& sets)
{
    std::string out = "component,node,x\n";
    for (std::size_t c = 0; c < sets.components.size(); ++c) {
        for (int m : sets.components[c].members) {
            out += std::to_string(c) + "," + std::to_string(m) + "," + fmt(cg.grid[m]) + "\n";
        }
    }
    return out;
}

inline std::string sweep_csv(const SweepResult& s)
{
    std::string out = "rho,component,lo,hi,match,hausdorff,bound\n";
    for (const auto& l : s.levels) {
        for (std::size_t c = 0; c < l.sets.components.size(); ++c) {
            const auto& comp = l.sets.components[c];
            out += fmt(l.rho) + "," + std::to_string(c) + "," + fmt(comp.lo) + "," + fmt(comp.hi) + ","
                + std::to_string(l.match[c]) + "," + fmt(l.distance[c]) + "," + fmt(s.bound(l.rho)) + "\n";
        }
    }
    return out;
}

namespace svg {

inline const char* color(std::size_t i)
{
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
    return palette[i % 6];
}

struct Frame {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    double w = 640.0, h = 400.0, pad = 48.0;

    double px(double x) const { return pad + (x - x0) / (x1 - x0) * (w - 2 * pad); }
    double py(double y) const { return h - pad - (y - y0) / (y1 - y0) * (h - 2 * pad); }
};

inline std::string header(const Frame& f, const std::string& title)
{
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.w << "\" height=\"" << f.h
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << f.pad << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n"
       << "<rect x=\"" << f.pad << "\" y=\"" << f.pad << "\" width=\"" << f.w - 2 * f.pad << "\" height=\""
       << f.h - 2 * f.pad << "\" fill=\"none\" stroke=\"#444\"/>\n";
    return os.str();
}

} // namespace svg

/// x against t for each labeled trajectory.
inline std::string trajectories_svg(const std::vector<LabeledTrajectory>& trajs, const std::string& title)
{
    svg::Frame f;
    f.x0 = 0.0;
    f.x1 = 0.0;
    f.y0 = std::numeric_limits<double>::infinity();
    f.y1 = -std::numeric_limits<double>::infinity();
    for (const auto& tr : trajs) {
        for (const auto& s : tr.samples) {
            f.x1 = std::max(f.x1, s.t);
            f.y0 = std::min(f.y0, s.x);
            f.y1 = std::max(f.y1, s.x);
        }
    }
    if (!(f.x1 > f.x0)) {
        f.x1 = f.x0 + 1.0;
    }
    if (!(f.y1 > f.y0)) {
        f.y0 -= 1.0;
        f.y1 += 1.0;
    }
    std::ostringstream os;
    os << svg::header(f, title);
    os << "<text x=\"" << f.pad << "\" y=\"" << f.h - 16 << "\">t from 0 to " << fmt(f.x1) << ", x from "
       << fmt(f.y0) << " to " << fmt(f.y1) << "</text>\n";
    for (std::size_t i = 0; i < trajs.size(); ++i) {
        os << "<polyline fill=\"none\" stroke=\"" << svg::color(i) << "\" stroke-width=\"1.2\" points=\"";
        for (const auto& s : trajs[i].samples) {
            os << fmt(std::round(f.px(s.t) * 100) / 100) << "," << fmt(std::round(f.py(s.x) * 100) / 100) << " ";
        }
        os << "\"/>\n<text x=\"" << f.w - f.pad - 150 << "\" y=\"" << f.pad + 16 + 14 * i << "\" fill=\""
           << svg::color(i) << "\">" << trajs[i].label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// The state space as a line, with candidate sets as bars and sampled limit
/// points as ticks.
inline std::string phase_line_svg(const StateSpace& space, const std::vector<MorseCandidate>& cands,
                                  const std::vector<double>& limit_points, const std::string& title)
{
    svg::Frame f;
    f.h = 220.0;
    f.x0 = space.is_circle() ? 0.0 : space.lo();
    f.x1 = space.is_circle() ? space.period() : space.hi();
    f.y0 = 0.0;
    f.y1 = 1.0;
    std::ostringstream os;
    os << svg::header(f, title);
    const double line_y = f.py(0.5);
    os << "<line x1=\"" << f.px(f.x0) << "\" y1=\"" << line_y << "\" x2=\"" << f.px(f.x1) << "\" y2=\"" << line_y
       << "\" stroke=\"#888\"/>\n";
    for (std::size_t i = 0; i < cands.size(); ++i) {
        for (const auto& [a, b] : cands[i].m.pieces) {
            const double x = f.px(a);
            const double w = std::max(4.0, f.px(b) - f.px(a));
            os << "<rect x=\"" << fmt(x - (b == a ? 2.0 : 0.0)) << "\" y=\"" << line_y - 10 << "\" width=\""
               << fmt(w) << "\" height=\"20\" fill=\"" << svg::color(i) << "\" fill-opacity=\"0.6\"/>\n"
               << "<text x=\"" << fmt(x) << "\" y=\"" << line_y - 16 << "\">" << cands[i].name << "</text>\n";
        }
    }
    for (double p : limit_points) {
        const double x = f.px(p);
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << line_y + 14 << "\" x2=\"" << fmt(x) << "\" y2=\""
           << line_y + 26 << "\" stroke=\"black\"/>\n";
    }
    os << "<text x=\"" << f.pad << "\" y=\"" << f.h - 16 << "\">M from " << fmt(f.x0) << " to " << fmt(f.x1)
       << "; ticks mark sampled limit points</text>\n</svg>\n";
    return os.str();
}

} // namespace morseflow
