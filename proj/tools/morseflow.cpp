#include "morseflow/morseflow.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace morseflow;

namespace {

struct Globals {
    std::string out = "morseflow_out";
    int threads = 1;
    std::uint64_t seed = 1;
};

struct Outcome {
    bool passed = true;
    std::vector<std::string> artifacts;
};

class Run {
public:
    Run(const Globals& g, std::string command) : g_(g), command_(std::move(command)) {}

    void text(const std::string& name, const std::string& body)
    {
        write_text(fs::path(g_.out) / name, body);
        out_.artifacts.push_back(name);
    }

    void json(const std::string& name, const Json& j) { text(name, j.dump(2) + "\n"); }

    int finish(bool passed, const std::string& config)
    {
        out_.passed = passed;
        Json manifest{{"subcommand", command_},
                      {"config", config},
                      {"seed", g_.seed},
                      {"passed", passed},
                      {"artifacts", out_.artifacts}};
        write_json(fs::path(g_.out) / "manifest.json", manifest);
        std::cout << command_ << ": " << (passed ? "ok" : "claim failure") << ", " << out_.artifacts.size()
                  << " artifacts in " << g_.out << "\n";
        return passed ? 0 : 1;
    }

private:
    Globals g_;
    std::string command_;
    Outcome out_;
};

const Json& table(const Json& root, const std::string& key)
{
    static const Json empty = Json::object();
    return root.contains(key) ? root.at(key) : empty;
}

Json graph_json(const DirectedGraph& g, const std::vector<CommClass>& classes)
{
    const auto deg = validate_n_graph(g);
    Json edges = Json::array();
    for (const auto& [a, b] : g.edges()) {
        edges.push_back(Json::array({a, b}));
    }
    Json cls = Json::array();
    for (const auto& c : classes) {
        cls.push_back(to_json(c));
    }
    return Json{{"vertices", g.n_vertices()},
                {"edges", edges},
                {"is_n_graph", deg.is_n_graph},
                {"out_degrees", deg.out_degrees},
                {"in_degrees", deg.in_degrees},
                {"single_class", is_single_class(g)},
                {"classes", cls}};
}

int cmd_graph(const Globals& g, const std::string& config)
{
    const Json root = load_config(config);
    const int base = cfg::index_base(root);
    const auto graph = root.contains("graph")
        ? parse_graph(root.at("graph"), base)
        : parse_graph(cfg::need(table(root, "system"), "graph", "config"), base, "system.graph");
    const auto deg = validate_n_graph(graph);
    Run run(g, "graph analyze");
    std::vector<CommClass> classes;
    if (deg.is_n_graph) {
        classes = communicating_classes(graph);
    }
    run.json("graph.json", graph_json(graph, classes));
    run.text("graph.dot", to_dot(graph, classes));
    if (!deg.is_n_graph) {
        std::cout << "not an N-graph: some vertex has zero in- or out-degree\n";
    }
    for (std::size_t k = 0; k < classes.size(); ++k) {
        std::cout << "class " << k << " (" << to_string(classes[k].kind) << "):";
        for (Vertex v : classes[k].members) {
            std::cout << " " << v;
        }
        std::cout << "\n";
    }
    return run.finish(deg.is_n_graph, config);
}

int cmd_signal(const Globals& g, const std::string& config, int window)
{
    const Json root = load_config(config);
    const int base = cfg::index_base(root);
    std::optional<DirectedGraph> graph;
    if (root.contains("graph")) {
        graph = parse_graph(root.at("graph"), base);
    } else if (table(root, "system").contains("graph")) {
        graph = parse_graph(root.at("system").at("graph"), base, "system.graph");
    }
    const double h = cfg::number_or(table(root, "system"), "h", 1.0, "system");
    const auto sig = parse_signal(cfg::need(root, "signal", "config"), base, h);

    Json out{{"signal", to_json(sig)}, {"description", describe(sig)}, {"window", window}};
    Json entries = Json::array();
    for (std::int64_t k = -window; k <= window; ++k) {
        entries.push_back(sig.entry(k));
    }
    out["entries"] = entries;
    out["minimal_period"] = minimal_period(sig.word());
    out["signal_omega_vertices"] = signal_omega(sig).vertices;
    bool passed = true;
    if (graph) {
        out["admissible"] = sig.is_admissible(*graph);
        passed = sig.is_admissible(*graph);
    }
    if (root.contains("compare")) {
        const auto other = parse_signal(root.at("compare"), base, h, "compare");
        const auto d = distance(sig, other, window);
        out["compare"] = Json{{"signal", to_json(other)},
                              {"distance", num(d.value)},
                              {"truncation_error_bound", num(d.truncation_error_bound)}};
    }
    if (root.contains("chaos")) {
        if (!graph) {
            throw ConfigError("chaos: needs a [graph] or [system.graph] table");
        }
        const auto& cj = root.at("chaos");
        const auto cert = chaos_certificate(*graph, static_cast<int>(cfg::integer_or(cj, "L", 4, "chaos")), sig,
                                            cfg::number_or(cj, "eps", 0.05, "chaos"), window);
        out["chaos"] = Json{{"witness", to_json(cert.witness)},
                            {"word_length", cert.word_length},
                            {"words_total", cert.words_total},
                            {"words_covered", cert.words_covered},
                            {"sensitive_partner", to_json(cert.pair.y)},
                            {"divergence_time", num(cert.pair.divergence_time)},
                            {"eps", num(cert.eps)},
                            {"initial_distance", num(cert.initial_distance)},
                            {"separated_distance", num(cert.separated_distance)},
                            {"transitive", cert.transitive()},
                            {"sensitive", cert.sensitive()}};
        passed = passed && cert.passed();
    }
    Run run(g, "signal");
    run.json("signal.json", out);
    return run.finish(passed, config);
}

int cmd_simulate(const Globals& g, const std::string& config)
{
    const Json root = load_config(config);
    const int base = cfg::index_base(root);
    const auto sys = parse_system(root);
    const auto sig = parse_signal(cfg::need(root, "signal", "config"), base, sys.h());
    const auto& sj = table(root, "simulate");
    std::vector<double> starts;
    if (sj.contains("x0")) {
        starts = sj.at("x0").is_array() ? cfg::numbers(sj.at("x0"), "simulate.x0")
                                        : std::vector<double>{cfg::number(sj.at("x0"), "simulate.x0")};
    } else {
        starts = {0.5 * (sys.space().lo() + sys.space().hi())};
    }
    const double t_end = cfg::number_or(sj, "t_end", 20.0 * sys.h(), "simulate");
    const double dt = cfg::number_or(sj, "dt", sys.h() / 16.0, "simulate");

    Run run(g, "simulate");
    std::vector<LabeledTrajectory> trajs;
    Json finals = Json::array();
    for (std::size_t i = 0; i < starts.size(); ++i) {
        auto samples = trajectory(sys, {starts[i], sig}, t_end, dt);
        finals.push_back(Json{{"x0", num(starts[i])}, {"x_end", num(samples.back().x)}});
        run.text("trajectory_" + std::to_string(i) + ".csv", trajectory_csv(samples));
        trajs.push_back({"x0=" + fmt(starts[i]), std::move(samples)});
    }
    run.text("trajectories.svg", trajectories_svg(trajs, "hybrid flow, " + describe(sig)));
    run.json("simulate.json", Json{{"signal", to_json(sig)}, {"t_end", num(t_end)}, {"dt", num(dt)},
                                   {"trajectories", finals}});
    return run.finish(true, config);
}

int cmd_limitset(const Globals& g, const std::string& config)
{
    const Json root = load_config(config);
    const int base = cfg::index_base(root);
    const auto sys = parse_system(root);
    const auto sig = parse_signal(cfg::need(root, "signal", "config"), base, sys.h());
    const auto& lj = table(root, "limitset");
    const auto points = lj.contains("points") ? cfg::numbers(lj.at("points"), "limitset.points")
                                              : uniform_grid(sys.space(), 11);
    LimitOptions opt;
    opt.burn = cfg::number_or(lj, "burn", opt.burn, "limitset");
    opt.horizon = cfg::number_or(lj, "horizon", opt.horizon, "limitset");
    opt.radius = cfg::number_or(lj, "radius", opt.radius, "limitset");

    std::vector<Json> rows(points.size());
    parallel_for(points.size(), g.threads, [&](std::size_t i) {
        const ProductPoint p{points[i], sig};
        rows[i] = Json{{"x", num(points[i])},
                       {"omega", to_json(estimate_limit(sys, p, 1, opt))},
                       {"alpha", to_json(estimate_limit(sys, p, -1, opt))}};
    });
    Json out{{"signal", to_json(sig)},
             {"signal_omega_vertices", signal_omega(sig).vertices},
             {"signal_alpha_vertices", signal_alpha(sig).vertices},
             {"points", rows}};
    Run run(g, "limitset");
    run.json("limitset.json", out);
    return run.finish(true, config);
}

int cmd_morse(const Globals& g, const std::string& config)
{
    const Json root = load_config(config);
    const int base = cfg::index_base(root);
    const auto sys = parse_system(root);
    const auto& mj = cfg::need(root, "morse", "config");
    const auto cands = parse_candidates(cfg::need(mj, "candidates", "morse"), base);
    auto plan = parse_plan(mj);
    plan.threads = g.threads;
    const auto report = verify_morse_decomposition(sys, cands, plan);

    Json cj = Json::array();
    for (const auto& c : cands) {
        cj.push_back(to_json(c));
    }
    Json out = to_json(report);
    out["candidates"] = cj;
    Run run(g, "morse");
    run.json("morse.json", out);
    run.text("phase_line.svg", phase_line_svg(sys.space(), cands, {}, "Morse candidates"));
    for (const auto& c : report.conditions) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.failures << "/" << c.checks << ")\n";
    }
    return run.finish(report.passed(), config);
}

int cmd_chains(const Globals& g, const std::string& config, std::optional<double> eps, std::optional<double> T,
               std::optional<int> grid)
{
    const Json root = load_config(config);
    const auto sys = parse_system(root);
    const auto& cj = table(root, "chains");
    ChainOptions opt;
    opt.grid_n = static_cast<int>(cfg::integer_or(cj, "grid", opt.grid_n, "chains"));
    opt.eps = cfg::number_or(cj, "eps", opt.eps, "chains");
    opt.T = cfg::number_or(cj, "T", opt.T, "chains");
    opt.T_max = cfg::number_or(cj, "T_max", opt.T_max, "chains");
    opt.word_len = static_cast<int>(cfg::integer_or(cj, "word_len", opt.word_len, "chains"));
    if (eps) {
        opt.eps = *eps;
    }
    if (T) {
        opt.T = *T;
    }
    if (grid) {
        opt.grid_n = *grid;
    }
    opt.threads = g.threads;
    const auto cg = build_chain_graph(sys, opt);
    const auto sets = chain_sets(sys, cg);

    Run run(g, "chains");
    run.text("chains.dot", to_dot(cg, sets));
    run.text("components.csv", components_csv(cg, sets));
    run.json("chains.json", to_json(cg, sets));
    for (const auto& c : sets.components) {
        std::cout << "chain set [" << fmt(c.lo) << ", " << fmt(c.hi) << "] with " << c.members.size() << " nodes\n";
    }
    return run.finish(true, config);
}

int cmd_sweep(const Globals& g, const std::string& config)
{
    const Json root = load_config(config);
    const auto& sj = cfg::need(root, "sweep", "config");
    const auto base = parse_field(cfg::need(sj, "field", "sweep"), "sweep.field");
    const auto rhos = cfg::numbers(cfg::need(sj, "rhos", "sweep"), "sweep.rhos");
    SweepOptions opt;
    if (sj.contains("controls")) {
        opt.controls = cfg::numbers(sj.at("controls"), "sweep.controls");
    }
    opt.lo = cfg::number_or(sj, "lo", opt.lo, "sweep");
    opt.hi = cfg::number_or(sj, "hi", opt.hi, "sweep");
    opt.h = cfg::number_or(sj, "h", opt.h, "sweep");
    opt.chain.grid_n = static_cast<int>(cfg::integer_or(sj, "grid", opt.chain.grid_n, "sweep"));
    opt.chain.eps = cfg::number_or(sj, "eps", opt.chain.eps, "sweep");
    opt.chain.T = cfg::number_or(sj, "T", opt.chain.T, "sweep");
    opt.chain.word_len = static_cast<int>(cfg::integer_or(sj, "word_len", opt.chain.word_len, "sweep"));
    opt.chain.threads = g.threads;
    const auto res = perturbation_sweep(base, rhos, opt);

    const std::size_t count = res.levels[res.reference].sets.components.size();
    bool passed = true;
    Json levels = Json::array();
    for (std::size_t l = 0; l < res.levels.size(); ++l) {
        const auto& lv = res.levels[l];
        passed = passed && lv.sets.components.size() == count && res.matched_count(l) == count;
        Json d = Json::array();
        for (double x : lv.distance) {
            d.push_back(num(x));
            passed = passed && x <= res.bound(lv.rho) + 1e-12;
        }
        levels.push_back(Json{{"rho", num(lv.rho)},
                              {"components", lv.sets.components.size()},
                              {"matched", res.matched_count(l)},
                              {"match", lv.match},
                              {"hausdorff", d},
                              {"bound", num(res.bound(lv.rho))}});
    }
    Run run(g, "sweep");
    run.text("sweep.csv", sweep_csv(res));
    run.json("sweep.json", Json{{"grid_spacing", num(res.grid_spacing)},
                                {"constant", num(res.constant)},
                                {"passed", passed},
                                {"levels", levels}});
    return run.finish(passed, config);
}

int cmd_scenario(const Globals& g, const std::string& which)
{
    ScenarioReport rep;
    MorseReport full;
    if (which == "flicker") {
        FlickerOptions opt;
        opt.threads = g.threads;
        rep = example_flicker(opt);
    } else if (which == "circle") {
        CircleOptions opt;
        opt.seed = g.seed;
        opt.threads = g.threads;
        rep = example_circle(default_circle_config(), opt);
    } else if (which == "morse") {
        SaddleOptions opt;
        opt.plan.threads = g.threads;
        rep = example_morse(opt, &full);
    } else {
        throw ConfigError("unknown scenario '" + which + "' (expected flicker, circle or morse)");
    }
    Run run(g, "scenario " + which);
    run.json("report.json", to_json(rep));
    for (std::size_t i = 0; i < rep.trajectories.size(); ++i) {
        run.text("trajectory_" + std::to_string(i) + ".csv", trajectory_csv(rep.trajectories[i].samples));
    }
    if (!rep.trajectories.empty()) {
        run.text("trajectories.svg", trajectories_svg(rep.trajectories, which + " scenario trajectories"));
    }
    if (which == "morse") {
        run.json("morse.json", to_json(full));
        run.text("phase_line.svg",
                 phase_line_svg(saddle_system().space(), saddle_candidates(), {}, "Morse sets M1 to M4"));
    }
    for (const auto& c : rep.claims) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    }
    return run.finish(rep.passed(), "");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid systems on N-graphs: flows, limit sets, Morse decompositions and chain sets", "morseflow"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--out", g.out, "output directory")->envname("MORSEFLOW_OUT");
    app.add_option("--threads", g.threads, "worker threads (0 = one per core)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", g.seed, "seed for randomized draws");

    std::string config;
    std::string which;
    int window = default_window;
    std::optional<double> eps;
    std::optional<double> T;
    std::optional<int> grid;

    auto* graph = app.add_subcommand("graph", "N-graph checks and communicating classes");
    graph->require_subcommand(1);
    graph->fallthrough();
    auto* analyze = graph->add_subcommand("analyze", "list classes and write DOT");
    analyze->add_option("config", config, "TOML or JSON config")->required();

    auto* signal = app.add_subcommand("signal", "describe a signal; optional metric comparison and chaos certificate");
    signal->add_option("config", config)->required();
    signal->add_option("--window", window, "metric window N")->check(CLI::PositiveNumber);

    auto* simulate = app.add_subcommand("simulate", "integrate the hybrid flow along one signal");
    simulate->add_option("config", config)->required();

    auto* limitset = app.add_subcommand("limitset", "omega- and alpha-limit estimates");
    limitset->add_option("config", config)->required();

    auto* morse = app.add_subcommand("morse", "verify a candidate Morse decomposition");
    morse->add_option("config", config)->required();

    auto* chains = app.add_subcommand("chains", "grid chain graph and chain-recurrent components");
    chains->add_option("config", config)->required();
    chains->add_option("--eps", eps, "chain jump size")->check(CLI::PositiveNumber);
    chains->add_option("--T", T, "minimal chain time")->check(CLI::PositiveNumber);
    chains->add_option("--grid", grid, "grid points")->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "chain sets under shrinking perturbations");
    sweep->add_option("config", config)->required();

    auto* scenario = app.add_subcommand("scenario", "run a built-in example");
    scenario->add_option("name", which, "flicker, circle or morse")
        ->required()
        ->check(CLI::IsMember({"flicker", "circle", "morse"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    try {
        if (*analyze) {
            return cmd_graph(g, config);
        }
        if (*signal) {
            return cmd_signal(g, config, window);
        }
        if (*simulate) {
            return cmd_simulate(g, config);
        }
        if (*limitset) {
            return cmd_limitset(g, config);
        }
        if (*morse) {
            return cmd_morse(g, config);
        }
        if (*chains) {
            return cmd_chains(g, config, eps, T, grid);
        }
        if (*sweep) {
            return cmd_sweep(g, config);
        }
        if (*scenario) {
            return cmd_scenario(g, which);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
