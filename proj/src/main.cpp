#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hardcore/engine.hpp"
#include "hardcore/errors.hpp"
#include "hardcore/graph.hpp"
#include "hardcore/io.hpp"
#include "hardcore/oracle.hpp"
#include "hardcore/periodic.hpp"
#include "hardcore/reductions.hpp"
#include "hardcore/saw.hpp"
#include "hardcore/views.hpp"

using namespace hardcore;
using nlohmann::json;

namespace {

struct Options {
    std::string input;
    double epsilon = 1e-3;
    int depth_start = 4;
    int depth_step = 2;
    int depth_cap = 40;
    std::uint64_t node_budget = 10'000'000;
    int threads = 1;
    std::string normalization = "per_vertex";
    std::string output;

    std::string vertex;    // saw-count origin
    int walk_depth = 10;   // saw-count / regime depth
    int strip_width = 8;   // oracle strip2d
    std::size_t enum_cap = 30; // oracle brute

    EngineConfig engine() const {
        EngineConfig cfg;
        cfg.epsilon = epsilon;
        cfg.depth_start = depth_start;
        cfg.depth_step = depth_step;
        cfg.depth_cap = depth_cap;
        cfg.node_budget = node_budget;
        cfg.threads = threads;
        cfg.normalization = normalization == "per_group_element"
                                ? Normalization::PerGroupElement
                                : Normalization::PerVertex;
        return cfg;
    }
};

void emit(const json& j, const Options& opts) {
    const std::string text = dump_json(j);
    if (opts.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.output);
    if (!out) throw InvalidInput("cannot write output file: " + opts.output);
    out << text;
}

std::string brief_interval(const CertifiedInterval& iv) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "[%.10g, %.10g] width %.3g depth %d %s", iv.lower, iv.upper,
                  iv.width(), iv.depth_used, iv.certified ? "(certified)" : "(NOT certified)");
    return buf;
}

// Shared flow for every command whose result is a certified interval:
// success prints it and returns 0; a missed accuracy target prints the
// attached best bracket and returns 2. Other errors propagate.
int run_interval_command(const Options& opts, const std::string& name, bool with_normalization,
                         const std::function<CertifiedInterval()>& compute,
                         const std::function<void(json&)>& decorate) {
    CertifiedInterval iv;
    int code = 0;
    try {
        iv = compute();
    } catch (const NoConvergence& e) {
        iv = e.best();
        std::cerr << name << ": accuracy target missed; best certified bracket reported\n";
        code = 2;
    }
    json j = interval_to_json(iv, with_normalization);
    if (decorate) decorate(j);
    emit(j, opts);
    std::cerr << name << " in " << brief_interval(iv) << "\n";
    return code;
}

int cmd_partition(const Options& opts) {
    auto [g, lam] = parse_finite_graph(load_json_file(opts.input));
    EngineConfig cfg = opts.engine();
    try {
        const double z = weitz_partition_exact(g, lam, cfg);
        json j;
        j["exact"] = z;
        emit(j, opts);
        std::cerr << "partition function Z = " << z << " (exact)\n";
        return 0;
    } catch (const BudgetExceeded&) {
        std::cerr << "exact telescoping exceeded the node budget; "
                     "reporting a certified bracket at epsilon "
                  << cfg.epsilon << "\n";
    }
    return run_interval_command(
        opts, "partition", false, [&] { return weitz_partition_approx(g, lam, cfg); },
        [&](json& j) { j["regime"] = regime_to_json(regime_report(g, lam))["regime"]; });
}

int cmd_free_energy(const Options& opts) {
    const PeriodicGraph pg = parse_periodic_graph(load_json_file(opts.input));
    const RegimeReport regime = regime_report(pg);
    return run_interval_command(
        opts, "free energy", true, [&] { return free_energy(pg, opts.engine()); },
        [&](json& j) { j["regime"] = regime_to_json(regime)["regime"]; });
}

int cmd_entropy(const Options& opts) {
    auto [ts, phi] = parse_transition_system(load_json_file(opts.input));
    (void)phi; // entropy ignores the potential
    return run_interval_command(
        opts, "entropy", true, [&] { return entropy(ts, opts.engine()); }, nullptr);
}

int cmd_pressure(const Options& opts) {
    auto [ts, phi] = parse_transition_system(load_json_file(opts.input));
    return run_interval_command(
        opts, "pressure", true, [&] { return pressure(ts, phi, opts.engine()); }, nullptr);
}

int cmd_matching(const Options& opts) {
    const json input = load_json_file(opts.input);
    const PeriodicGraph pg = parse_periodic_graph(input);
    const std::vector<double> acts = parse_edge_activities(input, pg);
    return run_interval_command(
        opts, "monomer-dimer free energy", true,
        [&] { return monomer_dimer_free_energy(pg, acts, opts.engine()); }, nullptr);
}

int cmd_spectral_radius(const Options& opts) {
    const auto m = parse_binary_matrix(load_json_file(opts.input));
    // Use the first index whose row and column are all ones.
    int safe_index = -1;
    for (std::size_t a = 0; a < m.size() && safe_index < 0; ++a) {
        bool ok = true;
        for (std::size_t b = 0; b < m.size(); ++b) ok = ok && m[a][b] == 1 && m[b][a] == 1;
        if (ok) safe_index = static_cast<int>(a);
    }
    if (safe_index < 0) throw NotReducible("matrix has no all-ones row/column pair");
    return run_interval_command(
        opts, "spectral radius", false,
        [&] { return spectral_radius_safe(m, safe_index, opts.epsilon, opts.engine()); },
        nullptr);
}

int cmd_regime(const Options& opts) {
    const json input = load_json_file(opts.input);
    RegimeReport rep;
    if (looks_like_periodic_graph(input)) {
        rep = regime_report(parse_periodic_graph(input), opts.walk_depth, opts.node_budget);
    } else {
        auto [g, lam] = parse_finite_graph(input);
        rep = regime_report(g, lam, opts.walk_depth, opts.node_budget);
    }
    const json j = regime_to_json(rep);
    emit(j, opts);
    std::cerr << "regime: " << j.at("regime").get<std::string>() << "\n";
    return 0;
}

int cmd_saw_count(const Options& opts) {
    const json input = load_json_file(opts.input);
    WalkCounts wc;
    std::string origin;
    if (looks_like_periodic_graph(input)) {
        const PeriodicGraph pg = parse_periodic_graph(input);
        int u = 0;
        if (!opts.vertex.empty()) {
            u = pg.domain_index_of_label(opts.vertex);
            if (u < 0) throw InvalidInput("unknown domain vertex: " + opts.vertex);
        }
        const PeriodicVertex root{Offset{}, static_cast<std::int32_t>(u)};
        origin = pg.vertex_name(root);
        wc = count_walks(PeriodicPastView(pg, false), root, opts.walk_depth, opts.node_budget);
    } else {
        auto [g, lam] = parse_finite_graph(input);
        (void)lam;
        int v = 0;
        if (!opts.vertex.empty()) {
            v = g.index_of_label(opts.vertex);
            if (v < 0) throw InvalidInput("unknown vertex: " + opts.vertex);
        }
        origin = g.label(v);
        wc = count_walks(FiniteGraphView(g), v, opts.walk_depth, opts.node_budget);
    }
    json j;
    j["origin"] = origin;
    j["depth"] = opts.walk_depth;
    j["counts"] = wc.counts;
    bool any = false;
    for (auto c : wc.counts) any = any || c > 0;
    if (any) j["mu_hat"] = estimate_connective_constant(wc.counts);
    emit(j, opts);
    std::cerr << "walks from " << origin << " counted to length " << opts.walk_depth << "\n";
    return 0;
}

int cmd_oracle_transfer1d(const Options& opts) {
    const PeriodicGraph pg = parse_periodic_graph(load_json_file(opts.input));
    const double f = transfer_free_energy_1d(pg);
    json j;
    j["value"] = f;
    emit(j, opts);
    std::cerr << "transfer free energy (per vertex): " << f << "\n";
    return 0;
}

int cmd_oracle_strip2d(const Options& opts) {
    const PeriodicGraph pg = parse_periodic_graph(load_json_file(opts.input));
    const auto [lo, hi] = strip_free_energy_2d(pg, opts.strip_width);
    json j;
    j["lower"] = lo;
    j["upper"] = hi;
    j["width_cells"] = opts.strip_width;
    emit(j, opts);
    std::cerr << "strip band (heuristic, width " << opts.strip_width << "): [" << lo << ", " << hi
              << "]\n";
    return 0;
}

int cmd_oracle_power(const Options& opts) {
    const json input = load_json_file(opts.input);
    if (!input.is_object() || !input.contains("matrix") || !input.at("matrix").is_array())
        throw InvalidInput("power oracle needs {\"matrix\": [[...], ...]}");
    std::vector<std::vector<double>> m;
    for (const auto& rowj : input.at("matrix")) {
        if (!rowj.is_array()) throw InvalidInput("\"matrix\" rows must be arrays");
        std::vector<double> row;
        for (const auto& x : rowj) {
            if (!x.is_number()) throw InvalidInput("\"matrix\" entries must be numbers");
            row.push_back(x.get<double>());
        }
        m.push_back(std::move(row));
    }
    const double v = power_iteration(m);
    json j;
    j["value"] = v;
    emit(j, opts);
    std::cerr << "dominant eigenvalue: " << v << "\n";
    return 0;
}

int cmd_oracle_brute(const Options& opts) {
    auto [g, lam] = parse_finite_graph(load_json_file(opts.input));
    const double z = brute_force_partition(g, lam, opts.enum_cap);
    json j;
    j["value"] = z;
    emit(j, opts);
    std::cerr << "brute-force partition function: " << z << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified counting for hardcore models on finite and periodic graphs"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opts;
    app.add_option("--epsilon", opts.epsilon, "accuracy target")->capture_default_str();
    app.add_option("--depth-start", opts.depth_start, "first walk-tree depth")
        ->capture_default_str();
    app.add_option("--depth-step", opts.depth_step, "depth increment")->capture_default_str();
    app.add_option("--depth-cap", opts.depth_cap, "hard depth limit")->capture_default_str();
    app.add_option("--node-budget", opts.node_budget, "walk-tree node budget per build")
        ->capture_default_str();
    app.add_option("--threads", opts.threads, "worker threads (0 = hardware)")
        ->envname("HARDCORE_ENGINE_THREADS")
        ->capture_default_str();
    app.add_option("--normalization", opts.normalization, "free-energy normalization")
        ->check(CLI::IsMember({"per_vertex", "per_group_element"}))
        ->capture_default_str();
    app.add_option("--output", opts.output, "write the result JSON to a file instead of stdout");

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("input", opts.input, "input JSON file")->required();
    };

    CLI::App* partition = app.add_subcommand("partition", "partition function of a finite graph");
    add_input(partition);
    CLI::App* free_e = app.add_subcommand("free-energy", "free energy of a periodic graph");
    add_input(free_e);
    CLI::App* entropy_cmd =
        app.add_subcommand("entropy", "topological entropy of a transition system");
    add_input(entropy_cmd);
    CLI::App* pressure_cmd =
        app.add_subcommand("pressure", "pressure of a single-site potential");
    add_input(pressure_cmd);
    CLI::App* matching =
        app.add_subcommand("matching", "monomer-dimer free energy of a periodic graph");
    add_input(matching);
    CLI::App* spectral =
        app.add_subcommand("spectral-radius", "certified Perron root of a 0/1 matrix");
    add_input(spectral);
    CLI::App* regime = app.add_subcommand("regime", "activity regime report");
    add_input(regime);
    regime->add_option("--walk-depth", opts.walk_depth, "growth-estimate walk depth")
        ->capture_default_str();
    CLI::App* saw = app.add_subcommand("saw-count", "self-avoiding-walk counts from a vertex");
    add_input(saw);
    saw->add_option("--vertex", opts.vertex, "origin vertex label (default: first)");
    saw->add_option("--depth", opts.walk_depth, "maximum walk length")->capture_default_str();

    CLI::App* oracle = app.add_subcommand("oracle", "independent reference computations");
    oracle->require_subcommand(1);
    oracle->fallthrough();
    CLI::App* o_transfer =
        oracle->add_subcommand("transfer1d", "transfer-matrix free energy, dimension 1");
    add_input(o_transfer);
    CLI::App* o_strip =
        oracle->add_subcommand("strip2d", "strip transfer band, dimension 2 (heuristic)");
    add_input(o_strip);
    o_strip->add_option("--width", opts.strip_width, "strip width in blocked cells")
        ->capture_default_str();
    CLI::App* o_power = oracle->add_subcommand("power", "dominant eigenvalue of a matrix");
    add_input(o_power);
    CLI::App* o_brute =
        oracle->add_subcommand("brute", "exhaustive partition function of a finite graph");
    add_input(o_brute);
    o_brute->add_option("--cap", opts.enum_cap, "enumeration vertex cap")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (partition->parsed()) return cmd_partition(opts);
        if (free_e->parsed()) return cmd_free_energy(opts);
        if (entropy_cmd->parsed()) return cmd_entropy(opts);
        if (pressure_cmd->parsed()) return cmd_pressure(opts);
        if (matching->parsed()) return cmd_matching(opts);
        if (spectral->parsed()) return cmd_spectral_radius(opts);
        if (regime->parsed()) return cmd_regime(opts);
        if (saw->parsed()) return cmd_saw_count(opts);
        if (oracle->parsed()) {
            if (o_transfer->parsed()) return cmd_oracle_transfer1d(opts);
            if (o_strip->parsed()) return cmd_oracle_strip2d(opts);
            if (o_power->parsed()) return cmd_oracle_power(opts);
            if (o_brute->parsed()) return cmd_oracle_brute(opts);
        }
        throw InvalidInput("no command selected");
    } catch (const Error& e) {
        json j;
        j["error"]["kind"] = to_string(e.kind());
        j["error"]["message"] = e.what();
        try {
            emit(j, opts);
        } catch (...) {
            std::cout << dump_json(j);
        }
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        json j;
        j["error"]["kind"] = "InternalError";
        j["error"]["message"] = e.what();
        std::cout << dump_json(j);
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
