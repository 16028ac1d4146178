// shcps: generate, annotate, search and heal knowledge bases; run the
// benchmark sweeps.
//
// Exit codes: 0 success, 1 domain failure (including a non-compliant
// recovery), 2 usage or schema error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shcps/shcps.hpp"

using namespace shcps;

namespace {

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

int exit_code_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::SchemaError:
    case ErrorCode::CycleDetected:
    case ErrorCode::KindViolation:
    case ErrorCode::DuplicateId:
    case ErrorCode::DuplicateEdge:
    case ErrorCode::InvalidModel:
    case ErrorCode::InvalidTheta:
    case ErrorCode::InvalidSpec:
    case ErrorCode::ConfigError:
    case ErrorCode::UnknownProperty:
    case ErrorCode::InvalidValue: return kUsageError;
    default: return kDomainError;
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
    out << text;
}

template <class Writer>
void write_csv(const std::string& path, Writer&& w) {
    if (path.empty() || path == "-") {
        w(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
    w(out);
}

LeafProperties leaf_preset(const std::string& name) {
    if (name == "lidar") return lidar_properties();
    if (name == "ultrasonic") return ultrasonic_properties();
    if (name == "camera") return camera_properties();
    if (name == "bounds") return sensor_bounds();
    throw Error(ErrorCode::ConfigError, "unknown leaf preset '" + name + "'");
}

std::vector<Strategy> parse_strategies(const std::vector<std::string>& names) {
    std::vector<Strategy> out;
    for (const auto& n : names) out.push_back(Strategy::parse(n));
    return out;
}

struct Options {
    bool json = false;

    // generate
    std::string shape = "balanced";
    unsigned branching = 2;
    unsigned depth = 1;
    std::uint64_t seed = 1;
    std::string leaf;

    // shared I/O
    std::string in;
    std::string out;

    // guarantee / search / heal
    std::optional<double> theta;
    std::string mode = "inherit";
    std::string strategy = "dfs";
    bool guarantee = false;
    std::string failed;

    // bench
    std::string bench_kind;
    unsigned trials = 100;
    unsigned warmup = 3;
    std::string aggregate_out;
    std::vector<std::string> models;
    std::vector<std::string> strategies;
    std::vector<double> thetas;
    std::vector<unsigned> depths;
    std::string model = "rover";
};

int cmd_generate(const Options& o) {
    KnowledgeBase kb;
    if (o.shape == "rover") {
        kb = fixture_rover();
    } else if (o.shape == "drivetrain") {
        kb = fixture_drivetrain();
    } else {
        GeneratorSpec spec;
        spec.shape = o.shape == "random" ? TreeShape::Random : TreeShape::Balanced;
        spec.branching = o.branching;
        spec.depth = o.depth;
        spec.seed = o.seed;
        const std::string leaf = o.leaf.empty() ? (o.shape == "random" ? "bounds" : "lidar") : o.leaf;
        spec.leaf_properties = leaf_preset(leaf);
        kb = generate(spec);
    }
    write_text(o.out, dump_kb(kb));
    return 0;
}

int cmd_guarantee(const Options& o) {
    KnowledgeBase kb = load(o.in);
    kb.clear_guarantees();
    const auto mode = o.mode == "decompose" ? GuaranteeMode::Decompose : GuaranteeMode::Inherit;
    const auto report = annotate_all(kb, Theta(*o.theta), mode);
    write_text(o.out, dump_kb(kb));
    if (!o.out.empty() && o.out != "-") {
        if (o.json) {
            nlohmann::json j{{"theta", *o.theta},
                             {"mode", std::string(to_string(mode))},
                             {"nodes_computed", report.nodes_computed},
                             {"nodes_touched", report.nodes_touched},
                             {"edges_traversed", report.edges_traversed},
                             {"no_source", report.no_source}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "annotated " << report.nodes_computed << " of " << kb.node_count() << " nodes ("
                      << to_string(mode) << ", theta " << format_number(*o.theta) << ")\n";
            for (const auto& id : report.no_source) std::cout << "  no source: " << id << '\n';
        }
    }
    return 0;
}

std::optional<Requirement> requirement_from(KnowledgeBase& kb, const NodeId& failed, std::optional<double> theta) {
    if (theta) {
        kb.clear_guarantees();
        annotate_all(kb, Theta(*theta), GuaranteeMode::Inherit);
    }
    return requirement_for(kb, failed);
}

int cmd_search(const Options& o) {
    KnowledgeBase kb = load(o.in);
    Strategy s = Strategy::parse(o.strategy);
    s.guarded = s.guarded || o.guarantee;
    const NodeId failed = o.failed.empty() ? default_failed(kb) : o.failed;
    kb.node(failed);
    std::optional<Requirement> req;
    if (s.guarded) req = requirement_from(kb, failed, o.theta);
    const SearchOutcome outcome = SearchContext(kb).search(s, failed, req);
    const std::optional<double> theta = s.guarded ? o.theta : std::nullopt;
    if (o.json) std::cout << outcome_to_json(outcome, theta).dump(2) << '\n';
    else print_outcome(std::cout, outcome, theta);
    return 0;
}

int cmd_heal(const Options& o) {
    KnowledgeBase kb = load(o.in);
    Healer healer(std::move(kb), Theta(*o.theta));
    const NodeId failed = o.failed.empty() ? default_failed(healer.knowledge_base()) : o.failed;
    const FaultEvent fault = healer.inject(failed);
    const RecoveryReport report = healer.recover(fault, Strategy::parse(o.strategy));
    if (o.json) std::cout << report_to_json(report).dump(2) << '\n';
    else print_report(std::cout, report);
    if (!o.out.empty()) save(healer.knowledge_base(), o.out);
    return report.compliant ? 0 : kDomainError;
}

int cmd_bench(const Options& o) {
    if (o.bench_kind == "table2") {
        BenchConfig c;
        if (!o.models.empty()) c.models = o.models;
        if (!o.strategies.empty()) c.strategies = parse_strategies(o.strategies);
        if (!o.thetas.empty()) c.thetas = o.thetas;
        c.trials = o.trials;
        c.warmup = o.warmup;
        c.seed = o.seed;
        const auto records = run_table2(c);
        write_csv(o.out, [&](std::ostream& os) { write_records_csv(os, records); });
        if (!o.aggregate_out.empty()) {
            write_csv(o.aggregate_out, [&](std::ostream& os) { write_aggregate_csv(os, aggregate(records)); });
        }
    } else if (o.bench_kind == "theta-sweep") {
        Strategy s = o.strategies.empty() ? Strategy{Algorithm::Dfs, true} : Strategy::parse(o.strategies.front());
        const auto rows = run_theta_sweep(o.model, s, o.thetas.empty() ? theta_grid() : o.thetas, o.seed);
        write_csv(o.out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
    } else if (o.bench_kind == "depth-sweep") {
        DepthSweepConfig c;
        c.branching = o.branching;
        if (!o.depths.empty()) c.depths = o.depths;
        if (!o.strategies.empty()) c.strategies = parse_strategies(o.strategies);
        if (!o.thetas.empty()) c.thetas = o.thetas;
        c.trials = o.trials;
        c.warmup = o.warmup;
        c.seed = o.seed;
        const auto records = run_depth_sweep(c);
        write_csv(o.out, [&](std::ostream& os) { write_records_csv(os, records); });
        if (!o.aggregate_out.empty()) {
            write_csv(o.aggregate_out, [&](std::ostream& os) { write_aggregate_csv(os, aggregate(records)); });
        }
    } else {
        std::vector<unsigned> depths = o.depths;
        if (depths.empty()) depths = {1, 2, 3, 4, 5, 6, 7, 8};
        const auto rows = run_decay(o.branching, depths, o.thetas.empty() ? std::vector<double>{0.5, 0.9, 0.99} : o.thetas,
                                    o.leaf.empty() ? lidar_properties() : std::get<PropertyVector>(leaf_preset(o.leaf)));
        write_csv(o.out, [&](std::ostream& os) { write_decay_csv(os, rows); });
    }
    return 0;
}

int cmd_validate(const Options& o) {
    const KnowledgeBase kb = load(o.in);
    if (o.json) {
        std::cout << nlohmann::json{{"valid", true}, {"nodes", kb.node_count()}, {"edges", kb.edge_count()}}.dump(2)
                  << '\n';
    } else {
        std::cout << "ok: " << kb.node_count() << " nodes, " << kb.edge_count() << " edges\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structural self-healing over AND/OR knowledge bases"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json", o.json, "Machine-readable output");

    auto theta_check = CLI::Range(0.0, 1.0);

    auto* gen = app.add_subcommand("generate", "Write a generated knowledge base");
    gen->add_option("--shape", o.shape, "balanced | random | rover | drivetrain")
        ->check(CLI::IsMember({"balanced", "random", "rover", "drivetrain"}));
    gen->add_option("--branching", o.branching, "Children per internal node (random: maximum)");
    gen->add_option("--depth", o.depth, "Levels below the root");
    gen->add_option("--seed", o.seed, "Seed for random trees");
    gen->add_option("--leaf", o.leaf, "Leaf properties: lidar | ultrasonic | camera | bounds")
        ->check(CLI::IsMember({"lidar", "ultrasonic", "camera", "bounds"}));
    gen->add_option("--out", o.out, "Output file (default stdout)");

    auto* gua = app.add_subcommand("guarantee", "Annotate every node with its implicit guarantee");
    gua->add_option("--theta", o.theta, "Per-hop attenuation in (0,1]")->required()->check(theta_check);
    gua->add_option("--mode", o.mode, "inherit | decompose")->check(CLI::IsMember({"inherit", "decompose"}));
    gua->add_option("--in", o.in, "Knowledge-base file")->required();
    gua->add_option("--out", o.out, "Output file (default stdout)");

    auto* sea = app.add_subcommand("search", "Search substitutions for a failed node");
    sea->add_option("--strategy", o.strategy, "dfs | orr | shpgsa, optionally suffixed with g");
    sea->add_flag("--guarantee", o.guarantee, "Constrain by the failed node's guarantee");
    sea->add_option("--theta", o.theta, "Re-annotate under this theta before a guarded search")->check(theta_check);
    sea->add_option("--failed", o.failed, "Failed node (default: first root)");
    sea->add_option("--in", o.in, "Knowledge-base file")->required();

    auto* hea = app.add_subcommand("heal", "Inject a fault and recover from it");
    hea->add_option("--strategy", o.strategy, "dfs | orr | shpgsa, optionally suffixed with g");
    hea->add_option("--theta", o.theta, "Per-hop attenuation in (0,1]")->required()->check(theta_check);
    hea->add_option("--failed", o.failed, "Node to fail (default: first root)");
    hea->add_option("--in", o.in, "Knowledge-base file")->required();
    hea->add_option("--out", o.out, "Write the healed knowledge base here");

    auto* ben = app.add_subcommand("bench", "Run an experiment sweep and write CSV");
    ben->add_option("kind", o.bench_kind, "table2 | theta-sweep | depth-sweep | decay")
        ->required()
        ->check(CLI::IsMember({"table2", "theta-sweep", "depth-sweep", "decay"}));
    ben->add_option("--trials", o.trials, "Timed trials per cell")->check(CLI::PositiveNumber);
    ben->add_option("--warmup", o.warmup, "Discarded warmup runs per cell");
    ben->add_option("--seed", o.seed, "Base seed");
    ben->add_option("--out", o.out, "Records CSV (default stdout)");
    ben->add_option("--aggregate", o.aggregate_out, "Aggregate CSV (table2, depth-sweep)");
    ben->add_option("--models", o.models, "table2 models: rover drivetrain balanced random-d<D>");
    ben->add_option("--model", o.model, "theta-sweep model");
    ben->add_option("--strategies", o.strategies, "Strategies to run");
    ben->add_option("--thetas", o.thetas, "Theta values")->check(theta_check);
    ben->add_option("--depths", o.depths, "Tree depths (depth-sweep, decay)");
    ben->add_option("--branching", o.branching, "Branching factor (depth-sweep, decay)");
    ben->add_option("--leaf", o.leaf, "decay leaf properties: lidar | ultrasonic | camera")
        ->check(CLI::IsMember({"lidar", "ultrasonic", "camera"}));

    auto* val = app.add_subcommand("validate", "Schema and structural check of a knowledge-base file");
    val->add_option("--in", o.in, "Knowledge-base file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsageError;
    }

    try {
        if (*gen) return cmd_generate(o);
        if (*gua) return cmd_guarantee(o);
        if (*sea) return cmd_search(o);
        if (*hea) return cmd_heal(o);
        if (*ben) {
            if (o.bench_kind == "decay" && !ben->count("--branching")) o.branching = 3;
            return cmd_bench(o);
        }
        return cmd_validate(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomainError;
    }
}
