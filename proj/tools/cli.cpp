#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "socsim/config.hpp"
#include "socsim/csv.hpp"
#include "socsim/harness.hpp"
#include "socsim/spec_io.hpp"
#include "socsim/svg.hpp"

namespace {

using namespace socsim;

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void emit_outputs(const BatchResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_file(dir / "resolved_config.json", result.resolved_json);
    const auto paths = write_csv(result, dir);
    for (const auto& p : paths) std::cout << "wrote " << p.string() << '\n';
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool with_traces) {
    ExperimentConfig cfg = load_config(config_path);
    if (!cfg.sweep.empty()) {
        std::cerr << "config declares a sweep; use the `sweep` subcommand\n";
        return 1;
    }
    std::vector<ReplicationTrace> traces;
    const BatchResult result = run_batch(cfg, with_traces ? &traces : nullptr);
    emit_outputs(result, out_dir);
    if (with_traces) std::cout << "wrote " << write_traces(traces, out_dir).string() << '\n';
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
    ExperimentConfig cfg = load_config(config_path);
    for (auto& combo : sweep_combinations(cfg)) {
        attach_resolved_json(combo.config);
        const BatchResult result = run_batch(combo.config);
        emit_outputs(result, std::filesystem::path(out_dir) / combo.name);
    }
    return 0;
}

int cmd_env(const std::string& level_name, bool misrepresent, const std::string& out_path) {
    EnvironmentLevel level;
    if (level_name == "simplified") level = EnvironmentLevel::Simplified;
    else if (level_name == "advanced") level = EnvironmentLevel::Advanced;
    else if (level_name == "refined") level = EnvironmentLevel::RefinedRecommender;
    else {
        std::cerr << "unknown level: " << level_name << '\n';
        return 1;
    }
    EnvironmentSpec spec = build_level(level);
    if (misrepresent) spec = apply_misrepresentation(spec);
    write_file(out_path, env_to_json(spec).dump(2) + "\n");
    std::cout << "wrote " << out_path << '\n';
    return 0;
}

int cmd_validate(const std::string& config_path) {
    try {
        ExperimentConfig cfg = load_config(config_path);
        make_context(cfg); // environment-level checks included
    } catch (const ConfigError& e) {
        for (const auto& err : e.errors()) std::cerr << err << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    std::cout << "ok\n";
    return 0;
}

int cmd_plot(const std::string& kind_name, const std::string& csv, const std::string& svg) {
    ChartKind kind;
    if (kind_name == "agents_evolution") kind = ChartKind::AgentsEvolution;
    else if (kind_name == "recommender_q") kind = ChartKind::RecommenderQ;
    else {
        std::cerr << "unknown chart kind: " << kind_name << '\n';
        return 1;
    }
    render_chart(csv, kind, svg);
    std::cout << "wrote " << svg << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"socsim — dual-RL social-media usage simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, out_path, level = "simplified";
    std::string chart_kind, csv_in;
    bool misrepresent = false, with_traces = false;

    auto* run = app.add_subcommand("run", "run one seeded batch of replications");
    run->add_option("-c,--config", config_path, "experiment config JSON")->required();
    run->add_option("-o,--out", out_dir, "output directory")->required();
    run->add_flag("--replication-traces", with_traces, "also dump full per-replication traces");

    auto* sweep = app.add_subcommand("sweep", "run every combination of the config's sweep");
    sweep->add_option("-c,--config", config_path, "experiment config JSON")->required();
    sweep->add_option("-o,--out", out_dir, "output directory")->required();

    auto* env = app.add_subcommand("env", "dump a built-in environment spec as JSON");
    env->add_option("--level", level, "simplified|advanced|refined")->required();
    env->add_flag("--misrepresent", misrepresent, "apply the misrepresentation transform");
    env->add_option("-o,--out", out_path, "output file")->required();

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("-c,--config", config_path, "experiment config JSON")->required();

    auto* plot = app.add_subcommand("plot", "render a CSV as an SVG line chart");
    plot->add_option("--kind", chart_kind, "agents_evolution|recommender_q")->required();
    plot->add_option("-i,--in", csv_in, "input CSV")->required();
    plot->add_option("-o,--out", out_path, "output SVG")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, with_traces);
        if (sweep->parsed()) return cmd_sweep(config_path, out_dir);
        if (env->parsed()) return cmd_env(level, misrepresent, out_path);
        if (validate->parsed()) return cmd_validate(config_path);
        if (plot->parsed()) return cmd_plot(chart_kind, csv_in, out_path);
    } catch (const ConfigError& e) {
        for (const auto& err : e.errors()) std::cerr << err << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
