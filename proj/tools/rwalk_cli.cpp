// Experiment harness for random-walk SGD on graphs.
//
//   rwalk run      --config cfg.json [--out dir]
//   rwalk matrix   --config cfg.json [--out dir]
//   rwalk diagnose --config cfg.json [--out dir]
//   rwalk sweep    --config cfg.json --sweep p_j=0.4,0.2,0.1 [--replicas k] [--out dir]
//
// RWALK_THREADS caps the sweep worker pool. Exit codes: 0 ok, 2 config error,
// 3 divergence, 4 other runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rwalk/error.hpp"
#include "rwalk/harness.hpp"

namespace fs = std::filesystem;
using namespace rwalk;

namespace {

int env_workers() {
    const char* raw = std::getenv("RWALK_THREADS");
    if (!raw) return 0;
    const int n = std::atoi(raw);
    return n > 0 ? n : 0;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void parse_sweep_spec(const std::string& spec, std::string& param, std::vector<double>& values) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("sweep spec must be name=v1,v2,...");
    param = spec.substr(0, eq);
    std::string rest = spec.substr(eq + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string tok = rest.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (tok.empty()) throw ConfigError("empty value in sweep spec");
        values.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.empty()) throw ConfigError("sweep value list is empty");
}

void write_config_echo(const ExperimentConfig& cfg, const fs::path& out_dir) {
    auto f = open_out(out_dir / "config.json");
    f << cfg.echo << "\n";
}

int cmd_run(const ExperimentConfig& cfg, const fs::path& out_dir) {
    const RunOutput out = run_experiment(cfg);
    fs::create_directories(out_dir);
    write_config_echo(cfg, out_dir);
    {
        auto f = open_out(out_dir / cfg.output.csv);
        f << "# config: " << cfg.echo << "\n";
        write_trace_csv(out.trace, f);
    }
    {
        auto f = open_out(out_dir / "summary.txt");
        write_summary(out.summary, cfg.echo, f);
    }
    write_summary(out.summary, cfg.echo, std::cout);
    return 0;
}

int cmd_matrix(const ExperimentConfig& cfg, const fs::path& out_dir) {
    Graph g = build_graph(cfg.graph);
    DataParams dp = cfg.data;
    dp.n = g.n;
    Dataset data = build_dataset(dp);
    const auto lipschitz = data.lipschitz_vector();
    const auto p_is = mh_importance(g, lipschitz);
    const auto p_uni = mh_uniform(g);
    const auto p_levy = levy_matrix(g, cfg.algo.p_d, cfg.algo.r, cfg.algo.include_self_in_jumps);
    const auto p_mix = mix(p_is, p_levy, cfg.algo.p_j);

    fs::create_directories(out_dir);
    write_config_echo(cfg, out_dir);
    {
        auto f = open_out(out_dir / "graph.txt");
        save_graph(g, f);
    }
    {
        auto f = open_out(out_dir / "dataset.txt");
        save_dataset(data, f);
    }
    for (const auto& [name, m] :
         {std::pair{"matrix_mh_uniform.txt", &p_uni}, {"matrix_mh_importance.txt", &p_is},
          {"matrix_levy.txt", &p_levy}, {"matrix_mix.txt", &p_mix}}) {
        auto f = open_out(out_dir / name);
        save_matrix(*m, f);
    }
    {
        auto f = open_out(out_dir / "stationary_pi_is.txt");
        save_distribution(importance_distribution(lipschitz), "pi-is", f);
    }
    {
        auto f = open_out(out_dir / "stationary_mix.txt");
        save_distribution(stationary(p_mix, 1e-13, 5000000), "stationary-mix", f);
    }
    std::cout << "wrote matrix and stationary dumps to " << out_dir.string() << "\n";
    return 0;
}

int cmd_diagnose(const ExperimentConfig& cfg, const fs::path& out_dir) {
    const DiagnoseReport rep = diagnose(cfg);
    fs::create_directories(out_dir);
    write_config_echo(cfg, out_dir);
    {
        auto f = open_out(out_dir / "diagnose.txt");
        write_diagnose_report(rep, cfg.echo, f);
    }
    write_diagnose_report(rep, cfg.echo, std::cout);
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const fs::path& out_dir, const std::string& spec,
              int replicas) {
    std::string param;
    std::vector<double> values;
    parse_sweep_spec(spec, param, values);
    const auto rows = sweep(cfg, param, values, replicas, env_workers());
    fs::create_directories(out_dir);
    write_config_echo(cfg, out_dir);
    auto f = open_out(out_dir / "sweep.csv");
    write_sweep_csv(rows, cfg.echo, f);
    std::cout << "wrote " << rows.size() << " sweep rows to " << (out_dir / "sweep.csv").string()
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-walk SGD simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string sweep_spec;
    int replicas = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
    };
    auto* sub_run = app.add_subcommand("run", "single experiment: trace CSV + summary");
    add_common(sub_run);
    auto* sub_matrix = app.add_subcommand("matrix", "dump transition matrices and stationaries");
    add_common(sub_matrix);
    auto* sub_diag = app.add_subcommand("diagnose", "chain-level diagnostics");
    add_common(sub_diag);
    auto* sub_sweep = app.add_subcommand("sweep", "parameter sweep with replicas");
    add_common(sub_sweep);
    sub_sweep->add_option("--sweep", sweep_spec, "name=v1,v2,...")->required();
    sub_sweep->add_option("--replicas", replicas, "replica count per value");

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = load_config(config_path);
        if (sub_run->parsed()) return cmd_run(cfg, out_dir);
        if (sub_matrix->parsed()) return cmd_matrix(cfg, out_dir);
        if (sub_diag->parsed()) return cmd_diagnose(cfg, out_dir);
        if (sub_sweep->parsed()) return cmd_sweep(cfg, out_dir, sweep_spec, replicas);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
