#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rwalk/diagnostics.hpp"
#include "rwalk/format.hpp"
#include "rwalk/graph.hpp"
#include "rwalk/model.hpp"
#include "rwalk/sgd.hpp"

namespace rwalk {

// JSON experiment configuration; unknown fields are rejected.
struct GraphConfig {
    std::string type;  // ring | grid2d | erdos-renyi | watts-strogatz
    int n = 0;
    int rows = 0, cols = 0;
    int k = 0;
    double p = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
};

struct AlgoConfig {
    SamplerKind sampler = SamplerKind::UniformMh;
    bool auto_gamma = false;
    double gamma = 0.0;
    std::uint64_t total_updates = 0;
    double p_j = 0.0;
    double p_d = 0.5;
    int r = 1;
    std::uint64_t t_switch = 0;
    std::uint64_t seed = 0;
    bool include_self_in_jumps = false;
    std::optional<double> mu;  // Theorem-1 diagnostic input only
};

struct OutputConfig {
    std::string csv = "trace.csv";
    std::uint64_t log_every = 0;  // 0 -> max(1, T/2000)
};

struct ExperimentConfig {
    GraphConfig graph;
    DataParams data;
    AlgoConfig algo;
    OutputConfig output;
    std::string echo;  // compact JSON echo embedded in outputs
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

Graph build_graph(const GraphConfig& cfg);
Dataset build_dataset(const DataParams& cfg);

// Appendix step-size protocol: gamma in {1, 1/2, 1/4, ...}, largest value for
// which the uniform-mh probe run converges. "Converges" requires a finite,
// settled run: no divergence, bounded excursions (max logged mse <= 1e6 x
// initial), final-window mean <= initial mse, and final-window mean <= 2 x the
// trace minimum (rejects marginally stable step sizes whose mse keeps
// sloshing far above the level the run already reached).
double auto_grid_gamma(const Dataset& data, const Graph& g, const GroundTruth& truth,
                       std::uint64_t total_updates, std::uint64_t seed, int max_halvings = 30);

struct RunSummary {
    double gamma = 0.0;
    double final_mse = 0.0;
    double final_dist_sq = 0.0;
    double plateau_mse = 0.0;
    double plateau_dist_sq = 0.0;
    std::uint64_t comm_count = 0;
    std::uint64_t visit_count = 0;
    std::uint64_t total_updates = 0;
    double comm_per_update = 0.0;
    double visits_per_update = 0.0;
    double heavy_share = 0.0;
    std::uint64_t max_dwell = 0;
    double mean_heavy_dwell = 0.0;
    std::optional<double> error_gap = std::nullopt;  // mhlj only
};

struct RunOutput {
    Trace trace;
    RunSummary summary;
};

// One experiment end-to-end (graph, data, ground truth, optional auto gamma,
// run, summary). `seed_offset` shifts the algo seed; sweeps use it for
// replicas.
RunOutput run_experiment(const ExperimentConfig& cfg, std::uint64_t seed_offset = 0);

struct DiagnoseReport {
    int tau_mix_is = 0;
    int tau_mix_mix = 0;
    double residual_is = 0.0;
    double residual_mix = 0.0;
    double tv_mix_stationary_to_pi_is = 0.0;
    double norm1_is_levy = 0.0;
    double error_gap = 0.0;
    std::optional<StepCap> step_cap;
};

DiagnoseReport diagnose(const ExperimentConfig& cfg, double mixing_eps = 0.25,
                        int mixing_t_max = 200000);

struct SweepRow {
    std::string param;
    double value = 0.0;
    int replica = 0;
    std::uint64_t seed = 0;
    RunSummary summary;
};

// Cartesian product of sweep values x replica indices; replica i runs with
// algo.seed + i. Rows come back sorted by (value order, replica) regardless of
// worker count, and the computed numbers are identical for any worker count.
std::vector<SweepRow> sweep(const ExperimentConfig& cfg, const std::string& param,
                            const std::vector<double>& values, int replicas, int workers = 0);

void write_summary(const RunSummary& s, const std::string& echo, std::ostream& out);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& echo,
                     std::ostream& out);
void write_diagnose_report(const DiagnoseReport& r, const std::string& echo, std::ostream& out);

}  // namespace rwalk
