#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rwalk/graph.hpp"
#include "rwalk/matrix.hpp"
#include "rwalk/model.hpp"
#include "rwalk/walker.hpp"

namespace rwalk {

enum class SamplerKind { UniformMh, IsMh, Mhlj };

std::string to_string(SamplerKind kind);
SamplerKind sampler_from_string(const std::string& s);

struct RunConfig {
    double gamma = 0.0;
    std::uint64_t total_updates = 0;  // T
    SamplerKind sampler = SamplerKind::UniformMh;
    JumpParams jump;                  // used by mhlj only
    std::uint64_t log_every = 0;      // 0 -> max(1, T/2000)
    std::uint64_t seed = 0;
    double heavy_factor = 10.0;       // node is "heavy" when L_v > factor * L_bar
};

struct TraceRecord {
    std::uint64_t iter;   // number of updates performed, 1..T
    int node;             // node that performed update `iter`
    double mse;
    double dist_sq;       // |x - x*|^2
    std::uint64_t comm_count;

    bool operator==(const TraceRecord&) const = default;
};

// Per-update statistics are streamed during the run so they stay exact even
// when records are decimated: visit_counts[v] = updates performed at v,
// run_counts[v] = number of maximal consecutive-update runs at v, and the
// run-length histograms split by the heavy/light classification made at run
// time.
struct Trace {
    std::vector<TraceRecord> records;
    std::vector<double> final_x;
    std::vector<std::uint64_t> visit_counts;
    std::vector<std::uint64_t> run_counts;
    std::map<std::uint64_t, std::uint64_t> heavy_dwell_hist;
    std::map<std::uint64_t, std::uint64_t> light_dwell_hist;
    std::uint64_t max_dwell = 0;
    std::uint64_t comm_count = 0;
    std::uint64_t visit_count = 0;
    std::uint64_t total_updates = 0;
    std::uint64_t log_every = 1;
    double gamma = 0.0;
    SamplerKind sampler = SamplerKind::UniformMh;
    double heavy_threshold = 0.0;

    double final_mse() const { return records.back().mse; }
    double final_dist_sq() const { return records.back().dist_sq; }
    // Arithmetic mean over the final `window` fraction of logged records.
    double plateau_mse(double window = 0.1) const;
    double plateau_dist_sq(double window = 0.1) const;
};

// Runs Algorithm-1-style random-walk SGD from x0 = 0 and a uniform seeded
// start node. uniform-mh uses the unweighted update on the mh_uniform chain;
// is-mh and mhlj use the L_bar/L_v weighted update on the mh_importance
// chain, mhlj additionally makes Levy jumps.
Trace run(const Dataset& data, const Graph& g, const GroundTruth& truth, const RunConfig& config);

struct StepCap {
    double cap = 0.0;
    bool log_branch_vacuous = false;  // log argument <= 1; cap fell back to 1/l_bar
};

// min{ 1/l_bar, (1/(T mu)) ln(T dist0_sq mu^2 / (tau_mix sigma_star_sq l_bar)) }
StepCap theoretical_step_cap(double l_bar, double mu, double total_updates, double tau_mix,
                             double sigma_star_sq, double dist0_sq);

// p_j^2 * norm1diff^2 (the constant-free error-gap term).
double error_gap_estimate(double p_j, double norm1diff);

// CSV: "# rwalk-trace v1" + config echo comments, then
// "iter,node,mse,dist_sq,comm_count"; the final row is always t = T.
void write_trace_csv(const Trace& trace, std::ostream& out);

}  // namespace rwalk
