#include "rwalk/sgd.hpp"

#include <cmath>
#include <ostream>

#include "rwalk/error.hpp"
#include "rwalk/format.hpp"

namespace rwalk {

std::string to_string(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::UniformMh: return "uniform-mh";
        case SamplerKind::IsMh: return "is-mh";
        case SamplerKind::Mhlj: return "mhlj";
    }
    return "?";
}

SamplerKind sampler_from_string(const std::string& s) {
    if (s == "uniform-mh") return SamplerKind::UniformMh;
    if (s == "is-mh") return SamplerKind::IsMh;
    if (s == "mhlj") return SamplerKind::Mhlj;
    throw ConfigError("unknown sampler_kind: " + s);
}

namespace {

double window_mean(const std::vector<TraceRecord>& records, double window,
                   double TraceRecord::* field) {
    const std::size_t size = records.size();
    std::size_t first = static_cast<std::size_t>(std::floor((1.0 - window) * size));
    if (first >= size) first = size - 1;
    double sum = 0.0;
    for (std::size_t i = first; i < size; ++i) sum += records[i].*field;
    return sum / static_cast<double>(size - first);
}

}  // namespace

double Trace::plateau_mse(double window) const { return window_mean(records, window, &TraceRecord::mse); }
double Trace::plateau_dist_sq(double window) const {
    return window_mean(records, window, &TraceRecord::dist_sq);
}

Trace run(const Dataset& data, const Graph& g, const GroundTruth& truth, const RunConfig& config) {
    if (data.size() != g.n) throw DimensionMismatch("dataset/graph node count mismatch");
    if (config.gamma < 0.0) throw InvalidParameter("gamma must be nonnegative");
    if (config.total_updates < 1) throw InvalidParameter("total_updates must be >= 1");
    const std::uint64_t T = config.total_updates;
    const std::uint64_t log_every =
        config.log_every > 0 ? config.log_every : std::max<std::uint64_t>(1, T / 2000);

    const bool weighted = config.sampler != SamplerKind::UniformMh;
    const RowStochasticMatrix kernel = weighted ? mh_importance(g, data.lipschitz_vector())
                                                : mh_uniform(g);

    Trace trace;
    trace.total_updates = T;
    trace.log_every = log_every;
    trace.gamma = config.gamma;
    trace.sampler = config.sampler;
    trace.heavy_threshold = config.heavy_factor * data.l_bar;
    trace.visit_counts.assign(g.n, 0);
    trace.run_counts.assign(g.n, 0);
    trace.records.reserve(static_cast<std::size_t>(T / log_every) + 2);

    std::vector<char> heavy(g.n, 0);
    for (int v = 0; v < g.n; ++v) heavy[v] = data.nodes[v].lipschitz > trace.heavy_threshold;

    WalkerState walker(0, config.seed);
    walker.node = static_cast<int>(walker.rng.below(static_cast<std::uint64_t>(g.n)));

    std::vector<double> x(data.d, 0.0);

    int run_node = -1;
    std::uint64_t run_len = 0;
    auto flush_run = [&] {
        if (run_len == 0) return;
        trace.run_counts[run_node] += 1;
        trace.max_dwell = std::max(trace.max_dwell, run_len);
        auto& hist = heavy[run_node] ? trace.heavy_dwell_hist : trace.light_dwell_hist;
        hist[run_len] += 1;
    };

    for (std::uint64_t t = 0; t < T; ++t) {
        const int v = walker.node;
        const double weight = weighted ? data.l_bar / data.nodes[v].lipschitz : 1.0;
        local_grad_into(data.nodes[v], x, -config.gamma * weight, x);
        for (double c : x)
            if (!std::isfinite(c)) throw DivergenceError(t + 1);
        walker.update_count += 1;

        trace.visit_counts[v] += 1;
        if (v == run_node) {
            run_len += 1;
        } else {
            flush_run();
            run_node = v;
            run_len = 1;
        }

        const std::uint64_t done = t + 1;
        if (done % log_every == 0 || done == T) {
            const double mse = global_mse(data, x);
            if (!std::isfinite(mse)) throw DivergenceError(done);
            double dist = 0.0;
            for (int j = 0; j < data.d; ++j) {
                const double diff = x[j] - truth.x_star[j];
                dist += diff * diff;
            }
            trace.records.push_back({done, v, mse, dist, walker.comm_count});
        }

        if (config.sampler == SamplerKind::Mhlj)
            step_mhlj(walker, g, kernel, config.jump);
        else
            step_mh(walker, kernel);
    }
    flush_run();

    trace.final_x = std::move(x);
    trace.comm_count = walker.comm_count;
    trace.visit_count = walker.visit_count;
    return trace;
}

StepCap theoretical_step_cap(double l_bar, double mu, double total_updates, double tau_mix,
                             double sigma_star_sq, double dist0_sq) {
    if (!(l_bar > 0.0 && mu > 0.0 && total_updates > 0.0 && tau_mix > 0.0 &&
          sigma_star_sq > 0.0 && dist0_sq > 0.0))
        throw InvalidParameter("theoretical_step_cap requires positive inputs");
    StepCap out;
    const double first = 1.0 / l_bar;
    const double arg = total_updates * dist0_sq * mu * mu / (tau_mix * sigma_star_sq * l_bar);
    if (arg <= 1.0) {
        out.cap = first;
        out.log_branch_vacuous = true;
        return out;
    }
    const double second = std::log(arg) / (total_updates * mu);
    out.cap = std::min(first, second);
    return out;
}

double error_gap_estimate(double p_j, double norm1diff) {
    return p_j * p_j * norm1diff * norm1diff;
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
    out << "# rwalk-trace v1\n";
    out << "# sampler=" << to_string(trace.sampler) << " gamma=" << fmt17(trace.gamma)
        << " T=" << trace.total_updates << " log_every=" << trace.log_every << "\n";
    out << "iter,node,mse,dist_sq,comm_count\n";
    for (const auto& rec : trace.records)
        out << rec.iter << "," << rec.node << "," << fmt17(rec.mse) << "," << fmt17(rec.dist_sq)
            << "," << rec.comm_count << "\n";
}

}  // namespace rwalk
