#include "rwalk/walker.hpp"

#include <cmath>

#include "rwalk/error.hpp"

namespace rwalk {

int sample_trunc_geom(double p_d, int r, Rng& rng) {
    if (!(p_d > 0.0 && p_d < 1.0)) throw InvalidParameter("p_d must be in (0,1)");
    if (r < 1) throw InvalidParameter("r must be >= 1");
    const double u = rng.uniform01();
    // CDF(k) = (1-(1-p)^k) / (1-(1-p)^r); invert at u
    const double denom = 1.0 - std::pow(1.0 - p_d, r);
    const int d = static_cast<int>(std::ceil(std::log1p(-u * denom) / std::log1p(-p_d)));
    return std::min(std::max(d, 1), r);
}

namespace {

int sample_row(const RowStochasticMatrix& p, int node, Rng& rng) {
    const auto& row = p.rows[node];
    const double u = rng.uniform01();
    double acc = 0.0;
    for (const auto& e : row) {
        acc += e.p;
        if (u < acc) return e.col;
    }
    return row.back().col;  // rounding guard
}

// one uniform hop; with include_self the node itself is an extra candidate
int uniform_hop(const Graph& g, int node, bool include_self, Rng& rng) {
    const int deg = g.degree(node);
    if (deg == 0) return node;  // nowhere to go
    const std::uint64_t k = rng.below(static_cast<std::uint64_t>(deg + (include_self ? 1 : 0)));
    return k == static_cast<std::uint64_t>(deg) ? node : g.adjacency[node][k];
}

}  // namespace

int step_mh(WalkerState& state, const RowStochasticMatrix& p) {
    const int next = sample_row(p, state.node, state.rng);
    state.visit_count += 1;
    if (next != state.node) state.comm_count += 1;
    state.node = next;
    return next;
}

int step_mhlj(WalkerState& state, const Graph& g, const RowStochasticMatrix& p_is,
              const JumpParams& params) {
    const bool scheduled_off = params.t_switch > 0 && state.update_count >= params.t_switch;
    const double p_j = scheduled_off ? 0.0 : params.p_j;
    // stream compatibility: no decision draw when jumps are impossible
    if (p_j <= 0.0) return step_mh(state, p_is);
    if (!state.rng.bernoulli(p_j)) return step_mh(state, p_is);

    int d = sample_trunc_geom(params.p_d, params.r, state.rng);
    if (params.compat_extra_hop) d += 1;  // literal "while d >= 0" loop
    for (int hop = 0; hop < d; ++hop) {
        const int next = uniform_hop(g, state.node, params.include_self_in_jumps, state.rng);
        state.visit_count += 1;
        if (next != state.node) state.comm_count += 1;
        state.node = next;
    }
    return state.node;
}

double expected_comm_bound(double p_j, double p_d) {
    if (!(p_d > 0.0 && p_d < 1.0)) throw InvalidParameter("p_d must be in (0,1)");
    if (!(p_j >= 0.0 && p_j <= 1.0)) throw InvalidParameter("p_j must be in [0,1]");
    return 1.0 + p_j * (1.0 / p_d - 1.0);
}

}  // namespace rwalk
