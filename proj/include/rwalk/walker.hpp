#pragma once

#include <cstdint>

#include "rwalk/graph.hpp"
#include "rwalk/matrix.hpp"
#include "rwalk/rng.hpp"

namespace rwalk {

struct JumpParams {
    double p_j = 0.0;           // jump probability in [0,1]
    double p_d = 0.5;           // geometric parameter in (0,1)
    int r = 1;                  // max jump length >= 1
    std::uint64_t t_switch = 0; // if > 0, p_j forced to 0 from that update on
    bool include_self_in_jumps = false;
    // The published pseudocode loops "while d >= 0", which executes d+1 hops;
    // the closed-form jump kernel mixes exactly d in 1..r. Default matches the
    // closed form; this flag reproduces the literal loop.
    bool compat_extra_hop = false;
};

// Exclusively owned by one execution thread. comm_count counts node-to-node
// transfers (an MH self-loop moves nothing and costs 0); visit_count counts
// raw transitions in the Remark-1 sense (every MH step is 1, a jump of
// length d is d).
struct WalkerState {
    int node = 0;
    Rng rng;
    std::uint64_t comm_count = 0;
    std::uint64_t visit_count = 0;
    std::uint64_t update_count = 0;

    WalkerState(int start, std::uint64_t seed) : node(start), rng(seed) {}
};

// Exact inverse-CDF sample from P(D=d) = p_d(1-p_d)^{d-1} / (1-(1-p_d)^r) on
// {1..r}; consumes one uniform.
int sample_trunc_geom(double p_d, int r, Rng& rng);

// One MH move: next node sampled from row p.rows[state.node]; consumes one
// uniform. Returns the new node.
int step_mh(WalkerState& state, const RowStochasticMatrix& p);

// One Algorithm-1 move. Draw order: jump decision, then jump length, then one
// uniform per hop (MH branch: single row draw). When the effective jump
// probability is exactly 0 no decision draw is consumed, so the stream
// coincides with step_mh.
int step_mhlj(WalkerState& state, const Graph& g, const RowStochasticMatrix& p_is,
              const JumpParams& params);

// Remark-1 bound on expected transitions per update: 1 + p_j (1/p_d - 1).
double expected_comm_bound(double p_j, double p_d);

}  // namespace rwalk
