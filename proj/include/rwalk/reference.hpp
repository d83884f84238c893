#pragma once

// Serial reference implementations of the OpenMP kernels. Tests compare these
// against the parallel paths (bit-identical results are required); the bench
// tool compares their timings.

#include "rwalk/matrix.hpp"

namespace rwalk::reference {

inline RowStochasticMatrix levy_matrix(const Graph& g, double p_d, int r,
                                       bool include_self = false) {
    return rwalk::levy_matrix(g, p_d, r, include_self, /*parallel=*/false);
}

inline Distribution stationary(const RowStochasticMatrix& p, double tol = 1e-12,
                               std::uint64_t max_iter = 1000000) {
    return rwalk::stationary(p, tol, max_iter, /*parallel=*/false);
}

inline int mixing_time(const RowStochasticMatrix& p, double eps = 0.25, int t_max = 100000) {
    return rwalk::mixing_time(p, eps, t_max, /*parallel=*/false);
}

}  // namespace rwalk::reference
