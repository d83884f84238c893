#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rwalk/graph.hpp"

namespace rwalk {

// Sparse row-stochastic transition matrix. Rows hold (column, probability)
// entries sorted by column. `support_hops` records the closure the support
// must live in: entries may connect i to j only if j is reachable from i in
// at most support_hops edges (the diagonal is always allowed).
struct RowStochasticMatrix {
    struct Entry {
        int col;
        double p;
        bool operator==(const Entry&) const = default;
    };

    int n = 0;
    std::vector<std::vector<Entry>> rows;
    std::string kind;
    int support_hops = 1;

    double at(int i, int j) const;  // 0 if not stored
    bool operator==(const RowStochasticMatrix& other) const {
        return n == other.n && rows == other.rows;
    }
};

struct Distribution {
    std::vector<double> weights;

    int size() const { return static_cast<int>(weights.size()); }
    double operator[](int i) const { return weights[i]; }
};

Distribution make_distribution(std::vector<double> weights);
Distribution uniform_distribution(int n);
// pi_IS: node weights proportional to the gradient Lipschitz constants.
Distribution importance_distribution(const std::vector<double>& lipschitz);

// Row sums within 1e-12 of one, entries in [0,1], support inside the declared
// hop closure of g. Throws on violation.
void validate_matrix(const RowStochasticMatrix& m, const Graph& g);

// --- kernel builders -------------------------------------------------------

// P(v,u) = 1/deg(v) on edges, zero diagonal.
RowStochasticMatrix simple_rw(const Graph& g);

// Metropolis-Hastings with uniform target:
// P(v,u) = (1/deg(v)) min{1, deg(v)/deg(u)} off-diagonal, residual diagonal.
RowStochasticMatrix mh_uniform(const Graph& g);

// Metropolis-Hastings for the importance distribution:
// P(i,j) = (1/deg(i)) min{1, deg(i) L_j / (deg(j) L_i)} off-diagonal.
RowStochasticMatrix mh_importance(const Graph& g, const std::vector<double>& lipschitz);

// General MH with proposal Q = simple_rw and strictly positive target pi.
RowStochasticMatrix mh_target(const Graph& g, const Distribution& pi);

// Truncated-geometric mixture of row-normalized adjacency powers:
//   sum_{i=1..r} [p_d (1-p_d)^{i-1} / (1-(1-p_d)^r)] diag(A^i 1)^{-1} A^i
// Walk counts are exact 64-bit integers (overflow checked). Rows are
// independent per source node; the parallel path is bit-identical to the
// serial one.
RowStochasticMatrix levy_matrix(const Graph& g, double p_d, int r, bool include_self = false,
                                bool parallel = true);

// Convex combination (1-p_j)*a + p_j*b, entrywise.
RowStochasticMatrix mix(const RowStochasticMatrix& a, const RowStochasticMatrix& b, double p_j);

// --- chain diagnostics ------------------------------------------------------

// Left fixed point by power iteration from the uniform start; stops when the
// TV distance between successive iterates drops below tol.
Distribution stationary(const RowStochasticMatrix& p, double tol = 1e-12,
                        std::uint64_t max_iter = 1000000, bool parallel = true);

double tv_distance(const Distribution& a, const Distribution& b);

// Smallest t <= t_max with max_v TV(P^t(v,.), pi) <= eps (default eps 1/4).
int mixing_time(const RowStochasticMatrix& p, double eps = 0.25, int t_max = 100000,
                bool parallel = true);

// max over stored pairs of |pi_i p_ij - pi_j p_ji|.
double detailed_balance_residual(const RowStochasticMatrix& p, const Distribution& pi);

// Induced norm on row vectors: max_i sum_j |a_ij - b_ij|.
double one_norm_diff(const RowStochasticMatrix& a, const RowStochasticMatrix& b);

// Sparse triplet text "i j p" with a "# n=<n> kind=<tag>" header.
void save_matrix(const RowStochasticMatrix& m, std::ostream& out);
void save_distribution(const Distribution& d, const std::string& tag, std::ostream& out);

}  // namespace rwalk
