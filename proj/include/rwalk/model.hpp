#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace rwalk {

// One data point (a, y) with local squared loss f(x) = (y - x.a)^2 and
// gradient Lipschitz constant L = 2|a|^2.
struct NodeData {
    std::vector<double> a;
    double y = 0.0;
    double lipschitz = 0.0;
};

struct DataParams {
    int n = 0;
    int d = 0;
    double sigma_l_sq = 1.0;
    double sigma_h_sq = 1.0;
    double p_high = 0.0;
    int min_heavy = 0;
    std::uint64_t seed = 0;
    bool homogeneous = false;
};

struct Dataset {
    std::vector<NodeData> nodes;
    int d = 0;
    std::vector<double> x_true;
    double l_bar = 0.0;
    double l_min = 0.0;
    double l_max = 0.0;
    DataParams params;

    int size() const { return static_cast<int>(nodes.size()); }
    std::vector<double> lipschitz_vector() const;
};

struct GroundTruth {
    std::vector<double> x_star;
    double sigma_star_sq = 0.0;  // max_v |grad f_v(x*)|^2
    double mse_star = 0.0;
};

Dataset make_dataset(std::vector<NodeData> nodes, std::vector<double> x_true, DataParams params);

// x_true ~ N(0, I_d) once, then per node: variance class ~ Bernoulli(p_high),
// features ~ N(0, sigma^2 I_d), noise ~ N(0,1). If fewer than min_heavy heavy
// classes were drawn the deficit is filled at positions chosen by a derived
// seed before any features are drawn, so the stream stays reproducible.
Dataset generate_heterogeneous(int n, int d, double sigma_l_sq, double sigma_h_sq, double p_high,
                               std::uint64_t seed, int min_heavy = 0);

Dataset generate_homogeneous(int n, int d, double sigma_sq, std::uint64_t seed);

double local_loss(const NodeData& node, const std::vector<double>& x);
std::vector<double> local_grad(const NodeData& node, const std::vector<double>& x);
// grad accumulated into out (avoids allocation in hot loops)
void local_grad_into(const NodeData& node, const std::vector<double>& x, double weight,
                     std::vector<double>& out);

// Normal-equation solve via SPD factorization; throws RankDeficiency when the
// eigenvalue-based condition estimate exceeds 1e12.
GroundTruth solve_least_squares(const Dataset& data);

double global_mse(const Dataset& data, const std::vector<double>& x);

// Text format: "# rwalk-dataset v1 ..." header, "# x_true ..." line, then one
// node per line "v y a_1 ... a_d" (17 significant digits).
void save_dataset(const Dataset& data, std::ostream& out);
Dataset load_dataset(std::istream& in);

}  // namespace rwalk
