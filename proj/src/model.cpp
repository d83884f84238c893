#include "rwalk/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "rwalk/error.hpp"
#include "rwalk/format.hpp"
#include "rwalk/rng.hpp"

namespace rwalk {

namespace {

double squared_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

void compute_aggregates(Dataset& data) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& node : data.nodes) {
        sum += node.lipschitz;
        lo = std::min(lo, node.lipschitz);
        hi = std::max(hi, node.lipschitz);
    }
    data.l_bar = sum / data.nodes.size();
    data.l_min = lo;
    data.l_max = hi;
}

}  // namespace

std::vector<double> Dataset::lipschitz_vector() const {
    std::vector<double> out;
    out.reserve(nodes.size());
    for (const auto& node : nodes) out.push_back(node.lipschitz);
    return out;
}

Dataset make_dataset(std::vector<NodeData> nodes, std::vector<double> x_true, DataParams params) {
    if (nodes.empty()) throw InvalidParameter("dataset must have at least one node");
    Dataset data;
    data.d = static_cast<int>(nodes.front().a.size());
    for (auto& node : nodes) {
        if (static_cast<int>(node.a.size()) != data.d)
            throw DimensionMismatch("inconsistent feature dimension");
        node.lipschitz = 2.0 * squared_norm(node.a);
    }
    data.nodes = std::move(nodes);
    data.x_true = std::move(x_true);
    data.params = params;
    data.params.n = data.size();
    data.params.d = data.d;
    compute_aggregates(data);
    return data;
}

Dataset generate_heterogeneous(int n, int d, double sigma_l_sq, double sigma_h_sq, double p_high,
                               std::uint64_t seed, int min_heavy) {
    if (n < 1 || d < 1) throw InvalidParameter("n and d must be positive");
    if (!(sigma_l_sq > 0.0) || !(sigma_h_sq > 0.0))
        throw InvalidParameter("variances must be positive");
    if (!(p_high >= 0.0 && p_high <= 1.0)) throw InvalidParameter("p_high must be in [0,1]");
    if (min_heavy < 0 || min_heavy > n) throw InvalidParameter("min_heavy must be in [0,n]");

    Rng rng(seed);
    std::vector<double> x_true(d);
    for (double& v : x_true) v = rng.normal();

    std::vector<char> heavy(n, 0);
    int drawn = 0;
    for (int v = 0; v < n; ++v) {
        heavy[v] = rng.bernoulli(p_high) ? 1 : 0;
        drawn += heavy[v];
    }
    if (drawn < min_heavy) {
        // deterministic fill from a derived stream, chosen among light nodes
        Rng fill(derive_seed(seed, 0x6865617679ULL));
        std::vector<int> light;
        for (int v = 0; v < n; ++v)
            if (!heavy[v]) light.push_back(v);
        for (int need = min_heavy - drawn; need > 0; --need) {
            const std::size_t pick = fill.below(light.size());
            heavy[light[pick]] = 1;
            light.erase(light.begin() + static_cast<std::ptrdiff_t>(pick));
        }
    }

    std::vector<NodeData> nodes(n);
    for (int v = 0; v < n; ++v) {
        const double sigma = std::sqrt(heavy[v] ? sigma_h_sq : sigma_l_sq);
        auto& node = nodes[v];
        node.a.resize(d);
        double dot = 0.0;
        for (int j = 0; j < d; ++j) {
            node.a[j] = sigma * rng.normal();
            dot += node.a[j] * x_true[j];
        }
        node.y = dot + rng.normal();
    }

    DataParams params;
    params.n = n;
    params.d = d;
    params.sigma_l_sq = sigma_l_sq;
    params.sigma_h_sq = sigma_h_sq;
    params.p_high = p_high;
    params.min_heavy = min_heavy;
    params.seed = seed;
    params.homogeneous = false;
    return make_dataset(std::move(nodes), std::move(x_true), params);
}

Dataset generate_homogeneous(int n, int d, double sigma_sq, std::uint64_t seed) {
    Dataset data = generate_heterogeneous(n, d, sigma_sq, sigma_sq, 0.0, seed, 0);
    data.params.homogeneous = true;
    return data;
}

double local_loss(const NodeData& node, const std::vector<double>& x) {
    if (x.size() != node.a.size()) throw DimensionMismatch("local_loss dimension mismatch");
    double dot = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) dot += x[j] * node.a[j];
    const double r = node.y - dot;
    return r * r;
}

std::vector<double> local_grad(const NodeData& node, const std::vector<double>& x) {
    std::vector<double> g(x.size(), 0.0);
    local_grad_into(node, x, 1.0, g);
    return g;
}

void local_grad_into(const NodeData& node, const std::vector<double>& x, double weight,
                     std::vector<double>& out) {
    if (x.size() != node.a.size()) throw DimensionMismatch("local_grad dimension mismatch");
    double dot = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) dot += x[j] * node.a[j];
    const double scale = weight * 2.0 * (dot - node.y);
    for (std::size_t j = 0; j < x.size(); ++j) out[j] += scale * node.a[j];
}

GroundTruth solve_least_squares(const Dataset& data) {
    const int d = data.d;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
    for (const auto& node : data.nodes) {
        Eigen::Map<const Eigen::VectorXd> a(node.a.data(), d);
        m.noalias() += a * a.transpose();
        b.noalias() += node.y * a;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12)
        throw RankDeficiency(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
    const Eigen::VectorXd x = m.llt().solve(b);

    GroundTruth truth;
    truth.x_star.assign(x.data(), x.data() + d);
    double mse = 0.0;
    double worst = 0.0;
    for (const auto& node : data.nodes) {
        double dot = 0.0;
        for (int j = 0; j < d; ++j) dot += node.a[j] * truth.x_star[j];
        const double r = node.y - dot;
        mse += r * r;
        worst = std::max(worst, 4.0 * r * r * squared_norm(node.a));
    }
    truth.mse_star = mse / data.size();
    truth.sigma_star_sq = worst;
    return truth;
}

double global_mse(const Dataset& data, const std::vector<double>& x) {
    double sum = 0.0;
    for (const auto& node : data.nodes) sum += local_loss(node, x);
    return sum / data.size();
}

void save_dataset(const Dataset& data, std::ostream& out) {
    const auto& p = data.params;
    out << "# rwalk-dataset v1 n=" << data.size() << " d=" << data.d << " seed=" << p.seed
        << " kind=" << (p.homogeneous ? "homogeneous" : "heterogeneous")
        << " sigma_l_sq=" << fmt17(p.sigma_l_sq) << " sigma_h_sq=" << fmt17(p.sigma_h_sq)
        << " p_high=" << fmt17(p.p_high) << " min_heavy=" << p.min_heavy << "\n";
    out << "# x_true";
    for (double v : data.x_true) out << " " << fmt17(v);
    out << "\n";
    for (int v = 0; v < data.size(); ++v) {
        out << v << " " << fmt17(data.nodes[v].y);
        for (double a : data.nodes[v].a) out << " " << fmt17(a);
        out << "\n";
    }
}

Dataset load_dataset(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# rwalk-dataset v1", 0) != 0)
        throw InvalidParameter("bad dataset header");
    DataParams params;
    {
        std::istringstream hs(header);
        std::string field;
        while (hs >> field) {
            const auto eq = field.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = field.substr(0, eq), val = field.substr(eq + 1);
            if (key == "n") params.n = std::stoi(val);
            else if (key == "d") params.d = std::stoi(val);
            else if (key == "seed") params.seed = std::stoull(val);
            else if (key == "kind") params.homogeneous = (val == "homogeneous");
            else if (key == "sigma_l_sq") params.sigma_l_sq = std::stod(val);
            else if (key == "sigma_h_sq") params.sigma_h_sq = std::stod(val);
            else if (key == "p_high") params.p_high = std::stod(val);
            else if (key == "min_heavy") params.min_heavy = std::stoi(val);
        }
    }
    std::string xline;
    if (!std::getline(in, xline) || xline.rfind("# x_true", 0) != 0)
        throw InvalidParameter("missing x_true line");
    std::vector<double> x_true;
    {
        std::istringstream xs(xline.substr(8));
        double v;
        while (xs >> v) x_true.push_back(v);
    }
    std::vector<NodeData> nodes(params.n);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int v;
        ls >> v;
        if (v < 0 || v >= params.n) throw InvalidParameter("node id out of range in dataset");
        ls >> nodes[v].y;
        nodes[v].a.assign(params.d, 0.0);
        for (int j = 0; j < params.d; ++j) ls >> nodes[v].a[j];
    }
    return make_dataset(std::move(nodes), std::move(x_true), params);
}

}  // namespace rwalk
