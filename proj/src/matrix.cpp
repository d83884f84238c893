#include "rwalk/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <queue>

#include "rwalk/error.hpp"
#include "rwalk/format.hpp"

namespace rwalk {

namespace {

constexpr double kRowSumTol = 1e-12;

// Residual diagonal for MH rows; tiny negative values are rounding.
void set_mh_diagonal(std::vector<RowStochasticMatrix::Entry>& row, int i, double off_sum) {
    double diag = 1.0 - off_sum;
    if (diag < 0.0) {
        if (diag < -kRowSumTol) throw InvalidParameter("MH row exceeds unit mass");
        diag = 0.0;
    }
    if (diag > 0.0) {
        row.push_back({i, diag});
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.col < b.col; });
    }
}

void check_rows(const RowStochasticMatrix& m) {
    for (int i = 0; i < m.n; ++i) {
        double sum = 0.0;
        int prev = -1;
        for (const auto& e : m.rows[i]) {
            if (e.col <= prev) throw InvalidParameter("row entries not sorted");
            prev = e.col;
            if (e.p < 0.0 || e.p > 1.0 + kRowSumTol)
                throw InvalidParameter("entry outside [0,1]");
            sum += e.p;
        }
        if (std::abs(sum - 1.0) > kRowSumTol)
            throw InvalidParameter("row sum deviates from 1 beyond 1e-12");
    }
}

// Transposed view for deterministic gather-style products.
struct Transpose {
    std::vector<std::vector<RowStochasticMatrix::Entry>> cols;  // Entry.col = source row
    explicit Transpose(const RowStochasticMatrix& m) : cols(m.n) {
        for (int i = 0; i < m.n; ++i)
            for (const auto& e : m.rows[i]) cols[e.col].push_back({i, e.p});
    }
};

// y = x P via per-column gather; entry order inside a column is fixed, so the
// result is bit-identical for any thread count.
void apply_transposed(const Transpose& t, const std::vector<double>& x, std::vector<double>& y,
                      bool parallel) {
    const int n = static_cast<int>(t.cols.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (const auto& e : t.cols[j]) acc += x[e.col] * e.p;
        y[j] = acc;
    }
}

double half_l1_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

std::vector<double> trunc_geom_weights(double p_d, int r) {
    if (!(p_d > 0.0 && p_d < 1.0)) throw InvalidParameter("p_d must be in (0,1)");
    if (r < 1) throw InvalidParameter("r must be >= 1");
    const double denom = 1.0 - std::pow(1.0 - p_d, r);
    std::vector<double> w(r);
    for (int i = 1; i <= r; ++i) w[i - 1] = p_d * std::pow(1.0 - p_d, i - 1) / denom;
    return w;
}

// Row of the jump kernel for one source: r neighbor-expansion passes with
// exact walk counts.
std::vector<RowStochasticMatrix::Entry> levy_row(const Graph& g, int source,
                                                 const std::vector<double>& weights,
                                                 bool include_self, std::vector<std::uint64_t>& cur,
                                                 std::vector<std::uint64_t>& next,
                                                 std::vector<double>& acc) {
    const int n = g.n;
    std::fill(cur.begin(), cur.end(), 0);
    std::fill(acc.begin(), acc.end(), 0.0);
    cur[source] = 1;
    for (std::size_t hop = 0; hop < weights.size(); ++hop) {
        std::fill(next.begin(), next.end(), 0);
        std::uint64_t total = 0;
        for (int u = 0; u < n; ++u) {
            std::uint64_t c = include_self ? cur[u] : 0;
            for (int w : g.adjacency[u]) {
                if (__builtin_add_overflow(c, cur[w], &c))
                    throw std::overflow_error("walk count overflow in levy_matrix");
            }
            next[u] = c;
            if (__builtin_add_overflow(total, c, &total))
                throw std::overflow_error("walk count overflow in levy_matrix");
        }
        if (total == 0) throw InvalidParameter("levy_matrix on a node with no moves");
        const double inv = 1.0 / static_cast<double>(total);
        for (int u = 0; u < n; ++u)
            if (next[u] != 0) acc[u] += weights[hop] * static_cast<double>(next[u]) * inv;
        std::swap(cur, next);
    }
    std::vector<RowStochasticMatrix::Entry> row;
    for (int u = 0; u < n; ++u)
        if (acc[u] != 0.0) row.push_back({u, acc[u]});
    return row;
}

}  // namespace

double RowStochasticMatrix::at(int i, int j) const {
    const auto& row = rows[i];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const Entry& e, int col) { return e.col < col; });
    return (it != row.end() && it->col == j) ? it->p : 0.0;
}

Distribution make_distribution(std::vector<double> weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) throw InvalidParameter("distribution weights must be nonnegative");
        sum += w;
    }
    if (sum <= 0.0) throw InvalidParameter("distribution has no mass");
    for (double& w : weights) w /= sum;
    return Distribution{std::move(weights)};
}

Distribution uniform_distribution(int n) {
    if (n <= 0) throw InvalidParameter("distribution size must be positive");
    return Distribution{std::vector<double>(n, 1.0 / n)};
}

Distribution importance_distribution(const std::vector<double>& lipschitz) {
    for (double l : lipschitz)
        if (!(l > 0.0)) throw InvalidParameter("lipschitz constants must be positive");
    return make_distribution(lipschitz);
}

void validate_matrix(const RowStochasticMatrix& m, const Graph& g) {
    if (m.n != g.n) throw DimensionMismatch("matrix/graph size mismatch");
    check_rows(m);
    // support must live inside the <= support_hops closure (diagonal always ok)
    std::vector<int> dist(g.n);
    for (int i = 0; i < m.n; ++i) {
        std::fill(dist.begin(), dist.end(), -1);
        std::queue<int> q;
        q.push(i);
        dist[i] = 0;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            if (dist[u] == m.support_hops) continue;
            for (int w : g.adjacency[u])
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
        }
        for (const auto& e : m.rows[i])
            if (e.col != i && dist[e.col] < 0)
                throw InvalidParameter("matrix support outside declared hop closure");
    }
}

RowStochasticMatrix simple_rw(const Graph& g) {
    RowStochasticMatrix m;
    m.n = g.n;
    m.kind = "simple-rw";
    m.rows.resize(g.n);
    for (int v = 0; v < g.n; ++v) {
        const int deg = g.degree(v);
        if (deg == 0) throw InvalidParameter("simple_rw undefined on isolated node");
        const double p = 1.0 / deg;
        for (int u : g.adjacency[v]) m.rows[v].push_back({u, p});
    }
    check_rows(m);
    return m;
}

RowStochasticMatrix mh_uniform(const Graph& g) {
    RowStochasticMatrix m;
    m.n = g.n;
    m.kind = "mh-uniform";
    m.rows.resize(g.n);
    for (int v = 0; v < g.n; ++v) {
        double off = 0.0;
        const double dv = g.degree(v);
        for (int u : g.adjacency[v]) {
            const double p = (1.0 / dv) * std::min(1.0, dv / g.degree(u));
            m.rows[v].push_back({u, p});
            off += p;
        }
        if (g.degree(v) == 0) {
            m.rows[v].push_back({v, 1.0});
            continue;
        }
        set_mh_diagonal(m.rows[v], v, off);
    }
    check_rows(m);
    return m;
}

RowStochasticMatrix mh_importance(const Graph& g, const std::vector<double>& lipschitz) {
    if (static_cast<int>(lipschitz.size()) != g.n)
        throw DimensionMismatch("lipschitz vector size mismatch");
    for (double l : lipschitz)
        if (!(l > 0.0)) throw InvalidParameter("lipschitz constants must be positive");
    RowStochasticMatrix m;
    m.n = g.n;
    m.kind = "mh-importance";
    m.rows.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        if (g.degree(i) == 0) {
            m.rows[i].push_back({i, 1.0});
            continue;
        }
        const double di = g.degree(i);
        double off = 0.0;
        for (int j : g.adjacency[i]) {
            const double ratio = di * lipschitz[j] / (g.degree(j) * lipschitz[i]);
            const double p = (1.0 / di) * std::min(1.0, ratio);
            m.rows[i].push_back({j, p});
            off += p;
        }
        set_mh_diagonal(m.rows[i], i, off);
    }
    check_rows(m);
    return m;
}

RowStochasticMatrix mh_target(const Graph& g, const Distribution& pi) {
    if (pi.size() != g.n) throw DimensionMismatch("target distribution size mismatch");
    for (double w : pi.weights)
        if (!(w > 0.0)) throw InvalidParameter("target distribution must be strictly positive");
    RowStochasticMatrix m;
    m.n = g.n;
    m.kind = "mh-target";
    m.rows.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        if (g.degree(i) == 0) {
            m.rows[i].push_back({i, 1.0});
            continue;
        }
        const double di = g.degree(i);
        double off = 0.0;
        for (int j : g.adjacency[i]) {
            // Q = simple_rw: Q(i,j) = 1/deg(i)
            const double ratio = (pi[j] * di) / (pi[i] * g.degree(j));
            const double p = (1.0 / di) * std::min(1.0, ratio);
            m.rows[i].push_back({j, p});
            off += p;
        }
        set_mh_diagonal(m.rows[i], i, off);
    }
    check_rows(m);
    return m;
}

RowStochasticMatrix levy_matrix(const Graph& g, double p_d, int r, bool include_self,
                                bool parallel) {
    const auto weights = trunc_geom_weights(p_d, r);
    RowStochasticMatrix m;
    m.n = g.n;
    m.kind = "levy";
    m.support_hops = r;
    m.rows.resize(g.n);
    std::exception_ptr failure = nullptr;
#pragma omp parallel if (parallel)
    {
        std::vector<std::uint64_t> cur(g.n), next(g.n);
        std::vector<double> acc(g.n);
#pragma omp for schedule(static)
        for (int v = 0; v < g.n; ++v) {
            try {
                m.rows[v] = levy_row(g, v, weights, include_self, cur, next, acc);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    check_rows(m);
    return m;
}

RowStochasticMatrix mix(const RowStochasticMatrix& a, const RowStochasticMatrix& b, double p_j) {
    if (a.n != b.n) throw DimensionMismatch("mix of different dimensions");
    if (!(p_j >= 0.0 && p_j <= 1.0)) throw InvalidParameter("mixing weight outside [0,1]");
    RowStochasticMatrix m;
    m.n = a.n;
    m.kind = "mix";
    m.support_hops = std::max(a.support_hops, b.support_hops);
    m.rows.resize(a.n);
    for (int i = 0; i < a.n; ++i) {
        const auto& ra = a.rows[i];
        const auto& rb = b.rows[i];
        auto& out = m.rows[i];
        std::size_t ia = 0, ib = 0;
        while (ia < ra.size() || ib < rb.size()) {
            int col;
            double pa = 0.0, pb = 0.0;
            if (ib >= rb.size() || (ia < ra.size() && ra[ia].col < rb[ib].col)) {
                col = ra[ia].col;
                pa = ra[ia++].p;
            } else if (ia >= ra.size() || rb[ib].col < ra[ia].col) {
                col = rb[ib].col;
                pb = rb[ib++].p;
            } else {
                col = ra[ia].col;
                pa = ra[ia++].p;
                pb = rb[ib++].p;
            }
            const double p = (1.0 - p_j) * pa + p_j * pb;
            if (p != 0.0) out.push_back({col, p});
        }
    }
    check_rows(m);
    return m;
}

Distribution stationary(const RowStochasticMatrix& p, double tol, std::uint64_t max_iter,
                        bool parallel) {
    if (p.n <= 0) throw InvalidParameter("empty matrix");
    const Transpose t(p);
    std::vector<double> x(p.n, 1.0 / p.n), y(p.n);
    double residual = 0.0;
    for (std::uint64_t it = 0; it < max_iter; ++it) {
        apply_transposed(t, x, y, parallel);
        double sum = std::accumulate(y.begin(), y.end(), 0.0);
        for (double& v : y) v /= sum;
        residual = half_l1_diff(x, y);
        x.swap(y);
        if (residual < tol) return Distribution{std::move(x)};
    }
    throw NonConvergence("power iteration did not converge", max_iter, residual, std::move(x));
}

double tv_distance(const Distribution& a, const Distribution& b) {
    if (a.size() != b.size()) throw DimensionMismatch("tv_distance size mismatch");
    return half_l1_diff(a.weights, b.weights);
}

int mixing_time(const RowStochasticMatrix& p, double eps, int t_max, bool parallel) {
    const Distribution pi = stationary(p, 1e-13, 5000000, parallel);
    const Transpose t(p);
    const int n = p.n;
    // all n row distributions evolved together
    std::vector<double> rows(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> next(static_cast<std::size_t>(n) * n);
    for (int v = 0; v < n; ++v) rows[static_cast<std::size_t>(v) * n + v] = 1.0;
    std::vector<double> row_tv(n);
    for (int step = 1; step <= t_max; ++step) {
#pragma omp parallel for schedule(static) if (parallel)
        for (int v = 0; v < n; ++v) {
            const double* src = rows.data() + static_cast<std::size_t>(v) * n;
            double* dst = next.data() + static_cast<std::size_t>(v) * n;
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (const auto& e : t.cols[j]) acc += src[e.col] * e.p;
                dst[j] = acc;
            }
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += std::abs(dst[j] - pi.weights[j]);
            row_tv[v] = 0.5 * s;
        }
        rows.swap(next);
        const double worst = *std::max_element(row_tv.begin(), row_tv.end());
        if (worst <= eps) return step;
    }
    throw NonConvergence("mixing time exceeded t_max", static_cast<std::uint64_t>(t_max),
                         *std::max_element(row_tv.begin(), row_tv.end()));
}

double detailed_balance_residual(const RowStochasticMatrix& p, const Distribution& pi) {
    if (pi.size() != p.n) throw DimensionMismatch("distribution size mismatch");
    double worst = 0.0;
    for (int i = 0; i < p.n; ++i)
        for (const auto& e : p.rows[i])
            worst = std::max(worst, std::abs(pi[i] * e.p - pi[e.col] * p.at(e.col, i)));
    return worst;
}

double one_norm_diff(const RowStochasticMatrix& a, const RowStochasticMatrix& b) {
    if (a.n != b.n) throw DimensionMismatch("one_norm_diff size mismatch");
    double worst = 0.0;
    for (int i = 0; i < a.n; ++i) {
        const auto& ra = a.rows[i];
        const auto& rb = b.rows[i];
        double sum = 0.0;
        std::size_t ia = 0, ib = 0;
        while (ia < ra.size() || ib < rb.size()) {
            if (ib >= rb.size() || (ia < ra.size() && ra[ia].col < rb[ib].col))
                sum += std::abs(ra[ia++].p);
            else if (ia >= ra.size() || rb[ib].col < ra[ia].col)
                sum += std::abs(rb[ib++].p);
            else {
                sum += std::abs(ra[ia].p - rb[ib].p);
                ++ia, ++ib;
            }
        }
        worst = std::max(worst, sum);
    }
    return worst;
}

void save_matrix(const RowStochasticMatrix& m, std::ostream& out) {
    out << "# n=" << m.n << " kind=" << m.kind << "\n";
    for (int i = 0; i < m.n; ++i)
        for (const auto& e : m.rows[i]) out << i << " " << e.col << " " << fmt17(e.p) << "\n";
}

void save_distribution(const Distribution& d, const std::string& tag, std::ostream& out) {
    out << "# n=" << d.size() << " kind=" << tag << "\n";
    for (int i = 0; i < d.size(); ++i) out << i << " " << fmt17(d[i]) << "\n";
}

}  // namespace rwalk
