#include "rwalk/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "rwalk/error.hpp"
#include "rwalk/rng.hpp"

namespace rwalk {

namespace {

constexpr int kConnectivityRetries = 100;

void sort_adjacency(Graph& g) {
    for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
}

}  // namespace

std::size_t Graph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& nbrs : adjacency) twice += nbrs.size();
    return twice / 2;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count());
    for (int u = 0; u < n; ++u)
        for (int v : adjacency[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

bool Graph::has_edge(int u, int v) const {
    const auto& nbrs = adjacency[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

bool is_connected(const Graph& g) {
    if (g.n <= 0) return false;
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : g.adjacency[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == g.n;
}

void validate_graph(const Graph& g) {
    if (g.n <= 0) throw InvalidParameter("graph must have at least one node");
    if (static_cast<int>(g.adjacency.size()) != g.n)
        throw InvalidParameter("adjacency size does not match node count");
    for (int u = 0; u < g.n; ++u) {
        const auto& nbrs = g.adjacency[u];
        if (!std::is_sorted(nbrs.begin(), nbrs.end()))
            throw InvalidParameter("adjacency list not sorted");
        if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
            throw InvalidParameter("duplicate neighbor");
        for (int v : nbrs) {
            if (v < 0 || v >= g.n) throw InvalidParameter("neighbor id out of range");
            if (v == u) throw InvalidParameter("self-loop stored in adjacency");
            if (!g.has_edge(v, u)) throw InvalidParameter("asymmetric adjacency");
        }
    }
    if (!is_connected(g)) throw InvalidParameter("graph is not connected");
}

Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges, const std::string& tag,
                 std::uint64_t seed) {
    if (n <= 0) throw InvalidParameter("node count must be positive");
    Graph g;
    g.n = n;
    g.adjacency.assign(n, {});
    g.generator_tag = tag;
    g.seed = seed;
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n) throw InvalidParameter("edge endpoint out of range");
        if (u == v) throw InvalidParameter("self-loop edge");
        g.adjacency[u].push_back(v);
        g.adjacency[v].push_back(u);
    }
    sort_adjacency(g);
    validate_graph(g);
    return g;
}

Graph build_ring(int n) {
    if (n < 3) throw InvalidParameter("ring requires n >= 3");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n);
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    auto g = make_graph(n, edges, "ring");
    return g;
}

Graph build_grid2d(int rows, int cols) {
    if (rows < 1 || cols < 1 || rows * cols < 2)
        throw InvalidParameter("grid requires rows*cols >= 2");
    std::vector<std::pair<int, int>> edges;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
    }
    return make_graph(rows * cols, edges, "grid2d");
}

Graph build_erdos_renyi(int n, double p, std::uint64_t seed) {
    if (n < 2) throw InvalidParameter("erdos-renyi requires n >= 2");
    if (!(p > 0.0 && p <= 1.0)) throw InvalidParameter("erdos-renyi requires 0 < p <= 1");
    for (int attempt = 0; attempt < kConnectivityRetries; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt));
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.uniform01() < p) edges.emplace_back(u, v);
        Graph g;
        g.n = n;
        g.adjacency.assign(n, {});
        g.generator_tag = "erdos-renyi";
        g.seed = seed;
        for (auto [u, v] : edges) {
            g.adjacency[u].push_back(v);
            g.adjacency[v].push_back(u);
        }
        sort_adjacency(g);
        if (is_connected(g)) return g;
    }
    throw ConstructionFailure(kConnectivityRetries);
}

Graph build_watts_strogatz(int n, int k, double beta, std::uint64_t seed) {
    if (k < 2 || k % 2 != 0) throw InvalidParameter("watts-strogatz requires even k >= 2");
    if (n <= k) throw InvalidParameter("watts-strogatz requires n > k");
    if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidParameter("beta must be in [0,1]");
    for (int attempt = 0; attempt < kConnectivityRetries; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt));
        // ring lattice, k/2 clockwise neighbors per node
        std::vector<std::vector<int>> adj(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 1; j <= k / 2; ++j) {
                const int v = (i + j) % n;
                adj[i].push_back(v);
                adj[v].push_back(i);
            }
        }
        auto connected = [&adj](int u, int v) {
            return std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end();
        };
        // rewire each lattice edge (i, i+j) with probability beta; the target
        // must be distinct from i and not already a neighbor
        for (int i = 0; i < n; ++i) {
            for (int j = 1; j <= k / 2; ++j) {
                if (rng.uniform01() >= beta) continue;
                const int old = (i + j) % n;
                if (static_cast<int>(adj[i].size()) >= n - 1) continue;  // saturated
                int w;
                do {
                    w = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
                } while (w == i || connected(i, w));
                adj[i].erase(std::find(adj[i].begin(), adj[i].end(), old));
                adj[old].erase(std::find(adj[old].begin(), adj[old].end(), i));
                adj[i].push_back(w);
                adj[w].push_back(i);
            }
        }
        Graph g;
        g.n = n;
        g.adjacency = std::move(adj);
        g.generator_tag = "watts-strogatz";
        g.seed = seed;
        sort_adjacency(g);
        if (is_connected(g)) return g;
    }
    throw ConstructionFailure(kConnectivityRetries);
}

void save_graph(const Graph& g, std::ostream& out) {
    out << "# nodes=" << g.n << " generator=" << g.generator_tag << " seed=" << g.seed << "\n";
    for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
}

Graph load_graph(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# nodes=", 0) != 0)
        throw InvalidParameter("bad graph header");
    int n = 0;
    std::string tag = "loaded";
    std::uint64_t seed = 0;
    {
        std::istringstream hs(header.substr(1));
        std::string field;
        while (hs >> field) {
            const auto eq = field.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = field.substr(0, eq), val = field.substr(eq + 1);
            if (key == "nodes") n = std::stoi(val);
            else if (key == "generator") tag = val;
            else if (key == "seed") seed = std::stoull(val);
        }
    }
    std::vector<std::pair<int, int>> edges;
    int u, v;
    while (in >> u >> v) edges.emplace_back(u, v);
    return make_graph(n, edges, tag, seed);
}

}  // namespace rwalk
