#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rwalk {

// Undirected, connected communication graph. Nodes are dense 0..n-1.
// Adjacency lists are sorted, hold distinct neighbors, and never contain the
// node itself; self-loop probability only ever arises as the MH residual.
struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adjacency;
    std::string generator_tag;
    std::uint64_t seed = 0;

    int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
    std::size_t edge_count() const;
    std::vector<std::pair<int, int>> edges() const;  // u < v
    bool has_edge(int u, int v) const;
};

// Build from an explicit edge list; rejects self-loops, duplicates and
// disconnected inputs (n == 1 with no edges is valid).
Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                 const std::string& tag = "custom", std::uint64_t seed = 0);

Graph build_ring(int n);
Graph build_grid2d(int rows, int cols);
Graph build_erdos_renyi(int n, double p, std::uint64_t seed);
Graph build_watts_strogatz(int n, int k, double beta, std::uint64_t seed);

bool is_connected(const Graph& g);

// Checks symmetry, sortedness, duplicates, self-loops and connectivity.
void validate_graph(const Graph& g);

// Edge-list text format. Header: "# nodes=<n> generator=<tag> seed=<seed>",
// then one "u v" pair per line with u < v.
void save_graph(const Graph& g, std::ostream& out);
Graph load_graph(std::istream& in);

}  // namespace rwalk
