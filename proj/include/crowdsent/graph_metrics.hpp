#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace crowdsent {

struct Graph {
    std::size_t node_count = 0;
    std::vector<std::vector<std::uint32_t>> adjacency;  // sorted neighbor lists
    bool directed = false;
    std::vector<std::string> node_names;

    std::size_t edge_count() const;  // undirected edges (or stored arcs when directed)
};

struct GraphLoadReport {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_edges_dropped = 0;
};

// `src<TAB>dst` lines; self-loops dropped (counted), duplicates collapsed.
// With directed=false, a->b and b->a are the same edge.
Graph load_edges(const std::filesystem::path& path, bool directed = false,
                 GraphLoadReport* report = nullptr);
Graph graph_from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                       bool directed = false, GraphLoadReport* report = nullptr);

struct GraphStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double avg_degree = 0.0;
    std::optional<double> clustering;     // mean local coefficient, degree >= 2 nodes
    std::size_t clustering_excluded = 0;  // nodes with degree < 2
    std::optional<double> avg_path;       // absent when no reachable pair was sampled
    std::optional<double> assortativity;  // absent for degree-regular graphs
    std::size_t path_sample_size = 0;     // BFS sources actually used
};

// Sampled-BFS average path length (exact when path_samples >= node count),
// mean local clustering over eligible nodes, and degree assortativity
// (Pearson over both orientations of every edge). Directed graphs are
// symmetrized for these metrics. Throws when the graph has < 2 nodes.
GraphStats compute_stats(const Graph& graph, std::size_t path_samples, std::uint64_t seed);

void save_graph_stats(const GraphStats& stats, const std::filesystem::path& path);

}  // namespace crowdsent
