#include "crowdsent/graph_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "crowdsent/rng.hpp"
#include "crowdsent/util.hpp"

namespace crowdsent {

std::size_t Graph::edge_count() const {
    std::size_t arcs = 0;
    for (const auto& nbrs : adjacency) arcs += nbrs.size();
    return directed ? arcs : arcs / 2;
}

Graph graph_from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                       bool directed, GraphLoadReport* report) {
    GraphLoadReport local;
    std::map<std::string, std::uint32_t> ids;
    auto id_of = [&](const std::string& name) {
        auto [it, _] = ids.emplace(name, static_cast<std::uint32_t>(ids.size()));
        return it->second;
    };

    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
    for (const auto& [src, dst] : edges) {
        std::uint32_t a = id_of(src), b = id_of(dst);
        if (a == b) {
            ++local.self_loops_dropped;
            continue;
        }
        auto key = directed ? std::make_pair(a, b) : std::minmax(a, b);
        if (!seen.insert(key).second) {
            ++local.duplicate_edges_dropped;
            continue;
        }
        arcs.push_back({a, b});
    }

    Graph g;
    g.directed = directed;
    g.node_count = ids.size();
    g.node_names.resize(ids.size());
    for (const auto& [name, id] : ids) g.node_names[id] = name;
    g.adjacency.assign(g.node_count, {});
    for (const auto& [a, b] : arcs) {
        g.adjacency[a].push_back(b);
        if (!directed) g.adjacency[b].push_back(a);
    }
    for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
    if (report) *report = local;
    return g;
}

Graph load_edges(const std::filesystem::path& path, bool directed, GraphLoadReport* report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open edge list: " + path.string());
    std::vector<std::pair<std::string, std::string>> edges;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (strip(line).empty() || line[0] == '#') continue;
        auto cols = split(line, '\t');
        if (cols.size() != 2) throw std::runtime_error("bad edge line: " + line);
        edges.emplace_back(strip(cols[0]), strip(cols[1]));
    }
    return graph_from_edges(edges, directed, report);
}

namespace {

// adjacency with both directions present, for the metric kernels
std::vector<std::vector<std::uint32_t>> symmetrized(const Graph& g) {
    if (!g.directed) return g.adjacency;
    std::vector<std::set<std::uint32_t>> sets(g.node_count);
    for (std::uint32_t u = 0; u < g.node_count; ++u) {
        for (std::uint32_t v : g.adjacency[u]) {
            sets[u].insert(v);
            sets[v].insert(u);
        }
    }
    std::vector<std::vector<std::uint32_t>> adj(g.node_count);
    for (std::uint32_t u = 0; u < g.node_count; ++u) adj[u].assign(sets[u].begin(), sets[u].end());
    return adj;
}

std::size_t count_common(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::size_t i = 0, j = 0, n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (a[i] > b[j]) ++j;
        else ++n, ++i, ++j;
    }
    return n;
}

}  // namespace

GraphStats compute_stats(const Graph& graph, std::size_t path_samples, std::uint64_t seed) {
    if (graph.node_count < 2) throw std::invalid_argument("compute_stats: need at least 2 nodes");

    const auto adj = symmetrized(graph);
    const std::size_t n = graph.node_count;

    GraphStats stats;
    stats.nodes = n;
    stats.edges = graph.edge_count();
    if (graph.directed) {
        stats.avg_degree = static_cast<double>(stats.edges) / static_cast<double>(n);
    } else {
        stats.avg_degree = 2.0 * static_cast<double>(stats.edges) / static_cast<double>(n);
    }

    // local clustering over nodes with degree >= 2
    double cl_sum = 0.0;
    std::size_t cl_nodes = 0;
    for (std::uint32_t u = 0; u < n; ++u) {
        const std::size_t deg = adj[u].size();
        if (deg < 2) {
            ++stats.clustering_excluded;
            continue;
        }
        std::size_t links = 0;
        for (std::uint32_t v : adj[u]) links += count_common(adj[u], adj[v]);
        // each triangle through u is counted twice in the intersection sum
        double local = static_cast<double>(links) / static_cast<double>(deg * (deg - 1));
        cl_sum += local;
        ++cl_nodes;
    }
    if (cl_nodes > 0) stats.clustering = cl_sum / static_cast<double>(cl_nodes);

    // degree assortativity: Pearson over (deg(u), deg(v)) for both edge
    // orientations; undefined when all degrees are equal
    {
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        std::size_t m = 0;
        for (std::uint32_t u = 0; u < n; ++u) {
            double du = static_cast<double>(adj[u].size());
            for (std::uint32_t v : adj[u]) {
                double dv = static_cast<double>(adj[v].size());
                sx += du;
                sy += dv;
                sxx += du * du;
                syy += dv * dv;
                sxy += du * dv;
                ++m;
            }
        }
        if (m > 0) {
            double mm = static_cast<double>(m);
            double vx = sxx - sx * sx / mm;
            double vy = syy - sy * sy / mm;
            double cov = sxy - sx * sy / mm;
            if (vx > 0.0 && vy > 0.0) stats.assortativity = cov / std::sqrt(vx * vy);
        }
    }

    // average shortest-path length from sampled BFS sources (exact when
    // every node is a source)
    {
        std::vector<std::uint32_t> sources(n);
        std::iota(sources.begin(), sources.end(), 0);
        if (path_samples < n) {
            Rng rng(seed);
            rng.shuffle(sources);
            sources.resize(path_samples);
            std::sort(sources.begin(), sources.end());  // deterministic merge order
        }
        stats.path_sample_size = sources.size();

        std::vector<std::int32_t> dist(n);
        std::uint64_t total = 0, pairs = 0;
        std::deque<std::uint32_t> queue;
        for (std::uint32_t src : sources) {
            std::fill(dist.begin(), dist.end(), -1);
            dist[src] = 0;
            queue.clear();
            queue.push_back(src);
            while (!queue.empty()) {
                std::uint32_t u = queue.front();
                queue.pop_front();
                for (std::uint32_t v : adj[u]) {
                    if (dist[v] >= 0) continue;
                    dist[v] = dist[u] + 1;
                    total += static_cast<std::uint64_t>(dist[v]);
                    ++pairs;
                    queue.push_back(v);
                }
            }
        }
        if (pairs > 0) stats.avg_path = static_cast<double>(total) / static_cast<double>(pairs);
    }
    return stats;
}

void save_graph_stats(const GraphStats& stats, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "nodes,edges,avg_degree,clustering,avg_path,assortativity,path_samples,"
           "clustering_excluded\n";
    auto opt = [](const std::optional<double>& v) {
        return v ? fmt_double(*v, 6) : std::string("nan");
    };
    out << stats.nodes << ',' << stats.edges << ',' << fmt_double(stats.avg_degree, 6) << ','
        << opt(stats.clustering) << ',' << opt(stats.avg_path) << ',' << opt(stats.assortativity)
        << ',' << stats.path_sample_size << ',' << stats.clustering_excluded << '\n';
}

}  // namespace crowdsent
