#include "xbm/graph.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "xbm/rng.hpp"
#include "xbm/serialize.hpp"

namespace xbm {

BipartiteGraph BipartiteGraph::from_edges(int n_v, int n_h,
                                          std::vector<std::pair<int, int>> edges) {
    if (n_v < 1 || n_h < 1) throw ParameterError("node counts must be positive");
    for (const auto& [i, j] : edges) {
        if (i < 0 || i >= n_v || j < 0 || j >= n_h)
            throw ParameterError("edge index out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw ParameterError("duplicate edge");

    BipartiteGraph g;
    g.n_v_ = n_v;
    g.n_h_ = n_h;
    g.edges_ = std::move(edges);
    g.build_adjacency();
    return g;
}

BipartiteGraph BipartiteGraph::complete(int n_v, int n_h) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n_v) * static_cast<std::size_t>(n_h));
    for (int i = 0; i < n_v; ++i)
        for (int j = 0; j < n_h; ++j) edges.emplace_back(i, j);
    return from_edges(n_v, n_h, std::move(edges));
}

void BipartiteGraph::build_adjacency() {
    const std::size_t m = edges_.size();
    vis_ptr_.assign(static_cast<std::size_t>(n_v_) + 1, 0);
    hid_ptr_.assign(static_cast<std::size_t>(n_h_) + 1, 0);
    for (const auto& [i, j] : edges_) {
        ++vis_ptr_[static_cast<std::size_t>(i) + 1];
        ++hid_ptr_[static_cast<std::size_t>(j) + 1];
    }
    for (int i = 0; i < n_v_; ++i) vis_ptr_[i + 1] += vis_ptr_[i];
    for (int j = 0; j < n_h_; ++j) hid_ptr_[j + 1] += hid_ptr_[j];

    vis_adj_.resize(m);
    vis_eid_.resize(m);
    hid_adj_.resize(m);
    hid_eid_.resize(m);
    std::vector<std::size_t> vpos(vis_ptr_.begin(), vis_ptr_.end() - 1);
    std::vector<std::size_t> hpos(hid_ptr_.begin(), hid_ptr_.end() - 1);
    for (std::size_t e = 0; e < m; ++e) {
        const auto [i, j] = edges_[e];
        vis_adj_[vpos[i]] = j;
        vis_eid_[vpos[i]] = e;
        ++vpos[i];
        hid_adj_[hpos[j]] = i;
        hid_eid_[hpos[j]] = e;
        ++hpos[j];
    }
    // canonical order makes visible rows sorted by hidden index already;
    // hidden rows come out sorted by visible index by the same argument
}

bool BipartiteGraph::has_edge(int i, int j) const {
    if (i < 0 || i >= n_v_ || j < 0 || j >= n_h_) return false;
    auto row = hidden_neighbors(i);
    return std::binary_search(row.begin(), row.end(), j);
}

void BipartiteGraph::save_text(std::ostream& os) const {
    os << "bipartite " << n_v_ << ' ' << n_h_ << ' ' << edges_.size() << '\n';
    for (const auto& [i, j] : edges_) os << (i + 1) << ' ' << (j + 1) << '\n';
}

BipartiteGraph BipartiteGraph::load_text(std::istream& is) {
    std::string tag;
    int n_v = 0, n_h = 0;
    std::size_t m = 0;
    if (!(is >> tag >> n_v >> n_h >> m) || tag != "bipartite")
        throw FormatError("expected 'bipartite <n_v> <n_h> <m>' header");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(m);
    for (std::size_t e = 0; e < m; ++e) {
        int i = 0, j = 0;
        if (!(is >> i >> j)) throw FormatError("truncated edge list");
        edges.emplace_back(i - 1, j - 1);
    }
    return from_edges(n_v, n_h, std::move(edges));
}

namespace {
constexpr char kGraphMagic[5] = "XBG1";
}

void BipartiteGraph::save_binary(std::ostream& os) const {
    io::write_magic(os, kGraphMagic);
    io::write_u32(os, 1);
    io::write_u64(os, static_cast<std::uint64_t>(n_v_));
    io::write_u64(os, static_cast<std::uint64_t>(n_h_));
    io::write_u64(os, edges_.size());
    for (const auto& [i, j] : edges_) {
        io::write_u32(os, static_cast<std::uint32_t>(i));
        io::write_u32(os, static_cast<std::uint32_t>(j));
    }
}

BipartiteGraph BipartiteGraph::load_binary(std::istream& is) {
    io::expect_magic(is, kGraphMagic);
    const std::uint32_t version = io::read_u32(is);
    if (version != 1) throw FormatError("unsupported graph container version");
    const auto n_v = static_cast<int>(io::read_u64(is));
    const auto n_h = static_cast<int>(io::read_u64(is));
    const std::uint64_t m = io::read_u64(is);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(m);
    for (std::uint64_t e = 0; e < m; ++e) {
        int i = static_cast<int>(io::read_u32(is));
        int j = static_cast<int>(io::read_u32(is));
        edges.emplace_back(i, j);
    }
    return from_edges(n_v, n_h, std::move(edges));
}

namespace {

// Unified 0-based node ids: visibles first, then hiddens.
void bfs(const BipartiteGraph& g, int source, std::vector<int>& dist) {
    const int n_v = g.visible_count();
    const int n = n_v + g.hidden_count();
    dist.assign(n, -1);
    dist[source] = 0;
    std::deque<int> queue{source};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        auto visit = [&](int w) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        };
        if (u < n_v) {
            for (int j : g.hidden_neighbors(u)) visit(n_v + j);
        } else {
            for (int i : g.visible_neighbors(u - n_v)) visit(i);
        }
    }
}

} // namespace

PathStats average_shortest_path(const BipartiteGraph& g, int exact_limit,
                                int sample_sources) {
    const int n = g.visible_count() + g.hidden_count();
    PathStats stats;
    std::vector<int> sources;
    if (n <= exact_limit || sample_sources >= n) {
        sources.resize(n);
        for (int s = 0; s < n; ++s) sources[s] = s;
    } else {
        stats.sampled = true;
        // fixed seed keeps the estimate reproducible for a given graph shape
        Rng rng(derive_seed(0x61737068ULL, static_cast<std::uint64_t>(n)));
        std::vector<int> all(n);
        for (int s = 0; s < n; ++s) all[s] = s;
        for (int k = 0; k < sample_sources; ++k) {
            const auto pick = k + static_cast<int>(rng() % static_cast<std::uint64_t>(n - k));
            std::swap(all[k], all[pick]);
            sources.push_back(all[k]);
        }
    }

    std::uint64_t total = 0;
    std::uint64_t pairs = 0;
    std::vector<int> dist;
    for (int s : sources) {
        bfs(g, s, dist);
        for (int t = 0; t < n; ++t) {
            if (t == s) continue;
            if (!stats.sampled && t < s) continue; // unordered pairs once
            if (dist[t] < 0) {
                stats.disconnected = true;
            } else {
                total += static_cast<std::uint64_t>(dist[t]);
                ++pairs;
            }
        }
    }
    stats.pairs = pairs;
    stats.average = pairs > 0 ? static_cast<double>(total) / static_cast<double>(pairs) : 0.0;
    return stats;
}

int diameter(const BipartiteGraph& g) {
    const int n = g.visible_count() + g.hidden_count();
    int best = 0;
    std::vector<int> dist;
    for (int s = 0; s < n; ++s) {
        bfs(g, s, dist);
        for (int t = 0; t < n; ++t)
            if (dist[t] > best) best = dist[t];
    }
    return best;
}

namespace {

// Per-node mean Jaccard overlap with distance-2 neighbors on one side.
// degree(x) looks up the opposite side, neighbors(u) iterates same-side
// 2-hop candidates through shared neighbors.
template <typename NeighborsOf, typename OppositeNeighborsOf>
void side_clustering(int n_side, NeighborsOf neighbors_of,
                     OppositeNeighborsOf opposite_neighbors_of,
                     double& sum, std::size_t& count) {
    std::vector<int> common; // scratch: common-neighbor counts per candidate
    std::vector<int> touched;
    common.assign(static_cast<std::size_t>(n_side), 0);
    for (int u = 0; u < n_side; ++u) {
        touched.clear();
        auto nu = neighbors_of(u);
        for (int x : nu) {
            for (int w : opposite_neighbors_of(x)) {
                if (w == u) continue;
                if (common[w] == 0) touched.push_back(w);
                ++common[w];
            }
        }
        if (!touched.empty()) {
            double acc = 0.0;
            const auto deg_u = static_cast<double>(nu.size());
            for (int w : touched) {
                const double inter = common[w];
                const double deg_w = static_cast<double>(neighbors_of(w).size());
                acc += inter / (deg_u + deg_w - inter);
            }
            sum += acc / static_cast<double>(touched.size());
            ++count;
        }
        for (int w : touched) common[w] = 0;
    }
}

} // namespace

ClusteringStats bipartite_clustering_coefficient(const BipartiteGraph& g) {
    double sum = 0.0;
    std::size_t count = 0;
    side_clustering(
        g.visible_count(), [&](int i) { return g.hidden_neighbors(i); },
        [&](int j) { return g.visible_neighbors(j); }, sum, count);
    side_clustering(
        g.hidden_count(), [&](int j) { return g.visible_neighbors(j); },
        [&](int i) { return g.hidden_neighbors(i); }, sum, count);
    ClusteringStats stats;
    if (count == 0) {
        stats.no_pairs = true;
        return stats;
    }
    stats.coefficient = sum / static_cast<double>(count);
    return stats;
}

bool is_connected(const BipartiteGraph& g) {
    const int n = g.visible_count() + g.hidden_count();
    if (n == 0) return true;
    std::vector<int> dist;
    bfs(g, 0, dist);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

} // namespace xbm
