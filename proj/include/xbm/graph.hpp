#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "xbm/common.hpp"

namespace xbm {

/// Sparse undirected bipartite graph between a visible and a hidden node set.
///
/// Edges are stored once in a canonical order (sorted by visible index, then
/// hidden index) together with CSR adjacency for both sides, so neighbor
/// iteration is O(deg) from either direction. Edge ids index the canonical
/// order and are what model weight vectors align with. Instances are
/// immutable after construction.
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    /// Build from 0-based (visible, hidden) pairs. Throws ParameterError on
    /// out-of-range indices or duplicate edges.
    static BipartiteGraph from_edges(int n_v, int n_h,
                                     std::vector<std::pair<int, int>> edges);

    static BipartiteGraph complete(int n_v, int n_h);

    int visible_count() const { return n_v_; }
    int hidden_count() const { return n_h_; }
    std::size_t edge_count() const { return edges_.size(); }

    /// Canonical edge list, sorted by (visible, hidden).
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    /// Hidden neighbors of visible node i; parallel to visible_edge_ids(i).
    std::span<const int> hidden_neighbors(int i) const {
        return {vis_adj_.data() + vis_ptr_[i], vis_ptr_[i + 1] - vis_ptr_[i]};
    }
    std::span<const std::size_t> visible_edge_ids(int i) const {
        return {vis_eid_.data() + vis_ptr_[i], vis_ptr_[i + 1] - vis_ptr_[i]};
    }

    /// Visible neighbors of hidden node j; parallel to hidden_edge_ids(j).
    std::span<const int> visible_neighbors(int j) const {
        return {hid_adj_.data() + hid_ptr_[j], hid_ptr_[j + 1] - hid_ptr_[j]};
    }
    std::span<const std::size_t> hidden_edge_ids(int j) const {
        return {hid_eid_.data() + hid_ptr_[j], hid_ptr_[j + 1] - hid_ptr_[j]};
    }

    int visible_degree(int i) const {
        return static_cast<int>(vis_ptr_[i + 1] - vis_ptr_[i]);
    }
    int hidden_degree(int j) const {
        return static_cast<int>(hid_ptr_[j + 1] - hid_ptr_[j]);
    }

    bool has_edge(int i, int j) const;

    bool operator==(const BipartiteGraph& other) const {
        return n_v_ == other.n_v_ && n_h_ == other.n_h_ && edges_ == other.edges_;
    }

    /// Text format: header "bipartite <n_v> <n_h> <|E|>" followed by one
    /// 1-based "i j" pair per line in canonical order.
    void save_text(std::ostream& os) const;
    static BipartiteGraph load_text(std::istream& is);

    /// Versioned binary container; exact round trip.
    void save_binary(std::ostream& os) const;
    static BipartiteGraph load_binary(std::istream& is);

private:
    void build_adjacency();

    int n_v_ = 0;
    int n_h_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::size_t> vis_ptr_, hid_ptr_;
    std::vector<int> vis_adj_, hid_adj_;
    std::vector<std::size_t> vis_eid_, hid_eid_;
};

struct PathStats {
    double average = 0.0;
    bool disconnected = false;
    bool sampled = false;
    std::uint64_t pairs = 0; // reachable pairs contributing to the mean
};

/// Mean BFS distance over unordered node pairs. Exact all-pairs BFS while
/// n_v+n_h <= exact_limit, otherwise estimated from sample_sources BFS roots
/// chosen by a fixed internal seed so results are reproducible.
PathStats average_shortest_path(const BipartiteGraph& g, int exact_limit = 2000,
                                int sample_sources = 500);

/// Longest shortest path over reachable pairs (exact all-pairs BFS).
int diameter(const BipartiteGraph& g);

struct ClusteringStats {
    double coefficient = 0.0;
    bool no_pairs = false; // no node has a distance-2 neighbor
};

/// Pairwise-overlap bipartite clustering coefficient: for same-side nodes u,w
/// at distance 2, cc(u,w) = |N(u) n N(w)| / |N(u) u N(w)|; per-node values
/// average over all such w, and the graph value averages per-node values over
/// nodes that have at least one distance-2 neighbor.
ClusteringStats bipartite_clustering_coefficient(const BipartiteGraph& g);

bool is_connected(const BipartiteGraph& g);

} // namespace xbm
