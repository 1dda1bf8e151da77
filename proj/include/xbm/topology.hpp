#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "xbm/graph.hpp"
#include "xbm/rng.hpp"

namespace xbm {

using DegreeSequence = std::vector<int>;

/// Knobs of the scale-free / small-world topology generator.
struct TopologyParams {
    double gamma = 2.0;      ///< power-law exponent, > 1
    int k_min = 4;           ///< minimum sampled degree
    int k_max = 0;           ///< maximum sampled degree; 0 = number of nodes
    double sigma_neigh = 5.0; ///< neighborhood spread, in node-index units
    int phi = 5;             ///< neighborhood augmentation passes
    double l_threshold = 0.0; ///< small-world acceptance bound; 0 = ln(n_v+n_h)
    int max_outer_iterations = 20;
    int retry_budget = 10;   ///< trials per node per augmentation pass
    std::uint64_t seed = 0;

    void validate() const;
};

/// n i.i.d. draws from P(k) proportional to k^-gamma on {k_min..k_max}
/// (k_max defaulting to n), sorted in descending order.
DegreeSequence sample_power_law_degrees(int n, const TopologyParams& params, Rng& rng);

/// Alternately deal a descending sequence of n_v+n_h degrees onto the visible
/// and hidden lists (largest first to visible), append the remainder to the
/// larger side, then add degrees to the side with the smaller sum,
/// proportionally to its current degrees with largest-remainder rounding,
/// until both sums match. Each output is sorted descending.
std::pair<DegreeSequence, DegreeSequence>
split_and_equalize(const DegreeSequence& seq, int n_v, int n_h);

/// Clamp each side's degrees to the opposite side's node count; a simple
/// bipartite graph cannot exceed it.
void cap_degrees(DegreeSequence& s_v, DegreeSequence& s_h);

/// Gale-Ryser realizability test for a bipartite degree-sequence pair.
bool gale_ryser_bigraphic(const DegreeSequence& s_v, const DegreeSequence& s_h);

/// Greedy Havel-Hakimi construction: repeatedly connect the highest-degree
/// unprocessed visible node to the hidden nodes with the highest remaining
/// degrees. Non-bigraphic pairs are first repaired by decrementing the
/// largest degree on the side with the larger sum (never below k_min);
/// throws ConstructionError if the repair bottoms out.
BipartiteGraph havel_hakimi_bipartite(DegreeSequence s_v, DegreeSequence s_h,
                                      int k_min = 1);

/// phi passes over all nodes, each drawing an opposite-side index from a
/// Gaussian centered at the node's proportional position (ceil-rounded) and
/// adding the edge when it is in range and absent, with a bounded number of
/// trials per node per pass. The result stays simple.
BipartiteGraph add_neighborhood_edges(const BipartiteGraph& g,
                                      const TopologyParams& params, Rng& rng);

struct GenerationResult {
    BipartiteGraph graph;
    int iterations = 0;             ///< outer repeat-until iterations used
    double avg_shortest_path = 0.0; ///< of the returned graph
    double threshold = 0.0;         ///< acceptance bound that was applied
    bool warning = false;           ///< max_outer_iterations exhausted
    bool disconnected = false;
};

/// Full generation loop: sample degrees, split/equalize, cap, realize with
/// Havel-Hakimi, augment neighborhoods, and accept once the average shortest
/// path drops to ln(n_v+n_h). Returns best-so-far with a warning when the
/// iteration cap is reached. Requires n_v > 4 and n_h > 4.
GenerationResult generate_topology(int n_v, int n_h, const TopologyParams& params,
                                   Rng& rng);
GenerationResult generate_topology(int n_v, int n_h, const TopologyParams& params);

/// Permutation fitting the graph to data: the k-th highest-degree visible
/// node maps to the k-th highest-std feature, ties broken by ascending index
/// on both sides. perm[slot] = feature.
std::vector<int> fit_to_data(const BipartiteGraph& g, std::span<const double> feature_std);

/// Relabel visible nodes so that slot v takes index perm[v].
BipartiteGraph apply_visible_permutation(const BipartiteGraph& g, std::span<const int> perm);

} // namespace xbm
