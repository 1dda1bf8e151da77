#include "xbm/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "xbm/common.hpp"

namespace xbm {

void TopologyParams::validate() const {
    if (gamma <= 1.0) throw ParameterError("gamma must be > 1");
    if (k_min < 1) throw ParameterError("k_min must be >= 1");
    if (k_max != 0 && k_max < k_min) throw ParameterError("k_max must be >= k_min");
    if (sigma_neigh <= 0.0) throw ParameterError("sigma_neigh must be > 0");
    if (phi < 0) throw ParameterError("phi must be >= 0");
    if (max_outer_iterations < 1) throw ParameterError("max_outer_iterations must be >= 1");
    if (retry_budget < 1) throw ParameterError("retry_budget must be >= 1");
}

DegreeSequence sample_power_law_degrees(int n, const TopologyParams& params, Rng& rng) {
    if (n < 1) throw ParameterError("need at least one node");
    params.validate();
    const int k_max = params.k_max > 0 ? params.k_max : n;
    if (params.k_min > k_max) throw ParameterError("k_min exceeds k_max");

    // cumulative mass of P(k) ~ k^-gamma on {k_min..k_max}
    std::vector<double> cum(static_cast<std::size_t>(k_max - params.k_min) + 1);
    double total = 0.0;
    for (int k = params.k_min; k <= k_max; ++k) {
        total += std::pow(static_cast<double>(k), -params.gamma);
        cum[static_cast<std::size_t>(k - params.k_min)] = total;
    }
    for (double& c : cum) c /= total;
    cum.back() = 1.0;

    DegreeSequence out(static_cast<std::size_t>(n));
    for (auto& d : out) {
        const double u = draw_uniform(rng);
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        d = params.k_min + static_cast<int>(it - cum.begin());
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

namespace {

// Distribute `extra` additional degrees over `side` proportionally to current
// degrees, rounding by largest remainder (ties to the lower index).
void add_proportionally(DegreeSequence& side, long long extra) {
    const double total = static_cast<double>(
        std::accumulate(side.begin(), side.end(), 0LL));
    std::vector<double> quota(side.size());
    std::vector<long long> base(side.size());
    long long assigned = 0;
    for (std::size_t t = 0; t < side.size(); ++t) {
        quota[t] = static_cast<double>(extra) * static_cast<double>(side[t]) / total;
        base[t] = static_cast<long long>(quota[t]);
        assigned += base[t];
    }
    std::vector<std::size_t> order(side.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return quota[a] - static_cast<double>(base[a]) >
               quota[b] - static_cast<double>(base[b]);
    });
    for (long long r = 0; r < extra - assigned; ++r) ++base[order[static_cast<std::size_t>(r)]];
    for (std::size_t t = 0; t < side.size(); ++t)
        side[t] += static_cast<int>(base[t]);
}

} // namespace

std::pair<DegreeSequence, DegreeSequence>
split_and_equalize(const DegreeSequence& seq, int n_v, int n_h) {
    if (n_v < 1 || n_h < 1) throw ParameterError("node counts must be positive");
    if (seq.size() != static_cast<std::size_t>(n_v) + static_cast<std::size_t>(n_h))
        throw ParameterError("sequence length must equal n_v + n_h");
    if (!std::is_sorted(seq.begin(), seq.end(), std::greater_equal<>()))
        throw ParameterError("sequence must be sorted descending");

    DegreeSequence s_v, s_h;
    s_v.reserve(static_cast<std::size_t>(n_v));
    s_h.reserve(static_cast<std::size_t>(n_h));
    const std::size_t paired = 2 * static_cast<std::size_t>(std::min(n_v, n_h));
    for (std::size_t i = 0; i < paired; i += 2) {
        s_v.push_back(seq[i]);
        s_h.push_back(seq[i + 1]);
    }
    auto& larger = n_v >= n_h ? s_v : s_h;
    larger.insert(larger.end(), seq.begin() + static_cast<std::ptrdiff_t>(paired), seq.end());

    const long long sum_v = std::accumulate(s_v.begin(), s_v.end(), 0LL);
    const long long sum_h = std::accumulate(s_h.begin(), s_h.end(), 0LL);
    if (sum_v < sum_h)
        add_proportionally(s_v, sum_h - sum_v);
    else if (sum_h < sum_v)
        add_proportionally(s_h, sum_v - sum_h);

    std::sort(s_v.begin(), s_v.end(), std::greater<>());
    std::sort(s_h.begin(), s_h.end(), std::greater<>());
    return {std::move(s_v), std::move(s_h)};
}

void cap_degrees(DegreeSequence& s_v, DegreeSequence& s_h) {
    const int cap_v = static_cast<int>(s_h.size());
    const int cap_h = static_cast<int>(s_v.size());
    for (int& d : s_v) d = std::min(d, cap_v);
    for (int& d : s_h) d = std::min(d, cap_h);
}

bool gale_ryser_bigraphic(const DegreeSequence& s_v, const DegreeSequence& s_h) {
    const long long sum_v = std::accumulate(s_v.begin(), s_v.end(), 0LL);
    const long long sum_h = std::accumulate(s_h.begin(), s_h.end(), 0LL);
    if (sum_v != sum_h) return false;
    DegreeSequence a(s_v), b(s_h);
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());
    if (!a.empty() && a.front() > static_cast<int>(b.size())) return false;
    if (!b.empty() && b.front() > static_cast<int>(a.size())) return false;

    // prefix_k(a) <= sum_j min(b_j, k) for every k
    std::vector<long long> count(a.size() + 2, 0);
    for (int d : b) count[static_cast<std::size_t>(std::min<int>(d, static_cast<int>(a.size())))]++;
    long long ge = static_cast<long long>(b.size()); // #{j : b_j >= k}
    long long below_sum = 0;                          // sum of b_j < k
    long long prefix = 0;
    for (std::size_t k = 1; k <= a.size(); ++k) {
        ge -= count[k - 1];
        if (k >= 2) below_sum += static_cast<long long>(k - 1) * count[k - 1];
        prefix += a[k - 1];
        const long long rhs = static_cast<long long>(k) * ge + below_sum;
        if (prefix > rhs) return false;
    }
    return true;
}

namespace {

void repair_to_bigraphic(DegreeSequence& s_v, DegreeSequence& s_h, int k_min) {
    while (!gale_ryser_bigraphic(s_v, s_h)) {
        const long long sum_v = std::accumulate(s_v.begin(), s_v.end(), 0LL);
        const long long sum_h = std::accumulate(s_h.begin(), s_h.end(), 0LL);
        DegreeSequence& side = sum_v >= sum_h ? s_v : s_h;
        auto it = std::max_element(side.begin(), side.end());
        if (*it <= k_min)
            throw ConstructionError("degree pair not realizable within k_min floor");
        --(*it);
    }
}

} // namespace

BipartiteGraph havel_hakimi_bipartite(DegreeSequence s_v, DegreeSequence s_h, int k_min) {
    const int n_v = static_cast<int>(s_v.size());
    const int n_h = static_cast<int>(s_h.size());
    if (n_v < 1 || n_h < 1) throw ParameterError("empty degree sequence");
    if (*std::max_element(s_v.begin(), s_v.end()) > n_h ||
        *std::max_element(s_h.begin(), s_h.end()) > n_v)
        throw ParameterError("degrees exceed the opposite side, cap first");

    repair_to_bigraphic(s_v, s_h, k_min);

    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(std::accumulate(s_v.begin(), s_v.end(), 0LL)));

    // hidden residuals as (degree, index); visible processed by descending
    // degree with index tie-break for determinism
    std::vector<int> vis_order(static_cast<std::size_t>(n_v));
    std::iota(vis_order.begin(), vis_order.end(), 0);
    std::stable_sort(vis_order.begin(), vis_order.end(),
                     [&](int a, int b) { return s_v[static_cast<std::size_t>(a)] > s_v[static_cast<std::size_t>(b)]; });

    std::vector<std::pair<int, int>> residual(static_cast<std::size_t>(n_h));
    for (int j = 0; j < n_h; ++j) residual[static_cast<std::size_t>(j)] = {s_h[static_cast<std::size_t>(j)], j};

    for (int i : vis_order) {
        const int d = s_v[static_cast<std::size_t>(i)];
        if (d == 0) continue;
        std::stable_sort(residual.begin(), residual.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        if (residual[static_cast<std::size_t>(d - 1)].first <= 0)
            throw ConstructionError("ran out of hidden capacity during construction");
        for (int t = 0; t < d; ++t) {
            edges.emplace_back(i, residual[static_cast<std::size_t>(t)].second);
            --residual[static_cast<std::size_t>(t)].first;
        }
    }
    return BipartiteGraph::from_edges(n_v, n_h, std::move(edges));
}

BipartiteGraph add_neighborhood_edges(const BipartiteGraph& g,
                                      const TopologyParams& params, Rng& rng) {
    params.validate();
    const int n_v = g.visible_count();
    const int n_h = g.hidden_count();
    auto key = [n_h](int i, int j) {
        return static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n_h) +
               static_cast<std::uint64_t>(j);
    };
    std::unordered_set<std::uint64_t> present;
    present.reserve(g.edge_count() * 2);
    for (const auto& [i, j] : g.edges()) present.insert(key(i, j));

    // 1-based centers match the published index convention; draws are mapped
    // back to 0-based storage on insertion
    for (int pass = 0; pass < params.phi; ++pass) {
        for (int i = 1; i <= n_v; ++i) {
            for (int trial = 0; trial < params.retry_budget; ++trial) {
                const double center = static_cast<double>(i) * n_h / n_v;
                const int j = static_cast<int>(std::ceil(draw_normal(rng, center, params.sigma_neigh)));
                if (j >= 1 && j <= n_h && present.insert(key(i - 1, j - 1)).second) break;
            }
        }
        for (int j = 1; j <= n_h; ++j) {
            for (int trial = 0; trial < params.retry_budget; ++trial) {
                const double center = static_cast<double>(j) * n_v / n_h;
                const int i = static_cast<int>(std::ceil(draw_normal(rng, center, params.sigma_neigh)));
                if (i >= 1 && i <= n_v && present.insert(key(i - 1, j - 1)).second) break;
            }
        }
    }

    std::vector<std::pair<int, int>> edges;
    edges.reserve(present.size());
    for (std::uint64_t k : present)
        edges.emplace_back(static_cast<int>(k / static_cast<std::uint64_t>(n_h)),
                           static_cast<int>(k % static_cast<std::uint64_t>(n_h)));
    return BipartiteGraph::from_edges(n_v, n_h, std::move(edges));
}

GenerationResult generate_topology(int n_v, int n_h, const TopologyParams& params,
                                   Rng& rng) {
    if (n_v <= 4 || n_h <= 4) throw ParameterError("need n_v > 4 and n_h > 4");
    params.validate();
    const double threshold = params.l_threshold > 0.0
                                 ? params.l_threshold
                                 : std::log(static_cast<double>(n_v + n_h));

    GenerationResult best;
    best.threshold = threshold;
    double best_l = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= params.max_outer_iterations; ++iter) {
        DegreeSequence seq = sample_power_law_degrees(n_v + n_h, params, rng);
        auto [s_v, s_h] = split_and_equalize(seq, n_v, n_h);
        cap_degrees(s_v, s_h);
        BipartiteGraph g;
        try {
            g = havel_hakimi_bipartite(std::move(s_v), std::move(s_h), params.k_min);
        } catch (const ConstructionError&) {
            continue; // resample the whole sequence
        }
        g = add_neighborhood_edges(g, params, rng);
        const PathStats ps = average_shortest_path(g);
        if (ps.average < best_l) {
            best_l = ps.average;
            best.graph = std::move(g);
            best.avg_shortest_path = ps.average;
            best.disconnected = ps.disconnected;
            best.iterations = iter;
        }
        if (ps.average <= threshold) {
            best.warning = false;
            return best;
        }
    }
    best.iterations = params.max_outer_iterations;
    best.warning = true;
    return best;
}

GenerationResult generate_topology(int n_v, int n_h, const TopologyParams& params) {
    Rng rng(params.seed);
    return generate_topology(n_v, n_h, params, rng);
}

std::vector<int> fit_to_data(const BipartiteGraph& g, std::span<const double> feature_std) {
    const int n_v = g.visible_count();
    if (static_cast<int>(feature_std.size()) != n_v)
        throw ParameterError("feature_std length must equal the visible count");
    for (double s : feature_std)
        if (s < 0.0) throw ParameterError("feature_std entries must be >= 0");

    std::vector<int> nodes(static_cast<std::size_t>(n_v)), feats(static_cast<std::size_t>(n_v));
    std::iota(nodes.begin(), nodes.end(), 0);
    std::iota(feats.begin(), feats.end(), 0);
    std::stable_sort(nodes.begin(), nodes.end(), [&](int a, int b) {
        return g.visible_degree(a) > g.visible_degree(b);
    });
    std::stable_sort(feats.begin(), feats.end(), [&](int a, int b) {
        return feature_std[static_cast<std::size_t>(a)] > feature_std[static_cast<std::size_t>(b)];
    });

    std::vector<int> perm(static_cast<std::size_t>(n_v));
    for (int rank = 0; rank < n_v; ++rank)
        perm[static_cast<std::size_t>(nodes[static_cast<std::size_t>(rank)])] =
            feats[static_cast<std::size_t>(rank)];
    return perm;
}

BipartiteGraph apply_visible_permutation(const BipartiteGraph& g, std::span<const int> perm) {
    if (static_cast<int>(perm.size()) != g.visible_count())
        throw ParameterError("permutation length must equal the visible count");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(g.edge_count());
    for (const auto& [i, j] : g.edges())
        edges.emplace_back(perm[static_cast<std::size_t>(i)], j);
    return BipartiteGraph::from_edges(g.visible_count(), g.hidden_count(), std::move(edges));
}

} // namespace xbm
