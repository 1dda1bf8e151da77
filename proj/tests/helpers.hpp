#pragma once

// Shared fixtures and independent oracles for the test suites. Everything in
// here deliberately avoids the library's fast paths: enumeration goes through
// energy() only, clustering and realizability are recomputed from scratch.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "xbm/evaluation.hpp"
#include "xbm/model.hpp"
#include "xbm/topology.hpp"

namespace xbm::testing {

inline BipartiteGraph random_mask(int n_v, int n_h, double density, Rng& rng,
                                  bool ensure_nonempty = true) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n_v; ++i)
        for (int j = 0; j < n_h; ++j)
            if (draw_uniform(rng) < density) edges.emplace_back(i, j);
    if (ensure_nonempty && edges.empty()) edges.emplace_back(0, 0);
    return BipartiteGraph::from_edges(n_v, n_h, std::move(edges));
}

inline BoltzmannMachine random_machine(VisibleKind kind, const BipartiteGraph& g,
                                       Rng& rng, double scale = 1.0) {
    BoltzmannMachine m;
    m.kind = kind;
    m.graph = g;
    m.weights.resize(g.edge_count());
    for (auto& w : m.weights) w = scale * draw_normal(rng);
    m.visible_bias.resize(static_cast<std::size_t>(g.visible_count()));
    for (auto& a : m.visible_bias) a = scale * draw_normal(rng);
    m.hidden_bias.resize(static_cast<std::size_t>(g.hidden_count()));
    for (auto& b : m.hidden_bias) b = scale * draw_normal(rng);
    if (kind == VisibleKind::gaussian)
        m.sigma.assign(static_cast<std::size_t>(g.visible_count()), 1.0);
    return m;
}

/// Dense twin: complete mask, absent edges carried with weight zero.
inline BoltzmannMachine dense_twin(const BoltzmannMachine& m) {
    BoltzmannMachine d;
    d.kind = m.kind;
    d.graph = BipartiteGraph::complete(m.visible_count(), m.hidden_count());
    d.weights.assign(d.graph.edge_count(), 0.0);
    const auto& edges = m.graph.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [i, j] = edges[e];
        d.weights[static_cast<std::size_t>(i) * static_cast<std::size_t>(m.hidden_count()) +
                  static_cast<std::size_t>(j)] = m.weights[e];
    }
    d.visible_bias = m.visible_bias;
    d.hidden_bias = m.hidden_bias;
    d.sigma = m.sigma;
    return d;
}

inline std::vector<double> bits_of(std::uint64_t mask, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = (mask >> k) & 1 ? 1.0 : 0.0;
    return v;
}

/// Partition function of a tiny binary machine via energy() alone.
inline double enumerate_z(const BoltzmannMachine& m) {
    double z = 0.0;
    for (std::uint64_t mv = 0; mv < (1ull << m.visible_count()); ++mv) {
        const auto v = bits_of(mv, m.visible_count());
        for (std::uint64_t mh = 0; mh < (1ull << m.hidden_count()); ++mh) {
            const auto h = bits_of(mh, m.hidden_count());
            z += std::exp(-energy(m, v, h));
        }
    }
    return z;
}

/// Unnormalized visible marginal via energy() alone.
inline double enumerate_marginal(const BoltzmannMachine& m, std::span<const double> v) {
    double s = 0.0;
    for (std::uint64_t mh = 0; mh < (1ull << m.hidden_count()); ++mh) {
        const auto h = bits_of(mh, m.hidden_count());
        s += std::exp(-energy(m, std::vector<double>(v.begin(), v.end()), h));
    }
    return s;
}

/// p(h_j = 1 | v) through the Gibbs ratio of two energies.
inline double gibbs_ratio_hidden(const BoltzmannMachine& m, std::span<const double> v, int j) {
    std::vector<double> h0(static_cast<std::size_t>(m.hidden_count()), 0.0);
    std::vector<double> h1 = h0;
    h1[static_cast<std::size_t>(j)] = 1.0;
    const std::vector<double> vv(v.begin(), v.end());
    const double e0 = std::exp(-energy(m, vv, h0));
    const double e1 = std::exp(-energy(m, vv, h1));
    return e1 / (e0 + e1);
}

inline double gibbs_ratio_visible(const BoltzmannMachine& m, std::span<const double> h, int i) {
    std::vector<double> v0(static_cast<std::size_t>(m.visible_count()), 0.0);
    std::vector<double> v1 = v0;
    v1[static_cast<std::size_t>(i)] = 1.0;
    const std::vector<double> hh(h.begin(), h.end());
    const double e0 = std::exp(-energy(m, v0, hh));
    const double e1 = std::exp(-energy(m, v1, hh));
    return e1 / (e0 + e1);
}

/// Brute-force bigraphic test: does any simple bipartite graph realize the
/// pair? Only viable for n_v*n_h <= 20 or so.
inline bool brute_force_bigraphic(const std::vector<int>& s_v, const std::vector<int>& s_h) {
    const int n_v = static_cast<int>(s_v.size());
    const int n_h = static_cast<int>(s_h.size());
    const int cells = n_v * n_h;
    for (std::uint64_t mask = 0; mask < (1ull << cells); ++mask) {
        std::vector<int> dv(s_v.size(), 0), dh(s_h.size(), 0);
        for (int c = 0; c < cells; ++c) {
            if ((mask >> c) & 1) {
                ++dv[static_cast<std::size_t>(c / n_h)];
                ++dh[static_cast<std::size_t>(c % n_h)];
            }
        }
        if (dv == s_v && dh == s_h) return true;
    }
    return false;
}

/// Independent Latapy coefficient via explicit neighbor sets.
inline ClusteringStats brute_force_clustering(const BipartiteGraph& g) {
    const int n_v = g.visible_count();
    const int n_h = g.hidden_count();
    std::vector<std::set<int>> nv(static_cast<std::size_t>(n_v)), nh(static_cast<std::size_t>(n_h));
    for (const auto& [i, j] : g.edges()) {
        nv[static_cast<std::size_t>(i)].insert(j);
        nh[static_cast<std::size_t>(j)].insert(i);
    }
    auto side = [](const std::vector<std::set<int>>& ns, double& sum, std::size_t& cnt) {
        const int n = static_cast<int>(ns.size());
        for (int u = 0; u < n; ++u) {
            double acc = 0.0;
            int pairs = 0;
            for (int w = 0; w < n; ++w) {
                if (w == u) continue;
                std::vector<int> inter, uni;
                std::set_intersection(ns[static_cast<std::size_t>(u)].begin(), ns[static_cast<std::size_t>(u)].end(),
                                      ns[static_cast<std::size_t>(w)].begin(), ns[static_cast<std::size_t>(w)].end(),
                                      std::back_inserter(inter));
                if (inter.empty()) continue;
                std::set_union(ns[static_cast<std::size_t>(u)].begin(), ns[static_cast<std::size_t>(u)].end(),
                               ns[static_cast<std::size_t>(w)].begin(), ns[static_cast<std::size_t>(w)].end(),
                               std::back_inserter(uni));
                acc += static_cast<double>(inter.size()) / static_cast<double>(uni.size());
                ++pairs;
            }
            if (pairs > 0) {
                sum += acc / pairs;
                ++cnt;
            }
        }
    };
    double sum = 0.0;
    std::size_t cnt = 0;
    side(nv, sum, cnt);
    side(nh, sum, cnt);
    ClusteringStats st;
    if (cnt == 0) {
        st.no_pairs = true;
        return st;
    }
    st.coefficient = sum / static_cast<double>(cnt);
    return st;
}

/// Upper chi-square quantile via the Wilson-Hilferty approximation.
inline double chi_square_quantile(int df, double p_upper_tail) {
    // z for the standard normal upper tail, hard-coded for the cases we use
    double z;
    if (p_upper_tail == 0.01)
        z = 2.3263478740408408;
    else if (p_upper_tail == 0.05)
        z = 1.6448536269514722;
    else
        z = 3.0902323061678132; // 0.001
    const double d = static_cast<double>(df);
    const double t = 1.0 - 2.0 / (9.0 * d) + z * std::sqrt(2.0 / (9.0 * d));
    return d * t * t * t;
}

} // namespace xbm::testing
