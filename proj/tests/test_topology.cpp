#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "helpers.hpp"
#include "xbm/topology.hpp"

using namespace xbm;

TEST_CASE("power-law degrees: single-point support") {
    TopologyParams p;
    p.k_min = 4;
    p.k_max = 4;
    Rng rng(1);
    const auto seq = sample_power_law_degrees(1, p, rng);
    CHECK(seq == DegreeSequence{4});
}

TEST_CASE("power-law degrees: invalid parameters") {
    Rng rng(1);
    TopologyParams p;
    p.gamma = 1.0;
    CHECK_THROWS_AS(sample_power_law_degrees(10, p, rng), ParameterError);
    p = {};
    p.k_min = 8;
    p.k_max = 4;
    CHECK_THROWS_AS(sample_power_law_degrees(10, p, rng), ParameterError);
    p = {};
    p.k_min = 20; // exceeds implied k_max = n
    CHECK_THROWS_AS(sample_power_law_degrees(10, p, rng), ParameterError);
}

TEST_CASE("power-law degrees: sorted descending, within support") {
    TopologyParams p;
    Rng rng(7);
    const auto seq = sample_power_law_degrees(500, p, rng);
    CHECK(std::is_sorted(seq.begin(), seq.end(), std::greater_equal<>()));
    CHECK(*std::min_element(seq.begin(), seq.end()) >= 4);
    CHECK(*std::max_element(seq.begin(), seq.end()) <= 500);
}

TEST_CASE("power-law degrees: chi-square fit against the exact mass function") {
    TopologyParams p;
    p.gamma = 2.0;
    p.k_min = 4;
    p.k_max = 100;
    const int n = 100000;
    Rng rng(12345);
    const auto seq = sample_power_law_degrees(n, p, rng);

    // exact normalized mass; P(4)/P(8) must be 4 under gamma = 2
    std::map<int, double> mass;
    double total = 0.0;
    for (int k = p.k_min; k <= p.k_max; ++k) total += std::pow(k, -p.gamma);
    for (int k = p.k_min; k <= p.k_max; ++k) mass[k] = std::pow(k, -p.gamma) / total;
    CHECK(mass[4] / mass[8] == doctest::Approx(4.0).epsilon(1e-12));

    std::map<int, int> observed;
    for (int d : seq) ++observed[d];

    // merge the tail so every expected bin count is >= 5
    double stat = 0.0;
    int bins = 0;
    double exp_acc = 0.0, obs_acc = 0.0;
    for (int k = p.k_min; k <= p.k_max; ++k) {
        exp_acc += n * mass[k];
        obs_acc += observed.count(k) ? observed[k] : 0;
        if (exp_acc >= 5.0 || k == p.k_max) {
            const double d = obs_acc - exp_acc;
            stat += d * d / exp_acc;
            ++bins;
            exp_acc = obs_acc = 0.0;
        }
    }
    const double critical = testing::chi_square_quantile(bins - 1, 0.01);
    CHECK(stat < critical);
}

TEST_CASE("split_and_equalize: symmetric input needs no additions") {
    const auto [s_v, s_h] = split_and_equalize({5, 5, 4, 4}, 2, 2);
    CHECK(s_v == DegreeSequence{5, 4});
    CHECK(s_h == DegreeSequence{5, 4});
}

TEST_CASE("split_and_equalize: hand-traced asymmetric case") {
    // alternation gives S_v=[6,4], S_h=[5,4]; remainder [4,4] goes hidden;
    // 7 extra degrees land on the visible side proportionally -> [10,7]
    const auto [s_v, s_h] = split_and_equalize({6, 5, 4, 4, 4, 4}, 2, 4);
    CHECK(s_v == DegreeSequence{10, 7});
    CHECK(s_h == DegreeSequence{5, 4, 4, 4});
    CHECK(std::accumulate(s_v.begin(), s_v.end(), 0) ==
          std::accumulate(s_h.begin(), s_h.end(), 0));
}

TEST_CASE("split_and_equalize: sums always match") {
    Rng rng(99);
    TopologyParams p;
    for (int trial = 0; trial < 20; ++trial) {
        const int n_v = 5 + static_cast<int>(rng() % 40);
        const int n_h = 5 + static_cast<int>(rng() % 40);
        const auto seq = sample_power_law_degrees(n_v + n_h, p, rng);
        const auto [s_v, s_h] = split_and_equalize(seq, n_v, n_h);
        CHECK(static_cast<int>(s_v.size()) == n_v);
        CHECK(static_cast<int>(s_h.size()) == n_h);
        CHECK(std::accumulate(s_v.begin(), s_v.end(), 0LL) ==
              std::accumulate(s_h.begin(), s_h.end(), 0LL));
        CHECK(std::is_sorted(s_v.begin(), s_v.end(), std::greater_equal<>()));
        CHECK(std::is_sorted(s_h.begin(), s_h.end(), std::greater_equal<>()));
    }
}

TEST_CASE("havel_hakimi: forced tiny graphs") {
    const auto single = havel_hakimi_bipartite({1}, {1});
    CHECK(single.edge_count() == 1);
    CHECK(single.has_edge(0, 0));

    const auto k22 = havel_hakimi_bipartite({2, 2}, {2, 2});
    CHECK(k22.edge_count() == 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(k22.has_edge(i, j));
}

TEST_CASE("gale_ryser matches brute-force realizability on small pairs") {
    Rng rng(4242);
    int agreements = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n_v = 2 + static_cast<int>(rng() % 3);
        const int n_h = 2 + static_cast<int>(rng() % 3);
        std::vector<int> s_v(static_cast<std::size_t>(n_v)), s_h(static_cast<std::size_t>(n_h));
        for (auto& d : s_v) d = static_cast<int>(rng() % (static_cast<std::uint64_t>(n_h) + 1));
        for (auto& d : s_h) d = static_cast<int>(rng() % (static_cast<std::uint64_t>(n_v) + 1));
        const bool fast = gale_ryser_bigraphic(s_v, s_h);
        const bool slow = testing::brute_force_bigraphic(s_v, s_h);
        CHECK(fast == slow);
        agreements += fast == slow;
    }
    CHECK(agreements == 200);
}

TEST_CASE("havel_hakimi realizes random bigraphic pairs exactly") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        // degree sequences of an actual random graph are bigraphic by construction
        const auto g = testing::random_mask(8, 8, 0.4, rng);
        std::vector<int> s_v(8), s_h(8);
        for (int i = 0; i < 8; ++i) s_v[static_cast<std::size_t>(i)] = g.visible_degree(i);
        for (int j = 0; j < 8; ++j) s_h[static_cast<std::size_t>(j)] = g.hidden_degree(j);
        REQUIRE(gale_ryser_bigraphic(s_v, s_h));
        const auto rebuilt = havel_hakimi_bipartite(s_v, s_h);
        for (int i = 0; i < 8; ++i) CHECK(rebuilt.visible_degree(i) == s_v[static_cast<std::size_t>(i)]);
        for (int j = 0; j < 8; ++j) CHECK(rebuilt.hidden_degree(j) == s_h[static_cast<std::size_t>(j)]);
    }
}

TEST_CASE("havel_hakimi repairs a non-bigraphic pair") {
    // sums differ, so the pair is not bigraphic as given
    const auto g = havel_hakimi_bipartite({3, 3, 3}, {3, 3, 2}, 1);
    CHECK(g.edge_count() == 8);
    long long dv = 0, dh = 0;
    for (int i = 0; i < 3; ++i) dv += g.visible_degree(i);
    for (int j = 0; j < 3; ++j) dh += g.hidden_degree(j);
    CHECK(dv == dh);
}

TEST_CASE("havel_hakimi refuses unrepairable pairs") {
    // k_min = 3 pins every degree at 3 on one side but the other demands more
    CHECK_THROWS_AS(havel_hakimi_bipartite({3, 3}, {2, 2, 2, 2}, 3), ConstructionError);
}

TEST_CASE("add_neighborhood_edges: zero passes change nothing") {
    Rng rng(5);
    const auto g = testing::random_mask(12, 12, 0.2, rng);
    TopologyParams p;
    p.phi = 0;
    const auto h = add_neighborhood_edges(g, p, rng);
    CHECK(h == g);
}

TEST_CASE("add_neighborhood_edges: degenerate spread hits the diagonal") {
    const int n = 10;
    // start from a ring-less sparse mask without diagonal edges
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 3) % n);
    auto g = BipartiteGraph::from_edges(n, n, std::move(edges));
    TopologyParams p;
    p.phi = 1;
    p.sigma_neigh = 1e-20; // draws collapse onto the center index
    Rng rng(9);
    const auto h = add_neighborhood_edges(g, p, rng);
    for (int i = 0; i < n; ++i) CHECK(h.has_edge(i, i));
}

TEST_CASE("add_neighborhood_edges: growth is bounded by phi*(n_v+n_h)") {
    Rng rng(11);
    for (int phi : {4, 5, 6}) {
        const auto g = testing::random_mask(30, 20, 0.1, rng);
        TopologyParams p;
        p.phi = phi;
        const auto h = add_neighborhood_edges(g, p, rng);
        CHECK(h.edge_count() >= g.edge_count());
        CHECK(h.edge_count() <= g.edge_count() + static_cast<std::size_t>(phi) * (30 + 20));
    }
}

TEST_CASE("average_shortest_path: closed forms") {
    CHECK(average_shortest_path(BipartiteGraph::complete(1, 1)).average == 1.0);

    const auto small = average_shortest_path(BipartiteGraph::complete(784, 20));
    CHECK(small.average == doctest::Approx(629932.0 / 322806.0).epsilon(1e-12));
    CHECK(small.average == doctest::Approx(1.9514).epsilon(1e-3));
    CHECK(std::abs(small.average - 1.94) < 0.02);

    const auto large = average_shortest_path(BipartiteGraph::complete(784, 500));
    CHECK(large.average == doctest::Approx(1255372.0 / 823686.0).epsilon(1e-12));
    CHECK(std::abs(large.average - 1.52) < 0.01);
}

TEST_CASE("average_shortest_path: disconnected graphs report the flag") {
    const auto g = BipartiteGraph::from_edges(2, 2, {{0, 0}, {1, 1}});
    const auto st = average_shortest_path(g);
    CHECK(st.disconnected);
    CHECK(st.average == 1.0); // both reachable pairs sit at distance 1
}

TEST_CASE("average_shortest_path: source sampling approximates the exact mean") {
    const auto g = BipartiteGraph::complete(150, 50);
    const auto exact = average_shortest_path(g);
    const auto sampled = average_shortest_path(g, /*exact_limit=*/100, /*sample_sources=*/120);
    CHECK(sampled.sampled);
    CHECK(sampled.average == doctest::Approx(exact.average).epsilon(0.05));
}

TEST_CASE("clustering: complete bipartite graphs score exactly 1") {
    for (int n_v : {2, 5, 9})
        for (int n_h : {3, 7}) {
            const auto st = bipartite_clustering_coefficient(BipartiteGraph::complete(n_v, n_h));
            CHECK(st.coefficient == 1.0);
            CHECK_FALSE(st.no_pairs);
        }
}

TEST_CASE("clustering: tiny asymmetric graph against the brute-force oracle") {
    // visible {1,2}, hidden {a,b}, edges {(1,a),(1,b),(2,b)}: every eligible
    // node averages a single pair overlap of 1/2
    const auto g = BipartiteGraph::from_edges(2, 2, {{0, 0}, {0, 1}, {1, 1}});
    const auto st = bipartite_clustering_coefficient(g);
    const auto oracle = testing::brute_force_clustering(g);
    CHECK(st.coefficient == doctest::Approx(oracle.coefficient).epsilon(1e-15));
    CHECK(st.coefficient == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("clustering: perfect matching has no distance-2 pairs") {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 5; ++i) edges.emplace_back(i, i);
    const auto g = BipartiteGraph::from_edges(5, 5, std::move(edges));
    const auto st = bipartite_clustering_coefficient(g);
    const auto oracle = testing::brute_force_clustering(g);
    CHECK(st.no_pairs);
    CHECK(oracle.no_pairs);
    CHECK(st.coefficient == 0.0);
}

TEST_CASE("clustering: random masks match the brute-force oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const auto g = testing::random_mask(6, 7, 0.35, rng);
        const auto st = bipartite_clustering_coefficient(g);
        const auto oracle = testing::brute_force_clustering(g);
        CHECK(st.no_pairs == oracle.no_pairs);
        CHECK(st.coefficient == doctest::Approx(oracle.coefficient).epsilon(1e-12));
    }
}

TEST_CASE("proposition check: dense masks have diameter 2 and clustering 1") {
    for (int n_v = 5; n_v <= 12; ++n_v)
        for (int n_h = 5; n_h <= 12; ++n_h) {
            const auto g = BipartiteGraph::complete(n_v, n_h);
            CHECK(diameter(g) == 2);
            CHECK(bipartite_clustering_coefficient(g).coefficient == 1.0);
        }
}

TEST_CASE("generate_topology: invariants at a small size") {
    TopologyParams p;
    p.seed = 3;
    const auto result = generate_topology(30, 25, p);
    CHECK(result.iterations >= 1);
    if (!result.warning)
        CHECK(result.avg_shortest_path <= std::log(55.0));

    long long dv = 0, dh = 0;
    for (int i = 0; i < 30; ++i) dv += result.graph.visible_degree(i);
    for (int j = 0; j < 25; ++j) dh += result.graph.hidden_degree(j);
    CHECK(dv == dh);
    CHECK(static_cast<std::size_t>(dv) == result.graph.edge_count());
}

TEST_CASE("generate_topology: deterministic per seed, byte for byte") {
    TopologyParams p;
    p.seed = 17;
    const auto a = generate_topology(20, 20, p);
    const auto b = generate_topology(20, 20, p);
    std::ostringstream sa, sb;
    a.graph.save_binary(sa);
    b.graph.save_binary(sb);
    CHECK(sa.str() == sb.str());

    p.seed = 18;
    const auto c = generate_topology(20, 20, p);
    std::ostringstream sc;
    c.graph.save_binary(sc);
    CHECK(sa.str() != sc.str());
}

TEST_CASE("generate_topology: size preconditions") {
    TopologyParams p;
    CHECK_THROWS_AS(generate_topology(4, 10, p), ParameterError);
    CHECK_THROWS_AS(generate_topology(10, 4, p), ParameterError);
}

TEST_CASE("generate_topology: median outer iterations is 1 at 100x100") {
    TopologyParams p;
    std::vector<int> iters;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        p.seed = seed;
        const auto r = generate_topology(100, 100, p);
        CHECK_FALSE(r.warning);
        CHECK(r.avg_shortest_path <= std::log(200.0));
        iters.push_back(r.iterations);
    }
    std::sort(iters.begin(), iters.end());
    CHECK(iters[iters.size() / 2] == 1);
}

TEST_CASE("generate_topology: impossible threshold raises the warning flag") {
    TopologyParams p;
    p.seed = 1;
    p.l_threshold = 0.5; // below the bipartite minimum of 1
    p.max_outer_iterations = 3;
    const auto r = generate_topology(10, 10, p);
    CHECK(r.warning);
    CHECK(r.iterations == 3);
}

TEST_CASE("fit_to_data: rank pairing from the worked example") {
    // degrees (5,2,7) against stds (0.1, 3.0, 1.0)
    const auto g = BipartiteGraph::from_edges(
        3, 7,
        [] {
            std::vector<std::pair<int, int>> e;
            for (int j = 0; j < 5; ++j) e.emplace_back(0, j);
            for (int j = 0; j < 2; ++j) e.emplace_back(1, j);
            for (int j = 0; j < 7; ++j) e.emplace_back(2, j);
            return e;
        }());
    const std::vector<double> stds{0.1, 3.0, 1.0};
    const auto perm = fit_to_data(g, stds);
    CHECK(perm == std::vector<int>{2, 0, 1}); // node1->f3, node2->f1, node3->f2

    const auto fitted = apply_visible_permutation(g, perm);
    CHECK(fitted.visible_degree(1) == 7); // highest std feature gets degree 7
    CHECK(fitted.visible_degree(2) == 5);
    CHECK(fitted.visible_degree(0) == 2);
}

TEST_CASE("fit_to_data: all ties resolve to the identity") {
    const auto g = BipartiteGraph::complete(4, 3); // uniform degrees
    const std::vector<double> stds(4, 1.0);
    CHECK(fit_to_data(g, stds) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("fit_to_data: refitting an already fitted graph is the identity") {
    // distinct degrees 1..4 and distinct stds make the rank pairing unique
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j) edges.emplace_back(i, j);
    const auto g = BipartiteGraph::from_edges(4, 5, std::move(edges));
    const std::vector<double> stds{0.3, 2.0, 1.1, 0.05};
    const auto fitted = apply_visible_permutation(g, fit_to_data(g, stds));
    CHECK(fit_to_data(fitted, stds) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("fit_to_data: mismatched length is rejected") {
    const auto g = BipartiteGraph::complete(3, 3);
    CHECK_THROWS_AS(fit_to_data(g, std::vector<double>{1.0, 2.0}), ParameterError);
}

TEST_CASE("graph text serialization matches the declared layout") {
    const auto g = BipartiteGraph::from_edges(2, 3, {{1, 0}, {0, 2}, {0, 0}});
    std::ostringstream os;
    g.save_text(os);
    CHECK(os.str() == "bipartite 2 3 3\n1 1\n1 3\n2 1\n");
    std::istringstream is(os.str());
    CHECK(BipartiteGraph::load_text(is) == g);
}

TEST_CASE("graph binary serialization round-trips") {
    Rng rng(8);
    const auto g = testing::random_mask(17, 9, 0.3, rng);
    std::ostringstream os;
    g.save_binary(os);
    std::istringstream is(os.str());
    CHECK(BipartiteGraph::load_binary(is) == g);
}

TEST_CASE("scale-freeness proxy: log-log degree slope at 1000x1000") {
    TopologyParams p;
    p.seed = 21;
    const auto r = generate_topology(1000, 1000, p);
    std::map<int, int> freq;
    for (int i = 0; i < 1000; ++i) ++freq[r.graph.visible_degree(i)];
    for (int j = 0; j < 1000; ++j) ++freq[r.graph.hidden_degree(j)];
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& [deg, count] : freq) {
        if (deg < 4 || deg > 100 || count == 0) continue;
        const double x = std::log(static_cast<double>(deg));
        const double y = std::log(static_cast<double>(count));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    REQUIRE(n > 5);
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope > -2.8);
    CHECK(slope < -1.4);
}
