#include "xbm/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xbm/evaluation.hpp"

namespace xbm {

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) throw ParameterError("learning_rate must be > 0");
    if (momentum < 0.0 || momentum >= 1.0) throw ParameterError("momentum must be in [0,1)");
    if (weight_decay < 0.0) throw ParameterError("weight_decay must be >= 0");
    if (cd_steps < 1) throw ParameterError("cd_steps must be >= 1");
    if (cd_steps_final != 0 && cd_steps_final < cd_steps)
        throw ParameterError("cd_steps_final must be 0 or >= cd_steps");
    if (epochs < 0) throw ParameterError("epochs must be >= 0");
    if (batch_size < 1) throw ParameterError("batch_size must be >= 1");
    if (init_std < 0.0) throw ParameterError("init_std must be >= 0");
}

int TrainConfig::cd_steps_at(int epoch) const {
    if (cd_steps_final <= cd_steps || epochs <= 0) return cd_steps;
    // stepwise rise at equal epoch intervals
    const int levels = cd_steps_final - cd_steps + 1;
    int level = static_cast<int>(
        (static_cast<long long>(epoch) * levels) / epochs);
    level = std::min(level, levels - 1);
    return cd_steps + level;
}

Velocity Velocity::zeros_like(const BoltzmannMachine& m) {
    Velocity v;
    v.weights.assign(m.weights.size(), 0.0);
    v.visible_bias.assign(m.visible_bias.size(), 0.0);
    v.hidden_bias.assign(m.hidden_bias.size(), 0.0);
    return v;
}

GradientSet cd_gradients(const BoltzmannMachine& m, ConstMatrixView batch,
                         int gibbs_steps, Rng& rng) {
    if (batch.rows == 0) throw ParameterError("empty batch");
    if (batch.cols != static_cast<std::size_t>(m.visible_count()))
        throw ParameterError("batch feature count mismatch");
    if (gibbs_steps < 1) throw ParameterError("gibbs_steps must be >= 1");

    const bool gaussian = m.kind == VisibleKind::gaussian;
    GradientSet g;
    g.d_weights.assign(m.weights.size(), 0.0);
    g.d_visible_bias.assign(m.visible_bias.size(), 0.0);
    g.d_hidden_bias.assign(m.hidden_bias.size(), 0.0);

    const auto& edges = m.graph.edges();
    std::vector<double> v_chain;
    for (std::size_t r = 0; r < batch.rows; ++r) {
        const auto v0 = batch.row(r);
        const std::vector<double> h0_prob = hidden_conditional(m, v0);

        // n alternating Gibbs steps from the data
        std::vector<double> h_state(h0_prob);
        for (auto& x : h_state) x = draw_bernoulli(rng, x) ? 1.0 : 0.0;
        for (int step = 0; step < gibbs_steps; ++step) {
            v_chain = sample_visible(m, h_state, rng);
            if (step + 1 < gibbs_steps) h_state = sample_hidden(m, v_chain, rng);
        }
        const std::vector<double> hn_prob = hidden_conditional(m, v_chain);

        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto [i, j] = edges[e];
            double v0i = v0[static_cast<std::size_t>(i)];
            double vni = v_chain[static_cast<std::size_t>(i)];
            if (gaussian) {
                v0i /= m.sigma[static_cast<std::size_t>(i)];
                vni /= m.sigma[static_cast<std::size_t>(i)];
            }
            g.d_weights[e] += v0i * h0_prob[static_cast<std::size_t>(j)] -
                              vni * hn_prob[static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < m.visible_count(); ++i) {
            double diff = v0[static_cast<std::size_t>(i)] - v_chain[static_cast<std::size_t>(i)];
            if (gaussian) {
                const double s = m.sigma[static_cast<std::size_t>(i)];
                diff /= s * s;
            }
            g.d_visible_bias[static_cast<std::size_t>(i)] += diff;
        }
        for (int j = 0; j < m.hidden_count(); ++j)
            g.d_hidden_bias[static_cast<std::size_t>(j)] +=
                h0_prob[static_cast<std::size_t>(j)] - hn_prob[static_cast<std::size_t>(j)];
    }

    const double inv = 1.0 / static_cast<double>(batch.rows);
    for (auto& x : g.d_weights) x *= inv;
    for (auto& x : g.d_visible_bias) x *= inv;
    for (auto& x : g.d_hidden_bias) x *= inv;
    return g;
}

void apply_update(BoltzmannMachine& m, const GradientSet& grads, Velocity& velocity,
                  const TrainConfig& cfg, std::optional<double> lr_override) {
    if (grads.d_weights.size() != m.weights.size() ||
        grads.d_visible_bias.size() != m.visible_bias.size() ||
        grads.d_hidden_bias.size() != m.hidden_bias.size())
        throw ParameterError("gradient shape mismatch");
    const double alpha = lr_override.value_or(cfg.learning_rate);
    const double rho = cfg.momentum;
    const double xi = cfg.weight_decay;
    for (std::size_t e = 0; e < m.weights.size(); ++e) {
        velocity.weights[e] = rho * velocity.weights[e] +
                              alpha * (grads.d_weights[e] - xi * m.weights[e]);
        m.weights[e] += velocity.weights[e];
    }
    for (std::size_t i = 0; i < m.visible_bias.size(); ++i) {
        velocity.visible_bias[i] =
            rho * velocity.visible_bias[i] + alpha * grads.d_visible_bias[i];
        m.visible_bias[i] += velocity.visible_bias[i];
    }
    for (std::size_t j = 0; j < m.hidden_bias.size(); ++j) {
        velocity.hidden_bias[j] =
            rho * velocity.hidden_bias[j] + alpha * grads.d_hidden_bias[j];
        m.hidden_bias[j] += velocity.hidden_bias[j];
    }
}

namespace {

void check_kind(const BoltzmannMachine& m, const Dataset& data) {
    const bool binary_model = m.kind == VisibleKind::binary;
    const bool binary_data = data.kind == Dataset::Kind::binary;
    if (binary_model != binary_data)
        throw ParameterError("dataset kind does not match the model kind");
    if (data.n_features != static_cast<std::size_t>(m.visible_count()))
        throw ParameterError("dataset feature count does not match the model");
}

void check_finite(const BoltzmannMachine& m, int epoch) {
    auto bad = [](double x) { return !std::isfinite(x); };
    if (std::any_of(m.weights.begin(), m.weights.end(), bad) ||
        std::any_of(m.visible_bias.begin(), m.visible_bias.end(), bad) ||
        std::any_of(m.hidden_bias.begin(), m.hidden_bias.end(), bad))
        throw DivergenceError("non-finite parameters after epoch " + std::to_string(epoch));
}

std::pair<double, double> reconstruction_metrics(const BoltzmannMachine& m,
                                                 ConstMatrixView data) {
    std::vector<double> recon(data.rows * data.cols);
    for (std::size_t r = 0; r < data.rows; ++r) {
        const auto out = reconstruct(m, data.row(r));
        std::copy(out.begin(), out.end(), recon.begin() + static_cast<std::ptrdiff_t>(r * data.cols));
    }
    const ConstMatrixView rv{recon.data(), data.rows, data.cols};
    double p;
    try {
        p = pcc(data, rv);
    } catch (const ParameterError&) {
        p = 0.0; // constant reconstruction, e.g. untrained zero model
    }
    return {rmse(data, rv), p};
}

} // namespace

std::vector<EpochStats> train(BoltzmannMachine& m, const Dataset& data,
                              const TrainConfig& cfg, Rng& rng) {
    cfg.validate();
    check_kind(m, data);
    if (data.n_samples == 0) throw ParameterError("empty dataset");

    std::vector<EpochStats> trace;
    const long long total_updates =
        static_cast<long long>(cfg.epochs) *
        static_cast<long long>((data.n_samples + cfg.batch_size - 1) / cfg.batch_size);
    const double t_half = std::max(1.0, static_cast<double>(total_updates) / 2.0);
    long long update = 0;

    std::vector<std::size_t> order(data.n_samples);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> batch_buf;

    Velocity velocity = Velocity::zeros_like(m);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            const auto pick = k + rng() % (order.size() - k);
            std::swap(order[k], order[pick]);
        }
        const int steps = cfg.cd_steps_at(epoch);
        for (std::size_t start = 0; start < data.n_samples;
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(data.n_samples, start + static_cast<std::size_t>(cfg.batch_size));
            batch_buf.resize((stop - start) * data.n_features);
            for (std::size_t r = start; r < stop; ++r) {
                const auto src = data.row(order[r]);
                std::copy(src.begin(), src.end(),
                          batch_buf.begin() + static_cast<std::ptrdiff_t>((r - start) * data.n_features));
            }
            const ConstMatrixView batch{batch_buf.data(), stop - start, data.n_features};
            const GradientSet grads = cd_gradients(m, batch, steps, rng);
            double lr = cfg.learning_rate;
            if (cfg.lr_decay)
                lr = cfg.learning_rate / (1.0 + static_cast<double>(update) / t_half);
            apply_update(m, grads, velocity, cfg, lr);
            ++update;
        }
        check_finite(m, epoch);
        const auto [e_rmse, e_pcc] = reconstruction_metrics(m, data.view());
        double lr_now = cfg.learning_rate;
        if (cfg.lr_decay)
            lr_now = cfg.learning_rate / (1.0 + static_cast<double>(update) / t_half);
        trace.push_back({epoch, e_rmse, e_pcc, lr_now, steps});
    }
    return trace;
}

BipartiteGraph make_fixprob_mask(int n_v, int n_h, std::size_t target_edges, Rng& rng) {
    const std::size_t cells = static_cast<std::size_t>(n_v) * static_cast<std::size_t>(n_h);
    if (target_edges == 0 || target_edges > cells)
        throw ParameterError("target_edges must be in (0, n_v*n_h]");
    const double p = static_cast<double>(target_edges) / static_cast<double>(cells);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(target_edges + target_edges / 4);
    for (int i = 0; i < n_v; ++i)
        for (int j = 0; j < n_h; ++j)
            if (draw_bernoulli(rng, p)) edges.emplace_back(i, j);
    return BipartiteGraph::from_edges(n_v, n_h, std::move(edges));
}

TrPrTrResult train_prune_train(const BoltzmannMachine& dense, const Dataset& data,
                               const TrainConfig& cfg, std::size_t target_edges,
                               Rng& rng, int max_prune_iters) {
    if (target_edges > dense.edge_count())
        throw ParameterError("target_edges exceeds the current edge count");

    TrPrTrResult result;
    result.model = dense;
    train(result.model, data, cfg, rng);

    while (result.model.edge_count() > target_edges &&
           result.pruning_iterations < max_prune_iters) {
        // prune the smallest-magnitude 20% of remaining weights, at least one,
        // never below the target
        const std::size_t current = result.model.edge_count();
        std::size_t prune_count = current / 5;
        prune_count = std::max<std::size_t>(prune_count, 1);
        prune_count = std::min(prune_count, current - target_edges);

        std::vector<std::size_t> order(current);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(result.model.weights[a]) < std::abs(result.model.weights[b]);
        });
        std::vector<bool> keep(current, true);
        for (std::size_t t = 0; t < prune_count; ++t) keep[order[t]] = false;
        const double max_pruned = std::abs(result.model.weights[order[prune_count - 1]]);
        const double min_kept =
            prune_count < current ? std::abs(result.model.weights[order[prune_count]]) : 0.0;

        std::vector<std::pair<int, int>> edges;
        std::vector<double> weights;
        edges.reserve(current - prune_count);
        weights.reserve(current - prune_count);
        for (std::size_t e = 0; e < current; ++e) {
            if (!keep[e]) continue;
            edges.push_back(result.model.graph.edges()[e]);
            weights.push_back(result.model.weights[e]);
        }
        BoltzmannMachine pruned;
        pruned.kind = result.model.kind;
        pruned.graph = BipartiteGraph::from_edges(result.model.visible_count(),
                                                  result.model.hidden_count(),
                                                  std::move(edges));
        pruned.weights = std::move(weights); // canonical order is preserved by subset
        pruned.visible_bias = result.model.visible_bias;
        pruned.hidden_bias = result.model.hidden_bias;
        pruned.sigma = result.model.sigma;
        result.model = std::move(pruned);

        const auto trace = train(result.model, data, cfg, rng);
        ++result.pruning_iterations;
        PruneStep step;
        step.iteration = result.pruning_iterations;
        step.edge_count = result.model.edge_count();
        step.max_pruned_abs = max_pruned;
        step.min_kept_abs = min_kept;
        if (!trace.empty()) {
            step.rmse = trace.back().rmse;
            step.pcc = trace.back().pcc;
        }
        result.trace.push_back(step);
    }
    result.target_reached = result.model.edge_count() <= target_edges;
    return result;
}

} // namespace xbm
