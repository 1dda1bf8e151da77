#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xbm/data.hpp"
#include "xbm/model.hpp"

namespace xbm {

struct TrainConfig {
    double learning_rate = 0.001;
    double momentum = 0.5;     ///< rho
    double weight_decay = 0.0002; ///< xi, applied to weights only
    int cd_steps = 1;
    /// When > cd_steps, the CD step count rises stepwise from cd_steps to
    /// cd_steps_final at equal epoch intervals, paired with a decaying
    /// learning rate alpha_t = learning_rate / (1 + t / T_half).
    int cd_steps_final = 0;
    bool lr_decay = false;
    int epochs = 100;
    int batch_size = 100;
    double init_std = 0.01;
    std::uint64_t seed = 0;

    void validate() const;
    int cd_steps_at(int epoch) const; ///< schedule lookup, 0-based epoch
};

/// Log-likelihood ascent directions, restricted to present edges.
struct GradientSet {
    std::vector<double> d_weights;
    std::vector<double> d_visible_bias;
    std::vector<double> d_hidden_bias;
};

struct Velocity {
    std::vector<double> weights;
    std::vector<double> visible_bias;
    std::vector<double> hidden_bias;

    static Velocity zeros_like(const BoltzmannMachine& m);
};

/// CD-n gradients over a batch: the positive phase uses data-clamped hidden
/// probabilities, the negative phase the state after n alternating Gibbs
/// steps from the data (probabilities for the final hidden statistics,
/// samples driving the chain). Batch-averaged.
GradientSet cd_gradients(const BoltzmannMachine& m, ConstMatrixView batch,
                         int gibbs_steps, Rng& rng);

/// velocity <- rho*velocity + alpha*(grad - xi*param); param += velocity.
/// Weight decay applies to weights only. lr_override, when set, replaces
/// cfg.learning_rate for this update.
void apply_update(BoltzmannMachine& m, const GradientSet& grads, Velocity& velocity,
                  const TrainConfig& cfg, std::optional<double> lr_override = {});

struct EpochStats {
    int epoch = 0;
    double rmse = 0.0;
    double pcc = 0.0;
    double learning_rate = 0.0;
    int cd_steps = 0;
};

/// Shuffled mini-batch CD training; emits per-epoch reconstruction metrics
/// over the training samples. Throws DivergenceError on non-finite
/// parameters and ParameterError on dataset/model kind mismatch.
std::vector<EpochStats> train(BoltzmannMachine& m, const Dataset& data,
                              const TrainConfig& cfg, Rng& rng);

/// i.i.d. Bernoulli mask with edge probability target_edges/(n_v*n_h).
/// Isolated units are possible and left as-is.
BipartiteGraph make_fixprob_mask(int n_v, int n_h, std::size_t target_edges, Rng& rng);

struct PruneStep {
    int iteration = 0;
    std::size_t edge_count = 0;
    double rmse = 0.0;
    double pcc = 0.0;
    double max_pruned_abs = 0.0; ///< largest |w| removed at this step
    double min_kept_abs = 0.0;   ///< smallest |w| surviving this step
};

struct TrPrTrResult {
    BoltzmannMachine model;
    std::vector<PruneStep> trace;
    int pruning_iterations = 0;
    bool target_reached = false;
};

/// Train-prune-retrain sparsification: train the dense model, then repeat
/// {prune the smallest-magnitude 20% of remaining weights (never below
/// target_edges), retrain} until the target or max_prune_iters is hit.
TrPrTrResult train_prune_train(const BoltzmannMachine& dense, const Dataset& data,
                               const TrainConfig& cfg, std::size_t target_edges,
                               Rng& rng, int max_prune_iters = 50);

} // namespace xbm
