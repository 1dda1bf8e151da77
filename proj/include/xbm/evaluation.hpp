#pragma once

#include <vector>

#include "xbm/data.hpp"
#include "xbm/model.hpp"

namespace xbm {

/// Metrics bundle mirroring the reported table columns. NaN marks values that
/// were not computed (e.g. log-probabilities for gaussian models).
struct EvalReport {
    double rmse = 0.0;
    double pcc = 0.0;
    double log_z_estimate = 0.0;
    double log_z_stderr = 0.0;
    double avg_train_logprob = 0.0;
    double avg_test_logprob = 0.0;
    std::size_t edge_count = 0;
    double avg_shortest_path = 0.0;
    double clustering_coefficient = 0.0;
    int pruning_iterations = 0;
};

double rmse(ConstMatrixView x, ConstMatrixView y);

/// Pearson correlation over all flattened entries. Throws ParameterError when
/// either argument has zero variance.
double pcc(ConstMatrixView x, ConstMatrixView y);

/// Deterministic mean-field pass: hidden probabilities from v, then visible
/// conditional means with the probabilities as soft states. No sampling.
std::vector<double> reconstruct(const BoltzmannMachine& m, std::span<const double> v);

/// log Z by exhaustive enumeration (binary kind, n_v+n_h <= 24) or by
/// analytic Gaussian integrals over v for each enumerated h (gaussian kind,
/// n_h <= 24). Throws SizeError over budget.
double exact_log_z(const BoltzmannMachine& m);

struct AisResult {
    double log_z = 0.0;
    double stderr_log_z = 0.0;
    int dropped_chains = 0; ///< chains with non-finite weights, excluded
};

/// Annealed importance sampling for the binary kind: anneal from a zero-weight
/// base-rate model (visible biases from clipped data marginals when provided,
/// zero otherwise) along a uniform beta ladder to the target. Returns the
/// log-mean-exp estimate with a delta-method standard error across chains.
AisResult ais_log_z(const BoltzmannMachine& m, int n_temps, int n_chains, Rng& rng,
                    std::span<const double> base_marginals = {});

/// Mean over samples of -free_energy(v) - log_z (binary kind).
double avg_log_prob(const BoltzmannMachine& m, ConstMatrixView data, double log_z);

/// Clamped Gibbs imputation: observed coordinates stay fixed, missing
/// visibles and all hiddens are resampled for gibbs_steps sweeps; returns the
/// mean of the last tail_window visible draws at the missing coordinates.
std::vector<double> impute_visible(const BoltzmannMachine& m,
                                   std::span<const double> v_observed,
                                   const std::vector<bool>& missing, int gibbs_steps,
                                   Rng& rng, int tail_window = 50);

/// Great-circle distance with Earth radius 6371 km; inputs in degrees.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

} // namespace xbm
