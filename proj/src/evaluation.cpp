#include "xbm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace xbm {

double rmse(ConstMatrixView x, ConstMatrixView y) {
    if (x.rows != y.rows || x.cols != y.cols) throw ParameterError("shape mismatch");
    if (x.size() == 0) throw ParameterError("empty input");
    double acc = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double d = x.data[t] - y.data[t];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(x.size()));
}

double pcc(ConstMatrixView x, ConstMatrixView y) {
    if (x.rows != y.rows || x.cols != y.cols) throw ParameterError("shape mismatch");
    const std::size_t n = x.size();
    if (n == 0) throw ParameterError("empty input");
    double mx = 0.0, my = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        mx += x.data[t];
        my += y.data[t];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dx = x.data[t] - mx;
        const double dy = y.data[t] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw ParameterError("pcc undefined for zero-variance input");
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> reconstruct(const BoltzmannMachine& m, std::span<const double> v) {
    const std::vector<double> h_prob = hidden_conditional(m, v);
    return visible_conditional(m, h_prob);
}

namespace {

constexpr int kEnumerationBudget = 24;

double log_sum_exp(const std::vector<double>& xs) {
    const double mx = *std::max_element(xs.begin(), xs.end());
    if (!std::isfinite(mx)) return mx;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - mx);
    return mx + std::log(acc);
}

inline double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

} // namespace

double exact_log_z(const BoltzmannMachine& m) {
    const int n_v = m.visible_count();
    const int n_h = m.hidden_count();
    if (m.kind == VisibleKind::binary) {
        if (n_v + n_h > kEnumerationBudget)
            throw SizeError("model too large for exhaustive enumeration");
        // sum over visible states of exp(-F(v)); F already marginalizes h
        std::vector<double> terms;
        terms.reserve(std::size_t{1} << n_v);
        std::vector<double> v(static_cast<std::size_t>(n_v), 0.0);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_v); ++mask) {
            for (int i = 0; i < n_v; ++i)
                v[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1.0 : 0.0;
            terms.push_back(-free_energy(m, v));
        }
        return log_sum_exp(terms);
    }

    if (n_h > kEnumerationBudget)
        throw SizeError("hidden layer too large for exhaustive enumeration");
    // For each h, integrating exp(-E(v,h)) over v gives
    //   prod_i sqrt(2 pi sigma_i^2) * exp(m_i a_i / sigma_i + m_i^2 / 2)
    // with m_i = sum_{j in Gamma_i} h_j w_ij.
    double const_term = 0.0;
    for (int i = 0; i < n_v; ++i)
        const_term += 0.5 * std::log(2.0 * M_PI * m.sigma[static_cast<std::size_t>(i)] *
                                     m.sigma[static_cast<std::size_t>(i)]);
    std::vector<double> terms;
    terms.reserve(std::size_t{1} << n_h);
    std::vector<double> h(static_cast<std::size_t>(n_h), 0.0);
    std::vector<double> acc(static_cast<std::size_t>(n_v), 0.0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_h); ++mask) {
        for (int j = 0; j < n_h; ++j)
            h[static_cast<std::size_t>(j)] = (mask >> j) & 1 ? 1.0 : 0.0;
        std::fill(acc.begin(), acc.end(), 0.0);
        const auto& edges = m.graph.edges();
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto [i, j] = edges[e];
            acc[static_cast<std::size_t>(i)] += h[static_cast<std::size_t>(j)] * m.weights[e];
        }
        double log_term = const_term;
        for (int j = 0; j < n_h; ++j)
            log_term += h[static_cast<std::size_t>(j)] * m.hidden_bias[static_cast<std::size_t>(j)];
        for (int i = 0; i < n_v; ++i) {
            const double mi = acc[static_cast<std::size_t>(i)];
            log_term += mi * m.visible_bias[static_cast<std::size_t>(i)] /
                            m.sigma[static_cast<std::size_t>(i)] +
                        0.5 * mi * mi;
        }
        terms.push_back(log_term);
    }
    return log_sum_exp(terms);
}

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log of the tempered unnormalized visible marginal
//   f_b(v) = exp(((1-b) a_base + b a) . v) * prod_j (1 + exp(b (b_j + x_j)))
double ais_log_f(const BoltzmannMachine& m, std::span<const double> base_bias,
                 std::span<const double> v, double beta) {
    double acc = 0.0;
    for (int i = 0; i < m.visible_count(); ++i)
        acc += ((1.0 - beta) * base_bias[static_cast<std::size_t>(i)] +
                beta * m.visible_bias[static_cast<std::size_t>(i)]) *
               v[static_cast<std::size_t>(i)];
    for (int j = 0; j < m.hidden_count(); ++j) {
        double x = m.hidden_bias[static_cast<std::size_t>(j)];
        const auto neighbors = m.graph.visible_neighbors(j);
        const auto eids = m.graph.hidden_edge_ids(j);
        for (std::size_t t = 0; t < neighbors.size(); ++t)
            x += v[static_cast<std::size_t>(neighbors[t])] * m.weights[eids[t]];
        acc += softplus(beta * x);
    }
    return acc;
}

// one tempered alternating Gibbs sweep, in place
void ais_gibbs_sweep(const BoltzmannMachine& m, std::span<const double> base_bias,
                     std::vector<double>& v, double beta, Rng& rng) {
    const int n_h = m.hidden_count();
    std::vector<double> h(static_cast<std::size_t>(n_h));
    for (int j = 0; j < n_h; ++j) {
        double x = m.hidden_bias[static_cast<std::size_t>(j)];
        const auto neighbors = m.graph.visible_neighbors(j);
        const auto eids = m.graph.hidden_edge_ids(j);
        for (std::size_t t = 0; t < neighbors.size(); ++t)
            x += v[static_cast<std::size_t>(neighbors[t])] * m.weights[eids[t]];
        h[static_cast<std::size_t>(j)] = draw_bernoulli(rng, sigmoid(beta * x)) ? 1.0 : 0.0;
    }
    for (int i = 0; i < m.visible_count(); ++i) {
        double x = beta * m.visible_bias[static_cast<std::size_t>(i)] +
                   (1.0 - beta) * base_bias[static_cast<std::size_t>(i)];
        const auto neighbors = m.graph.hidden_neighbors(i);
        const auto eids = m.graph.visible_edge_ids(i);
        double acc = 0.0;
        for (std::size_t t = 0; t < neighbors.size(); ++t)
            acc += h[static_cast<std::size_t>(neighbors[t])] * m.weights[eids[t]];
        x += beta * acc;
        v[static_cast<std::size_t>(i)] = draw_bernoulli(rng, sigmoid(x)) ? 1.0 : 0.0;
    }
}

} // namespace

AisResult ais_log_z(const BoltzmannMachine& m, int n_temps, int n_chains, Rng& rng,
                    std::span<const double> base_marginals) {
    if (m.kind != VisibleKind::binary)
        throw ParameterError("AIS is implemented for the binary kind");
    if (n_temps < 2 || n_chains < 1) throw ParameterError("need n_temps >= 2, n_chains >= 1");

    const int n_v = m.visible_count();
    std::vector<double> base_bias(static_cast<std::size_t>(n_v), 0.0);
    if (!base_marginals.empty()) {
        if (base_marginals.size() != static_cast<std::size_t>(n_v))
            throw ParameterError("base marginal length mismatch");
        for (int i = 0; i < n_v; ++i) {
            const double p = std::clamp(base_marginals[static_cast<std::size_t>(i)], 0.001, 0.999);
            base_bias[static_cast<std::size_t>(i)] = std::log(p / (1.0 - p));
        }
    }

    double log_z_base = static_cast<double>(m.hidden_count()) * std::log(2.0);
    for (double a : base_bias) log_z_base += softplus(a);

    const std::uint64_t master = rng();
    std::vector<double> log_w;
    log_w.reserve(static_cast<std::size_t>(n_chains));
    int dropped = 0;

    std::vector<double> v(static_cast<std::size_t>(n_v));
    for (int chain = 0; chain < n_chains; ++chain) {
        Rng chain_rng(derive_seed(master, static_cast<std::uint64_t>(chain)));
        for (int i = 0; i < n_v; ++i)
            v[static_cast<std::size_t>(i)] =
                draw_bernoulli(chain_rng, sigmoid(base_bias[static_cast<std::size_t>(i)])) ? 1.0 : 0.0;
        double acc = 0.0;
        for (int k = 1; k < n_temps; ++k) {
            const double beta_prev = static_cast<double>(k - 1) / (n_temps - 1);
            const double beta = static_cast<double>(k) / (n_temps - 1);
            acc += ais_log_f(m, base_bias, v, beta) - ais_log_f(m, base_bias, v, beta_prev);
            if (k + 1 < n_temps) ais_gibbs_sweep(m, base_bias, v, beta, chain_rng);
        }
        if (std::isfinite(acc))
            log_w.push_back(acc);
        else
            ++dropped;
    }
    if (log_w.empty()) throw DivergenceError("all AIS chains produced non-finite weights");

    const double mx = *std::max_element(log_w.begin(), log_w.end());
    double mean_u = 0.0;
    for (double lw : log_w) mean_u += std::exp(lw - mx);
    mean_u /= static_cast<double>(log_w.size());
    double var_u = 0.0;
    for (double lw : log_w) {
        const double d = std::exp(lw - mx) - mean_u;
        var_u += d * d;
    }
    var_u = log_w.size() > 1 ? var_u / static_cast<double>(log_w.size() - 1) : 0.0;

    AisResult result;
    result.log_z = log_z_base + mx + std::log(mean_u);
    result.stderr_log_z =
        std::sqrt(var_u / static_cast<double>(log_w.size())) / mean_u; // delta method
    result.dropped_chains = dropped;
    return result;
}

double avg_log_prob(const BoltzmannMachine& m, ConstMatrixView data, double log_z) {
    if (m.kind != VisibleKind::binary)
        throw ParameterError("avg_log_prob is defined for the binary kind");
    if (data.rows == 0) throw ParameterError("empty data");
    double acc = 0.0;
    for (std::size_t r = 0; r < data.rows; ++r)
        acc += -free_energy(m, data.row(r)) - log_z;
    return acc / static_cast<double>(data.rows);
}

std::vector<double> impute_visible(const BoltzmannMachine& m,
                                   std::span<const double> v_observed,
                                   const std::vector<bool>& missing, int gibbs_steps,
                                   Rng& rng, int tail_window) {
    if (v_observed.size() != static_cast<std::size_t>(m.visible_count()) ||
        missing.size() != v_observed.size())
        throw ParameterError("shape mismatch");
    const auto n_missing = static_cast<std::size_t>(
        std::count(missing.begin(), missing.end(), true));
    if (n_missing == 0) throw ParameterError("missing mask marks no coordinate");
    if (n_missing == missing.size())
        throw ParameterError("all-missing mask is unconditioned generation, refused");
    if (gibbs_steps < 1 || tail_window < 1 || tail_window > gibbs_steps)
        throw ParameterError("need 1 <= tail_window <= gibbs_steps");

    std::vector<double> v(v_observed.begin(), v_observed.end());
    for (std::size_t i = 0; i < missing.size(); ++i)
        if (missing[i]) v[i] = m.visible_bias[i]; // uninformative start

    std::vector<double> sum(missing.size(), 0.0);
    for (int step = 0; step < gibbs_steps; ++step) {
        const std::vector<double> h = sample_hidden(m, v, rng);
        const std::vector<double> v_new = sample_visible(m, h, rng);
        for (std::size_t i = 0; i < missing.size(); ++i)
            if (missing[i]) v[i] = v_new[i];
        if (step >= gibbs_steps - tail_window)
            for (std::size_t i = 0; i < missing.size(); ++i)
                if (missing[i]) sum[i] += v[i];
    }
    std::vector<double> out;
    out.reserve(n_missing);
    for (std::size_t i = 0; i < missing.size(); ++i)
        if (missing[i]) out.push_back(sum[i] / static_cast<double>(tail_window));
    return out;
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kEarthRadiusKm = 6371.0;
    const double to_rad = M_PI / 180.0;
    const double phi1 = lat1 * to_rad;
    const double phi2 = lat2 * to_rad;
    const double dphi = (lat2 - lat1) * to_rad;
    const double dlmb = (lon2 - lon1) * to_rad;
    const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                     std::cos(phi1) * std::cos(phi2) * std::sin(dlmb / 2) * std::sin(dlmb / 2);
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

} // namespace xbm
