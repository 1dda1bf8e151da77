#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "xbm/graph.hpp"
#include "xbm/rng.hpp"

namespace xbm {

enum class VisibleKind { binary, gaussian };

const char* to_string(VisibleKind kind);
VisibleKind visible_kind_from_string(const std::string& s);

/// Boltzmann machine over an arbitrary sparse mask. Dense RBM/GRBM models are
/// the complete-bipartite special case and run through the same code path.
/// An absent edge contributes exactly zero to every computation; there is no
/// zero-filled dense matrix behind this.
struct BoltzmannMachine {
    VisibleKind kind = VisibleKind::binary;
    BipartiteGraph graph;
    std::vector<double> weights;      ///< per edge, aligned with graph.edges()
    std::vector<double> visible_bias; ///< a, length n_v
    std::vector<double> hidden_bias;  ///< b, length n_h
    std::vector<double> sigma;        ///< per-visible std dev, gaussian kind only

    int visible_count() const { return graph.visible_count(); }
    int hidden_count() const { return graph.hidden_count(); }
    std::size_t edge_count() const { return graph.edge_count(); }

    /// Throws ParameterError when shapes or sigma values are inconsistent.
    void validate() const;
};

/// Fresh machine over a mask: weights i.i.d. N(0, init_std^2), biases zero,
/// unit sigma for the gaussian kind.
BoltzmannMachine make_machine(VisibleKind kind, BipartiteGraph graph, Rng& rng,
                              double init_std = 0.01);

/// State energy. Binary: -sum_E v_i h_j w_ij - a.v - b.h. Gaussian replaces
/// v_i by v_i/sigma_i in the interaction and uses the quadratic visible term.
double energy(const BoltzmannMachine& m, std::span<const double> v,
              std::span<const double> h);

/// p(h_j=1|v) per hidden unit.
std::vector<double> hidden_conditional(const BoltzmannMachine& m,
                                       std::span<const double> v);

/// Binary kind: p(v_i=1|h). Gaussian kind: conditional means a_i +
/// sigma_i * sum_j h_j w_ij (variance sigma_i^2).
std::vector<double> visible_conditional(const BoltzmannMachine& m,
                                        std::span<const double> h);

std::vector<double> sample_hidden(const BoltzmannMachine& m,
                                  std::span<const double> v, Rng& rng);
std::vector<double> sample_visible(const BoltzmannMachine& m,
                                   std::span<const double> h, Rng& rng);

/// F(v) = -log sum_h exp(-E(v,h)); p(v) = exp(-F(v))/Z.
double free_energy(const BoltzmannMachine& m, std::span<const double> v);

/// Versioned binary container; bit-identical round trip.
void save_machine(const BoltzmannMachine& m, std::ostream& os);
BoltzmannMachine load_machine(std::istream& is);

} // namespace xbm
