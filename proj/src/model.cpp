#include "xbm/model.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "xbm/common.hpp"
#include "xbm/serialize.hpp"

namespace xbm {

const char* to_string(VisibleKind kind) {
    return kind == VisibleKind::binary ? "binary" : "gaussian";
}

VisibleKind visible_kind_from_string(const std::string& s) {
    if (s == "binary") return VisibleKind::binary;
    if (s == "gaussian") return VisibleKind::gaussian;
    throw ParameterError("unknown visible kind: " + s);
}

void BoltzmannMachine::validate() const {
    if (weights.size() != graph.edge_count())
        throw ParameterError("weights length must equal the edge count");
    if (visible_bias.size() != static_cast<std::size_t>(graph.visible_count()))
        throw ParameterError("visible bias length mismatch");
    if (hidden_bias.size() != static_cast<std::size_t>(graph.hidden_count()))
        throw ParameterError("hidden bias length mismatch");
    if (kind == VisibleKind::gaussian) {
        if (sigma.size() != static_cast<std::size_t>(graph.visible_count()))
            throw ParameterError("sigma length mismatch");
        for (double s : sigma)
            if (!(s > 0.0)) throw ParameterError("sigma entries must be > 0");
    } else if (!sigma.empty()) {
        throw ParameterError("sigma is only valid for the gaussian kind");
    }
}

BoltzmannMachine make_machine(VisibleKind kind, BipartiteGraph graph, Rng& rng,
                              double init_std) {
    BoltzmannMachine m;
    m.kind = kind;
    m.weights.resize(graph.edge_count());
    for (auto& w : m.weights) w = init_std > 0.0 ? draw_normal(rng, 0.0, init_std) : 0.0;
    m.visible_bias.assign(static_cast<std::size_t>(graph.visible_count()), 0.0);
    m.hidden_bias.assign(static_cast<std::size_t>(graph.hidden_count()), 0.0);
    if (kind == VisibleKind::gaussian)
        m.sigma.assign(static_cast<std::size_t>(graph.visible_count()), 1.0);
    m.graph = std::move(graph);
    return m;
}

namespace {

void check_visible(const BoltzmannMachine& m, std::span<const double> v) {
    if (v.size() != static_cast<std::size_t>(m.visible_count()))
        throw ParameterError("visible state length mismatch");
}

void check_hidden(const BoltzmannMachine& m, std::span<const double> h) {
    if (h.size() != static_cast<std::size_t>(m.hidden_count()))
        throw ParameterError("hidden state length mismatch");
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + e^x) without overflow
inline double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// hidden unit j's total input: b_j + sum over connected visibles of
// (v_i / sigma_i) w_ij, with sigma = 1 for the binary kind
inline double hidden_input(const BoltzmannMachine& m, int j, std::span<const double> v) {
    double x = m.hidden_bias[static_cast<std::size_t>(j)];
    const auto neighbors = m.graph.visible_neighbors(j);
    const auto eids = m.graph.hidden_edge_ids(j);
    if (m.kind == VisibleKind::gaussian) {
        for (std::size_t t = 0; t < neighbors.size(); ++t)
            x += v[static_cast<std::size_t>(neighbors[t])] /
                 m.sigma[static_cast<std::size_t>(neighbors[t])] * m.weights[eids[t]];
    } else {
        for (std::size_t t = 0; t < neighbors.size(); ++t)
            x += v[static_cast<std::size_t>(neighbors[t])] * m.weights[eids[t]];
    }
    return x;
}

} // namespace

double energy(const BoltzmannMachine& m, std::span<const double> v,
              std::span<const double> h) {
    check_visible(m, v);
    check_hidden(m, h);
    double interaction = 0.0;
    const auto& edges = m.graph.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [i, j] = edges[e];
        double vi = v[static_cast<std::size_t>(i)];
        if (m.kind == VisibleKind::gaussian) vi /= m.sigma[static_cast<std::size_t>(i)];
        interaction += vi * h[static_cast<std::size_t>(j)] * m.weights[e];
    }
    double visible_term = 0.0;
    if (m.kind == VisibleKind::gaussian) {
        for (int i = 0; i < m.visible_count(); ++i) {
            const double d = v[static_cast<std::size_t>(i)] - m.visible_bias[static_cast<std::size_t>(i)];
            visible_term += d * d / (2.0 * m.sigma[static_cast<std::size_t>(i)] * m.sigma[static_cast<std::size_t>(i)]);
        }
    } else {
        for (int i = 0; i < m.visible_count(); ++i)
            visible_term -= v[static_cast<std::size_t>(i)] * m.visible_bias[static_cast<std::size_t>(i)];
    }
    double hidden_term = 0.0;
    for (int j = 0; j < m.hidden_count(); ++j)
        hidden_term += h[static_cast<std::size_t>(j)] * m.hidden_bias[static_cast<std::size_t>(j)];
    return -interaction + visible_term - hidden_term;
}

std::vector<double> hidden_conditional(const BoltzmannMachine& m,
                                       std::span<const double> v) {
    check_visible(m, v);
    std::vector<double> p(static_cast<std::size_t>(m.hidden_count()));
    for (int j = 0; j < m.hidden_count(); ++j)
        p[static_cast<std::size_t>(j)] = sigmoid(hidden_input(m, j, v));
    return p;
}

std::vector<double> visible_conditional(const BoltzmannMachine& m,
                                        std::span<const double> h) {
    check_hidden(m, h);
    std::vector<double> out(static_cast<std::size_t>(m.visible_count()));
    for (int i = 0; i < m.visible_count(); ++i) {
        double acc = 0.0;
        const auto neighbors = m.graph.hidden_neighbors(i);
        const auto eids = m.graph.visible_edge_ids(i);
        for (std::size_t t = 0; t < neighbors.size(); ++t)
            acc += h[static_cast<std::size_t>(neighbors[t])] * m.weights[eids[t]];
        if (m.kind == VisibleKind::gaussian) {
            // mean of the energy-derived conditional N(a_i + sigma_i*acc, sigma_i^2)
            out[static_cast<std::size_t>(i)] =
                m.visible_bias[static_cast<std::size_t>(i)] + m.sigma[static_cast<std::size_t>(i)] * acc;
        } else {
            out[static_cast<std::size_t>(i)] =
                sigmoid(m.visible_bias[static_cast<std::size_t>(i)] + acc);
        }
    }
    return out;
}

std::vector<double> sample_hidden(const BoltzmannMachine& m,
                                  std::span<const double> v, Rng& rng) {
    std::vector<double> p = hidden_conditional(m, v);
    for (auto& x : p) x = draw_bernoulli(rng, x) ? 1.0 : 0.0;
    return p;
}

std::vector<double> sample_visible(const BoltzmannMachine& m,
                                   std::span<const double> h, Rng& rng) {
    std::vector<double> out = visible_conditional(m, h);
    if (m.kind == VisibleKind::gaussian) {
        for (int i = 0; i < m.visible_count(); ++i)
            out[static_cast<std::size_t>(i)] +=
                m.sigma[static_cast<std::size_t>(i)] * draw_normal(rng);
    } else {
        for (auto& x : out) x = draw_bernoulli(rng, x) ? 1.0 : 0.0;
    }
    return out;
}

double free_energy(const BoltzmannMachine& m, std::span<const double> v) {
    check_visible(m, v);
    double visible_term = 0.0;
    if (m.kind == VisibleKind::gaussian) {
        for (int i = 0; i < m.visible_count(); ++i) {
            const double d = v[static_cast<std::size_t>(i)] - m.visible_bias[static_cast<std::size_t>(i)];
            visible_term += d * d / (2.0 * m.sigma[static_cast<std::size_t>(i)] * m.sigma[static_cast<std::size_t>(i)]);
        }
    } else {
        for (int i = 0; i < m.visible_count(); ++i)
            visible_term -= v[static_cast<std::size_t>(i)] * m.visible_bias[static_cast<std::size_t>(i)];
    }
    double hidden_term = 0.0;
    for (int j = 0; j < m.hidden_count(); ++j)
        hidden_term += softplus(hidden_input(m, j, v));
    return visible_term - hidden_term;
}

namespace {
constexpr char kMachineMagic[5] = "XBM1";
}

void save_machine(const BoltzmannMachine& m, std::ostream& os) {
    io::write_magic(os, kMachineMagic);
    io::write_u32(os, 1);
    io::write_u8(os, m.kind == VisibleKind::gaussian ? 1 : 0);
    m.graph.save_binary(os);
    io::write_f64_vector(os, m.weights);
    io::write_f64_vector(os, m.visible_bias);
    io::write_f64_vector(os, m.hidden_bias);
    io::write_u8(os, m.sigma.empty() ? 0 : 1);
    if (!m.sigma.empty()) io::write_f64_vector(os, m.sigma);
}

BoltzmannMachine load_machine(std::istream& is) {
    io::expect_magic(is, kMachineMagic);
    const std::uint32_t version = io::read_u32(is);
    if (version != 1) throw FormatError("unsupported machine container version");
    BoltzmannMachine m;
    m.kind = io::read_u8(is) ? VisibleKind::gaussian : VisibleKind::binary;
    m.graph = BipartiteGraph::load_binary(is);
    m.weights = io::read_f64_vector(is);
    m.visible_bias = io::read_f64_vector(is);
    m.hidden_bias = io::read_f64_vector(is);
    if (io::read_u8(is)) m.sigma = io::read_f64_vector(is);
    m.validate();
    return m;
}

} // namespace xbm
