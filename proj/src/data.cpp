#include "xbm/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <openssl/evp.h>

namespace xbm {

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.kind = kind;
    out.n_samples = rows.size();
    out.n_features = n_features;
    out.samples.reserve(rows.size() * n_features);
    for (std::size_t r : rows) {
        if (r >= n_samples) throw ParameterError("subset row out of range");
        const auto src = row(r);
        out.samples.insert(out.samples.end(), src.begin(), src.end());
    }
    out.source = source;
    out.content_hash = content_hash;
    out.recompute_stats();
    return out;
}

void Dataset::recompute_stats() {
    feature_mean.assign(n_features, 0.0);
    feature_std.assign(n_features, 0.0);
    if (n_samples == 0) return;
    for (std::size_t r = 0; r < n_samples; ++r) {
        const auto x = row(r);
        for (std::size_t c = 0; c < n_features; ++c) feature_mean[c] += x[c];
    }
    for (auto& m : feature_mean) m /= static_cast<double>(n_samples);
    for (std::size_t r = 0; r < n_samples; ++r) {
        const auto x = row(r);
        for (std::size_t c = 0; c < n_features; ++c) {
            const double d = x[c] - feature_mean[c];
            feature_std[c] += d * d;
        }
    }
    for (auto& s : feature_std) s = std::sqrt(s / static_cast<double>(n_samples));
}

void Dataset::validate() const {
    if (samples.size() != n_samples * n_features)
        throw ParameterError("sample buffer size mismatch");
    if (kind == Kind::binary) {
        for (double x : samples)
            if (x != 0.0 && x != 1.0)
                throw ParameterError("binary dataset contains non-binary entries");
    }
    for (std::size_t i : train_indices)
        if (i >= n_samples) throw ParameterError("train index out of range");
    for (std::size_t i : test_indices)
        if (i >= n_samples) throw ParameterError("test index out of range");
}

namespace {

void seeded_split(Dataset& ds, double train_fraction, Rng& rng) {
    std::vector<std::size_t> order(ds.n_samples);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const auto pick = k + rng() % (order.size() - k);
        std::swap(order[k], order[pick]);
    }
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(ds.n_samples)));
    ds.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    ds.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
}

std::string hash_samples(const Dataset& ds) {
    return sha256_hex(std::as_bytes(std::span<const double>(ds.samples)));
}

} // namespace

Dataset synthetic_gaussian(std::size_t n_samples, std::size_t n_features, Rng& rng,
                           double train_fraction) {
    if (n_samples == 0 || n_features == 0)
        throw ParameterError("synthetic dataset needs positive sizes");
    Dataset ds;
    ds.kind = Dataset::Kind::real;
    ds.n_samples = n_samples;
    ds.n_features = n_features;
    ds.samples.resize(n_samples * n_features);
    for (auto& x : ds.samples) x = draw_normal(rng);
    ds.source = "synthetic-gaussian";
    ds.content_hash = hash_samples(ds);
    ds.recompute_stats();
    seeded_split(ds, train_fraction, rng);
    return ds;
}

namespace {

std::uint32_t read_be32(std::istream& is, const std::string& path, std::size_t offset) {
    unsigned char buf[4];
    if (!is.read(reinterpret_cast<char*>(buf), 4)) {
        std::ostringstream msg;
        msg << path << ": truncated at byte " << offset;
        throw FormatError(msg.str());
    }
    return (static_cast<std::uint32_t>(buf[0]) << 24) |
           (static_cast<std::uint32_t>(buf[1]) << 16) |
           (static_cast<std::uint32_t>(buf[2]) << 8) | static_cast<std::uint32_t>(buf[3]);
}

void write_be32(std::ostream& os, std::uint32_t v) {
    unsigned char buf[4] = {static_cast<unsigned char>(v >> 24),
                            static_cast<unsigned char>(v >> 16),
                            static_cast<unsigned char>(v >> 8),
                            static_cast<unsigned char>(v)};
    os.write(reinterpret_cast<const char*>(buf), 4);
}

} // namespace

Dataset load_idx(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError(path + ": cannot open");
    const std::uint32_t magic = read_be32(is, path, 0);
    int n_dims = 0;
    if (magic == 0x00000803u)
        n_dims = 3;
    else if (magic == 0x00000801u)
        n_dims = 1;
    else {
        std::ostringstream msg;
        msg << path << ": bad IDX magic 0x" << std::hex << magic << " at byte 0";
        throw FormatError(msg.str());
    }

    std::size_t offset = 4;
    std::vector<std::uint32_t> dims;
    for (int d = 0; d < n_dims; ++d) {
        dims.push_back(read_be32(is, path, offset));
        offset += 4;
    }
    const std::size_t n = dims[0];
    std::size_t per_item = 1;
    for (int d = 1; d < n_dims; ++d) per_item *= dims[static_cast<std::size_t>(d)];
    if (per_item > (1u << 24))
        throw FormatError(path + ": item dimension overflow");

    Dataset ds;
    ds.kind = Dataset::Kind::real;
    ds.n_samples = n;
    ds.n_features = per_item;
    ds.samples.resize(n * per_item);
    std::vector<unsigned char> buf(per_item);
    for (std::size_t r = 0; r < n; ++r) {
        if (!is.read(reinterpret_cast<char*>(buf.data()),
                     static_cast<std::streamsize>(per_item))) {
            std::ostringstream msg;
            msg << path << ": truncated at byte " << (offset + r * per_item);
            throw FormatError(msg.str());
        }
        for (std::size_t c = 0; c < per_item; ++c)
            ds.samples[r * per_item + c] = static_cast<double>(buf[c]);
    }
    ds.source = path;
    ds.content_hash = sha256_file(path);
    ds.recompute_stats();
    return ds;
}

void save_idx(const Dataset& ds, const std::string& path, int rows, int cols) {
    if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != ds.n_features)
        throw ParameterError("rows*cols must equal the feature count");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError(path + ": cannot open for writing");
    write_be32(os, 0x00000803u);
    write_be32(os, static_cast<std::uint32_t>(ds.n_samples));
    write_be32(os, static_cast<std::uint32_t>(rows));
    write_be32(os, static_cast<std::uint32_t>(cols));
    for (double x : ds.samples) {
        const double clamped = std::clamp(x, 0.0, 255.0);
        os.put(static_cast<char>(static_cast<unsigned char>(std::llround(clamped))));
    }
}

Dataset binarize(const Dataset& ds, double threshold) {
    Dataset out = ds;
    for (auto& x : out.samples) x = (x / 255.0 >= threshold) ? 1.0 : 0.0;
    out.kind = Dataset::Kind::binary;
    out.recompute_stats();
    return out;
}

Dataset load_csv(const std::string& path, bool has_header, char delimiter) {
    std::ifstream is(path);
    if (!is) throw FormatError(path + ": cannot open");
    Dataset ds;
    ds.kind = Dataset::Kind::real;
    std::string line;
    std::size_t line_no = 0;
    std::size_t n_cols = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (has_header && line_no == 1) continue;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t col = 0;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t end = line.find(delimiter, start);
            if (end == std::string::npos) end = line.size();
            const std::string cell = line.substr(start, end - start);
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                ds.samples.push_back(v);
            } catch (const std::exception&) {
                std::ostringstream msg;
                msg << path << ": non-numeric cell at row " << line_no << " col " << (col + 1);
                throw FormatError(msg.str());
            }
            ++col;
            start = end + 1;
            if (end == line.size()) break;
        }
        if (n_cols == 0) {
            n_cols = col;
        } else if (col != n_cols) {
            std::ostringstream msg;
            msg << path << ": ragged row " << line_no << " has " << col << " cells, expected "
                << n_cols;
            throw FormatError(msg.str());
        }
        ++ds.n_samples;
    }
    ds.n_features = n_cols;
    if (ds.n_samples == 0) throw FormatError(path + ": no data rows");
    ds.source = path;
    ds.content_hash = sha256_file(path);
    ds.recompute_stats();
    return ds;
}

Dataset normalize(const Dataset& ds) {
    Dataset out = ds;
    std::vector<double> mean = ds.feature_mean;
    std::vector<double> std_dev = ds.feature_std;
    for (std::size_t r = 0; r < out.n_samples; ++r) {
        for (std::size_t c = 0; c < out.n_features; ++c) {
            double& x = out.samples[r * out.n_features + c];
            x = std_dev[c] > 0.0 ? (x - mean[c]) / std_dev[c] : 0.0;
        }
    }
    out.kind = Dataset::Kind::real;
    out.recompute_stats();
    return out;
}

std::vector<int> kfold(const Dataset& ds, int k, Rng& rng) {
    if (k < 2) throw ParameterError("k must be >= 2");
    if (static_cast<std::size_t>(k) > ds.n_samples)
        throw ParameterError("k exceeds the sample count");
    std::vector<std::size_t> order(ds.n_samples);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t t = 0; t + 1 < order.size(); ++t) {
        const auto pick = t + rng() % (order.size() - t);
        std::swap(order[t], order[pick]);
    }
    std::vector<int> fold(ds.n_samples, -1);
    for (std::size_t t = 0; t < order.size(); ++t)
        fold[order[t]] = static_cast<int>(t % static_cast<std::size_t>(k));
    return fold;
}

std::string sha256_hex(std::span<const std::byte> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int t = 0; t < len; ++t) {
        out.push_back(hex[digest[t] >> 4]);
        out.push_back(hex[digest[t] & 0xf]);
    }
    return out;
}

std::string sha256_hex(const std::string& text) {
    return sha256_hex(std::as_bytes(std::span<const char>(text.data(), text.size())));
}

std::string sha256_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError(path + ": cannot open");
    std::ostringstream ss;
    ss << is.rdbuf();
    return sha256_hex(ss.str());
}

} // namespace xbm
