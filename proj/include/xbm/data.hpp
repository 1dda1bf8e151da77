#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xbm/common.hpp"
#include "xbm/rng.hpp"

namespace xbm {

/// Row-major sample matrix with per-feature statistics and split metadata.
/// feature_mean/feature_std always describe the current samples.
struct Dataset {
    enum class Kind { binary, real };

    std::vector<double> samples;
    std::size_t n_samples = 0;
    std::size_t n_features = 0;
    Kind kind = Kind::real;
    std::vector<double> feature_mean;
    std::vector<double> feature_std;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::string source;       ///< path or generator tag
    std::string content_hash; ///< sha256 hex of the source bytes

    ConstMatrixView view() const { return {samples.data(), n_samples, n_features}; }
    std::span<const double> row(std::size_t r) const {
        return {samples.data() + r * n_features, n_features};
    }

    /// Materialize the given rows as a new dataset (stats recomputed, no split).
    Dataset subset(std::span<const std::size_t> rows) const;

    void recompute_stats();
    void validate() const;
};

/// i.i.d. standard-normal entries with a seeded 70/30 train/test split.
Dataset synthetic_gaussian(std::size_t n_samples, std::size_t n_features, Rng& rng,
                           double train_fraction = 0.7);

/// IDX container (big-endian magic 0x803 for u8 images, 0x801 for u8 labels).
/// Images are flattened row-major; values are the raw bytes.
Dataset load_idx(const std::string& path);

/// Write a dataset as an IDX u8 file (values clamped to [0,255]); used to
/// build fixtures and exchange binary image data.
void save_idx(const Dataset& ds, const std::string& path, int rows, int cols);

/// Threshold value/255 >= threshold to 1 else 0.
Dataset binarize(const Dataset& ds, double threshold = 0.5);

Dataset load_csv(const std::string& path, bool has_header, char delimiter = ',');

/// Zero-mean, unit-std columns; constant columns become all zeros with their
/// std recorded as 0.
Dataset normalize(const Dataset& ds);

/// Partition into k near-equal folds (sizes differ by at most 1) after a
/// seeded shuffle; returns the fold id of every sample.
std::vector<int> kfold(const Dataset& ds, int k, Rng& rng);

std::string sha256_hex(std::span<const std::byte> bytes);
std::string sha256_hex(const std::string& text);
std::string sha256_file(const std::string& path);

} // namespace xbm
