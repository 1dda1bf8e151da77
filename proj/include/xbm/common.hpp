#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace xbm {

/// Invalid arguments or configuration values.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed input files (IDX, CSV, serialized containers).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A degree-sequence pair that cannot be realized even after repair.
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite parameters encountered during training.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Request exceeds an enumeration or size budget.
struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-owning view of a row-major matrix.
struct ConstMatrixView {
    const double* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::span<const double> row(std::size_t r) const { return {data + r * cols, cols}; }
    std::size_t size() const { return rows * cols; }
};

} // namespace xbm
