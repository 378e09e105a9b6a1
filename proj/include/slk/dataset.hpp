#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slk/common.hpp"

namespace slk {

/// Immutable N x D feature matrix with optional integer class labels.
struct Dataset {
    Matrix points;
    std::optional<std::vector<int>> labels;

    std::size_t n() const { return points.rows(); }
    std::size_t dim() const { return points.cols(); }
};

enum class FileFormat { Csv, Idx, RawF64 };

FileFormat parse_format(const std::string& name);

/// Loads features (and optionally labels) from disk and validates them:
/// consistent row widths, finite values, non-negative label ids.
///
/// Formats:
///  - csv:     headerless comma-separated rows (set csv_header to skip one line)
///  - idx:     unsigned-byte IDX tensors (magic 0x00000803), pixels scaled
///             to [0,1]; label files use magic 0x00000801
///  - raw-f64: little-endian, 16-byte header (u64 N, u64 D), then N*D
///             doubles row-major
Dataset load_dataset(const std::string& path, FileFormat format,
                     const std::optional<std::string>& labels_path = std::nullopt,
                     bool csv_header = false);

/// Writes features in the raw-f64 layout above. Round-trips bit-exactly.
void save_raw_f64(const Dataset& ds, const std::string& path);

/// Writes features as headerless CSV, one row per point; labels (if any)
/// go to labels_path, one integer per line.
void save_csv(const Dataset& ds, const std::string& path,
              const std::optional<std::string>& labels_path = std::nullopt);

/// Draws exactly per_class points from each class without replacement,
/// deterministically for a fixed seed. Requires labels.
Dataset subsample(const Dataset& ds, std::size_t per_class, std::uint64_t seed);

}  // namespace slk
