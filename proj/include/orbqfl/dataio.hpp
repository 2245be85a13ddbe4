#pragma once

// Dataset handling: Statlog (Landsat) parsing, min-max normalization, one-hot
// labels, PCA by cyclic Jacobi, seeded split/partition, and a synthetic
// Gaussian-blob fallback used throughout the tests.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orbqfl/matrix.hpp"

namespace orbqfl::dataio {

inline constexpr std::size_t kStatlogFeatures = 36;

struct Dataset {
  Matrix features;                  // n x d
  std::vector<std::size_t> labels;  // n, each < class_names.size()
  std::vector<std::string> class_names;

  std::size_t size() const { return labels.size(); }
  std::size_t dimension() const { return features.cols(); }
  std::size_t n_classes() const { return class_names.size(); }
  /// Throws std::invalid_argument when rows/labels/classes disagree.
  void validate() const;
  bool operator==(const Dataset&) const = default;
};

Dataset subset(const Dataset& data, std::span<const std::size_t> indices);
/// Rows of `b` appended to `a`; both must share dimension and classes.
Dataset concat(const Dataset& a, const Dataset& b);

/// Whitespace-separated Statlog records: 36 integers then the class label.
/// Labels {1,2,3,4,5,7} map to classes {0..5}. Throws DataError naming the
/// offending line on malformed input or an unknown label.
Dataset parse_statlog(std::string_view text);
/// Reads and parses one file; throws DataError when it cannot be read.
Dataset load_statlog(const std::filesystem::path& path);
/// sat.trn followed by sat.tst from `dir`.
Dataset load_statlog_dir(const std::filesystem::path& dir);

struct MinMaxScaler {
  std::vector<double> min;
  std::vector<double> max;

  static MinMaxScaler fit(const Matrix& features);
  /// Maps each column to [0,1] using the fitted range; constant columns map to
  /// 0 and values outside the fitted range are clamped.
  Matrix transform(const Matrix& features) const;
};

/// Per-column min-max to [0,1] using the dataset's own range.
Dataset normalize(const Dataset& data);

Matrix one_hot(std::span<const std::size_t> labels, std::size_t n_classes);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // row k is the eigenvector of values[k]
};

/// Cyclic Jacobi for a symmetric matrix. Eigenvectors are unit length with
/// their first non-negligible entry positive.
EigenDecomposition jacobi_eigen(const Matrix& symmetric);

/// Sample covariance (n - 1 denominator).
Matrix covariance(const Matrix& features, std::span<const double> mean);

struct PcaModel {
  std::vector<double> mean;                 // d
  Matrix components;                        // q x d, orthonormal rows
  std::vector<double> explained_variance;   // q, nonincreasing
  std::vector<double> projected_min;        // q, range on the fitting data
  std::vector<double> projected_max;        // q
};

PcaModel pca_fit(const Matrix& features, std::size_t q);
/// Projects onto the components and rescales each to [0,1] by the range seen
/// at fit time (clamped outside it).
Matrix pca_transform(const PcaModel& model, const Matrix& features);

/// Seeded shuffle, then the first floor(fraction * n) rows go to training.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed);

struct ShardPlan {
  std::vector<std::vector<std::size_t>> shards;
  std::uint64_t seed = 0;

  /// FNV-1a over the index lists; equal plans hash equal.
  std::uint64_t hash() const;
};

/// Seeded shuffle, then round-robin over `n_shards`.
ShardPlan partition(std::size_t n_rows, std::size_t n_shards, std::uint64_t seed);
std::vector<Dataset> apply_plan(const Dataset& data, const ShardPlan& plan);

/// Isotropic Gaussian clusters around seeded centres at least `separation`
/// apart (when that fits in the unit cube), features clipped to [0,1].
Dataset synthetic_blobs(std::size_t n_per_class, std::size_t n_classes, std::size_t q, double separation,
                        std::uint64_t seed, double spread = 0.05);

}  // namespace orbqfl::dataio
