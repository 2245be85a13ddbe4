#include "orbqfl/dataio.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "orbqfl/errors.hpp"
#include "orbqfl/rng.hpp"

namespace orbqfl::dataio {
namespace {

// Raw Statlog label -> contiguous class. Label 6 has no samples.
constexpr std::array<int, 6> kStatlogLabels{1, 2, 3, 4, 5, 7};

std::vector<std::string> statlog_class_names() {
  return {"red soil", "cotton crop", "grey soil", "damp grey soil", "soil with vegetation stubble",
          "very damp grey soil"};
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(idx));
  return idx;
}

}  // namespace

void Dataset::validate() const {
  if (features.rows() != labels.size()) throw std::invalid_argument("Dataset: feature rows and labels differ in count");
  for (std::size_t y : labels) {
    if (y >= class_names.size()) throw std::invalid_argument(fmt::format("Dataset: label {} out of range", y));
  }
}

Dataset subset(const Dataset& data, std::span<const std::size_t> indices) {
  Dataset out;
  out.features = data.features.select_rows(indices);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.labels.push_back(data.labels.at(i));
  out.class_names = data.class_names;
  return out;
}

Dataset concat(const Dataset& a, const Dataset& b) {
  if (a.class_names != b.class_names) throw std::invalid_argument("concat: class lists differ");
  Dataset out = a;
  for (std::size_t i = 0; i < b.size(); ++i) {
    out.features.append_row(b.features.row(i));
    out.labels.push_back(b.labels[i]);
  }
  return out;
}

Dataset parse_statlog(std::string_view text) {
  Dataset out;
  out.class_names = statlog_class_names();
  std::vector<double> row;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    std::vector<long> fields;
    std::size_t pos = 0;
    while (true) {
      pos = line.find_first_not_of(" \t\r", pos);
      if (pos == std::string_view::npos) break;
      const auto end = std::min(line.find_first_of(" \t\r", pos), line.size());
      long v = 0;
      auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, v);
      if (ec != std::errc{} || ptr != line.data() + end) {
        throw DataError(fmt::format("statlog line {}: '{}' is not an integer", line_no, line.substr(pos, end - pos)));
      }
      fields.push_back(v);
      pos = end;
    }
    if (fields.empty()) continue;
    if (fields.size() != kStatlogFeatures + 1) {
      throw DataError(fmt::format("statlog line {}: expected {} fields, found {}", line_no, kStatlogFeatures + 1,
                                  fields.size()));
    }
    const auto it = std::find(kStatlogLabels.begin(), kStatlogLabels.end(), fields.back());
    if (it == kStatlogLabels.end()) {
      throw DataError(fmt::format("statlog line {}: unknown label {}", line_no, fields.back()));
    }
    row.assign(fields.begin(), fields.end() - 1);
    out.features.append_row(row);
    out.labels.push_back(static_cast<std::size_t>(it - kStatlogLabels.begin()));
  }
  if (out.features.cols() == 0) out.features = Matrix(0, kStatlogFeatures);
  return out;
}

Dataset load_statlog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError(fmt::format("cannot read Statlog file '{}' (download sat.trn / sat.tst from the UCI "
                                "Statlog (Landsat Satellite) page, or use dataset = synthetic)",
                                path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_statlog(buf.str());
}

Dataset load_statlog_dir(const std::filesystem::path& dir) {
  return concat(load_statlog(dir / "sat.trn"), load_statlog(dir / "sat.tst"));
}

MinMaxScaler MinMaxScaler::fit(const Matrix& features) {
  if (features.empty()) throw std::invalid_argument("MinMaxScaler::fit: no rows");
  MinMaxScaler s;
  const auto first = features.row(0);
  s.min.assign(first.begin(), first.end());
  s.max = s.min;
  for (std::size_t i = 1; i < features.rows(); ++i) {
    for (std::size_t j = 0; j < features.cols(); ++j) {
      s.min[j] = std::min(s.min[j], features(i, j));
      s.max[j] = std::max(s.max[j], features(i, j));
    }
  }
  return s;
}

Matrix MinMaxScaler::transform(const Matrix& features) const {
  if (features.cols() != min.size()) throw std::invalid_argument("MinMaxScaler::transform: width mismatch");
  Matrix out(features.rows(), features.cols());
  for (std::size_t j = 0; j < features.cols(); ++j) {
    const double range = max[j] - min[j];
    for (std::size_t i = 0; i < features.rows(); ++i) {
      out(i, j) = range > 0.0 ? std::clamp((features(i, j) - min[j]) / range, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

Dataset normalize(const Dataset& data) {
  Dataset out = data;
  out.features = MinMaxScaler::fit(data.features).transform(data.features);
  return out;
}

Matrix one_hot(std::span<const std::size_t> labels, std::size_t n_classes) {
  Matrix out(labels.size(), n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= n_classes) {
      throw std::invalid_argument(fmt::format("one_hot: label {} out of range for {} classes", labels[i], n_classes));
    }
    out(i, labels[i]) = 1.0;
  }
  return out;
}

EigenDecomposition jacobi_eigen(const Matrix& symmetric) {
  const std::size_t n = symmetric.rows();
  if (symmetric.cols() != n) throw std::invalid_argument("jacobi_eigen: matrix must be square");
  Matrix a = symmetric;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double scale = 0.0;
  for (double x : a.data()) scale = std::max(scale, std::abs(x));

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off <= 1e-30 * scale * scale || off == 0.0) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that zeroes a(p, q) (Golub & Van Loan, sym.schur2).
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Stable so equal eigenvalues keep their column order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t col = order[k];
    out.values.push_back(a(col, col));
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v(i, col)) > 1e-12) {
        sign = v(i, col) < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.vectors(k, i) = sign * v(i, col);
  }
  return out;
}

Matrix covariance(const Matrix& features, std::span<const double> mean) {
  const std::size_t n = features.rows(), d = features.cols();
  if (n < 2) throw std::invalid_argument("covariance: need at least two rows");
  Matrix cov(d, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      const double di = features(r, i) - mean[i];
      for (std::size_t j = i; j < d; ++j) cov(i, j) += di * (features(r, j) - mean[j]);
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov(i, j) /= static_cast<double>(n - 1);
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

PcaModel pca_fit(const Matrix& features, std::size_t q) {
  const std::size_t n = features.rows(), d = features.cols();
  if (q == 0 || q > d) throw std::invalid_argument(fmt::format("pca_fit: q = {} must lie in [1, {}]", q, d));
  if (n < 2) throw std::invalid_argument("pca_fit: need at least two rows");

  PcaModel model;
  model.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < d; ++j) model.mean[j] += features(r, j);
  }
  for (double& m : model.mean) m /= static_cast<double>(n);

  const auto eig = jacobi_eigen(covariance(features, model.mean));
  model.components = Matrix(q, d);
  for (std::size_t k = 0; k < q; ++k) {
    model.explained_variance.push_back(std::max(eig.values[k], 0.0));
    for (std::size_t j = 0; j < d; ++j) model.components(k, j) = eig.vectors(k, j);
  }

  model.projected_min.assign(q, 0.0);
  model.projected_max.assign(q, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < q; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += (features(r, j) - model.mean[j]) * model.components(k, j);
      if (r == 0 || s < model.projected_min[k]) model.projected_min[k] = s;
      if (r == 0 || s > model.projected_max[k]) model.projected_max[k] = s;
    }
  }
  return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& features) {
  const std::size_t q = model.components.rows(), d = model.components.cols();
  if (features.cols() != d) throw std::invalid_argument("pca_transform: width mismatch");
  Matrix out(features.rows(), q);
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t k = 0; k < q; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += (features(r, j) - model.mean[j]) * model.components(k, j);
      const double range = model.projected_max[k] - model.projected_min[k];
      out(r, k) = range > 0.0 ? std::clamp((s - model.projected_min[k]) / range, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument(fmt::format("split: train fraction {} must lie in (0, 1)", train_fraction));
  }
  const auto idx = shuffled_indices(data.size(), seed);
  const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(data.size())));
  const std::span<const std::size_t> all(idx);
  return {subset(data, all.first(n_train)), subset(data, all.subspan(n_train))};
}

std::uint64_t ShardPlan::hash() const {
  std::uint64_t h = fnv1a64("shardplan");
  for (const auto& shard : shards) {
    h = fnv1a64("|", h);
    for (std::size_t i : shard) h = fnv1a64(fmt::format("{},", i), h);
  }
  return h;
}

ShardPlan partition(std::size_t n_rows, std::size_t n_shards, std::uint64_t seed) {
  if (n_shards == 0) throw std::invalid_argument("partition: need at least one shard");
  if (n_shards > n_rows) {
    throw std::invalid_argument(fmt::format("partition: {} shards requested for {} rows", n_shards, n_rows));
  }
  ShardPlan plan;
  plan.seed = seed;
  plan.shards.resize(n_shards);
  const auto idx = shuffled_indices(n_rows, seed);
  for (std::size_t k = 0; k < idx.size(); ++k) plan.shards[k % n_shards].push_back(idx[k]);
  return plan;
}

std::vector<Dataset> apply_plan(const Dataset& data, const ShardPlan& plan) {
  std::vector<Dataset> out;
  out.reserve(plan.shards.size());
  for (const auto& shard : plan.shards) out.push_back(subset(data, shard));
  return out;
}

Dataset synthetic_blobs(std::size_t n_per_class, std::size_t n_classes, std::size_t q, double separation,
                        std::uint64_t seed, double spread) {
  if (n_per_class == 0 || n_classes == 0 || q == 0) throw std::invalid_argument("synthetic_blobs: sizes must be positive");
  Rng centre_rng(seed, "centres");
  std::vector<std::vector<double>> centres;
  constexpr int kAttempts = 1000;
  for (int attempt = 0; attempt < kAttempts && centres.size() < n_classes; ++attempt) {
    std::vector<double> c(q);
    for (double& x : c) x = centre_rng.uniform(0.15, 0.85);
    const bool clear = std::all_of(centres.begin(), centres.end(), [&](const std::vector<double>& o) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < q; ++j) d2 += (c[j] - o[j]) * (c[j] - o[j]);
      return std::sqrt(d2) >= separation;
    });
    if (clear) centres.push_back(std::move(c));
  }
  if (centres.size() < n_classes) {
    // Separation does not fit by sampling: fall back to even spacing along the
    // main diagonal, the widest arrangement the cube allows.
    centres.clear();
    for (std::size_t k = 0; k < n_classes; ++k) {
      const double t = n_classes == 1 ? 0.5 : 0.1 + 0.8 * static_cast<double>(k) / static_cast<double>(n_classes - 1);
      centres.emplace_back(q, t);
    }
  }

  Dataset out;
  out.features = Matrix(n_per_class * n_classes, q);
  Rng noise(seed, "noise");
  for (std::size_t k = 0; k < n_classes; ++k) {
    out.class_names.push_back(fmt::format("blob{}", k));
    for (std::size_t i = 0; i < n_per_class; ++i) {
      const std::size_t r = k * n_per_class + i;
      for (std::size_t j = 0; j < q; ++j) out.features(r, j) = std::clamp(centres[k][j] + spread * noise.normal(), 0.0, 1.0);
      out.labels.push_back(k);
    }
  }
  return out;
}

}  // namespace orbqfl::dataio
