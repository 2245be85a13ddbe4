#include "orbqfl/cobyla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace orbqfl::cobyla {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Powell's acceptability thresholds, as multiples of the radius: no vertex
// farther than kMaxEdge from the pole, none closer than kMinHeight to the
// face spanned by the others.
constexpr double kMaxEdge = 2.1;
constexpr double kMinHeight = 0.25;
constexpr double kGeometryStep = 0.5;

using Vec = std::vector<double>;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Rounding in from + s can land a trial point just outside the ball of
// radius r around `from`; pull it back so the stored point honours the bound.
void keep_within(const Vec& from, Vec& x, double r) {
  Vec d(x.size());
  for (int tries = 0; tries < 52; ++tries) {
    for (std::size_t c = 0; c < x.size(); ++c) d[c] = x[c] - from[c];
    if (norm(d) <= r) return;
    const double shrink = 1.0 - std::ldexp(std::numeric_limits<double>::epsilon(), tries);
    for (std::size_t c = 0; c < x.size(); ++c) x[c] = from[c] + d[c] * shrink;
  }
}

// Inverse of a row-major n x n matrix by Gauss-Jordan with partial pivoting.
// Returns nullopt when a pivot falls below `tol`.
std::optional<Vec> invert(Vec a, std::size_t n, double tol) {
  Vec inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (!(std::abs(a[piv * n + col]) > tol)) return std::nullopt;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a[piv * n + c], a[col * n + c]);
        std::swap(inv[piv * n + c], inv[col * n + c]);
      }
    }
    const double d = a[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = a[r * n + col];
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r * n + c] -= factor * a[col * n + c];
        inv[r * n + c] -= factor * inv[col * n + c];
      }
    }
  }
  return inv;
}

class Minimizer {
 public:
  Minimizer(const Objective& f, std::span<const double> x0, const OptimizerConfig& cfg)
      : f_(f), cfg_(cfg), m_(x0.size()), rho_(cfg.rho_begin), x0_(x0.begin(), x0.end()) {}

  MinimizeResult run() {
    MinimizeResult result;
    result.x_best = x0_;
    result.f_best = std::numeric_limits<double>::quiet_NaN();
    result.final_radius = rho_;
    if (cfg_.max_fun == 0) return result;

    const double f0 = f_(x0_);
    if (!std::isfinite(f0)) throw std::invalid_argument("cobyla: objective is not finite at the starting point");
    trace_.evaluations.push_back(f0);
    record(x0_, f0);

    if (build_initial_simplex()) iterate();

    result.x_best = vertices_[pole_];
    result.f_best = values_[pole_];
    result.final_radius = rho_;
    result.trace = std::move(trace_);
    return result;
  }

 private:
  bool budget_left() const { return trace_.evaluations.size() < cfg_.max_fun; }

  double evaluate(const Vec& x) {
    double v = f_(x);
    if (!std::isfinite(v)) v = kInf;
    trace_.evaluations.push_back(v);
    return v;
  }

  void record(const Vec& x, double v) {
    vertices_.push_back(x);
    values_.push_back(v);
    order_.push_back(trace_.evaluations.size() - 1);
    select_pole();
  }

  // Lowest value wins; ties go to the earlier evaluation.
  void select_pole() {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values_.size(); ++i) {
      if (values_[i] < values_[best] || (values_[i] == values_[best] && order_[i] < order_[best])) best = i;
    }
    pole_ = best;
  }

  bool build_initial_simplex() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!budget_left()) return false;
      Vec x = x0_;
      x[i] += rho_;
      keep_within(x0_, x, rho_);
      const double v = evaluate(x);
      record(x, v);
    }
    return true;
  }

  // Rows: vertex - pole for every non-pole vertex, in vertex order.
  std::vector<std::size_t> others() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (i != pole_) idx.push_back(i);
    }
    return idx;
  }

  struct Model {
    std::vector<std::size_t> rows;  // vertex index per row of the edge matrix
    Vec inverse;                    // inverse of the edge matrix, row-major
    Vec gradient;
  };

  std::optional<Model> build_model() const {
    Model model;
    model.rows = others();
    Vec edges(m_ * m_);
    for (std::size_t r = 0; r < m_; ++r) {
      const auto& v = vertices_[model.rows[r]];
      for (std::size_t c = 0; c < m_; ++c) edges[r * m_ + c] = (v[c] - vertices_[pole_][c]) / rho_;
    }
    auto inv = invert(std::move(edges), m_, 1e-10);
    if (!inv) return std::nullopt;
    // Undo the 1/rho scaling: inverse(E) = inverse(E / rho) / rho.
    for (double& x : *inv) {
      x /= rho_;
      if (!std::isfinite(x)) return std::nullopt;
    }
    model.inverse = std::move(*inv);

    // Linear model through all vertices: E g = f_i - f_pole.
    model.gradient.assign(m_, 0.0);
    const double fp = values_[pole_];
    for (std::size_t r = 0; r < m_; ++r) {
      const double df = values_[model.rows[r]] - fp;
      if (!std::isfinite(df)) return model;  // an infinite vertex carries no slope information
    }
    for (std::size_t c = 0; c < m_; ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < m_; ++r) s += model.inverse[c * m_ + r] * (values_[model.rows[r]] - fp);
      model.gradient[c] = s;
    }
    return model;
  }

  // Column k of the inverse is orthogonal to every edge except edge k.
  Vec dual_direction(const Model& model, std::size_t k) const {
    Vec a(m_);
    for (std::size_t c = 0; c < m_; ++c) a[c] = model.inverse[c * m_ + k];
    return a;
  }

  // Edge row that makes the simplex unacceptable, if any.
  std::optional<std::size_t> unacceptable_edge(const Model& model) const {
    std::optional<std::size_t> far;
    double far_dist = kMaxEdge * rho_;
    for (std::size_t r = 0; r < m_; ++r) {
      Vec e(m_);
      for (std::size_t c = 0; c < m_; ++c) e[c] = vertices_[model.rows[r]][c] - vertices_[pole_][c];
      const double d = norm(e);
      if (d > far_dist) {
        far_dist = d;
        far = r;
      }
    }
    if (far) return far;
    std::optional<std::size_t> flat;
    double flat_height = kMinHeight * rho_;
    for (std::size_t r = 0; r < m_; ++r) {
      const double height = 1.0 / norm(dual_direction(model, r));
      if (height < flat_height) {
        flat_height = height;
        flat = r;
      }
    }
    return flat;
  }

  void push_iteration(StepKind kind, bool accepted, const Vec& iterate, double objective, double radius) {
    trace_.iterations.push_back({iterate, objective, radius, kind, accepted});
  }

  // Rebuild the simplex around the current best point. Each new vertex is
  // offset from the best point known at that moment, which keeps the edge
  // matrix triangular and every move within the radius.
  void reset_simplex() {
    ++trace_.simplex_resets;
    Vec best = vertices_[pole_];
    double best_value = values_[pole_];
    std::size_t best_order = order_[pole_];
    vertices_ = {best};
    values_ = {best_value};
    order_ = {best_order};
    pole_ = 0;
    for (std::size_t i = 0; i < m_ && budget_left(); ++i) {
      const Vec from = vertices_[pole_];
      const double from_value = values_[pole_];
      Vec x = from;
      x[i] += rho_;
      keep_within(from, x, rho_);
      const double v = evaluate(x);
      vertices_.push_back(x);
      values_.push_back(v);
      order_.push_back(trace_.evaluations.size() - 1);
      select_pole();
      push_iteration(StepKind::reset, v < from_value, from, from_value, rho_);
    }
  }

  void geometry_step(const Model& model, std::size_t row) {
    Vec a = dual_direction(model, row);
    const double an = norm(a);
    double sign = 1.0;
    double slope = 0.0;
    for (std::size_t c = 0; c < m_; ++c) slope += model.gradient[c] * a[c];
    if (slope > 0.0) sign = -1.0;
    const Vec from = vertices_[pole_];
    const double from_value = values_[pole_];
    Vec x = from;
    for (std::size_t c = 0; c < m_; ++c) x[c] += sign * kGeometryStep * rho_ * a[c] / an;
    keep_within(from, x, kGeometryStep * rho_);
    const double v = evaluate(x);
    const std::size_t k = model.rows[row];
    vertices_[k] = std::move(x);
    values_[k] = v;
    order_[k] = trace_.evaluations.size() - 1;
    select_pole();
    push_iteration(StepKind::geometry, v < from_value, from, from_value, rho_);
  }

  // Put `x` into the simplex in place of the vertex whose removal keeps the
  // most volume, weighted towards dropping distant vertices. The pole may only
  // be dropped when the trial beat it.
  void absorb(const Model& model, const Vec& x, double v, bool improved) {
    const Vec& p = vertices_[pole_];
    Vec step(m_);
    for (std::size_t c = 0; c < m_; ++c) step[c] = x[c] - p[c];
    // lambda solves E^T lambda = step; E^-T = (E^-1)^T.
    Vec lambda(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < m_; ++c) s += model.inverse[c * m_ + r] * step[c];
      lambda[r] = s;
    }
    auto weight = [&](const Vec& vert) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < m_; ++c) d2 += (vert[c] - x[c]) * (vert[c] - x[c]);
      return std::max(1.0, d2 / (rho_ * rho_));
    };
    std::optional<std::size_t> drop;
    double best_score = improved ? 0.0 : 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      const double score = std::abs(lambda[r]) * weight(vertices_[model.rows[r]]);
      if (score > best_score) {
        best_score = score;
        drop = model.rows[r];
      }
    }
    if (improved) {
      double sum = 0.0;
      for (double l : lambda) sum += l;
      const double score = std::abs(1.0 - sum) * weight(p);
      if (score > best_score) drop = pole_;
    }
    if (!drop) return;
    vertices_[*drop] = x;
    values_[*drop] = v;
    order_[*drop] = trace_.evaluations.size() - 1;
    select_pole();
  }

  // Returns false when the radius cannot shrink any further.
  bool shrink() {
    if (rho_ <= cfg_.rho_end) return false;
    rho_ = std::max(0.5 * rho_, cfg_.rho_end);
    return true;
  }

  void iterate() {
    while (budget_left()) {
      auto model = build_model();
      if (!model) {
        reset_simplex();
        continue;
      }
      if (auto row = unacceptable_edge(*model)) {
        geometry_step(*model, *row);
        continue;
      }

      const Vec theta = vertices_[pole_];
      const double f_theta = values_[pole_];
      const double gnorm = norm(model->gradient);
      if (!(gnorm > 0.0) || !std::isfinite(gnorm)) {
        // Flat (or unusable) model: nothing to step along.
        push_iteration(StepKind::model, false, theta, f_theta, rho_);
        if (!shrink()) return;
        continue;
      }

      Vec trial = theta;
      const double scale = rho_ / gnorm;
      for (std::size_t c = 0; c < m_; ++c) trial[c] -= scale * model->gradient[c];
      keep_within(theta, trial, rho_);
      const double v = evaluate(trial);
      const bool improved = v < f_theta;
      push_iteration(StepKind::model, improved, theta, f_theta, rho_);
      absorb(*model, trial, v, improved);

      if (!improved) {
        // Only shrink once the simplex is well shaped; otherwise the next pass
        // repairs the geometry first.
        auto next = build_model();
        if (next && !unacceptable_edge(*next) && !shrink()) return;
      }
    }
  }

  const Objective& f_;
  OptimizerConfig cfg_;
  std::size_t m_;
  double rho_;
  Vec x0_;

  std::vector<Vec> vertices_;
  std::vector<double> values_;
  std::vector<std::size_t> order_;  // evaluation index that produced each vertex
  std::size_t pole_ = 0;
  TrustRegionTrace trace_;
};

}  // namespace

void OptimizerConfig::validate() const {
  if (!(rho_end > 0.0) || !(rho_end <= rho_begin)) {
    throw std::invalid_argument("OptimizerConfig: need 0 < rho_end <= rho_begin");
  }
}

MinimizeResult minimize(const Objective& f, std::span<const double> x0, const OptimizerConfig& config) {
  config.validate();
  if (x0.empty()) throw std::invalid_argument("cobyla: need at least one variable");
  return Minimizer(f, x0, config).run();
}

RegretReport regret(const TrustRegionTrace& trace, double f_star, double lipschitz) {
  if (lipschitz < 0.0) throw std::invalid_argument("regret: Lipschitz constant must be non-negative");
  if (!trace.evaluations.empty()) {
    const double lowest = *std::min_element(trace.evaluations.begin(), trace.evaluations.end());
    if (f_star > lowest) {
      throw std::invalid_argument(fmt::format("regret: f_star {} exceeds the best objective in the trace {}", f_star, lowest));
    }
  }
  RegretReport r;
  double radius_sum = 0.0;
  for (const auto& it : trace.iterations) {
    r.regret += it.objective - f_star;
    radius_sum += it.radius;
  }
  r.bound = lipschitz * radius_sum;
  return r;
}

void write_evaluations_csv(std::ostream& out, const TrustRegionTrace& trace) {
  out << "eval_index,objective\n";
  for (std::size_t i = 0; i < trace.evaluations.size(); ++i) fmt::print(out, "{},{}\n", i, trace.evaluations[i]);
}

void write_radius_csv(std::ostream& out, const TrustRegionTrace& trace) {
  out << "iter_index,radius\n";
  for (std::size_t i = 0; i < trace.iterations.size(); ++i) fmt::print(out, "{},{}\n", i, trace.iterations[i].radius);
}

}  // namespace orbqfl::cobyla
