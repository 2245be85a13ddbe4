#pragma once

// Unconstrained COBYLA: derivative-free trust-region minimization driven by
// linear interpolation over a simplex of m+1 points.
//
// Every evaluation after the initial simplex is logged as a trust-region
// iteration (model step, geometry repair, or simplex reset), together with
// the iterate and radius in force when it was taken. Consecutive iterates
// therefore never move by more than the radius recorded for the earlier one,
// and the radius only ever shrinks.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace orbqfl::cobyla {

struct OptimizerConfig {
  double rho_begin = 1.0;
  double rho_end = 1e-4;
  std::size_t max_fun = 100;

  void validate() const;
};

enum class StepKind { model, geometry, reset };

struct TrustRegionStep {
  std::vector<double> iterate;  // best point when the step was taken
  double objective = 0.0;       // objective at `iterate`
  double radius = 0.0;          // trust-region radius in force
  StepKind kind = StepKind::model;
  bool accepted = false;        // the trial point became the new iterate
};

struct TrustRegionTrace {
  std::vector<TrustRegionStep> iterations;
  std::vector<double> evaluations;  // every objective value, in call order
  std::size_t simplex_resets = 0;
};

struct MinimizeResult {
  std::vector<double> x_best;
  double f_best = 0.0;  // NaN when no evaluation was made
  double final_radius = 0.0;
  TrustRegionTrace trace;
};

using Objective = std::function<double(std::span<const double>)>;

/// Non-finite values during the search are treated as +inf; a non-finite
/// value at x0 throws std::invalid_argument. With max_fun == 0 the objective
/// is never called and x0 is returned.
MinimizeResult minimize(const Objective& f, std::span<const double> x0, const OptimizerConfig& config = {});

struct RegretReport {
  double regret = 0.0;  // sum over iterations of F(theta_t) - f_star
  double bound = 0.0;   // lipschitz * sum over iterations of radius_t
};

/// Throws std::invalid_argument when f_star exceeds the smallest objective
/// seen in the trace, or when lipschitz is negative.
RegretReport regret(const TrustRegionTrace& trace, double f_star, double lipschitz);

/// CSV: eval_index,objective
void write_evaluations_csv(std::ostream& out, const TrustRegionTrace& trace);
/// CSV: iter_index,radius
void write_radius_csv(std::ostream& out, const TrustRegionTrace& trace);

}  // namespace orbqfl::cobyla
