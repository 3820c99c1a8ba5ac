#pragma once

#include <optional>
#include <string>
#include <vector>

#include "meanbounds/types.hpp"

namespace meanbounds {

/// Interval from the ratio-bound assumption alone, computed by the exact
/// threshold scan over two-level weightings (weights proportional to 1 below
/// a cut index and to gamma above it, and the mirror for the lower
/// endpoint). Requires n >= 2 and gamma >= 1.
IdentificationInterval al_bounds(const Sample& sample, double gamma);

/// Same optimum through the generic weight LP; kept as an independent route
/// for cross-checking the scan.
IdentificationInterval al_bounds_lp(const Sample& sample, double gamma);

/// ECDF lowered by kolmogorov_quantile(1 - 1/sqrt(n)) / sqrt(n), clipped at
/// zero: a high-probability lower envelope for the observed-sample CDF.
StepFunction ks_lower_envelope(const Sample& sample);

/// Lower bound for the population CDF derived from the envelope sks, the
/// ratio bound and a weight-switch threshold m (which must lie within the
/// envelope's breakpoint range):
///   U_m(y) = (g*sks(y) - (g-1)*sks(min(y,m))) / (g - (g-1)*sks(m)).
StepFunction u_lower_bound(const StepFunction& sks, double gamma, double m);

/// Piecewise log-linear function: exp of a linear interpolation through
/// (x, log_v) nodes. Zero to the left of the domain, constant to the right.
struct PiecewiseLogLinear {
  std::vector<double> x;
  std::vector<double> log_v;

  double operator()(double y) const;
};

/// Least concave majorant of log u over the breakpoints where u is positive,
/// exponentiated: the smallest log-concave upper bound through those points.
/// Throws std::invalid_argument when u has no positive level.
PiecewiseLogLinear log_concave_majorant(const StepFunction& u);

/// Same construction on raw (breakpoint, value) pairs; values need not be
/// monotone, only nonnegative.
PiecewiseLogLinear log_concave_majorant(const std::vector<double>& breakpoints,
                                        const std::vector<double>& values);

/// One prefix-sum constraint on the weight vector: with P_k the sum of the
/// first k weights, requires P_a (+ P_b when b >= 0) to lie in [lo, hi].
struct PrefixConstraint {
  int a = 0;
  int b = -1;  // -1 means a single-index constraint
  double lo = 0.0;
  double hi = 1.0;
};

/// Per-grid-point constraint material for one shape family.
struct GridArtifact {
  double grid_point = 0.0;
  double grid_scale = 0.0;  // parametric family only
  bool precheck_feasible = true;  // verdict of the variable-free rows
  std::vector<PrefixConstraint> constraints;
  std::optional<StepFunction> u_m;             // log-concave only
  std::optional<PiecewiseLogLinear> majorant;  // log-concave only
};

struct EnvelopeSet {
  Family kind = Family::none;
  std::vector<GridArtifact> artifacts;
};

/// Builds the full grid of constraint artifacts for the active family.
/// For the log-concave family this is the upper-endpoint set; the lower
/// endpoint uses the mirrored sample.
EnvelopeSet build_envelope_set(const Sample& sample, const ConstraintSpec& spec);

IdentificationInterval parametric_bounds(const Sample& sample,
                                         const ConstraintSpec& spec,
                                         std::vector<std::string>* warnings = nullptr,
                                         int threads = 0);

IdentificationInterval symmetric_bounds(const Sample& sample,
                                        const ConstraintSpec& spec,
                                        std::vector<std::string>* warnings = nullptr,
                                        int threads = 0);

IdentificationInterval log_concave_bounds(const Sample& sample,
                                          const ConstraintSpec& spec,
                                          std::vector<std::string>* warnings = nullptr,
                                          int threads = 0);

/// Dispatches to the four estimators and attaches provenance (grid argmax,
/// weights, constraint spec echo). family == none reproduces al_bounds
/// bit for bit. A sample with all values equal short-circuits to the
/// degenerate interval for every family.
IdentificationInterval compute_bounds(const Sample& sample,
                                      const ConstraintSpec& spec,
                                      std::vector<std::string>* warnings = nullptr,
                                      int threads = 0);

}  // namespace meanbounds
