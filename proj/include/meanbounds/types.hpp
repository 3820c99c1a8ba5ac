#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace meanbounds {

/// Thrown when every grid point of a shape-constrained estimator turns out
/// infeasible. This means the assumed constraint family is incompatible with
/// the data at the chosen gamma/alpha/delta, which is scientific information
/// rather than a program failure; the CLI maps it to its own exit code.
class empty_plausibility_set_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when the LP solver hits its pivot cap or cannot certify a result
/// numerically. Distinct from infeasibility.
class solver_failure_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A real-valued sample kept sorted nondecreasing, ties preserved as
/// multiplicities. All values must be finite.
class Sample {
 public:
  /// Sorts the values. Throws std::invalid_argument on empty input or any
  /// non-finite value.
  explicit Sample(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }
  double mean() const;
  /// Sample standard deviation (n-1 denominator); 0 for n < 2.
  double stddev() const;
  bool all_equal() const { return values_.front() == values_.back(); }

  /// Number of observations with value <= y.
  std::size_t count_le(double y) const;
  /// Number of observations with value < y.
  std::size_t count_lt(double y) const;

 private:
  std::vector<double> values_;
};

/// A probability-weight vector aligned to Sample order, together with the
/// weighted-mean objective it attains and the grid coordinates that produced
/// it (center m, or location/scale for the parametric family).
struct WeightSolution {
  std::vector<double> weights;
  double objective = 0.0;
  bool feasible = false;
  std::optional<double> grid_point;
  std::optional<double> grid_scale;
};

enum class Family { none, parametric_gaussian, symmetric, log_concave };

std::string family_name(Family family);

/// Location/scale grid for the parametric family. Ranges default to
/// data-driven choices: location = sample mean +- 3 standard errors,
/// scale = [0.5, 2] x sample standard deviation.
struct ThetaGrid {
  int location_count = 21;
  int scale_count = 21;
  std::optional<std::pair<double, double>> location_range;
  std::optional<std::pair<double, double>> scale_range;
};

/// Center/threshold grid for the symmetric and log-concave families.
/// count == 0 selects the family default (101 equispaced points over the
/// data range for symmetric; distinct order statistics thinned to <= 200
/// for log-concave). The range applies to the symmetric family only.
struct MGrid {
  int count = 0;
  std::optional<std::pair<double, double>> range;
};

/// Which plausibility-set family is active and with what parameters.
struct ConstraintSpec {
  double gamma = 1.0;
  Family family = Family::none;
  /// Band level; defaults to 1/sqrt(n) when unset.
  std::optional<double> alpha;
  /// Extra band width allowing F to be merely near the constrained class.
  double delta_star = 0.0;
  ThetaGrid theta_grid;
  MGrid m_grid;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
  double resolve_alpha(std::size_t n) const;
};

/// Lower/upper bound pair with per-endpoint provenance.
struct IdentificationInterval {
  double lower = 0.0;
  double upper = 0.0;
  WeightSolution lower_solution;
  WeightSolution upper_solution;
  ConstraintSpec method;

  double width() const { return upper - lower; }
  bool contains(double x, double tol = 1e-12) const {
    return x >= lower - tol && x <= upper + tol;
  }
};

/// Right-continuous nondecreasing piecewise-constant function with values in
/// [0, 1]: value(y) = levels[k] on [breakpoints[k], breakpoints[k+1]) and
/// pre_level before the first breakpoint.
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> levels,
               double pre_level = 0.0);

  double operator()(double y) const;
  double left_limit(double y) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& levels() const { return levels_; }
  double pre_level() const { return pre_level_; }
  double top_level() const { return levels_.back(); }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> levels_;
  double pre_level_ = 0.0;
};

}  // namespace meanbounds
