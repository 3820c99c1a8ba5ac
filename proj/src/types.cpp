#include "meanbounds/types.hpp"

#include <algorithm>
#include <cmath>

namespace meanbounds {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("Sample: empty value list");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Sample: non-finite value");
    }
  }
  std::sort(values_.begin(), values_.end());
}

double Sample::mean() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum / static_cast<double>(values_.size());
}

double Sample::stddev() const {
  if (values_.size() < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double v : values_) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values_.size() - 1));
}

std::size_t Sample::count_le(double y) const {
  return static_cast<std::size_t>(
      std::upper_bound(values_.begin(), values_.end(), y) - values_.begin());
}

std::size_t Sample::count_lt(double y) const {
  return static_cast<std::size_t>(
      std::lower_bound(values_.begin(), values_.end(), y) - values_.begin());
}

std::string family_name(Family family) {
  switch (family) {
    case Family::none: return "none";
    case Family::parametric_gaussian: return "normal";
    case Family::symmetric: return "symmetric";
    case Family::log_concave: return "logconcave";
  }
  return "unknown";
}

void ConstraintSpec::validate() const {
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("ConstraintSpec: gamma must be >= 1");
  }
  if (!(delta_star >= 0.0) || !std::isfinite(delta_star)) {
    throw std::invalid_argument("ConstraintSpec: delta_star must be >= 0");
  }
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) {
    throw std::invalid_argument("ConstraintSpec: alpha must be in (0,1)");
  }
  if (family == Family::parametric_gaussian) {
    if (theta_grid.location_count < 1 || theta_grid.scale_count < 1) {
      throw std::invalid_argument("ConstraintSpec: empty theta grid");
    }
  }
  if (family == Family::symmetric || family == Family::log_concave) {
    if (m_grid.count < 0) {
      throw std::invalid_argument("ConstraintSpec: negative m grid count");
    }
  }
  if (m_grid.range && !(m_grid.range->first <= m_grid.range->second)) {
    throw std::invalid_argument("ConstraintSpec: inverted m grid range");
  }
}

double ConstraintSpec::resolve_alpha(std::size_t n) const {
  if (alpha) return *alpha;
  return 1.0 / std::sqrt(static_cast<double>(n));
}

StepFunction::StepFunction(std::vector<double> breakpoints,
                           std::vector<double> levels, double pre_level)
    : breakpoints_(std::move(breakpoints)),
      levels_(std::move(levels)),
      pre_level_(pre_level) {
  if (breakpoints_.empty() || breakpoints_.size() != levels_.size()) {
    throw std::invalid_argument("StepFunction: breakpoint/level mismatch");
  }
  constexpr double kTol = 1e-9;
  double prev_level = pre_level_;
  if (pre_level_ < -kTol) {
    throw std::invalid_argument("StepFunction: negative pre-level");
  }
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (!std::isfinite(breakpoints_[k]) || !std::isfinite(levels_[k])) {
      throw std::invalid_argument("StepFunction: non-finite entry");
    }
    if (k > 0 && !(breakpoints_[k] > breakpoints_[k - 1])) {
      throw std::invalid_argument(
          "StepFunction: breakpoints not strictly increasing");
    }
    if (levels_[k] < prev_level - kTol || levels_[k] > 1.0 + kTol) {
      throw std::invalid_argument("StepFunction: levels not nondecreasing in [0,1]");
    }
    prev_level = levels_[k];
  }
}

double StepFunction::operator()(double y) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), y);
  if (it == breakpoints_.begin()) return pre_level_;
  return levels_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepFunction::left_limit(double y) const {
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), y);
  if (it == breakpoints_.begin()) return pre_level_;
  return levels_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

}  // namespace meanbounds
