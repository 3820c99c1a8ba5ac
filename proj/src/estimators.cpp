#include "meanbounds/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace meanbounds {

double hajek_estimate(const Sample& sample, const std::vector<double>& probs) {
  const auto& y = sample.values();
  if (probs.size() != y.size()) {
    throw std::invalid_argument("hajek_estimate: probs length mismatch");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = probs[i];
    if (!(p > 0.0 && p <= 1.0)) {
      throw std::invalid_argument("hajek_estimate: probability outside (0,1]");
    }
    num += y[i] / p;
    den += 1.0 / p;
  }
  return num / den;
}

StepFunction weighted_ecdf(const Sample& sample,
                           const std::vector<double>& weights) {
  const auto& y = sample.values();
  if (weights.size() != y.size()) {
    throw std::invalid_argument("weighted_ecdf: weights length mismatch");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("weighted_ecdf: weights must be positive");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-6) {
    throw std::invalid_argument("weighted_ecdf: weights do not sum to 1");
  }

  std::vector<double> breakpoints, levels;
  breakpoints.reserve(y.size());
  levels.reserve(y.size());
  double cum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    cum += weights[i];
    if (i + 1 == y.size() || y[i + 1] != y[i]) {
      breakpoints.push_back(y[i]);
      levels.push_back(std::min(cum, 1.0));
    }
  }
  levels.back() = 1.0;
  return StepFunction(std::move(breakpoints), std::move(levels), 0.0);
}

double ks_distance(const StepFunction& f,
                   const std::function<double(double)>& cdf) {
  const auto& bp = f.breakpoints();
  double best = std::max(f.pre_level(), std::fabs(f.top_level() - 1.0));
  for (std::size_t k = 0; k < bp.size(); ++k) {
    const double g = cdf(bp[k]);
    best = std::max(best, std::fabs(f.levels()[k] - g));
    const double left = (k == 0) ? f.pre_level() : f.levels()[k - 1];
    best = std::max(best, std::fabs(left - g));
  }
  return best;
}

}  // namespace meanbounds
