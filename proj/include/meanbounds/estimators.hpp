#pragma once

#include <functional>
#include <vector>

#include "meanbounds/types.hpp"

namespace meanbounds {

/// Ratio estimator sum(Y_i / p_i) / sum(1 / p_i) for selection probabilities
/// p aligned to sample order, each in (0, 1]. Invariant to rescaling all
/// probabilities by a common positive constant.
double hajek_estimate(const Sample& sample, const std::vector<double>& probs);

/// Weighted empirical CDF: breakpoints at distinct sample values, level at y
/// equal to the total weight of observations <= y. Weights must be positive
/// and sum to 1 within 1e-6.
StepFunction weighted_ecdf(const Sample& sample,
                           const std::vector<double>& weights);

/// sup_y |f(y) - cdf(y)| for a step function against a continuous
/// nondecreasing CDF with range [0, 1]. Evaluated exactly on the finite
/// candidate set: breakpoints, their left limits, and the two tails.
double ks_distance(const StepFunction& f,
                   const std::function<double(double)>& cdf);

}  // namespace meanbounds
