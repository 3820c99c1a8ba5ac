#include "meanbounds/distributions.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace meanbounds {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

double omega_sq_bound(double gamma) {
  return (1.0 + gamma) * (1.0 + 1.0 / gamma) / 4.0;
}

double variance_profile(double t, double gamma) {
  return t * (1.0 - t) + a_gamma(t, gamma);
}

}  // namespace

double a_gamma(double t, double gamma) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("a_gamma: t must be in [0,1]");
  }
  if (!(gamma >= 1.0)) {
    throw std::invalid_argument("a_gamma: gamma must be >= 1");
  }
  if (t > 0.5) t = 1.0 - t;
  return gamma * t / (1.0 - t + gamma * t) - t;
}

GammaConstants sigma_gamma_sq(double gamma) {
  if (!(gamma >= 1.0)) {
    throw std::invalid_argument("sigma_gamma_sq: gamma must be >= 1");
  }

  if (gamma == 1.0) {
    // The correction term vanishes and t(1-t) peaks exactly at 0.5.
    return GammaConstants{1.0, 0.25, 0.5, 1.0};
  }

  static std::mutex cache_mutex;
  static std::map<double, GammaConstants> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(gamma);
    if (it != cache.end()) return it->second;
  }

  // Golden-section search on [0, 0.5]; the profile is concave there.
  constexpr double kInvPhi = 0.6180339887498948482;
  double lo = 0.0, hi = 0.5;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = variance_profile(x1, gamma);
  double f2 = variance_profile(x2, gamma);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = variance_profile(x2, gamma);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = variance_profile(x1, gamma);
    }
  }
  GammaConstants out;
  out.gamma = gamma;
  out.t_star = 0.5 * (lo + hi);
  out.sigma_sq = variance_profile(out.t_star, gamma);
  out.omega_sq_bound = omega_sq_bound(gamma);

  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(gamma, out);
  return out;
}

double delta_gamma_n(double gamma, int n) {
  if (n < 2) {
    throw std::invalid_argument("delta_gamma_n: n must be >= 2");
  }
  const GammaConstants c = sigma_gamma_sq(gamma);
  const double nn = static_cast<double>(n);
  return std::sqrt(c.sigma_sq * (1.0 + gamma) * (1.0 + 1.0 / gamma) *
                   std::log(nn) / (4.0 * nn));
}

double zeta_gamma_alpha(double gamma, double alpha) {
  if (!(gamma >= 1.0)) {
    throw std::invalid_argument("zeta_gamma_alpha: gamma must be >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("zeta_gamma_alpha: alpha must be in (0,1)");
  }
  return normal_quantile(1.0 - alpha / 4.0) * std::sqrt(omega_sq_bound(gamma));
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / kSqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must be in (0,1)");
  }

  // Acklam's rational approximation (relative error ~1.15e-9).
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Newton step against the erfc-based CDF.
  const double err = normal_cdf(x) - p;
  const double pdf =
      std::exp(-0.5 * x * x) / 2.5066282746310005024;  // sqrt(2*pi)
  if (pdf > 0.0) x -= err / pdf;
  return x;
}

double kolmogorov_cdf(double x) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("kolmogorov_cdf: x must be > 0");
  }
  if (x < 0.05) return 0.0;  // below double precision
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-14) break;
  }
  double v = 1.0 - 2.0 * sum;
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  return v;
}

double kolmogorov_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("kolmogorov_quantile: p must be in (0,1)");
  }
  double lo = 0.05, hi = 5.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (kolmogorov_cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace meanbounds
