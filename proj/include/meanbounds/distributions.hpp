#pragma once

#include <cstddef>

namespace meanbounds {

/// Concentration constants for a given sampling-ratio bound gamma.
/// sigma_sq is the maximum of v(t) = t(1-t) + a_gamma(t) over [0, 0.5],
/// attained at t_star; omega_sq_bound = (1+gamma)(1+1/gamma)/4.
struct GammaConstants {
  double gamma = 1.0;
  double sigma_sq = 0.25;
  double t_star = 0.5;
  double omega_sq_bound = 1.0;
};

/// a_gamma(t) = gamma*t / (1 - t + gamma*t) - t for t in [0, 0.5],
/// mirrored as a_gamma(1-t) on (0.5, 1]. Throws on t outside [0, 1]
/// or gamma < 1.
double a_gamma(double t, double gamma);

/// Maximizes t(1-t) + a_gamma(t) over [0, 0.5] by golden-section search
/// (the function is concave there) to 1e-12 in t. Results are memoized
/// per gamma; the cache is safe for concurrent use.
GammaConstants sigma_gamma_sq(double gamma);

/// Band radius sqrt(sigma_sq * (1+gamma)(1+1/gamma) * log(n) / (4n)).
/// Throws for n < 2.
double delta_gamma_n(double gamma, int n);

/// Symmetry-band constant Phi^{-1}(1 - alpha/4) * sqrt((1+gamma)(1+1/gamma)/4).
double zeta_gamma_alpha(double gamma, double alpha);

/// Standard normal CDF, accurate to close to machine precision.
double normal_cdf(double x);

/// Standard normal quantile: rational approximation refined by one Newton
/// step against the erfc-based CDF. |normal_cdf(normal_quantile(p)) - p| is
/// below 1e-10 for p in [1e-8, 1 - 1e-8]. Throws for p outside (0, 1).
double normal_quantile(double p);

/// Kolmogorov-Smirnov limit CDF K(x) = 1 - 2 sum_{k>=1} (-1)^{k-1} e^{-2k^2x^2},
/// truncated when a term drops below 1e-14. Returns 0 for x < 0.05 where the
/// value is below double precision anyway. Throws for x <= 0.
double kolmogorov_cdf(double x);

/// Inverse of kolmogorov_cdf by bisection on [0.05, 5] to 1e-10.
/// Throws for p outside (0, 1).
double kolmogorov_quantile(double p);

}  // namespace meanbounds
