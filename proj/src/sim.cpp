#include "meanbounds/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "meanbounds/bounds.hpp"
#include "meanbounds/detail/parallel.hpp"
#include "meanbounds/detail/textout.hpp"
#include "meanbounds/estimators.hpp"
#include "meanbounds/distributions.hpp"

namespace meanbounds {

namespace {

constexpr const char* kRngName = "mt19937_64(splitmix64(seed + rep))";

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

// Regularized lower incomplete gamma P(a, x), series / continued fraction.
double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Lentz continued fraction for Q(a, x).
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - lg) * h;
}

double draw_standard_normal(std::mt19937_64& rng) {
  return normal_quantile(uniform01(rng));
}

// Marsaglia-Tsang squeeze for gamma(shape, 1).
double draw_gamma_shape(std::mt19937_64& rng, double shape) {
  if (shape < 1.0) {
    const double g = draw_gamma_shape(rng, shape + 1.0);
    return g * std::pow(uniform01(rng), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double x = draw_standard_normal(rng);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = uniform01(rng);
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v;
    }
  }
}

double draw_population(std::mt19937_64& rng, const PopulationDist& pop) {
  switch (pop.family) {
    case PopulationFamily::normal:
      return pop.p1 + pop.p2 * draw_standard_normal(rng);
    case PopulationFamily::logistic: {
      const double u = uniform01(rng);
      return pop.p1 + pop.p2 * std::log(u / (1.0 - u));
    }
    case PopulationFamily::gamma:
      return pop.p2 * draw_gamma_shape(rng, pop.p1);
    case PopulationFamily::uniform:
      return pop.p1 + (pop.p2 - pop.p1) * uniform01(rng);
  }
  throw std::invalid_argument("draw_population: unknown family");
}

void validate_population(const PopulationDist& pop) {
  switch (pop.family) {
    case PopulationFamily::normal:
    case PopulationFamily::logistic:
      if (!(pop.p2 > 0.0)) {
        throw std::invalid_argument("population: scale must be > 0");
      }
      break;
    case PopulationFamily::gamma:
      if (!(pop.p1 > 0.0) || !(pop.p2 > 0.0)) {
        throw std::invalid_argument("population: gamma shape/scale must be > 0");
      }
      break;
    case PopulationFamily::uniform:
      if (!(pop.p1 < pop.p2)) {
        throw std::invalid_argument("population: uniform needs a < b");
      }
      break;
  }
}

}  // namespace

double PopulationDist::mean() const {
  switch (family) {
    case PopulationFamily::normal:
    case PopulationFamily::logistic:
      return p1;
    case PopulationFamily::gamma:
      return p1 * p2;
    case PopulationFamily::uniform:
      return 0.5 * (p1 + p2);
  }
  return 0.0;
}

double PopulationDist::cdf(double y) const {
  switch (family) {
    case PopulationFamily::normal:
      return normal_cdf((y - p1) / p2);
    case PopulationFamily::logistic:
      return 1.0 / (1.0 + std::exp(-(y - p1) / p2));
    case PopulationFamily::gamma:
      return gamma_p(p1, y / p2);
    case PopulationFamily::uniform:
      return std::min(1.0, std::max(0.0, (y - p1) / (p2 - p1)));
  }
  return 0.0;
}

double SelectionModel::pi(double y) const {
  const double logistic = 1.0 / (1.0 + std::exp(-(y - center) / width));
  return pi_min * (1.0 + (gamma_true - 1.0) * logistic);
}

void SelectionModel::validate() const {
  if (!(pi_min > 0.0) || !(gamma_true >= 1.0) || !(width > 0.0)) {
    throw std::invalid_argument("selection: need pi_min > 0, gamma >= 1, width > 0");
  }
  if (pi_min * gamma_true > 1.0 + 1e-12) {
    throw std::invalid_argument("selection: pi exceeds 1 at the upper end");
  }
  // Expected acceptances per 1e6 proposals must not drop below 1.
  if (pi_min < 1e-6) {
    throw std::invalid_argument("selection: acceptance rate too small");
  }
}

DrawResult draw_biased_sample(const Scenario& scenario) {
  validate_population(scenario.population);
  scenario.selection.validate();
  if (scenario.n < 1) {
    throw std::invalid_argument("scenario: n must be positive");
  }

  std::mt19937_64 rng(splitmix64(scenario.seed));
  std::vector<std::pair<double, double>> accepted;
  accepted.reserve(scenario.n);
  long long proposals = 0;
  const long long stall_cap =
      2'000'000LL * scenario.n + 10'000'000LL;
  while (static_cast<int>(accepted.size()) < scenario.n) {
    if (++proposals > stall_cap) {
      throw std::invalid_argument("scenario: acceptance stalled");
    }
    const double y = draw_population(rng, scenario.population);
    const double p = scenario.selection.pi(y);
    if (uniform01(rng) < p) accepted.emplace_back(y, p);
  }
  std::sort(accepted.begin(), accepted.end());
  std::vector<double> values(scenario.n), probs(scenario.n);
  for (int i = 0; i < scenario.n; ++i) {
    values[i] = accepted[i].first;
    probs[i] = accepted[i].second;
  }
  return DrawResult{Sample(std::move(values)), std::move(probs)};
}

CoverageReport coverage_experiment(const Scenario& scenario,
                                   const ConstraintSpec& spec, int reps,
                                   int threads) {
  if (reps < 1) {
    throw std::invalid_argument("coverage_experiment: reps must be positive");
  }
  spec.validate();
  validate_population(scenario.population);
  scenario.selection.validate();

  CoverageReport report;
  report.rows.resize(reps);
  report.seed = scenario.seed;
  report.rng_name = kRngName;
  const double mu = scenario.population.mean();

  detail::parallel_for(static_cast<std::size_t>(reps), threads,
                       [&](std::size_t r) {
    Scenario rep_scenario = scenario;
    rep_scenario.seed = scenario.seed + static_cast<std::uint64_t>(r);
    const DrawResult draw = draw_biased_sample(rep_scenario);

    CoverageRow row;
    row.rep = static_cast<int>(r);
    row.mu = mu;
    row.hajek = hajek_estimate(draw.sample, draw.probs);
    try {
      // Replications already run in parallel; keep each one sequential.
      const IdentificationInterval iv =
          compute_bounds(draw.sample, spec, nullptr, 1);
      row.lower = iv.lower;
      row.upper = iv.upper;
      row.width = iv.width();
      row.contains_mu = iv.contains(mu);
      row.contains_hajek = iv.contains(row.hajek);
      row.delta_mu = std::max({iv.lower - mu, mu - iv.upper, 0.0});
    } catch (const empty_plausibility_set_error&) {
      row.empty_set = true;
      row.lower = row.upper = row.width = row.delta_mu =
          std::numeric_limits<double>::quiet_NaN();
    }
    report.rows[r] = row;
  });

  int ok = 0;
  for (const auto& row : report.rows) {
    if (row.empty_set) {
      ++report.empty_count;
      continue;
    }
    ++ok;
    report.coverage_mu += row.contains_mu ? 1.0 : 0.0;
    report.coverage_hajek += row.contains_hajek ? 1.0 : 0.0;
    report.mean_width += row.width;
    report.mean_delta_mu += row.delta_mu;
  }
  report.coverage_mu /= reps;
  report.coverage_hajek /= reps;
  if (ok > 0) {
    report.mean_width /= ok;
    report.mean_delta_mu /= ok;
  }
  return report;
}

void write_coverage_csv(const CoverageReport& report, std::ostream& os) {
  os << "rep,mu,hajek,lower,upper,width,contains_mu,contains_hajek,"
        "delta_mu,status\n";
  for (const auto& r : report.rows) {
    os << r.rep << ',' << detail::format_double(r.mu) << ','
       << detail::format_double(r.hajek) << ','
       << detail::format_double(r.lower) << ','
       << detail::format_double(r.upper) << ','
       << detail::format_double(r.width) << ',' << (r.contains_mu ? 1 : 0)
       << ',' << (r.contains_hajek ? 1 : 0) << ','
       << detail::format_double(r.delta_mu) << ','
       << (r.empty_set ? "empty" : "ok") << '\n';
  }
}

namespace {

const char* family_label(PopulationFamily f) {
  switch (f) {
    case PopulationFamily::normal: return "normal";
    case PopulationFamily::logistic: return "logistic";
    case PopulationFamily::gamma: return "gamma";
    case PopulationFamily::uniform: return "uniform";
  }
  return "unknown";
}

}  // namespace

void write_coverage_summary(const CoverageReport& report,
                            const Scenario& scenario,
                            const ConstraintSpec& spec, std::ostream& os) {
  const auto d = [](double v) { return detail::format_double(v); };
  os << "{\n"
     << "  \"schemaVersion\": 1,\n"
     << "  \"reps\": " << report.rows.size() << ",\n"
     << "  \"coverageMu\": " << d(report.coverage_mu) << ",\n"
     << "  \"coverageHajek\": " << d(report.coverage_hajek) << ",\n"
     << "  \"meanWidth\": " << d(report.mean_width) << ",\n"
     << "  \"meanDeltaMu\": " << d(report.mean_delta_mu) << ",\n"
     << "  \"emptyCount\": " << report.empty_count << ",\n"
     << "  \"seed\": " << report.seed << ",\n"
     << "  \"rng\": \"" << report.rng_name << "\",\n"
     << "  \"scenario\": {\n"
     << "    \"population\": \"" << family_label(scenario.population.family)
     << "\",\n"
     << "    \"p1\": " << d(scenario.population.p1) << ",\n"
     << "    \"p2\": " << d(scenario.population.p2) << ",\n"
     << "    \"n\": " << scenario.n << ",\n"
     << "    \"piMin\": " << d(scenario.selection.pi_min) << ",\n"
     << "    \"gammaTrue\": " << d(scenario.selection.gamma_true) << ",\n"
     << "    \"selectionCenter\": " << d(scenario.selection.center) << ",\n"
     << "    \"selectionWidth\": " << d(scenario.selection.width) << "\n"
     << "  },\n"
     << "  \"spec\": {\n"
     << "    \"gamma\": " << d(spec.gamma) << ",\n"
     << "    \"family\": \"" << family_name(spec.family) << "\",\n"
     << "    \"deltaStar\": " << d(spec.delta_star) << "\n"
     << "  }\n"
     << "}\n";
}

}  // namespace meanbounds
