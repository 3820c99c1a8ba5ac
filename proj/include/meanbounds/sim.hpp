#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "meanbounds/types.hpp"

namespace meanbounds {

enum class PopulationFamily { normal, logistic, gamma, uniform };

/// Population distribution for synthetic draws. Parameter meaning:
/// normal/logistic (location, scale), gamma (shape, scale), uniform (a, b).
struct PopulationDist {
  PopulationFamily family = PopulationFamily::normal;
  double p1 = 0.0;
  double p2 = 1.0;

  double mean() const;
  double cdf(double y) const;
};

/// Monotone selection model: a logistic curve in y mapped affinely into
/// [pi_min, gamma_true * pi_min], so the selection-probability ratio over the
/// support approaches gamma_true.
struct SelectionModel {
  double pi_min = 0.1;
  double gamma_true = 1.0;
  double center = 0.0;
  double width = 1.0;

  double pi(double y) const;
  void validate() const;
};

struct Scenario {
  PopulationDist population;
  SelectionModel selection;
  int n = 100;
  std::uint64_t seed = 1;
};

struct DrawResult {
  Sample sample;
  std::vector<double> probs;  // true selection probabilities, sample order
};

/// Accept-reject draw of n observations; deterministic given the seed.
/// Streams come from mt19937_64 seeded with splitmix64(seed + rep), the
/// scheme named in report metadata. Throws std::invalid_argument when the
/// scenario cannot plausibly produce acceptances.
DrawResult draw_biased_sample(const Scenario& scenario);

/// Per-replication coverage record. When the plausibility set is empty the
/// row is marked and the interval fields are meaningless.
struct CoverageRow {
  int rep = 0;
  double mu = 0.0;
  double hajek = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double width = 0.0;
  bool contains_mu = false;
  bool contains_hajek = false;
  double delta_mu = 0.0;  // distance from mu to the interval
  bool empty_set = false;
};

struct CoverageReport {
  std::vector<CoverageRow> rows;
  double coverage_mu = 0.0;
  double coverage_hajek = 0.0;
  double mean_width = 0.0;
  double mean_delta_mu = 0.0;
  int empty_count = 0;
  std::uint64_t seed = 0;
  std::string rng_name;  // seed-to-stream algorithm, for reproducibility
};

/// Runs `reps` independent replications of draw + bound computation under
/// per-rep derived seeds (seed + rep through splitmix64). Replications run
/// in parallel; aggregation is order-independent.
CoverageReport coverage_experiment(const Scenario& scenario,
                                   const ConstraintSpec& spec, int reps,
                                   int threads = 0);

/// Flat CSV, one row per replication.
void write_coverage_csv(const CoverageReport& report, std::ostream& os);

/// JSON summary of the aggregates plus run metadata.
void write_coverage_summary(const CoverageReport& report,
                            const Scenario& scenario,
                            const ConstraintSpec& spec, std::ostream& os);

}  // namespace meanbounds
