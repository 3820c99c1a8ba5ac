#pragma once

#include <iosfwd>
#include <vector>

#include "meanbounds/types.hpp"

namespace meanbounds {

enum class LpSense { maximize, minimize };
enum class LpStatus { optimal, infeasible, unbounded };

/// One linear constraint: coeffs . x  (= | <=)  rhs.
struct LpRow {
  std::vector<double> coeffs;
  double rhs = 0.0;
};

/// A dense LP: optimize objective . x subject to equality and <= rows and
/// per-variable lower bounds (default 0).
struct LpProblem {
  LpSense sense = LpSense::maximize;
  std::vector<double> objective;
  std::vector<LpRow> eq_rows;
  std::vector<LpRow> le_rows;
  std::vector<double> lower_bounds;  // empty means all zero

  std::size_t num_vars() const { return objective.size(); }
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> solution;  // meaningful when optimal
  double objective_value = 0.0;
};

struct LpOptions {
  /// Orientation of the simplex run. The automatic mode solves the dual when
  /// the instance has many more rows than variables, which keeps the basis
  /// small; forcing an orientation is mainly for tests.
  enum class Orientation { automatic, primal, dual };
  Orientation orientation = Orientation::automatic;
  long max_pivots = 1'000'000;
};

/// Two-phase revised simplex with Bland's rule fallback after
/// 10*(rows+cols) degenerate pivots. Throws solver_failure_error if the
/// pivot cap is reached or the result cannot be certified numerically;
/// infeasible/unbounded are reported through the result status.
LpResult solve(const LpProblem& problem, const LpOptions& options = {});

/// The weight-optimization skeleton shared by every bound estimator:
/// variables (w_1..w_n, s), constraints sum(w) = 1, s - w_i <= 0,
/// w_i - gamma*s <= 0, plus caller rows linear in w (length n, padded with a
/// zero s coefficient), objective +/- sum(w_i Y_i).
LpProblem build_weight_lp(const Sample& sample, double gamma,
                          const std::vector<LpRow>& extra_le, LpSense sense);

/// Plain-text row-oriented dump (one constraint per line) for external
/// cross-checking.
void dump_problem(const LpProblem& problem, std::ostream& os);

}  // namespace meanbounds
