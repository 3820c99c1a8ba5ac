#include "meanbounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

#include "meanbounds/detail/parallel.hpp"
#include "meanbounds/distributions.hpp"
#include "meanbounds/lp.hpp"

namespace meanbounds {

namespace {

struct DistinctValues {
  std::vector<double> value;   // distinct sorted values
  std::vector<int> cum_count;  // observations <= value[j]
};

DistinctValues distinct_values(const Sample& sample) {
  DistinctValues d;
  const auto& y = sample.values();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i + 1 == y.size() || y[i + 1] != y[i]) {
      d.value.push_back(y[i]);
      d.cum_count.push_back(static_cast<int>(i + 1));
    }
  }
  return d;
}

WeightSolution uniform_solution(const Sample& sample) {
  WeightSolution w;
  const std::size_t n = sample.size();
  w.weights.assign(n, 1.0 / static_cast<double>(n));
  w.objective = sample.mean();
  w.feasible = true;
  return w;
}

IdentificationInterval degenerate_interval(const Sample& sample,
                                           const ConstraintSpec& spec) {
  IdentificationInterval iv;
  iv.lower = iv.upper = sample.values().front();
  iv.lower_solution = uniform_solution(sample);
  iv.upper_solution = iv.lower_solution;
  iv.method = spec;
  return iv;
}

// --- threshold scan --------------------------------------------------------

double two_level_objective(const std::vector<double>& prefix, double total,
                           int n, int cut, double below, double above) {
  const double mass = below * cut + above * (n - cut);
  return (below * prefix[cut] + above * (total - prefix[cut])) / mass;
}

std::vector<double> two_level_weights(int n, int cut, double below,
                                      double above) {
  const double mass = below * cut + above * (n - cut);
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = (i < cut ? below : above) / mass;
  return w;
}

// --- prefix-constraint plumbing ---------------------------------------------

// Sound interval propagation for {sum w = 1, ratio <= gamma, prefix
// constraints}. Returns false only when the system is provably infeasible;
// it never rejects a feasible grid point, so skipping on false is exact.
// On success, lo/hi hold tightened envelopes for the prefix sums.
bool propagate_feasible(int n, double gamma,
                        const std::vector<PrefixConstraint>& cons,
                        std::vector<double>& lo, std::vector<double>& hi) {
  lo.resize(n + 1);
  hi.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double kk = k, nk = n - k;
    lo[k] = kk / (kk + gamma * nk);
    hi[k] = gamma * kk / (gamma * kk + nk);
  }
  const double w_min = 1.0 / (gamma * n);
  const double w_max = gamma / n;
  constexpr double kSlack = 1e-9;
  constexpr double kGain = 1e-12;  // progress threshold per round

  for (int round = 0; round < 512; ++round) {
    double change = 0.0;
    auto raise = [&change](double& slot, double v) {
      if (v > slot) {
        change = std::max(change, v - slot);
        slot = v;
      }
    };
    auto cut = [&change](double& slot, double v) {
      if (v < slot) {
        change = std::max(change, slot - v);
        slot = v;
      }
    };
    for (const auto& c : cons) {
      if (c.b < 0) {
        raise(lo[c.a], c.lo);
        cut(hi[c.a], c.hi);
      } else {
        raise(lo[c.a], c.lo - hi[c.b]);
        cut(hi[c.a], c.hi - lo[c.b]);
        raise(lo[c.b], c.lo - hi[c.a]);
        cut(hi[c.b], c.hi - lo[c.a]);
      }
    }
    for (int k = 1; k <= n; ++k) {
      raise(lo[k], lo[k - 1] + w_min);
      cut(hi[k], hi[k - 1] + w_max);
    }
    for (int k = n - 1; k >= 0; --k) {
      raise(lo[k], lo[k + 1] - w_max);
      cut(hi[k], hi[k + 1] - w_min);
    }
    for (int k = 0; k <= n; ++k) {
      if (lo[k] > hi[k] + kSlack) return false;
    }
    if (change < kGain) break;
  }
  return true;
}

std::vector<LpRow> to_lp_rows(int n,
                              const std::vector<PrefixConstraint>& cons) {
  std::vector<LpRow> rows;
  rows.reserve(2 * cons.size());
  auto prefix_coeffs = [n](int a, int b) {
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < a; ++i) c[i] += 1.0;
    if (b >= 0) {
      for (int i = 0; i < b; ++i) c[i] += 1.0;
    }
    return c;
  };
  for (const auto& c : cons) {
    const double top = (c.b >= 0) ? 2.0 : 1.0;
    if (c.hi < top) {
      rows.push_back({prefix_coeffs(c.a, c.b), c.hi});
    }
    if (c.lo > 0.0) {
      auto coeffs = prefix_coeffs(c.a, c.b);
      for (auto& v : coeffs) v = -v;
      rows.push_back({std::move(coeffs), -c.lo});
    }
  }
  return rows;
}

struct RatioEnvelopes {
  std::vector<double> lo, hi;  // extreme prefix sums under the ratio bound
};

RatioEnvelopes ratio_envelopes(int n, double gamma) {
  RatioEnvelopes env;
  env.lo.resize(n + 1);
  env.hi.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double kk = k, nk = n - k;
    env.lo[k] = kk / (kk + gamma * nk);
    env.hi[k] = gamma * kk / (gamma * kk + nk);
  }
  return env;
}

// Removes constraint sides that every ratio-feasible weighting satisfies
// anyway, and drops constraints with no remaining side. Exactness-preserving:
// the feasible set of the LP is unchanged.
void prune_vacuous(int n, double gamma, std::vector<PrefixConstraint>& cons) {
  const RatioEnvelopes env = ratio_envelopes(n, gamma);
  std::vector<PrefixConstraint> kept;
  kept.reserve(cons.size());
  for (auto c : cons) {
    const double worst_hi =
        env.hi[c.a] + (c.b >= 0 ? env.hi[c.b] : 0.0);
    const double worst_lo =
        env.lo[c.a] + (c.b >= 0 ? env.lo[c.b] : 0.0);
    const double top = (c.b >= 0) ? 2.0 : 1.0;
    if (worst_hi <= c.hi) c.hi = top;   // upper side can never bind
    if (worst_lo >= c.lo) c.lo = 0.0;   // lower side can never bind
    if (c.hi < top || c.lo > 0.0) kept.push_back(c);
  }
  cons.swap(kept);
}

// Folds constraints whose indices are pinned (P_0 = 0, P_n = 1) into plain
// bounds or direct checks. Returns false when a pinned value is violated.
bool reduce_pinned(int n, std::vector<PrefixConstraint>& cons) {
  std::vector<PrefixConstraint> kept;
  kept.reserve(cons.size());
  auto pin_value = [n](int k) { return k == n ? 1.0 : 0.0; };
  for (const auto& c : cons) {
    const bool a_pin = (c.a == 0 || c.a == n);
    const bool b_pin = (c.b == 0 || c.b == n);
    if (c.b < 0) {
      if (a_pin) {
        const double v = pin_value(c.a);
        if (v < c.lo - 1e-12 || v > c.hi + 1e-12) return false;
        continue;
      }
      kept.push_back(c);
      continue;
    }
    if (a_pin && b_pin) {
      const double v = pin_value(c.a) + pin_value(c.b);
      if (v < c.lo - 1e-12 || v > c.hi + 1e-12) return false;
      continue;
    }
    if (a_pin || b_pin) {
      PrefixConstraint s;
      const double v = pin_value(a_pin ? c.a : c.b);
      s.a = a_pin ? c.b : c.a;
      s.b = -1;
      s.lo = std::max(c.lo - v, 0.0);
      s.hi = std::min(c.hi - v, 1.0);
      if (s.lo > s.hi + 1e-12) return false;
      if (s.lo > 0.0 || s.hi < 1.0) kept.push_back(s);
      continue;
    }
    kept.push_back(c);
  }
  cons.swap(kept);
  return true;
}

// --- grid evaluation shared by the three shape families ---------------------

WeightSolution make_solution(std::vector<double> weights, double objective,
                             const GridArtifact& art) {
  WeightSolution sol;
  sol.weights = std::move(weights);
  sol.objective = objective;
  sol.feasible = true;
  sol.grid_point = art.grid_point;
  if (art.grid_scale != 0.0) sol.grid_scale = art.grid_scale;
  return sol;
}

// Per-grid-point state: propagation verdict plus envelope bounds on the
// weighted mean, used to skip LP solves that cannot move the grid extremum.
struct GridPlan {
  std::vector<char> viable;        // passed precheck + propagation
  std::vector<char> lp_infeasible; // detected infeasible by the LP
  std::vector<double> max_bound;   // >= every feasible weighted mean
  std::vector<double> min_bound;   // <= every feasible weighted mean
};

GridPlan plan_grid(const Sample& sample, double gamma,
                   const std::vector<GridArtifact>& artifacts, int threads) {
  const int n = static_cast<int>(sample.size());
  const auto& y = sample.values();
  GridPlan plan;
  plan.viable.assign(artifacts.size(), 0);
  plan.lp_infeasible.assign(artifacts.size(), 0);
  plan.max_bound.assign(artifacts.size(), 0.0);
  plan.min_bound.assign(artifacts.size(), 0.0);
  detail::parallel_for(artifacts.size(), threads, [&](std::size_t i) {
    const GridArtifact& art = artifacts[i];
    if (!art.precheck_feasible) return;
    std::vector<double> lo, hi;
    if (!propagate_feasible(n, gamma, art.constraints, lo, hi)) return;
    plan.viable[i] = 1;
    // Weighted mean = Y_(n) - sum_k P_k (Y_(k+1) - Y_(k)); the envelopes on
    // the prefix sums P_k bound it from both sides.
    double ub = y.back(), lb = y.back();
    for (int k = 1; k < n; ++k) {
      const double dy = y[k] - y[k - 1];
      ub -= lo[k] * dy;
      lb -= hi[k] * dy;
    }
    plan.max_bound[i] = ub;
    plan.min_bound[i] = lb;
  });
  return plan;
}

struct SenseOutcome {
  bool any = false;
  double value = 0.0;
  std::size_t index = 0;
  WeightSolution sol;
};

// Extremum of the weight LP over the grid in one sense. Candidates are
// solved best-bound-first in deterministic batches; a candidate is skipped
// only when its envelope bound proves it cannot beat (or tie) the incumbent,
// so the result and its smallest-index tie-break are exact.
SenseOutcome solve_grid_extreme(const Sample& sample, double gamma,
                                const std::vector<GridArtifact>& artifacts,
                                GridPlan& plan, LpSense sense, int threads) {
  const int n = static_cast<int>(sample.size());
  const bool maximize = sense == LpSense::maximize;
  const double fp_margin =
      1e-9 * (1.0 + std::max(std::fabs(sample.min()), std::fabs(sample.max())));

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    if (plan.viable[i] && !plan.lp_infeasible[i]) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = maximize ? plan.max_bound[a] : -plan.min_bound[a];
    const double vb = maximize ? plan.max_bound[b] : -plan.min_bound[b];
    return va > vb || (va == vb && a < b);
  });

  const double shift = maximize ? sample.max() : sample.min();
  std::vector<double> shifted(sample.values());
  for (auto& v : shifted) v -= shift;
  const Sample lp_sample(std::move(shifted));

  unsigned nthreads = threads > 0 ? static_cast<unsigned>(threads)
                                  : std::thread::hardware_concurrency();
  if (nthreads == 0) nthreads = 1;

  SenseOutcome best;
  struct Attempt {
    bool ok = false;
    double value = 0.0;
    std::vector<double> weights;
  };
  std::size_t next = 0;
  while (next < order.size()) {
    const std::size_t batch =
        std::min<std::size_t>(nthreads, order.size() - next);
    std::vector<Attempt> attempts(batch);
    detail::parallel_for(batch, static_cast<int>(nthreads),
                         [&](std::size_t k) {
      const GridArtifact& art = artifacts[order[next + k]];
      const auto rows = to_lp_rows(n, art.constraints);
      auto res = solve(build_weight_lp(lp_sample, gamma, rows, sense));
      if (res.status == LpStatus::optimal) {
        attempts[k].ok = true;
        attempts[k].value = res.objective_value + shift;
        attempts[k].weights.assign(res.solution.begin(),
                                   res.solution.end() - 1);
      }
    });
    for (std::size_t k = 0; k < batch; ++k) {
      const std::size_t idx = order[next + k];
      if (!attempts[k].ok) {
        plan.lp_infeasible[idx] = 1;
        continue;
      }
      const double v = attempts[k].value;
      const bool better =
          !best.any ||
          (maximize ? (v > best.value || (v == best.value && idx < best.index))
                    : (v < best.value ||
                       (v == best.value && idx < best.index)));
      if (better) {
        best.any = true;
        best.value = v;
        best.index = idx;
        best.sol =
            make_solution(std::move(attempts[k].weights), v, artifacts[idx]);
      }
    }
    next += batch;
    if (best.any) {
      // Drop the tail of candidates whose bound cannot reach the incumbent.
      std::size_t keep = next;
      for (std::size_t k = next; k < order.size(); ++k) {
        const double bound = maximize ? plan.max_bound[order[k]]
                                      : -plan.min_bound[order[k]];
        const double target = maximize ? best.value : -best.value;
        if (bound >= target - fp_margin) order[keep++] = order[k];
      }
      order.resize(keep);
    }
  }
  return best;
}

// Union over the grid: hull of the per-point intervals.
IdentificationInterval reduce_grid(const Sample& sample,
                                   const ConstraintSpec& spec,
                                   const std::vector<GridArtifact>& artifacts,
                                   const char* family_label,
                                   std::vector<std::string>* warnings,
                                   int threads) {
  GridPlan plan = plan_grid(sample, spec.gamma, artifacts, threads);
  SenseOutcome up = solve_grid_extreme(sample, spec.gamma, artifacts, plan,
                                       LpSense::maximize, threads);
  SenseOutcome down = solve_grid_extreme(sample, spec.gamma, artifacts, plan,
                                         LpSense::minimize, threads);
  if (!up.any || !down.any) {
    throw empty_plausibility_set_error(
        std::string(family_label) +
        ": no grid point admits weights compatible with the data");
  }
  IdentificationInterval iv;
  iv.method = spec;
  iv.upper = up.value;
  iv.upper_solution = up.sol;
  iv.lower = down.value;
  iv.lower_solution = down.sol;
  if (warnings) {
    std::size_t known_bad = 0;
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
      if (!plan.viable[i] || plan.lp_infeasible[i]) ++known_bad;
    }
    if (known_bad > 0) {
      warnings->push_back(std::string(family_label) + ": " +
                          std::to_string(known_bad) + " of " +
                          std::to_string(artifacts.size()) +
                          " grid points infeasible");
    }
  }
  return iv;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> v;
  if (count <= 1) {
    v.push_back(0.5 * (a + b));
    return v;
  }
  v.reserve(count);
  for (int i = 0; i < count; ++i) v.push_back(a + (b - a) * i / (count - 1));
  return v;
}

EnvelopeSet build_parametric_set(const Sample& sample,
                                 const ConstraintSpec& spec) {
  EnvelopeSet set;
  set.kind = Family::parametric_gaussian;
  const int n = static_cast<int>(sample.size());
  const double delta = delta_gamma_n(spec.gamma, n) + spec.delta_star;
  const DistinctValues d = distinct_values(sample);
  const int K = static_cast<int>(d.value.size());

  const double mean = sample.mean();
  const double sd = sample.stddev();
  const double se = sd / std::sqrt(static_cast<double>(n));
  const auto loc_range = spec.theta_grid.location_range.value_or(
      std::make_pair(mean - 3.0 * se, mean + 3.0 * se));
  const auto scale_range = spec.theta_grid.scale_range.value_or(
      std::make_pair(0.5 * sd, 2.0 * sd));
  const auto locs = linspace(loc_range.first, loc_range.second,
                             spec.theta_grid.location_count);
  const auto scales = linspace(scale_range.first, scale_range.second,
                               spec.theta_grid.scale_count);

  for (double loc : locs) {
    for (double scale : scales) {
      GridArtifact art;
      art.grid_point = loc;
      art.grid_scale = scale;
      if (!(scale > 0.0)) {
        art.precheck_feasible = false;
        set.artifacts.push_back(std::move(art));
        continue;
      }
      auto cdf = [loc, scale](double y) {
        return normal_cdf((y - loc) / scale);
      };
      // The two tail rows contain no variables: feasibility prechecks.
      if (cdf(d.value.front()) > delta || 1.0 - cdf(d.value.back()) > delta) {
        art.precheck_feasible = false;
        set.artifacts.push_back(std::move(art));
        continue;
      }
      for (int j = 0; j + 1 < K; ++j) {
        PrefixConstraint c;
        c.a = d.cum_count[j];
        c.b = -1;
        c.lo = std::max(0.0, cdf(d.value[j + 1]) - delta);
        c.hi = std::min(1.0, cdf(d.value[j]) + delta);
        if (c.lo > 0.0 || c.hi < 1.0) art.constraints.push_back(c);
      }
      prune_vacuous(n, spec.gamma, art.constraints);
      set.artifacts.push_back(std::move(art));
    }
  }
  return set;
}

EnvelopeSet build_symmetric_set(const Sample& sample,
                                const ConstraintSpec& spec) {
  EnvelopeSet set;
  set.kind = Family::symmetric;
  const int n = static_cast<int>(sample.size());
  const double alpha = spec.resolve_alpha(sample.size());
  const double band = zeta_gamma_alpha(spec.gamma, alpha) /
                          std::sqrt(static_cast<double>(n)) +
                      spec.delta_star;

  const int count = spec.m_grid.count > 0 ? spec.m_grid.count : 101;
  const auto range =
      spec.m_grid.range.value_or(std::make_pair(sample.min(), sample.max()));
  const auto& y = sample.values();

  for (double m : linspace(range.first, range.second, count)) {
    GridArtifact art;
    art.grid_point = m;
    // Candidate offsets where the symmetry functional can change value:
    // distances from m to data points on either side. Index lookups search
    // the offset arrays themselves, so no offset is ever re-rounded through
    // m +- b.
    const int below = static_cast<int>(sample.count_le(m));
    std::vector<double> up_off, dn_off;
    up_off.reserve(y.size() - below);
    dn_off.reserve(below);
    for (int i = below; i < n; ++i) up_off.push_back(y[i] - m);
    for (int i = 0; i < below; ++i) dn_off.push_back(m - y[i]);
    std::sort(dn_off.begin(), dn_off.end());

    std::vector<double> offsets;
    offsets.reserve(up_off.size() + dn_off.size() + 1);
    offsets.push_back(0.0);
    offsets.insert(offsets.end(), up_off.begin(), up_off.end());
    offsets.insert(offsets.end(), dn_off.begin(), dn_off.end());
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

    auto count_up_le = [&](double b) {
      return static_cast<int>(std::upper_bound(up_off.begin(), up_off.end(), b) -
                              up_off.begin());
    };
    auto count_dn_ge = [&](double b) {
      return static_cast<int>(dn_off.end() -
                              std::lower_bound(dn_off.begin(), dn_off.end(), b));
    };
    auto count_dn_gt = [&](double b) {
      return static_cast<int>(dn_off.end() -
                              std::upper_bound(dn_off.begin(), dn_off.end(), b));
    };

    std::set<std::pair<int, int>> pairs;
    for (double b : offsets) {
      const int a = below + count_up_le(b);          // observations <= m + b
      pairs.emplace(a, count_dn_ge(b));              // right value at m - b
      pairs.emplace(a, count_dn_gt(b));              // left limit at m - b
    }

    // Prefix sums are monotone, so among the band rows only the Pareto
    // frontier matters: upper rows for index-wise maximal pairs, lower rows
    // for minimal ones. Set iteration is ordered by (a, b).
    std::vector<std::pair<int, int>> plist(pairs.begin(), pairs.end());
    std::vector<char> keep_hi(plist.size(), 0), keep_lo(plist.size(), 0);
    int best_b = -1;
    for (std::size_t i = plist.size(); i-- > 0;) {
      if (plist[i].second > best_b) {
        keep_hi[i] = 1;
        best_b = plist[i].second;
      }
    }
    int min_b = n + 1;
    for (std::size_t i = 0; i < plist.size(); ++i) {
      if (plist[i].second < min_b) {
        keep_lo[i] = 1;
        min_b = plist[i].second;
      }
    }
    art.constraints.reserve(plist.size());
    for (std::size_t i = 0; i < plist.size(); ++i) {
      if (!keep_hi[i] && !keep_lo[i]) continue;
      PrefixConstraint c;
      c.a = plist[i].first;
      c.b = plist[i].second;
      c.lo = keep_lo[i] ? 1.0 - band : 0.0;
      c.hi = keep_hi[i] ? 1.0 + band : 2.0;
      art.constraints.push_back(c);
    }
    art.precheck_feasible = reduce_pinned(n, art.constraints);
    if (art.precheck_feasible) {
      prune_vacuous(n, spec.gamma, art.constraints);
    }
    set.artifacts.push_back(std::move(art));
  }
  return set;
}

std::vector<double> thin_distinct(const std::vector<double>& values,
                                  int max_count) {
  const int K = static_cast<int>(values.size());
  if (K <= max_count) return values;
  std::vector<double> out;
  out.reserve(max_count);
  for (int j = 0; j < max_count; ++j) {
    const int idx = static_cast<int>(
        std::llround(static_cast<double>(j) * (K - 1) / (max_count - 1)));
    out.push_back(values[idx]);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EnvelopeSet build_log_concave_set(const Sample& sample,
                                  const ConstraintSpec& spec) {
  EnvelopeSet set;
  set.kind = Family::log_concave;
  const StepFunction sks = ks_lower_envelope(sample);
  const DistinctValues d = distinct_values(sample);
  const int K = static_cast<int>(d.value.size());

  const int count = spec.m_grid.count > 0 ? spec.m_grid.count : 200;
  const auto centers = thin_distinct(d.value, count);

  for (double m : centers) {
    GridArtifact art;
    art.grid_point = m;
    StepFunction u = u_lower_bound(sks, spec.gamma, m);
    PiecewiseLogLinear hl = log_concave_majorant(u);
    for (int j = 0; j + 1 < K; ++j) {
      // The majorant is continuous, so its sup over [d_j, d_{j+1}) is the
      // value at the right endpoint.
      const double c = hl(d.value[j + 1]);
      if (c <= 1e-15) continue;  // left of the majorant domain
      PrefixConstraint pc;
      pc.a = d.cum_count[j];
      pc.b = -1;
      pc.lo = c;
      pc.hi = 1.0;
      art.constraints.push_back(pc);
    }
    prune_vacuous(static_cast<int>(sample.size()), spec.gamma,
                  art.constraints);
    art.u_m = std::move(u);
    art.majorant = std::move(hl);
    set.artifacts.push_back(std::move(art));
  }
  return set;
}

}  // namespace

IdentificationInterval al_bounds(const Sample& sample, double gamma) {
  if (sample.size() < 2) {
    throw std::invalid_argument("al_bounds: need at least 2 observations");
  }
  if (!(gamma >= 1.0)) {
    throw std::invalid_argument("al_bounds: gamma must be >= 1");
  }
  const auto& y = sample.values();
  const int n = static_cast<int>(y.size());
  std::vector<double> prefix(n + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + y[i];
  const double total = prefix[n];

  int best_up_cut = 0, best_lo_cut = 0;
  double best_up = -std::numeric_limits<double>::infinity();
  double best_lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    const double up = two_level_objective(prefix, total, n, k, 1.0, gamma);
    if (up > best_up) {
      best_up = up;
      best_up_cut = k;
    }
    const double lo = two_level_objective(prefix, total, n, k, gamma, 1.0);
    if (lo < best_lo) {
      best_lo = lo;
      best_lo_cut = k;
    }
  }

  IdentificationInterval iv;
  iv.upper = best_up;
  iv.lower = best_lo;
  iv.upper_solution.weights = two_level_weights(n, best_up_cut, 1.0, gamma);
  iv.upper_solution.objective = best_up;
  iv.upper_solution.feasible = true;
  iv.upper_solution.grid_point = static_cast<double>(best_up_cut);
  iv.lower_solution.weights = two_level_weights(n, best_lo_cut, gamma, 1.0);
  iv.lower_solution.objective = best_lo;
  iv.lower_solution.feasible = true;
  iv.lower_solution.grid_point = static_cast<double>(best_lo_cut);
  iv.method.gamma = gamma;
  iv.method.family = Family::none;
  return iv;
}

IdentificationInterval al_bounds_lp(const Sample& sample, double gamma) {
  if (sample.size() < 2) {
    throw std::invalid_argument("al_bounds_lp: need at least 2 observations");
  }
  auto up = solve(build_weight_lp(sample, gamma, {}, LpSense::maximize));
  auto lo = solve(build_weight_lp(sample, gamma, {}, LpSense::minimize));
  if (up.status != LpStatus::optimal || lo.status != LpStatus::optimal) {
    throw solver_failure_error("al_bounds_lp: ratio polytope solve failed");
  }
  IdentificationInterval iv;
  iv.upper = up.objective_value;
  iv.lower = lo.objective_value;
  iv.upper_solution.weights.assign(up.solution.begin(), up.solution.end() - 1);
  iv.upper_solution.objective = up.objective_value;
  iv.upper_solution.feasible = true;
  iv.lower_solution.weights.assign(lo.solution.begin(), lo.solution.end() - 1);
  iv.lower_solution.objective = lo.objective_value;
  iv.lower_solution.feasible = true;
  iv.method.gamma = gamma;
  iv.method.family = Family::none;
  return iv;
}

StepFunction ks_lower_envelope(const Sample& sample) {
  const int n = static_cast<int>(sample.size());
  if (n < 2) {
    throw std::invalid_argument(
        "ks_lower_envelope: need at least 2 observations");
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  const double offset = kolmogorov_quantile(1.0 - 1.0 / root_n) / root_n;
  const DistinctValues d = distinct_values(sample);
  std::vector<double> levels(d.value.size());
  for (std::size_t j = 0; j < d.value.size(); ++j) {
    levels[j] = std::max(
        static_cast<double>(d.cum_count[j]) / static_cast<double>(n) - offset,
        0.0);
  }
  return StepFunction(d.value, std::move(levels), 0.0);
}

StepFunction u_lower_bound(const StepFunction& sks, double gamma, double m) {
  if (!(gamma >= 1.0)) {
    throw std::invalid_argument("u_lower_bound: gamma must be >= 1");
  }
  if (m < sks.breakpoints().front() || m > sks.breakpoints().back()) {
    throw std::invalid_argument("u_lower_bound: m outside the data range");
  }
  const double s_m = sks(m);
  const double denom = gamma - (gamma - 1.0) * s_m;
  const auto& bp = sks.breakpoints();
  std::vector<double> levels(bp.size());
  for (std::size_t k = 0; k < bp.size(); ++k) {
    const double s_y = sks.levels()[k];
    const double s_cut = bp[k] <= m ? s_y : s_m;
    levels[k] = std::min((gamma * s_y - (gamma - 1.0) * s_cut) / denom, 1.0);
  }
  return StepFunction(bp, std::move(levels), 0.0);
}

double PiecewiseLogLinear::operator()(double y) const {
  if (x.empty() || y < x.front()) return 0.0;
  if (y >= x.back()) return std::exp(log_v.back());
  const auto it = std::upper_bound(x.begin(), x.end(), y);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const double t = (y - x[j - 1]) / (x[j] - x[j - 1]);
  return std::exp(log_v[j - 1] + t * (log_v[j] - log_v[j - 1]));
}

PiecewiseLogLinear log_concave_majorant(const StepFunction& u) {
  return log_concave_majorant(u.breakpoints(), u.levels());
}

PiecewiseLogLinear log_concave_majorant(const std::vector<double>& breakpoints,
                                        const std::vector<double>& values) {
  if (breakpoints.size() != values.size()) {
    throw std::invalid_argument("log_concave_majorant: size mismatch");
  }
  std::vector<double> px, py;
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if (values[k] > 0.0) {
      px.push_back(breakpoints[k]);
      py.push_back(std::log(values[k]));
    }
  }
  if (px.empty()) {
    throw std::invalid_argument("log_concave_majorant: no positive level");
  }

  // Upper hull, monotone-chain sweep; points arrive sorted by x.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < px.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t o = hull[hull.size() - 2];
      const std::size_t a = hull[hull.size() - 1];
      const double cross = (px[a] - px[o]) * (py[i] - py[o]) -
                           (py[a] - py[o]) * (px[i] - px[o]);
      if (cross >= 0.0) {
        hull.pop_back();  // a lies on or below the chord o -> i
      } else {
        break;
      }
    }
    hull.push_back(i);
  }

  PiecewiseLogLinear out;
  out.x.reserve(hull.size());
  out.log_v.reserve(hull.size());
  for (std::size_t idx : hull) {
    out.x.push_back(px[idx]);
    out.log_v.push_back(py[idx]);
  }
  return out;
}

EnvelopeSet build_envelope_set(const Sample& sample,
                               const ConstraintSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::parametric_gaussian:
      return build_parametric_set(sample, spec);
    case Family::symmetric:
      return build_symmetric_set(sample, spec);
    case Family::log_concave:
      return build_log_concave_set(sample, spec);
    case Family::none:
      break;
  }
  throw std::invalid_argument(
      "build_envelope_set: no envelope for family none");
}

IdentificationInterval parametric_bounds(const Sample& sample,
                                         const ConstraintSpec& spec,
                                         std::vector<std::string>* warnings,
                                         int threads) {
  if (sample.size() < 2) {
    throw std::invalid_argument(
        "parametric_bounds: need at least 2 observations");
  }
  if (sample.all_equal()) return degenerate_interval(sample, spec);
  const EnvelopeSet set = build_parametric_set(sample, spec);
  return reduce_grid(sample, spec, set.artifacts, "parametric", warnings,
                     threads);
}

IdentificationInterval symmetric_bounds(const Sample& sample,
                                        const ConstraintSpec& spec,
                                        std::vector<std::string>* warnings,
                                        int threads) {
  if (sample.size() < 2) {
    throw std::invalid_argument(
        "symmetric_bounds: need at least 2 observations");
  }
  if (sample.all_equal()) return degenerate_interval(sample, spec);
  const EnvelopeSet set = build_symmetric_set(sample, spec);
  return reduce_grid(sample, spec, set.artifacts, "symmetric", warnings,
                     threads);
}

IdentificationInterval log_concave_bounds(const Sample& sample,
                                          const ConstraintSpec& spec,
                                          std::vector<std::string>* warnings,
                                          int threads) {
  if (sample.size() < 2) {
    throw std::invalid_argument(
        "log_concave_bounds: need at least 2 observations");
  }
  if (sample.all_equal()) return degenerate_interval(sample, spec);
  if (warnings) {
    warnings->push_back(
        "logconcave: envelope offset uses the Kolmogorov-Smirnov quantile "
        "(critical value) at probability 1 - 1/sqrt(n)");
  }

  // Each side needs only the maximize sense: the lower endpoint is the
  // negated upper endpoint of the mirrored sample.
  const EnvelopeSet up_set = build_log_concave_set(sample, spec);
  GridPlan up_plan = plan_grid(sample, spec.gamma, up_set.artifacts, threads);
  SenseOutcome up = solve_grid_extreme(sample, spec.gamma, up_set.artifacts,
                                       up_plan, LpSense::maximize, threads);

  std::vector<double> neg(sample.values().size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -sample.values()[i];
  const Sample mirrored(std::move(neg));
  const EnvelopeSet lo_set = build_log_concave_set(mirrored, spec);
  GridPlan lo_plan =
      plan_grid(mirrored, spec.gamma, lo_set.artifacts, threads);
  SenseOutcome down = solve_grid_extreme(mirrored, spec.gamma,
                                         lo_set.artifacts, lo_plan,
                                         LpSense::maximize, threads);

  if (!up.any || !down.any) {
    throw empty_plausibility_set_error(
        "logconcave: no grid point admits weights compatible with the data");
  }
  IdentificationInterval iv;
  iv.method = spec;
  iv.upper = up.value;
  iv.upper_solution = up.sol;
  iv.lower = -down.value;
  iv.lower_solution = down.sol;
  iv.lower_solution.objective = -down.sol.objective;
  if (down.sol.grid_point) {
    iv.lower_solution.grid_point = -*down.sol.grid_point;
  }
  // Mirrored-sample weights map back to the original order reversed.
  std::reverse(iv.lower_solution.weights.begin(),
               iv.lower_solution.weights.end());
  if (warnings) {
    std::size_t bad = 0;
    for (std::size_t i = 0; i < up_plan.viable.size(); ++i) {
      if (!up_plan.viable[i] || up_plan.lp_infeasible[i]) ++bad;
    }
    for (std::size_t i = 0; i < lo_plan.viable.size(); ++i) {
      if (!lo_plan.viable[i] || lo_plan.lp_infeasible[i]) ++bad;
    }
    if (bad > 0) {
      warnings->push_back(
          "logconcave: " + std::to_string(bad) + " of " +
          std::to_string(up_plan.viable.size() + lo_plan.viable.size()) +
          " grid points infeasible");
    }
  }
  return iv;
}

IdentificationInterval compute_bounds(const Sample& sample,
                                      const ConstraintSpec& spec,
                                      std::vector<std::string>* warnings,
                                      int threads) {
  spec.validate();
  if (sample.size() < 2) {
    throw std::invalid_argument("compute_bounds: need at least 2 observations");
  }
  if (sample.all_equal()) return degenerate_interval(sample, spec);
  switch (spec.family) {
    case Family::none: {
      IdentificationInterval iv = al_bounds(sample, spec.gamma);
      iv.method = spec;
      return iv;
    }
    case Family::parametric_gaussian:
      return parametric_bounds(sample, spec, warnings, threads);
    case Family::symmetric:
      return symmetric_bounds(sample, spec, warnings, threads);
    case Family::log_concave:
      return log_concave_bounds(sample, spec, warnings, threads);
  }
  throw std::invalid_argument("compute_bounds: unknown family");
}

}  // namespace meanbounds
