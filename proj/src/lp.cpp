#include "meanbounds/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace meanbounds {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kPhase1Tol = 1e-7;
constexpr int kReinvertInterval = 512;

// Column-compressed storage for the structural + slack columns of the
// standardized problem. Artificial columns are implicit unit vectors.
struct Csc {
  int rows = 0;
  std::vector<int> col_start;  // size cols+1
  std::vector<int> row_idx;
  std::vector<double> val;

  int cols() const { return static_cast<int>(col_start.size()) - 1; }
};

struct StandardForm {
  // max c.x  s.t.  A x = b, x >= 0, with b >= 0. Artificial i has column
  // e_i and is basic initially unless a slack can serve.
  Csc a;
  std::vector<double> b;
  std::vector<double> cost;      // for CSC columns
  std::vector<int> init_basis;   // var index per row; -1 means artificial
  std::vector<double> row_sign;  // original row orientation (+1/-1)
  int num_struct = 0;            // structural variable count
};

class RevisedSimplex {
 public:
  RevisedSimplex(const StandardForm& sf, long max_pivots)
      : a_(sf.a),
        b_(sf.b),
        cost_(sf.cost),
        m_(static_cast<int>(sf.b.size())),
        ncols_(sf.a.cols()),
        max_pivots_(max_pivots) {
    basis_.resize(m_);
    in_basis_.assign(ncols_, 0);
    for (int i = 0; i < m_; ++i) {
      const int v = sf.init_basis[i];
      basis_[i] = (v >= 0) ? v : ncols_ + i;
      if (v >= 0) in_basis_[v] = 1;
    }
    reinvert();
  }

  // Returns true when a feasible basis was found (phase-1 objective ~ 0).
  bool phase1() {
    std::vector<double> c1(ncols_, 0.0);
    bool any_artificial = false;
    for (int i = 0; i < m_; ++i) any_artificial |= basis_[i] >= ncols_;
    if (!any_artificial) return true;
    const bool ok = iterate(c1, /*phase1=*/true);
    if (!ok) return false;  // cannot happen: phase 1 is bounded
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= ncols_) infeas += xb_[i];
    }
    if (infeas > kPhase1Tol) return false;
    expel_artificials();
    return true;
  }

  // Returns false on unboundedness.
  bool phase2() { return iterate(cost_, /*phase1=*/false); }

  const std::vector<int>& basis() const { return basis_; }
  const std::vector<double>& basic_values() const { return xb_; }

  // Dual prices of the standardized rows for the phase-2 objective.
  std::vector<double> row_prices() const {
    std::vector<double> cb(m_);
    for (int i = 0; i < m_; ++i) {
      cb[i] = basis_[i] < ncols_ ? cost_[basis_[i]] : 0.0;
    }
    return btran(cb);
  }

  std::vector<double> primal_solution(int nvars) const {
    std::vector<double> x(nvars, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < nvars) x[basis_[i]] = std::max(xb_[i], 0.0);
    }
    return x;
  }

 private:
  std::vector<double> btran(const std::vector<double>& cb) const {
    std::vector<double> y(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double ci = cb[i];
      if (ci == 0.0) continue;
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int j = 0; j < m_; ++j) y[j] += ci * row[j];
    }
    return y;
  }

  // t = Binv * column(j); artificial columns are unit vectors.
  void ftran(int j, std::vector<double>& t) const {
    t.assign(m_, 0.0);
    if (j >= ncols_) {
      const int r = j - ncols_;
      for (int i = 0; i < m_; ++i) {
        t[i] = binv_[static_cast<std::size_t>(i) * m_ + r];
      }
      return;
    }
    for (int k = a_.col_start[j]; k < a_.col_start[j + 1]; ++k) {
      const int r = a_.row_idx[k];
      const double v = a_.val[k];
      for (int i = 0; i < m_; ++i) {
        t[i] += v * binv_[static_cast<std::size_t>(i) * m_ + r];
      }
    }
  }

  double column_dot(int j, const std::vector<double>& y) const {
    double s = 0.0;
    for (int k = a_.col_start[j]; k < a_.col_start[j + 1]; ++k) {
      s += a_.val[k] * y[a_.row_idx[k]];
    }
    return s;
  }

  void reinvert() {
    // Rebuild Binv by Gauss-Jordan from the current basis columns.
    std::vector<double> mat(static_cast<std::size_t>(m_) * 2 * m_, 0.0);
    const int w = 2 * m_;
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (j >= ncols_) {
        mat[static_cast<std::size_t>(j - ncols_) * w + i] = 1.0;
      } else {
        for (int k = a_.col_start[j]; k < a_.col_start[j + 1]; ++k) {
          mat[static_cast<std::size_t>(a_.row_idx[k]) * w + i] = a_.val[k];
        }
      }
      mat[static_cast<std::size_t>(i) * w + m_ + i] = 1.0;
    }
    for (int col = 0; col < m_; ++col) {
      int piv = col;
      double best = std::fabs(mat[static_cast<std::size_t>(col) * w + col]);
      for (int i = col + 1; i < m_; ++i) {
        const double v = std::fabs(mat[static_cast<std::size_t>(i) * w + col]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-12) {
        throw solver_failure_error("lp: singular basis during reinversion");
      }
      if (piv != col) {
        for (int j = 0; j < w; ++j) {
          std::swap(mat[static_cast<std::size_t>(piv) * w + j],
                    mat[static_cast<std::size_t>(col) * w + j]);
        }
      }
      const double d = mat[static_cast<std::size_t>(col) * w + col];
      for (int j = 0; j < w; ++j) mat[static_cast<std::size_t>(col) * w + j] /= d;
      for (int i = 0; i < m_; ++i) {
        if (i == col) continue;
        const double f = mat[static_cast<std::size_t>(i) * w + col];
        if (f == 0.0) continue;
        for (int j = 0; j < w; ++j) {
          mat[static_cast<std::size_t>(i) * w + j] -=
              f * mat[static_cast<std::size_t>(col) * w + j];
        }
      }
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) {
        binv_[static_cast<std::size_t>(i) * m_ + j] =
            mat[static_cast<std::size_t>(i) * w + m_ + j];
      }
    }
    refresh_basic_values();
  }

  void refresh_basic_values() {
    xb_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      double s = 0.0;
      for (int j = 0; j < m_; ++j) s += row[j] * b_[j];
      xb_[i] = s;
    }
  }

  // Core loop; returns false on unboundedness.
  bool iterate(const std::vector<double>& c, bool phase1) {
    double cmax = 1.0;
    for (double v : c) cmax = std::max(cmax, std::fabs(v));
    const double dual_tol = kPivotTol * cmax;
    const long bland_threshold = 10L * (m_ + ncols_);
    constexpr std::size_t kCandidates = 48;
    long degenerate = 0;
    bool bland = false;
    std::vector<double> t;
    std::vector<double> cb(m_);
    std::vector<int> cand;

    while (true) {
      if (pivots_ >= max_pivots_) {
        throw solver_failure_error("lp: pivot cap reached");
      }
      for (int i = 0; i < m_; ++i) {
        const int j = basis_[i];
        cb[i] = (j < ncols_) ? c[j] : (phase1 ? -1.0 : 0.0);
      }
      const std::vector<double> y = btran(cb);

      int enter = -1;
      if (bland) {
        for (int j = 0; j < ncols_; ++j) {
          if (in_basis_[j]) continue;
          if (c[j] - column_dot(j, y) > dual_tol) {
            enter = j;
            break;
          }
        }
      } else {
        // Partial pricing: repriced short list first, full sweep to refill.
        double best_d = dual_tol;
        for (int j : cand) {
          if (in_basis_[j]) continue;
          const double d = c[j] - column_dot(j, y);
          if (d > best_d) {
            best_d = d;
            enter = j;
          }
        }
        if (enter < 0) {
          cand.clear();
          std::vector<std::pair<double, int>> scored;
          for (int j = 0; j < ncols_; ++j) {
            if (in_basis_[j]) continue;
            const double d = c[j] - column_dot(j, y);
            if (d > dual_tol) scored.emplace_back(d, j);
          }
          if (!scored.empty()) {
            const std::size_t take = std::min(kCandidates, scored.size());
            std::partial_sort(
                scored.begin(), scored.begin() + take, scored.end(),
                [](const auto& a, const auto& b) {
                  return a.first > b.first ||
                         (a.first == b.first && a.second < b.second);
                });
            for (std::size_t k = 0; k < take; ++k) {
              cand.push_back(scored[k].second);
            }
            enter = cand.front();
          }
        }
      }
      if (enter < 0) return true;  // optimal for this phase

      ftran(enter, t);
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (t[i] > kPivotTol) {
          const double ratio = std::max(xb_[i], 0.0) / t[i];
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 &&
               (leave < 0 ||
                (bland ? basis_[i] < basis_[leave] : t[i] > t[leave])))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;  // unbounded direction

      if (best_ratio < 1e-12) {
        if (++degenerate > bland_threshold && !bland) bland = true;
      }

      // Basis exchange and product-form update of Binv and xb.
      const int out_var = basis_[leave];
      if (out_var < ncols_) in_basis_[out_var] = 0;
      basis_[leave] = enter;
      in_basis_[enter] = 1;

      const double tp = t[leave];
      double* prow = &binv_[static_cast<std::size_t>(leave) * m_];
      for (int j = 0; j < m_; ++j) prow[j] /= tp;
      const double xp = xb_[leave] / tp;
      xb_[leave] = xp;
      for (int i = 0; i < m_; ++i) {
        if (i == leave) continue;
        const double f = t[i];
        if (f == 0.0) continue;
        double* row = &binv_[static_cast<std::size_t>(i) * m_];
        for (int j = 0; j < m_; ++j) row[j] -= f * prow[j];
        xb_[i] -= f * xp;
      }

      ++pivots_;
      if (pivots_ % kReinvertInterval == 0) reinvert();
    }
  }

  // Pivot zero-level artificials out of the basis where possible. A row
  // whose transformed coefficients are all ~0 is redundant; its artificial
  // stays basic at zero and can never grow.
  void expel_artificials() {
    std::vector<double> t;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < ncols_) continue;
      const double* r = &binv_[static_cast<std::size_t>(i) * m_];
      int enter = -1;
      for (int j = 0; j < ncols_ && enter < 0; ++j) {
        if (in_basis_[j]) continue;
        double v = 0.0;
        for (int k = a_.col_start[j]; k < a_.col_start[j + 1]; ++k) {
          v += a_.val[k] * r[a_.row_idx[k]];
        }
        if (std::fabs(v) > 1e-7) enter = j;
      }
      if (enter < 0) continue;  // redundant row; artificial stays at zero
      ftran(enter, t);
      basis_[i] = enter;
      in_basis_[enter] = 1;
      const double tp = t[i];
      double* prow = &binv_[static_cast<std::size_t>(i) * m_];
      for (int j = 0; j < m_; ++j) prow[j] /= tp;
      const double xp = xb_[i] / tp;
      xb_[i] = xp;
      for (int r = 0; r < m_; ++r) {
        if (r == i) continue;
        const double f = t[r];
        if (f == 0.0) continue;
        double* row = &binv_[static_cast<std::size_t>(r) * m_];
        for (int j = 0; j < m_; ++j) row[j] -= f * prow[j];
        xb_[r] -= f * xp;
      }
      ++pivots_;
    }
  }

  Csc a_;
  std::vector<double> b_;
  std::vector<double> cost_;
  int m_ = 0;
  int ncols_ = 0;
  long max_pivots_ = 0;
  long pivots_ = 0;
  std::vector<int> basis_;
  std::vector<std::int8_t> in_basis_;
  std::vector<double> binv_;
  std::vector<double> xb_;
};

// Builds the standardized max-form problem from (objective already in max
// orientation, lower bounds already shifted out).
StandardForm standardize(const std::vector<double>& objective,
                         const std::vector<LpRow>& eq_rows,
                         const std::vector<LpRow>& le_rows) {
  const int n = static_cast<int>(objective.size());
  const int p = static_cast<int>(eq_rows.size());
  const int q = static_cast<int>(le_rows.size());
  const int m = p + q;

  StandardForm sf;
  sf.num_struct = n;
  sf.b.resize(m);
  sf.row_sign.assign(m, 1.0);
  sf.init_basis.assign(m, -1);

  // Row-major staging of structural coefficients, sign-normalized so b >= 0.
  std::vector<const LpRow*> rows;
  rows.reserve(m);
  for (const auto& r : eq_rows) rows.push_back(&r);
  for (const auto& r : le_rows) rows.push_back(&r);
  for (int i = 0; i < m; ++i) {
    if (rows[i]->rhs < 0.0) sf.row_sign[i] = -1.0;
    sf.b[i] = rows[i]->rhs * sf.row_sign[i];
  }

  const int ncols = n + q;
  sf.cost.assign(ncols, 0.0);
  for (int j = 0; j < n; ++j) sf.cost[j] = objective[j];

  // CSC assembly: structural columns then slack columns.
  std::vector<int> nnz(ncols, 0);
  for (int i = 0; i < m; ++i) {
    const auto& c = rows[i]->coeffs;
    for (int j = 0; j < n; ++j) {
      if (c[j] != 0.0) ++nnz[j];
    }
  }
  for (int k = 0; k < q; ++k) ++nnz[n + k];

  sf.a.rows = m;
  sf.a.col_start.assign(ncols + 1, 0);
  for (int j = 0; j < ncols; ++j) {
    sf.a.col_start[j + 1] = sf.a.col_start[j] + nnz[j];
  }
  sf.a.row_idx.resize(sf.a.col_start[ncols]);
  sf.a.val.resize(sf.a.col_start[ncols]);
  std::vector<int> fill(sf.a.col_start.begin(), sf.a.col_start.end() - 1);
  for (int i = 0; i < m; ++i) {
    const auto& c = rows[i]->coeffs;
    const double sign = sf.row_sign[i];
    for (int j = 0; j < n; ++j) {
      if (c[j] != 0.0) {
        sf.a.row_idx[fill[j]] = i;
        sf.a.val[fill[j]] = c[j] * sign;
        ++fill[j];
      }
    }
  }
  for (int k = 0; k < q; ++k) {
    const int i = p + k;
    sf.a.row_idx[fill[n + k]] = i;
    sf.a.val[fill[n + k]] = sf.row_sign[i];  // slack keeps row orientation
    ++fill[n + k];
    // A slack with +1 coefficient can start basic; otherwise an artificial.
    if (sf.row_sign[i] > 0.0) sf.init_basis[i] = n + k;
  }
  return sf;
}

struct CoreResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;          // structural variables
  std::vector<double> row_price;  // per original row ordering (eq then le)
  double objective = 0.0;
};

CoreResult solve_core(const std::vector<double>& objective,
                      const std::vector<LpRow>& eq_rows,
                      const std::vector<LpRow>& le_rows, long max_pivots) {
  StandardForm sf = standardize(objective, eq_rows, le_rows);
  RevisedSimplex simplex(sf, max_pivots);
  CoreResult out;
  if (!simplex.phase1()) {
    out.status = LpStatus::infeasible;
    return out;
  }
  if (!simplex.phase2()) {
    out.status = LpStatus::unbounded;
    return out;
  }
  out.status = LpStatus::optimal;
  out.x = simplex.primal_solution(sf.num_struct);
  out.objective = 0.0;
  for (std::size_t j = 0; j < out.x.size(); ++j) {
    out.objective += objective[j] * out.x[j];
  }
  std::vector<double> prices = simplex.row_prices();
  out.row_price.resize(prices.size());
  for (std::size_t i = 0; i < prices.size(); ++i) {
    out.row_price[i] = prices[i] * sf.row_sign[i];
  }
  return out;
}

// Residual check against the spec tolerance 1e-8 * (1 + |rhs|).
bool certify(const LpProblem& p, const std::vector<double>& x,
             double objective_value) {
  const std::size_t n = p.num_vars();
  if (x.size() != n) return false;
  for (std::size_t j = 0; j < n; ++j) {
    const double lb = p.lower_bounds.empty() ? 0.0 : p.lower_bounds[j];
    if (!(x[j] >= lb - 1e-7) || !std::isfinite(x[j])) return false;
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) obj += p.objective[j] * x[j];
  if (std::fabs(obj - objective_value) > 1e-8 * (1.0 + std::fabs(obj))) {
    return false;
  }
  for (const auto& row : p.eq_rows) {
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v += row.coeffs[j] * x[j];
    if (std::fabs(v - row.rhs) > 1e-8 * (1.0 + std::fabs(row.rhs))) {
      return false;
    }
  }
  for (const auto& row : p.le_rows) {
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v += row.coeffs[j] * x[j];
    if (v - row.rhs > 1e-8 * (1.0 + std::fabs(row.rhs))) return false;
  }
  return true;
}

void validate_problem(const LpProblem& p) {
  const std::size_t n = p.num_vars();
  if (n == 0) throw std::invalid_argument("lp: no variables");
  auto check_rows = [n](const std::vector<LpRow>& rows) {
    for (const auto& r : rows) {
      if (r.coeffs.size() != n) {
        throw std::invalid_argument("lp: row length mismatch");
      }
      if (!std::isfinite(r.rhs)) {
        throw std::invalid_argument("lp: non-finite rhs");
      }
      for (double c : r.coeffs) {
        if (!std::isfinite(c)) {
          throw std::invalid_argument("lp: non-finite coefficient");
        }
      }
    }
  };
  check_rows(p.eq_rows);
  check_rows(p.le_rows);
  if (!p.lower_bounds.empty() && p.lower_bounds.size() != n) {
    throw std::invalid_argument("lp: lower_bounds length mismatch");
  }
}

// Shift lower bounds to zero and normalize the sense to maximize.
struct ShiftedProblem {
  std::vector<double> objective;
  std::vector<LpRow> eq_rows;
  std::vector<LpRow> le_rows;
  std::vector<double> shift;
  double obj_offset = 0.0;
  double obj_scale = 1.0;  // -1 when original sense is minimize
};

ShiftedProblem shift_and_normalize(const LpProblem& p) {
  ShiftedProblem s;
  const std::size_t n = p.num_vars();
  s.shift.assign(n, 0.0);
  if (!p.lower_bounds.empty()) s.shift = p.lower_bounds;
  s.obj_scale = (p.sense == LpSense::maximize) ? 1.0 : -1.0;
  s.objective.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.objective[j] = s.obj_scale * p.objective[j];
    s.obj_offset += s.obj_scale * p.objective[j] * s.shift[j];
  }
  auto shift_rows = [&](const std::vector<LpRow>& rows) {
    std::vector<LpRow> out = rows;
    for (auto& r : out) {
      for (std::size_t j = 0; j < n; ++j) r.rhs -= r.coeffs[j] * s.shift[j];
    }
    return out;
  };
  s.eq_rows = shift_rows(p.eq_rows);
  s.le_rows = shift_rows(p.le_rows);
  return s;
}

// Dual of max c.x s.t. E x = e, L x <= l, x >= 0, written again as a
// max-form problem over nonnegative variables (u+, u-, v):
//   max -e.u+ + e.u- - l.v   s.t.  -Et u+ + Et u- - Lt v <= -c.
// Row i of the dual corresponds to primal variable i; its dual price at the
// dual optimum is the primal solution value x_i.
struct DualProblem {
  std::vector<double> objective;
  std::vector<LpRow> le_rows;
};

DualProblem dualize(const ShiftedProblem& s) {
  const std::size_t n = s.objective.size();
  const std::size_t p = s.eq_rows.size();
  const std::size_t q = s.le_rows.size();
  DualProblem d;
  d.objective.reserve(2 * p + q);
  for (std::size_t i = 0; i < p; ++i) d.objective.push_back(-s.eq_rows[i].rhs);
  for (std::size_t i = 0; i < p; ++i) d.objective.push_back(s.eq_rows[i].rhs);
  for (std::size_t i = 0; i < q; ++i) d.objective.push_back(-s.le_rows[i].rhs);
  d.le_rows.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto& row = d.le_rows[j];
    row.coeffs.assign(2 * p + q, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
      row.coeffs[i] = -s.eq_rows[i].coeffs[j];
      row.coeffs[p + i] = s.eq_rows[i].coeffs[j];
    }
    for (std::size_t i = 0; i < q; ++i) {
      row.coeffs[2 * p + i] = -s.le_rows[i].coeffs[j];
    }
    row.rhs = -s.objective[j];
  }
  return d;
}

LpResult finish(const LpProblem& p, const ShiftedProblem& s,
                std::vector<double> x_shifted, double core_objective) {
  LpResult res;
  res.status = LpStatus::optimal;
  res.solution.resize(x_shifted.size());
  for (std::size_t j = 0; j < x_shifted.size(); ++j) {
    res.solution[j] = x_shifted[j] + s.shift[j];
  }
  res.objective_value = s.obj_scale * (core_objective + s.obj_offset);
  if (!certify(p, res.solution, res.objective_value)) {
    res.status = LpStatus::infeasible;  // flag for the caller to retry
    res.solution.clear();
  }
  return res;
}

}  // namespace

LpResult solve(const LpProblem& problem, const LpOptions& options) {
  validate_problem(problem);
  const ShiftedProblem s = shift_and_normalize(problem);
  const std::size_t rows = s.eq_rows.size() + s.le_rows.size();
  const std::size_t cols = s.objective.size();

  bool use_dual;
  switch (options.orientation) {
    case LpOptions::Orientation::primal: use_dual = false; break;
    case LpOptions::Orientation::dual: use_dual = true; break;
    default: use_dual = rows > cols + cols / 2 + 16; break;
  }

  for (int attempt = 0; attempt < 2; ++attempt) {
    if (use_dual) {
      const DualProblem d = dualize(s);
      CoreResult core = solve_core(d.objective, {}, d.le_rows,
                                   options.max_pivots);
      if (core.status == LpStatus::unbounded) {
        return {LpStatus::infeasible, {}, 0.0};
      }
      if (core.status == LpStatus::optimal) {
        // Primal solution = dual prices of the dual's rows. The dual was
        // negated into max form, so its value is minus the primal optimum.
        LpResult res = finish(problem, s, core.row_price, -core.objective);
        if (res.status == LpStatus::optimal) return res;
      }
      // Dual infeasible (primal unbounded or infeasible) or the recovered
      // solution failed certification: fall through to a primal solve.
      use_dual = false;
      continue;
    }

    CoreResult core =
        solve_core(s.objective, s.eq_rows, s.le_rows, options.max_pivots);
    if (core.status == LpStatus::infeasible) {
      return {LpStatus::infeasible, {}, 0.0};
    }
    if (core.status == LpStatus::unbounded) {
      return {LpStatus::unbounded, {}, 0.0};
    }
    LpResult res = finish(problem, s, core.x, core.objective);
    if (res.status == LpStatus::optimal) return res;
    throw solver_failure_error("lp: could not certify an optimal solution");
  }
  throw solver_failure_error("lp: could not certify an optimal solution");
}

LpProblem build_weight_lp(const Sample& sample, double gamma,
                          const std::vector<LpRow>& extra_le, LpSense sense) {
  if (!(gamma >= 1.0)) {
    throw std::invalid_argument("build_weight_lp: gamma must be >= 1");
  }
  const auto& y = sample.values();
  const std::size_t n = y.size();

  LpProblem p;
  p.sense = sense;
  p.objective.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) p.objective[i] = y[i];

  LpRow sum_row;
  sum_row.coeffs.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) sum_row.coeffs[i] = 1.0;
  sum_row.rhs = 1.0;
  p.eq_rows.push_back(std::move(sum_row));

  p.le_rows.reserve(2 * n + extra_le.size());
  for (std::size_t i = 0; i < n; ++i) {
    LpRow lo;  // s - w_i <= 0
    lo.coeffs.assign(n + 1, 0.0);
    lo.coeffs[i] = -1.0;
    lo.coeffs[n] = 1.0;
    p.le_rows.push_back(std::move(lo));

    LpRow hi;  // w_i - gamma s <= 0
    hi.coeffs.assign(n + 1, 0.0);
    hi.coeffs[i] = 1.0;
    hi.coeffs[n] = -gamma;
    p.le_rows.push_back(std::move(hi));
  }
  for (const auto& row : extra_le) {
    if (row.coeffs.size() != n && row.coeffs.size() != n + 1) {
      throw std::invalid_argument("build_weight_lp: extra row length mismatch");
    }
    LpRow padded;
    padded.coeffs.assign(n + 1, 0.0);
    std::copy(row.coeffs.begin(), row.coeffs.end(), padded.coeffs.begin());
    padded.rhs = row.rhs;
    p.le_rows.push_back(std::move(padded));
  }
  return p;
}

void dump_problem(const LpProblem& problem, std::ostream& os) {
  os << (problem.sense == LpSense::maximize ? "maximize" : "minimize");
  for (double c : problem.objective) os << ' ' << c;
  os << '\n';
  for (const auto& r : problem.eq_rows) {
    os << "eq";
    for (double c : r.coeffs) os << ' ' << c;
    os << " = " << r.rhs << '\n';
  }
  for (const auto& r : problem.le_rows) {
    os << "le";
    for (double c : r.coeffs) os << ' ' << c;
    os << " <= " << r.rhs << '\n';
  }
  if (!problem.lower_bounds.empty()) {
    os << "lb";
    for (double v : problem.lower_bounds) os << ' ' << v;
    os << '\n';
  }
}

}  // namespace meanbounds
