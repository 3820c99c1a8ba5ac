#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "meanbounds/bounds.hpp"
#include "meanbounds/distributions.hpp"
#include "meanbounds/estimators.hpp"
#include "meanbounds/types.hpp"
#include "test_support.hpp"

using namespace meanbounds;

namespace {

// Brute force over all ratio-feasible weight vectors on the simplex grid
// with the given step denominator. Exact arithmetic on integer grid points.
std::pair<double, double> simplex_grid_oracle(const std::vector<double>& y,
                                              double gamma, int denom) {
  const int n = (int)y.size();
  double best_max = -1e300, best_min = 1e300;
  std::vector<int> parts(n, 1);
  // enumerate compositions of denom into n positive parts
  auto evaluate = [&]() {
    int lo = parts[0], hi = parts[0];
    for (int v : parts) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if ((double)hi > gamma * lo + 1e-12) return;
    double obj = 0.0;
    for (int i = 0; i < n; ++i) obj += y[i] * parts[i];
    obj /= denom;
    best_max = std::max(best_max, obj);
    best_min = std::min(best_min, obj);
  };
  // odometer over first n-1 parts
  std::vector<int> idx(n - 1, 1);
  while (true) {
    int used = 0;
    for (int v : idx) used += v;
    if (used <= denom - 1) {
      for (int i = 0; i < n - 1; ++i) parts[i] = idx[i];
      parts[n - 1] = denom - used;
      evaluate();
    }
    int k = n - 2;
    while (k >= 0) {
      if (++idx[k] <= denom) break;
      idx[k] = 1;
      --k;
    }
    if (k < 0) break;
  }
  return {best_min, best_max};
}

Sample random_sample(std::mt19937_64& rng, int n, double lo = -5.0,
                     double hi = 5.0) {
  return Sample(testsupport::random_values(rng, n, lo, hi));
}

Sample normal_sample(std::mt19937_64& rng, int n, double loc, double scale) {
  std::vector<double> v(n);
  for (auto& x : v) {
    x = loc + scale * testsupport::oracle_normal_quantile(
                          testsupport::uniform01(rng));
  }
  return Sample(v);
}

}  // namespace

TEST_CASE("al bounds hand fixture") {
  Sample s({0.0, 1.0, 2.0});
  auto iv = al_bounds(s, 2.0);
  CHECK(iv.lower == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(iv.upper == doctest::Approx(1.25).epsilon(1e-12));
  // Optimal upper weights are (1/4, 1/4, 1/2).
  CHECK(iv.upper_solution.weights[2] == doctest::Approx(0.5));

  auto flat = al_bounds(s, 1.0);
  CHECK(flat.lower == doctest::Approx(1.0));
  CHECK(flat.upper == doctest::Approx(1.0));

  CHECK_THROWS_AS(al_bounds(Sample({1.0}), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(al_bounds(s, 0.5), std::invalid_argument);
}

TEST_CASE("al bounds scan agrees with the lp route") {
  std::mt19937_64 rng(2024);
  const double gammas[] = {1.5, 2.0, 5.0, 9.0};
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 3 + (int)(rng() % 48);
    Sample s = random_sample(rng, n);
    const double gamma = gammas[rep % 4];
    auto scan = al_bounds(s, gamma);
    auto lp = al_bounds_lp(s, gamma);
    CHECK(std::fabs(scan.upper - lp.upper) <= 1e-8);
    CHECK(std::fabs(scan.lower - lp.lower) <= 1e-8);
  }
}

TEST_CASE("al bounds matches the simplex-grid brute force on tiny samples") {
  std::mt19937_64 rng(77);
  const double gammas[] = {1.5, 2.0, 5.0, 9.0};
  for (int rep = 0; rep < 12; ++rep) {
    const int n = 3 + (int)(rng() % 2);
    Sample s = random_sample(rng, n, -2.0, 2.0);
    const double gamma = gammas[rep % 4];
    auto iv = al_bounds(s, gamma);
    auto [gmin, gmax] = simplex_grid_oracle(s.values(), gamma, 60);
    const double tol =
        (s.max() - s.min()) * n / 60.0;  // grid resolution envelope
    CHECK(gmax <= iv.upper + 1e-9);
    CHECK(gmin >= iv.lower - 1e-9);
    CHECK(iv.upper - gmax <= tol);
    CHECK(gmin - iv.lower <= tol);
  }
}

TEST_CASE("al bounds width is nondecreasing in gamma") {
  std::mt19937_64 rng(5);
  Sample s = random_sample(rng, 25);
  double prev = 0.0;
  for (double g : {1.0, 1.5, 2.0, 3.0, 5.0, 9.0}) {
    const double w = al_bounds(s, g).width();
    CHECK(w >= prev - 1e-12);
    prev = w;
  }
}

TEST_CASE("ks lower envelope") {
  std::mt19937_64 rng(9);
  Sample s = normal_sample(rng, 400, 0.0, 1.0);
  auto sks = ks_lower_envelope(s);
  const double offset = kolmogorov_quantile(0.95) / 20.0;
  CHECK(offset == doctest::Approx(0.0679).epsilon(2e-3));

  auto ecdf = weighted_ecdf(s, std::vector<double>(400, 1.0 / 400));
  for (std::size_t k = 0; k < sks.breakpoints().size(); ++k) {
    const double y = sks.breakpoints()[k];
    CHECK(sks(y) <= ecdf(y) + 1e-12);
    if (sks(y) > 0.0) {
      CHECK(ecdf(y) - sks(y) == doctest::Approx(offset).epsilon(1e-9));
    }
    CHECK(sks(y) <= 1.0 - offset + 1e-12);
  }
}

TEST_CASE("u lower bound hand fixtures") {
  // Steps at 0 (level 0.2), 1 (level 0.5), 2 (level 1.0); m = 1.
  StepFunction sks({0.0, 1.0, 2.0}, {0.2, 0.5, 1.0});
  auto u = u_lower_bound(sks, 2.0, 1.0);
  // denominator = 2 - 0.5 = 1.5
  CHECK(u(2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u(0.0) == doctest::Approx(0.2 / 1.5).epsilon(1e-12));
  CHECK(u(0.5) == doctest::Approx(0.1333333333333).epsilon(1e-9));

  SUBCASE("gamma 1 is the identity") {
    auto same = u_lower_bound(sks, 1.0, 1.0);
    for (std::size_t k = 0; k < sks.breakpoints().size(); ++k) {
      CHECK(same.levels()[k] == doctest::Approx(sks.levels()[k]).epsilon(1e-15));
    }
  }
  SUBCASE("monotone and capped at 1") {
    double prev = 0.0;
    for (double lv : u.levels()) {
      CHECK(lv >= prev - 1e-15);
      CHECK(lv <= 1.0 + 1e-15);
      prev = lv;
    }
  }
  CHECK_THROWS_AS(u_lower_bound(sks, 2.0, -5.0), std::invalid_argument);
}

TEST_CASE("log concave majorant") {
  SUBCASE("three point hull") {
    // log levels (0, -2, -1) at x = 0, 1, 2; the chord from (0,0) to
    // (2,-1) dominates the middle point, giving -0.5 there.
    auto hl = log_concave_majorant({0.0, 1.0, 2.0},
                                   {1.0, std::exp(-2.0), std::exp(-1.0)});
    CHECK(hl(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hl(1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(hl(2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("already concave log sequence is unchanged") {
    StepFunction u({0.0, 1.0, 2.0},
                   {std::exp(-3.0), std::exp(-1.5), std::exp(-1.0)});
    auto hl = log_concave_majorant(u);
    for (std::size_t k = 0; k < u.breakpoints().size(); ++k) {
      CHECK(hl(u.breakpoints()[k]) ==
            doctest::Approx(u.levels()[k]).epsilon(1e-12));
    }
  }
  SUBCASE("dominates the input on random step functions") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 50; ++rep) {
      const int k = 3 + (int)(rng() % 20);
      std::vector<double> bp(k), lv(k);
      double x = 0.0, l = 0.0;
      for (int j = 0; j < k; ++j) {
        x += 0.1 + testsupport::uniform01(rng);
        l = std::min(1.0, l + 0.05 + 0.5 * testsupport::uniform01(rng) / k);
        bp[j] = x;
        lv[j] = l;
      }
      StepFunction u(bp, lv);
      auto hl = log_concave_majorant(u);
      double prev = 0.0;
      for (int j = 0; j < k; ++j) {
        const double v = hl(bp[j]);
        CHECK(v >= u.levels()[j] - 1e-12);
        CHECK(v >= prev - 1e-12);
        prev = v;
      }
    }
  }
  CHECK_THROWS_AS(log_concave_majorant(StepFunction({0.0}, {0.0})),
                  std::invalid_argument);
}

TEST_CASE("parametric bounds") {
  std::mt19937_64 rng(404);
  ConstraintSpec spec;
  spec.family = Family::parametric_gaussian;
  spec.gamma = 2.0;
  spec.theta_grid.location_count = 7;
  spec.theta_grid.scale_count = 7;

  SUBCASE("contained in the unconstrained interval") {
    for (int rep = 0; rep < 5; ++rep) {
      Sample s = normal_sample(rng, 60, 1.0, 2.0);
      auto base = al_bounds(s, spec.gamma);
      auto iv = parametric_bounds(s, spec);
      CHECK(iv.lower >= base.lower - 1e-8);
      CHECK(iv.upper <= base.upper + 1e-8);
    }
  }
  SUBCASE("a huge delta-star relaxation recovers the unconstrained bounds") {
    Sample s = normal_sample(rng, 40, 0.0, 1.0);
    ConstraintSpec relaxed = spec;
    relaxed.delta_star = 100.0;
    auto iv = parametric_bounds(s, relaxed);
    auto base = al_bounds(s, spec.gamma);
    CHECK(iv.lower == doctest::Approx(base.lower).epsilon(1e-8));
    CHECK(iv.upper == doctest::Approx(base.upper).epsilon(1e-8));
  }
  SUBCASE("unbiased normal draw keeps the sample mean inside") {
    Sample s = normal_sample(rng, 200, 0.0, 1.0);
    auto iv = parametric_bounds(s, spec);
    CHECK(iv.contains(s.mean(), 1e-9));
  }
  SUBCASE("an impossible grid raises the empty-set error") {
    Sample s = normal_sample(rng, 50, 0.0, 1.0);
    ConstraintSpec bad = spec;
    bad.theta_grid.location_range = {50.0, 60.0};  // nowhere near the data
    bad.theta_grid.scale_range = {0.5, 1.0};
    CHECK_THROWS_AS(parametric_bounds(s, bad), empty_plausibility_set_error);
  }
  SUBCASE("interval grows with delta star") {
    Sample s = normal_sample(rng, 80, 0.0, 1.0);
    double prev_width = -1.0;
    IdentificationInterval prev;
    bool have_prev = false;
    for (double ds : {0.0, 0.05, 0.2, 1.0}) {
      ConstraintSpec sp = spec;
      sp.delta_star = ds;
      auto iv = parametric_bounds(s, sp);
      if (have_prev) {
        CHECK(iv.lower <= prev.lower + 1e-9);
        CHECK(iv.upper >= prev.upper - 1e-9);
      }
      prev = iv;
      have_prev = true;
      CHECK(iv.width() >= prev_width - 1e-12);
      prev_width = iv.width();
    }
  }
}

TEST_CASE("symmetric bounds") {
  std::mt19937_64 rng(505);
  ConstraintSpec spec;
  spec.family = Family::symmetric;
  spec.gamma = 2.0;
  spec.m_grid.count = 21;

  SUBCASE("exactly symmetric sample keeps the mean inside at m = center") {
    // Y = {-a_k} union {+a_k}: uniform weights satisfy the symmetry rows
    // exactly at m = 0.
    std::vector<double> v;
    for (int k = 1; k <= 10; ++k) {
      v.push_back(0.2 * k);
      v.push_back(-0.2 * k);
    }
    Sample s(v);
    ConstraintSpec sp = spec;
    sp.m_grid.range = {-1.0, 1.0};  // includes m = 0 at the midpoint
    auto iv = symmetric_bounds(s, sp);
    CHECK(iv.contains(s.mean(), 1e-9));
  }
  SUBCASE("contained in the unconstrained interval") {
    for (int rep = 0; rep < 5; ++rep) {
      Sample s = normal_sample(rng, 50, -1.0, 1.5);
      auto base = al_bounds(s, spec.gamma);
      auto iv = symmetric_bounds(s, spec);
      CHECK(iv.lower >= base.lower - 1e-8);
      CHECK(iv.upper <= base.upper + 1e-8);
    }
  }
}

TEST_CASE("log concave bounds") {
  std::mt19937_64 rng(606);
  ConstraintSpec spec;
  spec.family = Family::log_concave;
  spec.gamma = 2.0;
  spec.m_grid.count = 40;

  SUBCASE("contained in the unconstrained interval") {
    for (int rep = 0; rep < 3; ++rep) {
      Sample s = normal_sample(rng, 60, 0.0, 1.0);
      auto base = al_bounds(s, spec.gamma);
      auto iv = log_concave_bounds(s, spec);
      CHECK(iv.lower >= base.lower - 1e-8);
      CHECK(iv.upper <= base.upper + 1e-8);
    }
  }
  SUBCASE("gamma 1 collapses to the sample mean") {
    Sample s = normal_sample(rng, 80, 2.0, 1.0);
    ConstraintSpec sp = spec;
    sp.gamma = 1.0;
    auto iv = log_concave_bounds(s, sp);
    CHECK(iv.lower == doctest::Approx(s.mean()).epsilon(1e-9));
    CHECK(iv.upper == doctest::Approx(s.mean()).epsilon(1e-9));
  }
}

namespace {

// Direct evaluation of the symmetry functional sup of a weighted ECDF,
// independent of the constraint-row machinery.
double symmetry_defect(const Sample& s, const std::vector<double>& w,
                       double m) {
  auto H = weighted_ecdf(s, w);
  std::vector<double> bs = {0.0};
  for (double v : s.values()) bs.push_back(std::fabs(v - m));
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  double sup = 0.0;
  for (double b : bs) {
    sup = std::max(sup, std::fabs(H(m + b) + H(m - b) - 1.0));
    sup = std::max(sup, std::fabs(H(m + b) + H.left_limit(m - b) - 1.0));
  }
  return sup;
}

std::vector<double> random_weights(std::mt19937_64& rng, int n, double gamma) {
  // Random point of the ratio polytope: weights proportional to [1, gamma]
  // draws, half the time snapped to the two-level extremes.
  std::vector<double> w(n);
  const bool vertex_like = rng() % 2 == 0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = testsupport::uniform01(rng);
    w[i] = vertex_like ? (u < 0.5 ? 1.0 : gamma)
                       : 1.0 + (gamma - 1.0) * u;
    sum += w[i];
  }
  for (auto& v : w) v /= sum;
  return w;
}

}  // namespace

TEST_CASE("symmetric rows are equivalent to the sup condition") {
  std::mt19937_64 rng(909);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 5 + (int)(rng() % 8);
    Sample s = random_sample(rng, n, -2.0, 2.0);
    const double gamma = 1.5 + 3.0 * testsupport::uniform01(rng);
    const double m = -1.5 + 3.0 * testsupport::uniform01(rng);

    ConstraintSpec spec;
    spec.gamma = gamma;
    spec.family = Family::symmetric;
    spec.alpha = 0.2 + 0.6 * testsupport::uniform01(rng);
    spec.m_grid.count = 1;
    spec.m_grid.range = {m, m};
    auto set = build_envelope_set(s, spec);
    REQUIRE(set.artifacts.size() == 1);
    const auto& art = set.artifacts[0];
    const double band =
        zeta_gamma_alpha(gamma, *spec.alpha) / std::sqrt((double)n);

    for (int t = 0; t < 60; ++t) {
      auto w = random_weights(rng, n, gamma);
      const double defect = symmetry_defect(s, w, m);
      bool rows_ok = art.precheck_feasible;
      std::vector<double> prefix(n + 1, 0.0);
      for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + w[i];
      for (const auto& c : art.constraints) {
        const double v = prefix[c.a] + (c.b >= 0 ? prefix[c.b] : 0.0);
        if (v < c.lo - 1e-12 || v > c.hi + 1e-12) rows_ok = false;
      }
      if (std::fabs(defect - band) > 1e-9) {
        CHECK(rows_ok == (defect <= band));
      }
    }
  }
}

TEST_CASE("parametric rows are equivalent to the ks band") {
  std::mt19937_64 rng(910);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 5 + (int)(rng() % 8);
    Sample s = random_sample(rng, n, -2.0, 2.0);
    const double gamma = 1.5 + 2.0 * testsupport::uniform01(rng);
    const double loc = -0.5 + testsupport::uniform01(rng);
    const double scale = 0.8 + 0.8 * testsupport::uniform01(rng);

    ConstraintSpec spec;
    spec.gamma = gamma;
    spec.family = Family::parametric_gaussian;
    spec.theta_grid.location_count = 1;
    spec.theta_grid.scale_count = 1;
    spec.theta_grid.location_range = {loc, loc};
    spec.theta_grid.scale_range = {scale, scale};
    auto set = build_envelope_set(s, spec);
    REQUIRE(set.artifacts.size() == 1);
    const auto& art = set.artifacts[0];
    const double delta = delta_gamma_n(gamma, n);
    auto cdf = [&](double v) { return normal_cdf((v - loc) / scale); };

    for (int t = 0; t < 60; ++t) {
      auto w = random_weights(rng, n, gamma);
      const double dist = ks_distance(weighted_ecdf(s, w), cdf);
      bool rows_ok = art.precheck_feasible;
      std::vector<double> prefix(n + 1, 0.0);
      for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + w[i];
      for (const auto& c : art.constraints) {
        const double v = prefix[c.a] + (c.b >= 0 ? prefix[c.b] : 0.0);
        if (v < c.lo - 1e-12 || v > c.hi + 1e-12) rows_ok = false;
      }
      if (std::fabs(dist - delta) > 1e-9) {
        CHECK(rows_ok == (dist <= delta));
      }
    }
  }
}

TEST_CASE("log concave rows are equivalent to domination of the majorant") {
  std::mt19937_64 rng(911);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 6 + (int)(rng() % 8);
    Sample s = random_sample(rng, n, -2.0, 2.0);
    const double gamma = 1.5 + 2.0 * testsupport::uniform01(rng);

    ConstraintSpec spec;
    spec.gamma = gamma;
    spec.family = Family::log_concave;
    spec.m_grid.count = 3;
    auto set = build_envelope_set(s, spec);
    REQUIRE(!set.artifacts.empty());
    for (const auto& art : set.artifacts) {
      const auto& hl = *art.majorant;
      for (int t = 0; t < 20; ++t) {
        auto w = random_weights(rng, n, gamma);
        auto H = weighted_ecdf(s, w);
        // Exact sup of hl - H: at each data point, and over each interval
        // between consecutive points, where H is flat and hl is continuous
        // so the sup sits at the right endpoint.
        double worst = -1.0;
        const auto& v = s.values();
        for (double y : v) worst = std::max(worst, hl(y) - H(y));
        for (std::size_t k = 0; k + 1 < v.size(); ++k) {
          worst = std::max(worst, hl(v[k + 1]) - H(v[k]));
        }
        bool rows_ok = true;
        std::vector<double> prefix(n + 1, 0.0);
        for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + w[i];
        for (const auto& c : art.constraints) {
          const double v = prefix[c.a] + (c.b >= 0 ? prefix[c.b] : 0.0);
          if (v < c.lo - 1e-12 || v > c.hi + 1e-12) rows_ok = false;
        }
        if (std::fabs(worst) > 1e-9) {
          CHECK(rows_ok == (worst <= 0.0));
        }
      }
    }
  }
}

TEST_CASE("envelope set invariants") {
  std::mt19937_64 rng(707);
  Sample s = normal_sample(rng, 120, 0.0, 1.0);
  ConstraintSpec spec;
  spec.family = Family::log_concave;
  spec.gamma = 3.0;
  spec.m_grid.count = 25;
  auto set = build_envelope_set(s, spec);
  REQUIRE(!set.artifacts.empty());
  for (const auto& art : set.artifacts) {
    REQUIRE(art.u_m.has_value());
    REQUIRE(art.majorant.has_value());
    double prev = 0.0;
    for (std::size_t k = 0; k < art.u_m->breakpoints().size(); ++k) {
      const double lv = art.u_m->levels()[k];
      CHECK(lv >= prev - 1e-12);
      CHECK(lv >= 0.0);
      CHECK(lv <= 1.0 + 1e-12);
      prev = lv;
      const double h = (*art.majorant)(art.u_m->breakpoints()[k]);
      CHECK(h >= lv - 1e-12);
    }
  }
}

TEST_CASE("compute bounds dispatch and properties") {
  std::mt19937_64 rng(808);

  SUBCASE("family none reproduces al_bounds bit for bit") {
    Sample s = random_sample(rng, 30);
    ConstraintSpec spec;
    spec.gamma = 3.0;
    auto direct = al_bounds(s, 3.0);
    auto routed = compute_bounds(s, spec);
    CHECK(routed.lower == direct.lower);
    CHECK(routed.upper == direct.upper);
    CHECK(routed.upper_solution.weights == direct.upper_solution.weights);
  }
  SUBCASE("deterministic") {
    Sample s = normal_sample(rng, 40, 0.0, 1.0);
    ConstraintSpec spec;
    spec.gamma = 2.0;
    spec.family = Family::symmetric;
    spec.m_grid.count = 15;
    auto a = compute_bounds(s, spec);
    auto b = compute_bounds(s, spec);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.upper_solution.weights == b.upper_solution.weights);
  }
  SUBCASE("degenerate sample short-circuits for every family") {
    Sample s(std::vector<double>(10, 3.5));
    for (Family f : {Family::none, Family::parametric_gaussian,
                     Family::symmetric, Family::log_concave}) {
      ConstraintSpec spec;
      spec.gamma = 4.0;
      spec.family = f;
      auto iv = compute_bounds(s, spec);
      CHECK(iv.lower == 3.5);
      CHECK(iv.upper == 3.5);
    }
  }
  SUBCASE("translation equivariance for none and symmetric") {
    Sample s = normal_sample(rng, 35, 0.0, 1.0);
    std::vector<double> shifted_values = s.values();
    const double c = 7.25;
    for (auto& v : shifted_values) v += c;
    Sample shifted(shifted_values);

    ConstraintSpec none;
    none.gamma = 2.5;
    auto iv0 = compute_bounds(s, none);
    auto iv1 = compute_bounds(shifted, none);
    CHECK(iv1.lower == doctest::Approx(iv0.lower + c).epsilon(1e-10));
    CHECK(iv1.upper == doctest::Approx(iv0.upper + c).epsilon(1e-10));

    ConstraintSpec sym;
    sym.gamma = 2.5;
    sym.family = Family::symmetric;
    sym.m_grid.count = 11;
    sym.m_grid.range = {-2.0, 2.0};
    ConstraintSpec sym_shifted = sym;
    sym_shifted.m_grid.range = {-2.0 + c, 2.0 + c};
    auto sv0 = symmetric_bounds(s, sym);
    auto sv1 = symmetric_bounds(shifted, sym_shifted);
    CHECK(sv1.lower == doctest::Approx(sv0.lower + c).epsilon(1e-9));
    CHECK(sv1.upper == doctest::Approx(sv0.upper + c).epsilon(1e-9));
  }
  SUBCASE("nesting holds for every family") {
    for (int rep = 0; rep < 3; ++rep) {
      Sample s = normal_sample(rng, 45, 0.5, 1.2);
      ConstraintSpec spec;
      spec.gamma = 2.0;
      spec.delta_star = 0.05;
      auto base = al_bounds(s, spec.gamma);
      for (Family f : {Family::parametric_gaussian, Family::symmetric,
                       Family::log_concave}) {
        ConstraintSpec sp = spec;
        sp.family = f;
        sp.theta_grid.location_count = 5;
        sp.theta_grid.scale_count = 5;
        sp.m_grid.count = 15;
        auto iv = compute_bounds(s, sp);
        CHECK(iv.lower >= base.lower - 1e-8);
        CHECK(iv.upper <= base.upper + 1e-8);
      }
    }
  }
}
