#include "pickfreeze/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pickfreeze/errors.hpp"
#include "pickfreeze/models.hpp"
#include "pickfreeze/parallel.hpp"
#include "pickfreeze/rng.hpp"
#include "pickfreeze/special.hpp"

namespace pickfreeze {

const char* stat_kind_name(StatKind kind) {
  switch (kind) {
    case StatKind::T1: return "t1";
    case StatKind::T2: return "t2";
    case StatKind::T3: return "t3";
    case StatKind::T4: return "t4";
    case StatKind::T5: return "t5";
    case StatKind::Linear: return "linear";
  }
  return "?";
}

void TestProblem::validate() const {
  if (v.size() != w.size()) {
    throw DesignError("equality hypothesis needs v and w of the same length");
  }
  if (dim() == 0) throw DesignError("empty hypothesis: nothing to test");
  for (const auto* group : {&u, &v, &w}) {
    for (const auto& subset : *group) {
      if (subset.empty()) throw DesignError("hypothesis subsets must be non-empty");
    }
  }
}

namespace {

std::vector<int> normalized(std::vector<int> subset) {
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  return subset;
}

// column assignment for the stacked statistic: one pick-freeze column per
// distinct subset, in first-appearance order across u, then v, then w
struct ProblemLayout {
  std::vector<std::vector<int>> columns;
  std::vector<std::size_t> u_cols;
  std::vector<std::size_t> v_cols;
  std::vector<std::size_t> w_cols;
};

ProblemLayout make_layout(const TestProblem& problem) {
  problem.validate();
  ProblemLayout layout;
  auto column_of = [&layout](const std::vector<int>& subset) {
    auto key = normalized(subset);
    for (std::size_t c = 0; c < layout.columns.size(); ++c) {
      if (layout.columns[c] == key) return c;
    }
    layout.columns.push_back(std::move(key));
    return layout.columns.size() - 1;
  };
  for (const auto& s : problem.u) layout.u_cols.push_back(column_of(s));
  for (const auto& s : problem.v) layout.v_cols.push_back(column_of(s));
  for (const auto& s : problem.w) layout.w_cols.push_back(column_of(s));
  return layout;
}

}  // namespace

Design TestProblem::combined_design(int p) const {
  return Design(make_layout(*this).columns, p);
}

GnStatistic build_GN(const PickFreezeSample& sample, const TestProblem& problem) {
  const auto layout = make_layout(problem);
  if (sample.design.subsets() != layout.columns) {
    throw DesignError("sample was not generated with the problem's combined design");
  }

  const auto s_hat = estimate_S(sample);
  const auto full = gamma_S(sample, s_hat);
  const double sqn = std::sqrt(double(sample.n()));

  // each stacked coordinate is a signed sum of estimate coordinates
  const std::size_t k = problem.u.size();
  const std::size_t l = problem.v.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(k + l);
  for (std::size_t a = 0; a < k; ++a) {
    rows[a] = {{layout.u_cols[a], 1.0}};
  }
  for (std::size_t i = 0; i < l; ++i) {
    rows[k + i] = {{layout.v_cols[i], 1.0}, {layout.w_cols[i], -1.0}};
  }

  GnStatistic g;
  g.n = std::size_t(sample.n());
  g.gn.resize(k + l);
  for (std::size_t a = 0; a < k; ++a) {
    g.gn[a] = sqn * s_hat.values[layout.u_cols[a]];
  }
  for (std::size_t i = 0; i < l; ++i) {
    g.gn[k + i] =
        sqn * (s_hat.values[layout.v_cols[i]] - s_hat.values[layout.w_cols[i]]);
  }

  g.gamma = CovMatrix(k + l);
  for (std::size_t a = 0; a < k + l; ++a) {
    for (std::size_t b = a; b < k + l; ++b) {
      double acc = 0.0;
      for (const auto& [c, sc] : rows[a]) {
        for (const auto& [d, sd] : rows[b]) {
          acc += sc * sd * full.at(c, d);
        }
      }
      g.gamma.at(a, b) = acc;
      g.gamma.at(b, a) = acc;
    }
  }
  return g;
}

namespace {

double abs_sum_density(double u) {
  return 2.0 * std::numbers::inv_sqrtpi * std::exp(-u * u / 4.0) * std::erf(u / 2.0);
}

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = abs_sum_density(lm);
  const double frm = abs_sum_density(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// integral of the density over [0, w]
double abs_sum_cdf(double w) {
  if (w <= 0.0) return 0.0;
  const double fa = abs_sum_density(0.0);
  const double fb = abs_sum_density(w);
  const double fm = abs_sum_density(0.5 * w);
  return adaptive_simpson(0.0, w, fa, fm, fb, simpson(fa, fm, fb, 0.0, w), 1e-11, 48);
}

}  // namespace

double quantile_abs_sum(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ParameterError("alpha must lie in (0,1)");
  }
  const double target = 1.0 - alpha;
  double hi = 1.0;
  while (abs_sum_cdf(hi) < target) {
    hi *= 2.0;
    if (hi > 64.0) return hi;  // tail mass below representable tolerance
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    (abs_sum_cdf(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double test_statistic(StatKind kind, std::span<const double> gn) {
  if (gn.empty()) throw ParameterError("empty statistic vector");
  double acc = 0.0;
  switch (kind) {
    case StatKind::T1:
      for (double g : gn) acc += g;
      return acc;
    case StatKind::T2:
      for (double g : gn) acc += std::abs(g);
      return acc;
    case StatKind::T3:
      for (double g : gn) acc += g;
      return std::abs(acc);
    case StatKind::T4:
      for (double g : gn) acc += g * g;
      return acc;
    case StatKind::T5:
      for (double g : gn) acc = std::max(acc, std::abs(g));
      return acc;
    case StatKind::Linear:
      break;
  }
  throw ParameterError("linear statistic requires coefficients; use test_linear");
}

double test_threshold(StatKind kind, std::size_t m, double alpha, double sigma0) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0,1)");
  if (!(sigma0 > 0.0)) throw ParameterError("sigma0 must be positive");
  if (m == 0) throw ParameterError("dimension must be at least 1");
  switch (kind) {
    case StatKind::T1:
      // sum of m iid N(0, sigma0^2)
      return sigma0 * std::sqrt(double(m)) * normal_quantile(1.0 - alpha);
    case StatKind::T2:
      if (m != 2) throw ParameterError("the |g1|+|g2| quantile is only available for m = 2");
      return sigma0 * quantile_abs_sum(alpha);
    case StatKind::T3:
      return sigma0 * std::sqrt(double(m)) * normal_quantile(1.0 - alpha / 2.0);
    case StatKind::T4:
      return sigma0 * sigma0 * chi2_quantile(1.0 - alpha, int(m));
    case StatKind::T5:
      // P(max of m abs values <= t) = (2 Phi(t/sigma0) - 1)^m
      return sigma0 *
             normal_quantile(0.5 * (1.0 + std::pow(1.0 - alpha, 1.0 / double(m))));
    case StatKind::Linear:
      break;
  }
  throw ParameterError("no fixed threshold for the linear kind; use test_linear");
}

TestResult test_k2(StatKind kind, std::span<const double> gn, double alpha,
                   double sigma0) {
  if (gn.size() != 2) throw ParameterError("test_k2 requires a 2-dimensional statistic");
  TestResult r;
  r.kind = kind;
  r.alpha = alpha;
  r.statistic = test_statistic(kind, gn);
  r.threshold = test_threshold(kind, 2, alpha, sigma0);
  r.reject = r.statistic > r.threshold;
  return r;
}

TestResult test_linear(std::span<const double> a, const GnStatistic& g,
                       double alpha, double shift) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0,1)");
  if (a.size() != g.gn.size()) {
    throw DesignError("coefficient length does not match the statistic");
  }
  double quad = 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * g.gn[i];
    for (std::size_t j = 0; j < a.size(); ++j) {
      quad += a[i] * g.gamma.at(i, j) * a[j];
    }
  }
  if (!(quad > 0.0)) {
    throw DegenerateError("test direction has zero estimated variance");
  }
  TestResult r;
  r.kind = StatKind::Linear;
  r.alpha = alpha;
  r.statistic = (dot - shift) / std::sqrt(quad);
  r.threshold = normal_quantile(1.0 - alpha);
  r.reject = r.statistic > r.threshold;
  return r;
}

namespace {

// lower-triangular factor L with L L^T = gamma, tolerating zero rows (the
// matrix is a plug-in covariance, so it is symmetric PSD up to rounding)
std::vector<double> semidefinite_cholesky(const CovMatrix& gamma) {
  const std::size_t m = gamma.dim;
  double max_diag = 0.0;
  for (std::size_t i = 0; i < m; ++i) max_diag = std::max(max_diag, gamma.at(i, i));
  const double tol = 1e-10 * std::max(max_diag, 1e-300);

  std::vector<double> lf(m * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double d = gamma.at(j, j);
    for (std::size_t t = 0; t < j; ++t) d -= lf[j * m + t] * lf[j * m + t];
    if (d < -tol) throw NumericalError("covariance matrix is not positive semidefinite");
    const double ljj = d > tol ? std::sqrt(d) : 0.0;
    lf[j * m + j] = ljj;
    for (std::size_t i = j + 1; i < m; ++i) {
      double s = gamma.at(i, j);
      for (std::size_t t = 0; t < j; ++t) s -= lf[i * m + t] * lf[j * m + t];
      lf[i * m + j] = ljj > 0.0 ? s / ljj : 0.0;
    }
  }
  return lf;
}

}  // namespace

double simulated_threshold(StatKind kind, const CovMatrix& gamma, double alpha,
                           std::size_t draws, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0,1)");
  if (draws < 100) throw ParameterError("too few draws for a quantile estimate");
  if (kind == StatKind::Linear) {
    throw ParameterError("no simulated threshold for the linear kind");
  }
  const std::size_t m = gamma.dim;
  if (m == 0) throw ParameterError("empty covariance");
  const auto lf = semidefinite_cholesky(gamma);

  RngStream rng(seed, 0);
  std::vector<double> z(m);
  std::vector<double> x(m);
  std::vector<double> stats(draws);
  for (std::size_t r = 0; r < draws; ++r) {
    for (std::size_t i = 0; i < m; ++i) z[i] = normal_quantile(rng.next_unit());
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t t = 0; t <= i; ++t) s += lf[i * m + t] * z[t];
      x[i] = s;
    }
    stats[r] = test_statistic(kind, x);
  }
  std::size_t idx = std::size_t(std::ceil((1.0 - alpha) * double(draws)));
  idx = std::min(std::max<std::size_t>(idx, 1), draws) - 1;
  std::nth_element(stats.begin(), stats.begin() + std::ptrdiff_t(idx), stats.end());
  return stats[idx];
}

double bilinear2_t1_power(double lambda1, std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0,1)");
  const double z = std::sqrt(6.0) * normal_quantile(1.0 - alpha);
  const double g11 = bilinear2_gamma_diag(lambda1);
  const double g12 = bilinear2_gamma_offdiag(lambda1);
  const double sd = std::sqrt(2.0 * (g11 + g12));
  const double drift = 2.0 * std::sqrt(double(n)) * lambda1 * lambda1;
  return 1.0 - normal_cdf((z - drift) / sd);
}

std::vector<PowerPoint> power_curve(PowerFamily family, const TestProblem& problem,
                                    StatKind kind, double alpha,
                                    const std::vector<double>& grid, std::size_t n,
                                    std::size_t reps, std::uint64_t seed,
                                    unsigned threads) {
  if (reps < 1) throw ParameterError("reps must be at least 1");
  if (grid.empty()) throw ParameterError("empty parameter grid");
  if (kind == StatKind::Linear) {
    throw ParameterError("power_curve covers the fixed-threshold kinds only");
  }
  problem.validate();

  const int p = family == PowerFamily::Bilinear2 ? 2 : 3;
  const double sigma0 = family == PowerFamily::Bilinear2 ? std::sqrt(3.0) : 1.0;
  const Design design = problem.combined_design(p);
  const double threshold = test_threshold(kind, problem.dim(), alpha, sigma0);

  std::vector<PowerPoint> out;
  out.reserve(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double lambda1 = grid[gi];
    const AnalyticModel model = family == PowerFamily::Bilinear2
                                    ? bilinear2_model(lambda1)
                                    : bilinear3_model(lambda1);
    const std::uint64_t root = derive_seed(seed, gi);

    std::vector<std::uint8_t> reject(reps, 0);
    parallel_chunks(std::int64_t(reps), int(threads), [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t r = lo; r < hi; ++r) {
        const auto sample = generate_pick_freeze(model.spec, design, int(n),
                                                 derive_seed(root, std::uint64_t(r)), 1);
        const auto g = build_GN(sample, problem);
        reject[std::size_t(r)] = test_statistic(kind, g.gn) > threshold ? 1 : 0;
      }
    });

    std::size_t hits = 0;
    for (std::uint8_t b : reject) hits += b;
    PowerPoint pt;
    pt.parameter = lambda1;
    pt.power = double(hits) / double(reps);
    pt.mc_stderr = std::sqrt(pt.power * (1.0 - pt.power) / double(reps));
    pt.closed_form = (family == PowerFamily::Bilinear2 && kind == StatKind::T1)
                         ? bilinear2_t1_power(lambda1, n, alpha)
                         : std::numeric_limits<double>::quiet_NaN();
    out.push_back(pt);
  }
  return out;
}

}  // namespace pickfreeze
