#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pickfreeze/asymptotics.hpp"
#include "pickfreeze/design.hpp"
#include "pickfreeze/sampling.hpp"

namespace pickfreeze {

// Joint null hypothesis: every index in u is zero and each index in v equals
// its partner in w. Subsets are 1-based coordinate lists.
struct TestProblem {
  std::vector<std::vector<int>> u;
  std::vector<std::vector<int>> v;
  std::vector<std::vector<int>> w;

  std::size_t dim() const { return u.size() + v.size(); }
  void validate() const;

  // one pick-freeze column per distinct subset across u, v, w; a v/w pair
  // naming the same subset shares a column, which makes its difference
  // coordinate exactly zero
  Design combined_design(int p) const;
};

// stacked statistic sqrt(n) * (S_u, S_v - S_w) with its plug-in covariance
struct GnStatistic {
  std::vector<double> gn;
  CovMatrix gamma;
  std::size_t n = 0;
};

// the sample must have been generated with problem.combined_design
GnStatistic build_GN(const PickFreezeSample& sample, const TestProblem& problem);

enum class StatKind { T1, T2, T3, T4, T5, Linear };

const char* stat_kind_name(StatKind kind);

struct TestResult {
  double statistic = 0.0;
  double threshold = 0.0;
  double alpha = 0.0;
  bool reject = false;
  StatKind kind = StatKind::T1;
};

// (1 - alpha) quantile of |N1| + |N2| for iid standard normals, by adaptive
// quadrature of the density and bisection on the CDF
double quantile_abs_sum(double alpha);

// the scalar each test kind reduces the stacked vector to
double test_statistic(StatKind kind, std::span<const double> gn);

// null threshold when the stacked vector is m iid N(0, sigma0^2) coordinates;
// the T2 quantile is only available for m == 2
double test_threshold(StatKind kind, std::size_t m, double alpha, double sigma0);

// two-coordinate convenience wrapper combining the two calls above
TestResult test_k2(StatKind kind, std::span<const double> gn, double alpha,
                   double sigma0);

// one-sided/linear-form test: statistic (a . gn - shift) / sqrt(a Gamma a^T)
// against the (1 - alpha) normal quantile
TestResult test_linear(std::span<const double> a, const GnStatistic& g,
                       double alpha, double shift = 0.0);

// empirical (1 - alpha) null quantile of a test statistic under N(0, gamma),
// for null covariances with no closed-form quantile
double simulated_threshold(StatKind kind, const CovMatrix& gamma, double alpha,
                           std::size_t draws, std::uint64_t seed);

enum class PowerFamily { Bilinear2, Bilinear3 };

struct PowerPoint {
  double parameter = 0.0;   // lambda1
  double power = 0.0;       // rejection fraction over reps
  double closed_form = 0.0; // NaN when no closed form exists
  double mc_stderr = 0.0;
};

// Monte Carlo rejection rate over a lambda1 grid; thresholds use the known
// null covariance of the family (sigma0 = sqrt(3) for Bilinear2, 1 for
// Bilinear3)
std::vector<PowerPoint> power_curve(PowerFamily family,
                                    const TestProblem& problem, StatKind kind,
                                    double alpha,
                                    const std::vector<double>& grid,
                                    std::size_t n, std::size_t reps,
                                    std::uint64_t seed, unsigned threads = 1);

// exact power of the T1 test on the two-input bilinear family from its
// Gaussian limit
double bilinear2_t1_power(double lambda1, std::size_t n, double alpha);

}  // namespace pickfreeze
