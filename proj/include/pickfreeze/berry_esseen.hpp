#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pickfreeze/estimators.hpp"
#include "pickfreeze/model.hpp"
#include "pickfreeze/sampling.hpp"

namespace pickfreeze {

// best known constant for the Berry-Esseen rate term
inline constexpr double kBerryEsseenKappa = 0.42;

// Plug-in moments for the finite-sample normal-approximation bound of the
// centered single-subset estimator. Everything needed to re-evaluate the
// bound at other t is kept; mu3 retains its weak t-dependence from t_eval.
struct BEMoments {
  double sigma2 = 0.0;       // Var((Y Y^u - S Y^2) / V)
  double mu3 = 0.0;          // standardized third absolute moment of Delta
  double nu = 0.0;           // (t sigma/sqrt(n) + 2S) Var(Y^2) - 2 Cov(YY^u, Y^2)
  double V = 0.0;            // second moment of the centered output
  double C = 0.0;            // cross moment of the centered columns
  double S = 0.0;            // index estimate on the centered data
  double var_y2 = 0.0;       // Var(Y^2)
  double cov_yyu_y2 = 0.0;   // Cov(Y Y^u, Y^2)
  double t_eval = 0.0;       // t at which mu3 and nu were evaluated
  std::size_t n = 0;
};

// single-subset sample, centered by the known mean or by mean(y)
BEMoments be_moments(const PickFreezeSample& sample, double t,
                     MeanMode mean_mode = MeanMode::known_mean(0.0));

// B(t) = kappa mu3 / sqrt(n) + |Phi(t) - Phi(t / sqrt(1 + t nu / (sigma sqrt(n) V^2)))|
// with nu recomputed at this t from the stored moments
double be_bound_B(double t, std::size_t n, const BEMoments& m);

struct CoverageBracket {
  double lower = 0.0;  // clamped at 0
  double upper = 1.0;  // clamped at 1
};

// bracket for P(|estimate - S| <= y): [Phi(z) - Phi(-z)] -+ [B(z) + B(-z)]
// with z = sqrt(n) y / sigma
CoverageBracket coverage_bracket(double y, std::size_t n, const BEMoments& m);

struct CoveragePoint {
  std::size_t n = 0;
  double lower = 0.0;
  double upper = 1.0;
  double coverage = 0.0;  // fraction of replicate intervals containing the reference
  double mu3 = 0.0;
  double sigma2 = 0.0;
};

// Per n: estimate moments once, set the interval halfwidth to
// z * sigma_hat / sqrt(n) for the requested level, bracket the coverage, and
// measure it over `reps` replicate estimates against `true_index` (estimated
// by one large pick-freeze run when not supplied).
std::vector<CoveragePoint> coverage_curve(const ModelSpec& model,
                                          const std::vector<int>& u,
                                          const std::vector<int>& n_list,
                                          std::size_t reps, double level,
                                          std::optional<double> true_index,
                                          std::uint64_t seed,
                                          MeanMode mean_mode = MeanMode::known_mean(0.0),
                                          unsigned threads = 1);

}  // namespace pickfreeze
