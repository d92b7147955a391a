#pragma once

#include <cstddef>
#include <vector>

#include "pickfreeze/estimators.hpp"
#include "pickfreeze/sampling.hpp"

namespace pickfreeze {

// dense symmetric matrix, row-major
struct CovMatrix {
  std::size_t dim = 0;
  std::vector<double> entries;

  CovMatrix() = default;
  explicit CovMatrix(std::size_t d) : dim(d), entries(d * d, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return entries[i * dim + j]; }
  double at(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
};

// plug-in asymptotic covariance of sqrt(n) * (estimate_S - S); all moments
// are 1/n empirical moments of the data centered by mean(y)
CovMatrix gamma_S(const PickFreezeSample& sample, const IndexEstimate& s_hat);

// same for estimate_T; the pooled second moment replaces y^2 in the cross
// and variance terms
CovMatrix gamma_T(const PickFreezeSample& sample, const IndexEstimate& t_hat);

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
};

// per-coordinate CLT intervals est_j +- z_{(1+level)/2} * sqrt(gamma_jj / n)
std::vector<ConfidenceInterval> asymptotic_ci(const IndexEstimate& est,
                                              const CovMatrix& gamma,
                                              double level);

}  // namespace pickfreeze
