#pragma once

#include <vector>

#include "pickfreeze/sampling.hpp"

namespace pickfreeze {

enum class Estimator { S, T, FullInfo, TildeS };

const char* estimator_name(Estimator e);

// one estimate per design subset (TildeS always has a single value)
struct IndexEstimate {
  std::vector<double> values;
  Estimator estimator = Estimator::S;
  std::size_t n = 0;
  Design design;
};

// pooled rows Z_i = (y_i + sum_j y_i^{u_j})/(k+1) and the same for squares
struct PooledStats {
  std::vector<double> z;
  std::vector<double> m;
};

PooledStats pooled_stats(const PickFreezeSample& sample);

// whether the centered estimator shifts by a known mean or by mean(y)
struct MeanMode {
  bool known = false;
  double mu = 0.0;
  static MeanMode estimated() { return {false, 0.0}; }
  static MeanMode known_mean(double mu) { return {true, mu}; }
};

// covariance-ratio estimator: cov(y, y_uj) / var(y) per subset
IndexEstimate estimate_S(const PickFreezeSample& sample);

// pooled-moment estimator; all coordinates share the pooled variance denominator
IndexEstimate estimate_T(const PickFreezeSample& sample);

// like T but the numerator also centers with the pooled mean
IndexEstimate estimate_full_info(const PickFreezeSample& sample);

// centered-output estimator, single subset only: mean(y y_u) / mean(y^2)
// after shifting both columns by mu (known) or by mean(y) (estimated)
IndexEstimate estimate_tilde_S(const PickFreezeSample& sample,
                               MeanMode mean_mode = MeanMode::estimated());

}  // namespace pickfreeze
