#include "pickfreeze/estimators.hpp"

#include <cmath>

#include "pickfreeze/errors.hpp"
#include "pickfreeze/stats.hpp"

namespace pickfreeze {

const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::S: return "S";
    case Estimator::T: return "T";
    case Estimator::FullInfo: return "full";
    case Estimator::TildeS: return "tilde";
  }
  return "?";
}

namespace {

// a denominator this close to zero relative to the output's second moment
// means the model output is constant up to rounding; the written form also
// rejects the all-zero 0/0 case
void require_nondegenerate(double denom, double scale) {
  if (!(denom > 1e-12 * scale)) {
    throw DegenerateError("output variance is zero up to rounding; indices undefined");
  }
}

// mean of (col_i - center)^2 with a fixed summation order
double centered_second_moment(const std::vector<double>& col, double center) {
  double acc = 0.0;
  for (double v : col) acc += (v - center) * (v - center);
  return acc / double(col.size());
}

}  // namespace

PooledStats pooled_stats(const PickFreezeSample& sample) {
  const std::size_t n = sample.n();
  const std::size_t k = sample.k();
  PooledStats out;
  out.z.resize(n);
  out.m.resize(n);
  const double inv = 1.0 / double(k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double zi = sample.y[i];
    double mi = sample.y[i] * sample.y[i];
    for (std::size_t j = 0; j < k; ++j) {
      const double v = sample.yu[j][i];
      zi += v;
      mi += v * v;
    }
    out.z[i] = zi * inv;
    out.m[i] = mi * inv;
  }
  return out;
}

IndexEstimate estimate_S(const PickFreezeSample& sample) {
  const double denom = variance(sample.y);
  require_nondegenerate(denom, second_moment(sample.y));

  IndexEstimate est;
  est.estimator = Estimator::S;
  est.n = sample.n();
  est.design = sample.design;
  est.values.reserve(sample.k());
  for (std::size_t j = 0; j < sample.k(); ++j) {
    est.values.push_back(covariance(sample.y, sample.yu[j]) / denom);
  }
  return est;
}

IndexEstimate estimate_T(const PickFreezeSample& sample) {
  const std::size_t n = sample.n();
  const std::size_t k = sample.k();
  const auto pooled = pooled_stats(sample);
  const double z_bar = mean(pooled.z);
  const double m_bar = mean(pooled.m);

  // pooled variance, written as the average of per-column centered second
  // moments so that a column identical to y reproduces the numerator exactly
  double denom = centered_second_moment(sample.y, z_bar);
  for (std::size_t j = 0; j < k; ++j) {
    denom += centered_second_moment(sample.yu[j], z_bar);
  }
  denom /= double(k + 1);
  require_nondegenerate(denom, m_bar);

  IndexEstimate est;
  est.estimator = Estimator::T;
  est.n = n;
  est.design = sample.design;
  est.values.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& yu = sample.yu[j];
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d += (sample.y[i] + yu[i]) / 2.0;
    d /= double(n);
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num += (sample.y[i] - d) * (yu[i] - d);
    num /= double(n);
    est.values.push_back(num / denom);
  }
  return est;
}

IndexEstimate estimate_full_info(const PickFreezeSample& sample) {
  const std::size_t n = sample.n();
  const std::size_t k = sample.k();
  const auto pooled = pooled_stats(sample);
  const double z_bar = mean(pooled.z);
  const double m_bar = mean(pooled.m);

  double denom = centered_second_moment(sample.y, z_bar);
  for (std::size_t j = 0; j < k; ++j) {
    denom += centered_second_moment(sample.yu[j], z_bar);
  }
  denom /= double(k + 1);
  require_nondegenerate(denom, m_bar);

  const double y_bar = mean(sample.y);

  IndexEstimate est;
  est.estimator = Estimator::FullInfo;
  est.n = n;
  est.design = sample.design;
  est.values.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& yu = sample.yu[j];
    double central = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      central += (sample.y[i] - z_bar) * (yu[i] - z_bar);
    }
    central /= double(n);
    // mean(y*yu) - z_bar^2, assembled from the centered cross moment for
    // accuracy; the correction vanishes exactly when yu is the y column
    const double num = central + z_bar * (y_bar + mean(yu) - 2.0 * z_bar);
    est.values.push_back(num / denom);
  }
  return est;
}

IndexEstimate estimate_tilde_S(const PickFreezeSample& sample, MeanMode mean_mode) {
  if (sample.k() != 1) {
    throw DesignError("centered estimator requires a single design subset");
  }
  const std::size_t n = sample.n();
  const double shift = mean_mode.known ? mean_mode.mu : mean(sample.y);

  const auto& yu = sample.yu[0];
  double num = 0.0;
  double denom = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double yc = sample.y[i] - shift;
    const double yuc = yu[i] - shift;
    num += yc * yuc;
    denom += yc * yc;
  }
  num /= double(n);
  denom /= double(n);
  require_nondegenerate(denom, second_moment(sample.y));

  IndexEstimate est;
  est.estimator = Estimator::TildeS;
  est.n = n;
  est.design = sample.design;
  est.values = {num / denom};
  return est;
}

}  // namespace pickfreeze
