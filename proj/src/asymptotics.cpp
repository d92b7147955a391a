#include "pickfreeze/asymptotics.hpp"

#include <cmath>

#include "pickfreeze/errors.hpp"
#include "pickfreeze/special.hpp"
#include "pickfreeze/stats.hpp"

namespace pickfreeze {

namespace {

// Writing each coordinate's influence row as w_j = yc*yujc - hat_j * q
// (q = yc^2 or the pooled square) turns the four-term covariance formula
// into a plain covariance matrix of the w columns: symmetry and nonnegative
// diagonal then hold by construction, and a column with hat_j == 1 and
// yujc == yc gives exactly zero.
CovMatrix gamma_from_rows(const PickFreezeSample& sample,
                          const IndexEstimate& hat,
                          const std::vector<std::vector<double>>& w) {
  const double v = variance(sample.y);
  if (!(v > 1e-12 * second_moment(sample.y))) {
    throw DegenerateError("output variance is zero up to rounding");
  }
  const double v2 = v * v;
  const std::size_t k = hat.values.size();
  CovMatrix out(k);
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t j = l; j < k; ++j) {
      const double c = covariance(w[l], w[j]) / v2;
      out.at(l, j) = c;
      out.at(j, l) = c;
    }
  }
  return out;
}

}  // namespace

CovMatrix gamma_S(const PickFreezeSample& sample, const IndexEstimate& s_hat) {
  const std::size_t n = sample.n();
  const std::size_t k = sample.k();
  if (s_hat.values.size() != k) {
    throw DesignError("estimate does not match the sample's design");
  }
  const double y_bar = mean(sample.y);

  std::vector<std::vector<double>> w(k, std::vector<double>(n));
  for (std::size_t j = 0; j < k; ++j) {
    const double s = s_hat.values[j];
    const auto& yu = sample.yu[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double yc = sample.y[i] - y_bar;
      const double yuc = yu[i] - y_bar;
      w[j][i] = yc * yuc - s * yc * yc;
    }
  }
  return gamma_from_rows(sample, s_hat, w);
}

CovMatrix gamma_T(const PickFreezeSample& sample, const IndexEstimate& t_hat) {
  const std::size_t n = sample.n();
  const std::size_t k = sample.k();
  if (t_hat.values.size() != k) {
    throw DesignError("estimate does not match the sample's design");
  }
  const double y_bar = mean(sample.y);

  // pooled square of the centered columns
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double yc = sample.y[i] - y_bar;
    double mi = yc * yc;
    for (std::size_t j = 0; j < k; ++j) {
      const double yuc = sample.yu[j][i] - y_bar;
      mi += yuc * yuc;
    }
    m[i] = mi / double(k + 1);
  }

  std::vector<std::vector<double>> w(k, std::vector<double>(n));
  for (std::size_t j = 0; j < k; ++j) {
    const double t = t_hat.values[j];
    const auto& yu = sample.yu[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double yc = sample.y[i] - y_bar;
      const double yuc = yu[i] - y_bar;
      w[j][i] = yc * yuc - t * m[i];
    }
  }
  return gamma_from_rows(sample, t_hat, w);
}

std::vector<ConfidenceInterval> asymptotic_ci(const IndexEstimate& est,
                                              const CovMatrix& gamma,
                                              double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ParameterError("confidence level must lie in (0,1)");
  }
  if (gamma.dim != est.values.size()) {
    throw DesignError("covariance dimension does not match the estimate");
  }
  if (est.n == 0) throw ParameterError("estimate carries no sample size");

  const double z = normal_quantile(0.5 * (1.0 + level));
  std::vector<ConfidenceInterval> out;
  out.reserve(est.values.size());
  for (std::size_t j = 0; j < est.values.size(); ++j) {
    const double g = gamma.at(j, j);
    if (g < 0.0) throw NumericalError("negative variance estimate");
    const double half = z * std::sqrt(g / double(est.n));
    out.push_back({est.values[j] - half, est.values[j] + half});
  }
  return out;
}

}  // namespace pickfreeze
