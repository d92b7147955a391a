#include "pickfreeze/berry_esseen.hpp"

#include <algorithm>
#include <cmath>

#include "pickfreeze/errors.hpp"
#include "pickfreeze/parallel.hpp"
#include "pickfreeze/rng.hpp"
#include "pickfreeze/special.hpp"
#include "pickfreeze/stats.hpp"

namespace pickfreeze {

BEMoments be_moments(const PickFreezeSample& sample, double t, MeanMode mean_mode) {
  if (sample.k() != 1) {
    throw DesignError("the normal-approximation bound covers single-subset designs only");
  }
  const std::size_t n = std::size_t(sample.n());
  const auto& yu = sample.yu[0];
  const double shift = mean_mode.known ? mean_mode.mu : mean(sample.y);

  std::vector<double> yc(n), yuc(n), prod(n), sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    yc[i] = sample.y[i] - shift;
    yuc[i] = yu[i] - shift;
    prod[i] = yc[i] * yuc[i];
    sq[i] = yc[i] * yc[i];
  }

  BEMoments m;
  m.n = n;
  m.t_eval = t;
  m.V = mean(sq);
  if (!(m.V > 1e-12 * second_moment(sample.y))) {
    throw DegenerateError("output variance is zero up to rounding");
  }
  m.C = mean(prod);
  m.S = m.C / m.V;

  // w_i = (Y_i Y_i^u - S Y_i^2) / V has empirical mean exactly zero because
  // S is the ratio of the same two means
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = (prod[i] - m.S * sq[i]) / m.V;
  m.sigma2 = variance(w);
  if (!(m.sigma2 > 0.0)) {
    throw DegenerateError("the linearized statistic is constant; bound undefined");
  }

  m.var_y2 = variance(sq);
  m.cov_yyu_y2 = covariance(prod, sq);

  const double sigma = std::sqrt(m.sigma2);
  m.nu = (t * sigma / std::sqrt(double(n)) + 2.0 * m.S) * m.var_y2 -
         2.0 * m.cov_yyu_y2;

  // standardized third absolute moment of Delta_i = Y_i Y_i^u - (S + t
  // sigma/sqrt(n)) Y_i^2; any common scale factor cancels
  const double coeff = m.S + t * sigma / std::sqrt(double(n));
  std::vector<double> delta(n);
  for (std::size_t i = 0; i < n; ++i) delta[i] = prod[i] - coeff * sq[i];
  const double d_mean = mean(delta);
  double m2 = 0.0, m3 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = delta[i] - d_mean;
    m2 += d * d;
    m3 += std::abs(d) * d * d;
  }
  m2 /= double(n);
  m3 /= double(n);
  if (!(m2 > 0.0)) {
    throw DegenerateError("the linearized statistic is constant; bound undefined");
  }
  m.mu3 = m3 / (m2 * std::sqrt(m2));
  return m;
}

double be_bound_B(double t, std::size_t n, const BEMoments& m) {
  if (n < 1) throw ParameterError("n must be at least 1");
  if (!(m.sigma2 > 0.0)) throw ParameterError("moments carry no positive variance");
  const double sqn = std::sqrt(double(n));
  const double sigma = std::sqrt(m.sigma2);
  const double nu_t = (t * sigma / sqn + 2.0 * m.S) * m.var_y2 - 2.0 * m.cov_yyu_y2;
  const double radicand = 1.0 + t * nu_t / (sigma * sqn * m.V * m.V);
  if (!(radicand > 0.0)) {
    throw DomainError("bound unavailable at this t");
  }
  const double rate = kBerryEsseenKappa * m.mu3 / sqn;
  return rate + std::abs(normal_cdf(t) - normal_cdf(t / std::sqrt(radicand)));
}

CoverageBracket coverage_bracket(double y, std::size_t n, const BEMoments& m) {
  if (!(y > 0.0)) throw ParameterError("halfwidth y must be positive");
  const double z = std::sqrt(double(n)) * y / std::sqrt(m.sigma2);
  const double base = normal_cdf(z) - normal_cdf(-z);
  const double correction = be_bound_B(z, n, m) + be_bound_B(-z, n, m);
  CoverageBracket out;
  out.lower = std::max(base - correction, 0.0);
  out.upper = std::min(base + correction, 1.0);
  return out;
}

std::vector<CoveragePoint> coverage_curve(const ModelSpec& model,
                                          const std::vector<int>& u,
                                          const std::vector<int>& n_list,
                                          std::size_t reps, double level,
                                          std::optional<double> true_index,
                                          std::uint64_t seed, MeanMode mean_mode,
                                          unsigned threads) {
  if (n_list.empty()) throw ParameterError("empty n list");
  if (reps < 1) throw ParameterError("reps must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("level must lie in (0,1)");
  const Design design({u}, int(model.inputs.size()));
  const double z0 = normal_quantile(0.5 * (1.0 + level));

  double reference;
  if (true_index) {
    reference = *true_index;
  } else {
    const auto big =
        generate_pick_freeze(model, design, 10'000'000, derive_seed(seed, 0), 1);
    reference = estimate_tilde_S(big, mean_mode).values[0];
  }

  std::vector<CoveragePoint> out;
  out.reserve(n_list.size());
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const int n = n_list[ni];
    const std::uint64_t root = derive_seed(seed, ni + 1);

    const auto moment_sample =
        generate_pick_freeze(model, design, n, derive_seed(root, 0), int(threads));
    const auto m = be_moments(moment_sample, z0, mean_mode);
    const double y_half = z0 * std::sqrt(m.sigma2) / std::sqrt(double(n));
    const auto bracket = coverage_bracket(y_half, std::size_t(n), m);

    std::vector<std::uint8_t> hit(reps, 0);
    parallel_chunks(std::int64_t(reps), int(threads), [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t r = lo; r < hi; ++r) {
        const auto rep = generate_pick_freeze(model, design, n,
                                              derive_seed(root, std::uint64_t(r) + 1), 1);
        const double est = estimate_tilde_S(rep, mean_mode).values[0];
        hit[std::size_t(r)] = std::abs(est - reference) <= y_half ? 1 : 0;
      }
    });
    std::size_t covered = 0;
    for (std::uint8_t h : hit) covered += h;

    CoveragePoint pt;
    pt.n = std::size_t(n);
    pt.lower = bracket.lower;
    pt.upper = bracket.upper;
    pt.coverage = double(covered) / double(reps);
    pt.mu3 = m.mu3;
    pt.sigma2 = m.sigma2;
    out.push_back(pt);
  }
  return out;
}

}  // namespace pickfreeze
