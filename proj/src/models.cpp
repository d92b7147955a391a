#include "pickfreeze/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "pickfreeze/errors.hpp"

namespace pickfreeze {

AnalyticModel ishigami_model(bool centered) {
  const double pi = std::numbers::pi;
  const double pi4 = pi * pi * pi * pi;
  const double pi8 = pi4 * pi4;

  // variance decomposition of sin x1 + 7 sin^2 x2 + 0.1 x3^4 sin x1:
  //   V1 = (1 + 0.1 pi^4/5)^2 / 2,  V2 = 49/8,  V13 = 0.01 pi^8 (1/9 - 1/25) / 2
  const double v1 = 0.5 * (1.0 + 0.1 * pi4 / 5.0) * (1.0 + 0.1 * pi4 / 5.0);
  const double v2 = 49.0 / 8.0;
  const double v13 = 0.01 * pi8 * (1.0 / 9.0 - 1.0 / 25.0) / 2.0;
  const double total = v1 + v2 + v13;

  const double mean = 7.0 / 2.0;
  // |sin x1|(1 + 0.1 x3^4) <= 1 + 0.1 pi^4 and 7 sin^2 x2 <= 7
  const double bound_raw = 8.0 + 0.1 * pi4;

  AnalyticModel m;
  m.name = centered ? "ishigami_centered" : "ishigami";
  m.spec.inputs = {InputDistribution::uniform(-pi, pi),
                   InputDistribution::uniform(-pi, pi),
                   InputDistribution::uniform(-pi, pi)};
  const double shift = centered ? mean : 0.0;
  m.spec.f = [shift](std::span<const double> x) {
    const double s1 = std::sin(x[0]);
    const double s2 = std::sin(x[1]);
    return s1 + 7.0 * s2 * s2 + 0.1 * x[2] * x[2] * x[2] * x[2] * s1 - shift;
  };
  m.known_first_order = {v1 / total, v2 / total, 0.0};
  m.known_mean = centered ? 0.0 : mean;
  m.known_variance = total;
  // the raw output lies in [-(1 + 0.1 pi^4), 8 + 0.1 pi^4]; shifting by the
  // mean 3.5 leaves the upper edge as the larger absolute value
  m.output_bound = centered ? bound_raw - mean : bound_raw;
  return m;
}

namespace {

double check_lambda1(double lambda1) {
  const double l2sq = 1.0 - 2.0 * lambda1 * lambda1;
  if (l2sq < -1e-12) {
    throw ParameterError("lambda1^2 must be at most 1/2 to keep unit variance");
  }
  return std::sqrt(std::max(l2sq, 0.0));
}

}  // namespace

AnalyticModel bilinear2_model(double lambda1) {
  const double lambda2 = check_lambda1(lambda1);

  AnalyticModel m;
  m.name = "bilinear2";
  m.spec.inputs = {InputDistribution::standard_normal(),
                   InputDistribution::standard_normal()};
  m.spec.f = [lambda1, lambda2](std::span<const double> x) {
    return lambda1 * x[0] + lambda1 * x[1] + lambda2 * x[0] * x[1];
  };
  m.known_first_order = {lambda1 * lambda1, lambda1 * lambda1};
  m.known_mean = 0.0;
  m.known_variance = 1.0;
  m.output_bound = 0.0;  // unbounded
  return m;
}

// Both entries follow from the delta method: with a = l1^2 the limit
// covariance of sqrt(N)(S_N - S) is Cov(W_u, W_v) / Var(Y)^2 for
// W_u = Y Y^u - S_u Y^2, and Gaussian moment expansion gives
// Var(Y Y^u) = 3 - 7a^2, Cov(Y Y^u, Y^2) = 8a - 12a^2,
// Var(Y^2) = 8 - 24a^2, and Cov(Y Y^u, Y Y^v) = a^2 for u != v.
double bilinear2_gamma_diag(double lambda1) {
  check_lambda1(lambda1);
  const double a = lambda1 * lambda1;
  const double a2 = a * a;
  const double a3 = a2 * a;
  const double a4 = a2 * a2;
  return 3.0 - 15.0 * a2 + 24.0 * a3 - 24.0 * a4;
}

double bilinear2_gamma_offdiag(double lambda1) {
  check_lambda1(lambda1);
  const double a = lambda1 * lambda1;
  const double a2 = a * a;
  const double a3 = a2 * a;
  const double a4 = a2 * a2;
  return -7.0 * a2 + 24.0 * a3 - 24.0 * a4;
}

AnalyticModel bilinear3_model(double lambda1) {
  const double lambda2 = check_lambda1(lambda1);

  AnalyticModel m;
  m.name = "bilinear3";
  m.spec.inputs = {InputDistribution::standard_normal(),
                   InputDistribution::standard_normal(),
                   InputDistribution::standard_normal()};
  m.spec.f = [lambda1, lambda2](std::span<const double> x) {
    return lambda1 * (x[1] + x[2]) + lambda2 * x[0] * x[1];
  };
  m.known_first_order = {0.0, lambda1 * lambda1, lambda1 * lambda1};
  m.known_mean = 0.0;
  m.known_variance = 1.0;
  m.output_bound = 0.0;
  return m;
}

AnalyticModel fuel_burn_model(const FuelBurnConstants& constants) {
  AnalyticModel m;
  m.name = "fuel_burn";
  m.spec.inputs = {InputDistribution::uniform(226.0, 234.0),
                   InputDistribution::beta_on(7.0, 2.0, 18.7, 19.05),
                   InputDistribution::shifted_exponential(17.23, 3.45)};
  const double mass = constants.m_empty + constants.m_payload;
  const double g_range = constants.g * constants.range_km;
  m.spec.f = [mass, g_range](std::span<const double> x) {
    const double v = x[0];    // cruise speed, m/s
    const double f = x[1];    // lift-to-drag ratio
    const double sfc = x[2];  // specific fuel consumption, g/(kN s)
    return mass * std::expm1(sfc * g_range / (v * f) * 1e-3);
  };
  // no closed-form indices; left empty on purpose
  m.known_mean = 0.0;
  m.known_variance = 0.0;
  m.output_bound = 0.0;
  return m;
}

std::size_t DiscreteModel::grid_size() const {
  std::size_t n = 1;
  for (const auto& s : support) n *= s.size();
  return n;
}

void DiscreteModel::validate() const {
  if (support.empty()) throw ParameterError("discrete model needs at least one input");
  if (pmf.size() != support.size()) {
    throw ParameterError("discrete model: support and pmf describe different numbers of inputs");
  }
  for (std::size_t c = 0; c < support.size(); ++c) {
    if (support[c].empty()) throw ParameterError("discrete model: empty support");
    if (pmf[c].size() != support[c].size()) {
      throw ParameterError("discrete model: pmf length does not match support length");
    }
    double total = 0.0;
    for (double w : pmf[c]) {
      if (!(w > 0.0)) throw ParameterError("discrete model: pmf entries must be positive");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw ParameterError("discrete model: pmf must sum to 1");
    }
  }
  if (values.size() != grid_size()) {
    throw ParameterError("discrete model: value table does not cover the product grid");
  }
}

namespace {

// strides for row-major indexing with the last input varying fastest
std::vector<std::size_t> grid_strides(const DiscreteModel& m) {
  const int p = m.p();
  std::vector<std::size_t> stride(std::size_t(p), 1);
  for (int c = p - 2; c >= 0; --c) {
    stride[std::size_t(c)] = stride[std::size_t(c) + 1] * m.support[std::size_t(c) + 1].size();
  }
  return stride;
}

}  // namespace

ModelSpec DiscreteModel::to_model_spec() const {
  validate();
  const int np = p();

  // cumulative pmf per input, for inverse-CDF lookup
  std::vector<std::vector<double>> cdf(static_cast<std::size_t>(np));
  for (int c = 0; c < np; ++c) {
    const auto& w = pmf[std::size_t(c)];
    auto& cc = cdf[std::size_t(c)];
    cc.resize(w.size());
    std::partial_sum(w.begin(), w.end(), cc.begin());
    cc.back() = 1.0;  // guard against rounding in the running sum
  }
  auto stride = grid_strides(*this);
  auto table = values;

  ModelSpec spec;
  spec.inputs.assign(std::size_t(np), InputDistribution::uniform(0.0, 1.0));
  spec.f = [cdf = std::move(cdf), stride = std::move(stride),
            table = std::move(table)](std::span<const double> x) {
    std::size_t flat = 0;
    for (std::size_t c = 0; c < cdf.size(); ++c) {
      const auto& cc = cdf[c];
      const auto it = std::lower_bound(cc.begin(), cc.end(), x[c]);
      const std::size_t level = std::min(std::size_t(it - cc.begin()), cc.size() - 1);
      flat += level * stride[c];
    }
    return table[flat];
  };
  return spec;
}

DiscreteOracle discrete_oracle(const DiscreteModel& model, const std::vector<int>& u) {
  model.validate();
  const int p = model.p();
  if (u.empty()) throw ParameterError("oracle subset must be non-empty");
  std::vector<char> in_u(std::size_t(p), 0);
  for (int coord : u) {
    if (coord < 1 || coord > p) throw ParameterError("oracle subset coordinate out of range");
    in_u[std::size_t(coord - 1)] = 1;
  }

  const auto stride = grid_strides(model);
  const std::size_t total = model.grid_size();

  // probability of a full grid point and enumeration helpers
  auto point_prob = [&](std::size_t flat) {
    double prob = 1.0;
    for (int c = 0; c < p; ++c) {
      const std::size_t level = (flat / stride[std::size_t(c)]) % model.support[std::size_t(c)].size();
      prob *= model.pmf[std::size_t(c)][level];
    }
    return prob;
  };

  DiscreteOracle out;
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    const double pr = point_prob(flat);
    const double y = model.values[flat];
    mean += pr * y;
    second += pr * y * y;
  }
  out.mean = mean;
  out.variance = second - mean * mean;

  // split the grid into the u-part and its complement
  std::vector<int> u_coords;
  std::vector<int> rest_coords;
  for (int c = 0; c < p; ++c) {
    (in_u[std::size_t(c)] ? u_coords : rest_coords).push_back(c);
  }
  std::size_t u_cells = 1;
  for (int c : u_coords) u_cells *= model.support[std::size_t(c)].size();
  std::size_t rest_cells = 1;
  for (int c : rest_coords) rest_cells *= model.support[std::size_t(c)].size();

  auto unrank = [&](std::size_t idx, const std::vector<int>& coords,
                    std::vector<std::size_t>& levels) {
    for (auto it = coords.rbegin(); it != coords.rend(); ++it) {
      const std::size_t size = model.support[std::size_t(*it)].size();
      levels[std::size_t(*it)] = idx % size;
      idx /= size;
    }
  };
  auto flatten = [&](const std::vector<std::size_t>& levels) {
    std::size_t flat = 0;
    for (int c = 0; c < p; ++c) flat += levels[std::size_t(c)] * stride[std::size_t(c)];
    return flat;
  };
  auto cell_prob = [&](const std::vector<std::size_t>& levels, const std::vector<int>& coords) {
    double pr = 1.0;
    for (int c : coords) pr *= model.pmf[std::size_t(c)][levels[std::size_t(c)]];
    return pr;
  };

  // Var(E[Y | X_u]) by direct conditional means over the u-cells
  std::vector<std::size_t> levels(std::size_t(p), 0);
  double var_cond = 0.0;
  for (std::size_t a = 0; a < u_cells; ++a) {
    unrank(a, u_coords, levels);
    const double pa = cell_prob(levels, u_coords);
    double cond_mean = 0.0;
    for (std::size_t r = 0; r < rest_cells; ++r) {
      unrank(r, rest_coords, levels);
      cond_mean += cell_prob(levels, rest_coords) * model.values[flatten(levels)];
    }
    var_cond += pa * (cond_mean - mean) * (cond_mean - mean);
  }
  out.var_conditional_mean = var_cond;

  // Cov(Y, Y^u) by enumerating (x_u, x_rest, x_rest')
  double cross = 0.0;
  std::vector<std::size_t> levels2(std::size_t(p), 0);
  for (std::size_t a = 0; a < u_cells; ++a) {
    unrank(a, u_coords, levels);
    unrank(a, u_coords, levels2);
    const double pa = cell_prob(levels, u_coords);
    for (std::size_t r = 0; r < rest_cells; ++r) {
      unrank(r, rest_coords, levels);
      const double pr = cell_prob(levels, rest_coords);
      const double y = model.values[flatten(levels)];
      for (std::size_t r2 = 0; r2 < rest_cells; ++r2) {
        unrank(r2, rest_coords, levels2);
        const double pr2 = cell_prob(levels2, rest_coords);
        cross += pa * pr * pr2 * y * model.values[flatten(levels2)];
      }
    }
  }
  out.cov_pick_freeze = cross - mean * mean;

  if (!(out.variance > 1e-12 * second)) {
    throw DegenerateError("discrete model output is constant; index undefined");
  }
  out.index = out.var_conditional_mean / out.variance;
  return out;
}

}  // namespace pickfreeze
