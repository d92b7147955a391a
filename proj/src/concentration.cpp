#include "pickfreeze/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pickfreeze/errors.hpp"
#include "pickfreeze/estimators.hpp"
#include "pickfreeze/parallel.hpp"
#include "pickfreeze/rng.hpp"
#include "pickfreeze/stats.hpp"

namespace pickfreeze {

double bennett_h(double x) {
  if (!(x > -1.0)) throw DomainError("h(x) requires x > -1");
  return (1.0 + x) * std::log1p(x) - x;
}

const char* bound_variant_name(BoundVariant v) {
  return v == BoundVariant::S ? "S" : "T";
}

const char* bound_side_name(BoundSide s) {
  return s == BoundSide::Above ? "above" : "below";
}

namespace {

// Bennett tail factor exp{-(n v / B^2) h(B t / v)} for a sum of n variables
// with second moment v, range bound B, and per-variable threshold t
double bennett_term(std::size_t n, double v, double B, double t) {
  return std::exp(-(double(n) * v / (B * B)) * bennett_h(B * t / v));
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0)) {
    throw ParameterError(std::string(what) + " must be positive");
  }
}

BoundReport finish(BoundReport r, double total) {
  r.bound = std::min(total, 1.0);
  return r;
}

}  // namespace

BoundReport bound_S(const QVector& q, double y, std::size_t n, BoundSide side) {
  if (q.variant != BoundVariant::S) {
    throw ParameterError("Q vector was built for the other estimator variant");
  }
  require_positive(y, "deviation y");
  require_positive(q.V, "V");
  require_positive(q.b, "b");
  require_positive(q.V_U_plus, "V_U+");
  require_positive(q.V_U_minus, "V_U-");
  require_positive(q.V_J_plus, "V_J+");
  require_positive(q.V_J_minus, "V_J-");
  if (n < 1) throw ParameterError("n must be at least 1");

  const double b_u = q.b * q.b * (1.0 + q.S + y);
  require_positive(b_u, "1 + S + y");
  const double half = y * q.V / 2.0;
  const double root = std::sqrt(half);

  BoundReport r;
  r.variant = BoundVariant::S;
  r.side = side;
  r.y = y;
  r.n = n;
  r.b_estimated = q.b_estimated;

  const double m2 = bennett_term(n, q.V, q.b, root);
  if (side == BoundSide::Above) {
    const double m1 = bennett_term(n, q.V_U_plus, b_u, half);
    const double m3 = bennett_term(n, q.V_J_plus, b_u / q.b, root);
    r.terms = {{"M1", m1}, {"M2", m2}, {"M3", m3}};
    return finish(std::move(r), m1 + 2.0 * m2 + 2.0 * m3);
  }
  const double m4 = bennett_term(n, q.V_U_minus, b_u, half);
  const double m5 = bennett_term(n, q.V_J_minus, b_u / q.b, root);
  r.terms = {{"M4", m4}, {"M2", m2}, {"M5", m5}};
  return finish(std::move(r), m4 + 2.0 * m2 + 2.0 * m5);
}

BoundReport bound_T(const QVector& q, double y, std::size_t n, BoundSide side) {
  if (q.variant != BoundVariant::T) {
    throw ParameterError("Q vector was built for the other estimator variant");
  }
  require_positive(y, "deviation y");
  require_positive(q.V, "V");
  require_positive(q.b, "b");
  require_positive(q.V_K_plus, "V_K+");
  require_positive(q.V_K_minus, "V_K-");
  require_positive(q.V + q.C, "V + C");
  if (n < 1) throw ParameterError("n must be at least 1");

  const double b_u = q.b * q.b * (1.0 + q.S + y);
  require_positive(b_u, "1 + S + y");
  const double half = y * q.V / 2.0;
  const double edge = q.S + y - 1.0;
  if (edge == 0.0) {
    throw BoundaryError("bound is discontinuous at S + y = 1; perturb y");
  }

  BoundReport r;
  r.variant = BoundVariant::T;
  r.side = side;
  r.y = y;
  r.n = n;
  r.b_estimated = q.b_estimated;

  // the cross term is only present when the indicator S + y - 1 >= 0 is on
  auto cross = [&](double denom) {
    const double vc = q.V + q.C;
    const double t = std::sqrt(2.0 * y * q.V / denom);
    return std::exp(-(double(n) * vc / (2.0 * q.b * q.b)) *
                    bennett_h(q.b * t / vc));
  };

  if (side == BoundSide::Above) {
    const double m1 = bennett_term(n, q.V_K_plus, b_u, half);
    r.terms = {{"m1", m1}};
    double total = m1;
    if (edge > 0.0) {
      const double m2 = cross(edge);
      r.terms.emplace_back("m2", m2);
      total += 2.0 * m2;
    }
    return finish(std::move(r), total);
  }

  const double m3 = bennett_term(n, q.V_K_minus, b_u, half);
  r.terms = {{"m3", m3}};
  double total = m3;
  if (edge > 0.0) {
    const double denom = y + 1.0 - q.S;
    require_positive(denom, "y + 1 - S");
    const double m4 = cross(denom);
    r.terms.emplace_back("m4", m4);
    total += 2.0 * m4;
  }
  return finish(std::move(r), total);
}

QVector estimate_Q(const PickFreezeSample& sample, BoundVariant variant, double y,
                   std::optional<double> b) {
  if (sample.k() != 1) {
    throw DesignError("deviation bounds cover single-subset designs only");
  }
  if (y < 0.0) throw ParameterError("deviation y must be nonnegative");
  if (b && !(*b > 0.0)) throw ParameterError("output bound b must be positive");

  const std::size_t n = std::size_t(sample.n());
  const auto& yu = sample.yu[0];
  const double y_bar = mean(sample.y);
  const double s_hat = estimate_S(sample).values[0];

  QVector q;
  q.variant = variant;
  q.V = variance(sample.y);
  q.C = covariance(sample.y, yu);
  q.S = s_hat;

  const double s_plus = s_hat + y;
  const double s_minus = s_hat - y;
  double up = 0.0, um = 0.0, jp = 0.0, jm = 0.0, kp = 0.0, km = 0.0;
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double yc = sample.y[i] - y_bar;
    const double yuc = yu[i] - y_bar;
    max_abs = std::max({max_abs, std::abs(yc), std::abs(yuc)});
    const double prod = yc * yuc;
    const double sq = yc * yc;
    if (variant == BoundVariant::S) {
      const double u_plus = prod - s_plus * sq;
      const double u_minus = prod - s_minus * sq;
      const double j_plus = s_plus * yc - yuc;
      const double j_minus = s_minus * yc - yuc;
      up += u_plus * u_plus;
      um += u_minus * u_minus;
      jp += j_plus * j_plus;
      jm += j_minus * j_minus;
    } else {
      const double pooled_sq = (sq + yuc * yuc) / 2.0;
      const double k_plus = prod - s_plus * pooled_sq;
      const double k_minus = prod - s_minus * pooled_sq;
      kp += k_plus * k_plus;
      km += k_minus * k_minus;
    }
  }
  const double inv = 1.0 / double(n);
  q.V_U_plus = up * inv;
  q.V_U_minus = um * inv;
  q.V_J_plus = jp * inv;
  q.V_J_minus = jm * inv;
  q.V_K_plus = kp * inv;
  q.V_K_minus = km * inv;

  q.b_estimated = !b.has_value();
  q.b = b ? *b : max_abs;
  return q;
}

std::vector<BoundReport> deviation_curve(const ModelSpec& model,
                                         const std::vector<int>& u,
                                         BoundVariant variant,
                                         const std::vector<int>& n_list,
                                         const std::vector<double>& y_grid,
                                         std::uint64_t seed,
                                         std::optional<double> b,
                                         unsigned threads) {
  if (n_list.empty() || y_grid.empty()) throw ParameterError("empty sweep grid");
  for (double y : y_grid) require_positive(y, "deviation y");
  const Design design({u}, int(model.inputs.size()));

  const std::size_t cells = n_list.size() * y_grid.size();
  std::vector<BoundReport> rows(2 * cells);
  parallel_for(std::int64_t(cells), int(threads), [&](std::int64_t cell) {
    const std::size_t ni = std::size_t(cell) / y_grid.size();
    const std::size_t yi = std::size_t(cell) % y_grid.size();
    const int n = n_list[ni];
    const double y = y_grid[yi];
    const auto sample =
        generate_pick_freeze(model, design, n, derive_seed(seed, std::uint64_t(cell)), 1);
    const auto q = estimate_Q(sample, variant, y, b);
    auto eval = [&](BoundSide side) {
      return variant == BoundVariant::S ? bound_S(q, y, std::size_t(n), side)
                                        : bound_T(q, y, std::size_t(n), side);
    };
    rows[2 * std::size_t(cell)] = eval(BoundSide::Above);
    rows[2 * std::size_t(cell) + 1] = eval(BoundSide::Below);
  });
  return rows;
}

}  // namespace pickfreeze
