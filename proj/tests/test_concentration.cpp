#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pickfreeze/concentration.hpp"
#include "pickfreeze/errors.hpp"
#include "pickfreeze/models.hpp"
#include "pickfreeze/sampling.hpp"
#include "pickfreeze/stats.hpp"

using namespace pickfreeze;

namespace {

// independent re-statements of the rate function and the tail factor, kept
// deliberately separate from the library code they cross-check
double h_ref(double x) { return (1.0 + x) * std::log1p(x) - x; }

double term_ref(std::size_t n, double v, double B, double t) {
  return std::exp(-(double(n) * v / (B * B)) * h_ref(B * t / v));
}

QVector hand_q(BoundVariant variant) {
  QVector q;
  q.variant = variant;
  q.V = 1.0;
  q.C = 0.5;
  q.S = 0.5;
  q.V_U_plus = 2.0;
  q.V_U_minus = 1.5;
  q.V_J_plus = 1.2;
  q.V_J_minus = 0.8;
  q.V_K_plus = 1.8;
  q.V_K_minus = 1.1;
  q.b = 2.0;
  return q;
}

}  // namespace

TEST_CASE("rate function values and domain") {
  CHECK(bennett_h(0.0) == 0.0);
  CHECK(bennett_h(1.0) == doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-9));
  CHECK(bennett_h(std::exp(1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(bennett_h(-0.5) ==
        doctest::Approx(0.5 * (1.0 - std::log(2.0))).epsilon(1e-9));
  CHECK(bennett_h(0.1) > 0.0);
  CHECK(bennett_h(-0.9) > 0.0);
  CHECK_THROWS_AS(bennett_h(-1.0), DomainError);
  CHECK_THROWS_AS(bennett_h(-1.5), DomainError);
}

TEST_CASE("covariance-ratio bound terms recomputed by hand") {
  const auto q = hand_q(BoundVariant::S);
  const double y = 0.2;
  const std::size_t n = 1000;

  const double b_u = q.b * q.b * (1.0 + q.S + y);
  const double half = y * q.V / 2.0;
  const double root = std::sqrt(half);
  const double m1 = term_ref(n, q.V_U_plus, b_u, half);
  const double m2 = term_ref(n, q.V, q.b, root);
  const double m3 = term_ref(n, q.V_J_plus, b_u / q.b, root);
  const double m4 = term_ref(n, q.V_U_minus, b_u, half);
  const double m5 = term_ref(n, q.V_J_minus, b_u / q.b, root);

  const auto above = bound_S(q, y, n, BoundSide::Above);
  REQUIRE(above.terms.size() == 3);
  CHECK(above.terms[0].second == doctest::Approx(m1).epsilon(1e-12));
  CHECK(above.terms[1].second == doctest::Approx(m2).epsilon(1e-12));
  CHECK(above.terms[2].second == doctest::Approx(m3).epsilon(1e-12));
  CHECK(above.bound ==
        doctest::Approx(std::min(m1 + 2.0 * m2 + 2.0 * m3, 1.0)).epsilon(1e-12));
  CHECK(above.side == BoundSide::Above);
  CHECK(above.variant == BoundVariant::S);
  CHECK_FALSE(above.b_estimated);

  const auto below = bound_S(q, y, n, BoundSide::Below);
  REQUIRE(below.terms.size() == 3);
  CHECK(below.terms[0].second == doctest::Approx(m4).epsilon(1e-12));
  CHECK(below.terms[1].second == doctest::Approx(m2).epsilon(1e-12));
  CHECK(below.terms[2].second == doctest::Approx(m5).epsilon(1e-12));
  CHECK(below.bound ==
        doctest::Approx(std::min(m4 + 2.0 * m2 + 2.0 * m5, 1.0)).epsilon(1e-12));
}

TEST_CASE("pooled bound terms and the indicator edge") {
  auto q = hand_q(BoundVariant::T);
  const std::size_t n = 1000;

  // S + y < 1: single term on each side
  {
    const double y = 0.2;
    const double b_u = q.b * q.b * (1.0 + q.S + y);
    const double half = y * q.V / 2.0;
    const auto above = bound_T(q, y, n, BoundSide::Above);
    REQUIRE(above.terms.size() == 1);
    CHECK(above.terms[0].second ==
          doctest::Approx(term_ref(n, q.V_K_plus, b_u, half)).epsilon(1e-12));
    const auto below = bound_T(q, y, n, BoundSide::Below);
    REQUIRE(below.terms.size() == 1);
    CHECK(below.terms[0].second ==
          doctest::Approx(term_ref(n, q.V_K_minus, b_u, half)).epsilon(1e-12));
  }

  // S + y > 1: the cross term switches on with its own threshold
  {
    const double y = 0.6;
    const double b_u = q.b * q.b * (1.0 + q.S + y);
    const double half = y * q.V / 2.0;
    const double vc = q.V + q.C;
    auto cross_ref = [&](double denom) {
      const double t = std::sqrt(2.0 * y * q.V / denom);
      return std::exp(-(double(n) * vc / (2.0 * q.b * q.b)) *
                      h_ref(q.b * t / vc));
    };
    const auto above = bound_T(q, y, n, BoundSide::Above);
    REQUIRE(above.terms.size() == 2);
    const double m1 = term_ref(n, q.V_K_plus, b_u, half);
    const double m2 = cross_ref(q.S + y - 1.0);
    CHECK(above.terms[0].second == doctest::Approx(m1).epsilon(1e-12));
    CHECK(above.terms[1].second == doctest::Approx(m2).epsilon(1e-12));
    CHECK(above.bound ==
          doctest::Approx(std::min(m1 + 2.0 * m2, 1.0)).epsilon(1e-12));

    const auto below = bound_T(q, y, n, BoundSide::Below);
    REQUIRE(below.terms.size() == 2);
    CHECK(below.terms[1].second ==
          doctest::Approx(cross_ref(y + 1.0 - q.S)).epsilon(1e-12));
  }

  // exactly on the edge the bound jumps, so the call refuses
  q.S = 0.4;
  CHECK_THROWS_AS(bound_T(q, 0.6, n, BoundSide::Above), BoundaryError);
}

TEST_CASE("bound decreases with n and clamps at one") {
  const auto q = hand_q(BoundVariant::S);
  const double y = 0.2;

  const double b500 = bound_S(q, y, 500, BoundSide::Above).bound;
  const double b1000 = bound_S(q, y, 1000, BoundSide::Above).bound;
  const double b2000 = bound_S(q, y, 2000, BoundSide::Above).bound;
  CHECK(b500 < 1.0);
  CHECK(b1000 < b500);
  CHECK(b2000 < b1000);

  CHECK(bound_S(q, y, 1, BoundSide::Above).bound == 1.0);
  CHECK(bound_S(q, y, 1, BoundSide::Below).bound == 1.0);

  CHECK_THROWS_AS(bound_S(q, 0.0, 1000, BoundSide::Above), ParameterError);
  CHECK_THROWS_AS(bound_S(q, -0.1, 1000, BoundSide::Above), ParameterError);

  const auto qt = hand_q(BoundVariant::T);
  CHECK_THROWS_AS(bound_S(qt, y, 1000, BoundSide::Above), ParameterError);
  CHECK_THROWS_AS(bound_T(q, y, 1000, BoundSide::Above), ParameterError);
}

TEST_CASE("plug-in constants from a sample") {
  const auto model = ishigami_model();
  const Design design({{1}}, 3);
  const auto sample = generate_pick_freeze(model.spec, design, 4000, 31);

  const auto q = estimate_Q(sample, BoundVariant::S, 0.2, model.output_bound);
  CHECK(q.S * q.V == doctest::Approx(q.C).epsilon(1e-12));
  CHECK_FALSE(q.b_estimated);
  CHECK(q.b == model.output_bound);

  // zero deviation collapses the +/- pairs
  const auto q0 = estimate_Q(sample, BoundVariant::S, 0.0, model.output_bound);
  CHECK(q0.V_U_plus == q0.V_U_minus);
  CHECK(q0.V_J_plus == q0.V_J_minus);

  // without an analytic bound the largest centered magnitude is used
  const auto qe = estimate_Q(sample, BoundVariant::S, 0.2);
  CHECK(qe.b_estimated);
  const double y_bar = mean(sample.y);
  double max_abs = 0.0;
  for (double v : sample.y) max_abs = std::max(max_abs, std::abs(v - y_bar));
  for (double v : sample.yu[0]) max_abs = std::max(max_abs, std::abs(v - y_bar));
  CHECK(qe.b == max_abs);
  CHECK(qe.b < model.output_bound);

  CHECK_THROWS_AS(estimate_Q(sample, BoundVariant::S, -0.1), ParameterError);
  CHECK_THROWS_AS(estimate_Q(sample, BoundVariant::S, 0.2, -1.0), ParameterError);

  const Design two(std::vector<std::vector<int>>{{1}, {2}}, 3);
  const auto wide = generate_pick_freeze(model.spec, two, 200, 31);
  CHECK_THROWS_AS(estimate_Q(wide, BoundVariant::S, 0.2), DesignError);
}

TEST_CASE("plug-in second moments match a closed-form table model") {
  // f(x1, x2) = x1 + x1 x2 / 2 on {-1,1}^2 with fair coins: V = 5/4, C = 1,
  // S = 4/5, and the auxiliary second moments follow from E[Y^4] = 41/16,
  // E[Y^3 Y^u] = 7/4, E[Y^2 (Y^u)^2] = 25/16
  DiscreteModel dm;
  dm.support = {{-1.0, 1.0}, {-1.0, 1.0}};
  dm.pmf = {{0.5, 0.5}, {0.5, 0.5}};
  dm.values = {-0.5, -1.5, 0.5, 1.5};
  dm.validate();

  const auto spec = dm.to_model_spec();
  const Design design({{1}}, 2);
  const auto sample = generate_pick_freeze(spec, design, 200000, 2718);
  const double y = 0.1;

  const auto q = estimate_Q(sample, BoundVariant::S, y, 1.5);
  CHECK(q.V == doctest::Approx(1.25).epsilon(0.01));
  CHECK(q.C == doctest::Approx(1.0).epsilon(0.01));
  CHECK(q.S == doctest::Approx(0.8).epsilon(0.01));

  auto v_u = [](double s) {
    return 25.0 / 16.0 - 2.0 * s * 7.0 / 4.0 + s * s * 41.0 / 16.0;
  };
  auto v_j = [](double s) { return (s * s + 1.0) * 1.25 - 2.0 * s; };
  CHECK(q.V_U_plus == doctest::Approx(v_u(0.9)).epsilon(0.03));
  CHECK(q.V_U_minus == doctest::Approx(v_u(0.7)).epsilon(0.03));
  CHECK(q.V_J_plus == doctest::Approx(v_j(0.9)).epsilon(0.03));
  CHECK(q.V_J_minus == doctest::Approx(v_j(0.7)).epsilon(0.03));
  // both J moments sit at the same distance from the variance-ratio minimum
  CHECK(v_j(0.9) == doctest::Approx(v_j(0.7)).epsilon(1e-12));

  const auto qt = estimate_Q(sample, BoundVariant::T, y, 1.5);
  auto v_k = [](double s) {
    return 25.0 / 16.0 - 2.0 * s * 7.0 / 4.0 +
           s * s * (41.0 / 16.0 + 25.0 / 16.0) / 2.0;
  };
  CHECK(qt.V_K_plus == doctest::Approx(v_k(0.9)).epsilon(0.05));
  CHECK(qt.V_K_minus == doctest::Approx(v_k(0.7)).epsilon(0.05));
}

TEST_CASE("sides differ on a skewed model and the pooled bound is tighter") {
  const auto model = ishigami_model();
  const Design design({{1}}, 3);
  const auto sample = generate_pick_freeze(model.spec, design, 12000, 77);
  const double y = 0.5;

  const auto qs = estimate_Q(sample, BoundVariant::S, y, model.output_bound);
  const auto qt = estimate_Q(sample, BoundVariant::T, y, model.output_bound);
  CHECK(qs.V_U_plus != qs.V_U_minus);

  const auto above = bound_S(qs, y, 12000, BoundSide::Above);
  const auto below = bound_S(qs, y, 12000, BoundSide::Below);
  CHECK(above.bound < 1.0);
  CHECK(above.bound != below.bound);

  const auto pooled = bound_T(qt, y, 12000, BoundSide::Above);
  CHECK(pooled.bound <= above.bound + 1e-12);
}

TEST_CASE("sweep layout, determinism, and thread invariance") {
  const auto model = ishigami_model();
  const std::vector<int> u = {1};
  const std::vector<int> n_list = {500, 1000};
  const std::vector<double> y_grid = {0.2, 0.3};

  const auto rows = deviation_curve(model.spec, u, BoundVariant::S, n_list,
                                    y_grid, 4242, model.output_bound);
  REQUIRE(rows.size() == 8);
  for (std::size_t cell = 0; cell < 4; ++cell) {
    const auto& a = rows[2 * cell];
    const auto& b = rows[2 * cell + 1];
    CHECK(a.side == BoundSide::Above);
    CHECK(b.side == BoundSide::Below);
    CHECK(a.n == std::size_t(n_list[cell / 2]));
    CHECK(a.y == y_grid[cell % 2]);
    CHECK(b.n == a.n);
    CHECK(b.y == a.y);
    CHECK_FALSE(a.b_estimated);
    CHECK(a.bound > 0.0);
    CHECK(a.bound <= 1.0);
  }

  const auto again = deviation_curve(model.spec, u, BoundVariant::S, n_list,
                                     y_grid, 4242, model.output_bound);
  const auto threaded = deviation_curve(model.spec, u, BoundVariant::S, n_list,
                                        y_grid, 4242, model.output_bound, 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].bound == again[i].bound);
    CHECK(rows[i].bound == threaded[i].bound);
  }

  CHECK_THROWS_AS(deviation_curve(model.spec, u, BoundVariant::S, {}, y_grid, 1),
                  ParameterError);
  CHECK_THROWS_AS(deviation_curve(model.spec, u, BoundVariant::S, n_list, {}, 1),
                  ParameterError);
  CHECK_THROWS_AS(deviation_curve(model.spec, u, BoundVariant::S, n_list,
                                  {0.0, 0.2}, 1),
                  ParameterError);
}
