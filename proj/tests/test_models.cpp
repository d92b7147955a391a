#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pickfreeze/estimators.hpp"
#include "pickfreeze/models.hpp"
#include "pickfreeze/sampling.hpp"
#include "pickfreeze/stats.hpp"

using namespace pickfreeze;

namespace {

// two binary inputs, f enumerated with the second index fastest
DiscreteModel hand_model() {
  DiscreteModel m;
  m.support = {{0.0, 1.0}, {0.0, 1.0}};
  m.pmf = {{0.3, 0.7}, {0.5, 0.5}};
  m.values = {1.0, 2.0, 5.0, 3.0};
  return m;
}

}  // namespace

TEST_CASE("ishigami closed-form moments and indices") {
  const auto m = ishigami_model();
  CHECK(m.known_mean == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(m.known_variance == doctest::Approx(13.844587940719252).epsilon(1e-12));
  REQUIRE(m.known_first_order.size() == 3);
  CHECK(m.known_first_order[0] == doctest::Approx(0.31390519114781146).epsilon(1e-12));
  CHECK(m.known_first_order[1] == doctest::Approx(0.44241114479004096).epsilon(1e-12));
  CHECK(m.known_first_order[2] == 0.0);
  CHECK(m.output_bound == doctest::Approx(17.74090910340024).epsilon(1e-12));

  // spot check the function itself at x = (pi/2, 0, 1)
  const double x[] = {std::acos(-1.0) / 2.0, 0.0, 1.0};
  CHECK(m.spec.f(x) == doctest::Approx(1.0 + 0.1).epsilon(1e-12));
}

TEST_CASE("ishigami sample moments match the closed forms") {
  const auto m = ishigami_model();
  const Design design({{1}}, 3);
  const auto s = generate_pick_freeze(m.spec, design, 200000, 31);
  CHECK(std::abs(mean(s.y) - 3.5) < 4.0 * std::sqrt(13.8446 / 200000.0));
  CHECK(std::abs(variance(s.y) - 13.844587940719252) < 0.25);
  double sup = 0.0;
  for (double v : s.y) sup = std::max(sup, std::abs(v));
  CHECK(sup <= m.output_bound);
}

TEST_CASE("centered ishigami shifts the mean to zero") {
  const auto c = ishigami_model(true);
  CHECK(c.known_mean == 0.0);
  CHECK(c.output_bound == doctest::Approx(14.240909103400242).epsilon(1e-12));
  CHECK(c.known_first_order[0] == doctest::Approx(0.31390519114781146).epsilon(1e-12));
  const auto u = ishigami_model(false);
  const double x[] = {1.0, -2.0, 3.0};
  CHECK(c.spec.f(x) == doctest::Approx(u.spec.f(x) - 3.5).epsilon(1e-14));
  const Design design({{2}}, 3);
  const auto s = generate_pick_freeze(c.spec, design, 100000, 32);
  CHECK(std::abs(mean(s.y)) < 4.0 * std::sqrt(13.8446 / 100000.0));
}

TEST_CASE("two-input bilinear family has unit variance and equal indices") {
  const double lambda1 = std::sqrt(0.3);
  const auto m = bilinear2_model(lambda1);
  REQUIRE(m.known_first_order.size() == 2);
  CHECK(m.known_first_order[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(m.known_first_order[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(m.known_variance == doctest::Approx(1.0).epsilon(1e-12));

  const Design design({{1}}, 2);
  const auto s = generate_pick_freeze(m.spec, design, 200000, 33);
  CHECK(std::abs(variance(s.y) - 1.0) < 0.03);
  CHECK(std::abs(mean(s.y)) < 4.0 / std::sqrt(200000.0));

  // the boundary parameter is accepted, beyond it is not
  CHECK_NOTHROW(bilinear2_model(std::sqrt(0.5)));
  CHECK_THROWS_AS(bilinear2_model(0.75), ParameterError);
}

TEST_CASE("bilinear2 limit covariance entries") {
  CHECK(bilinear2_gamma_diag(0.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(bilinear2_gamma_offdiag(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  const double l1 = std::sqrt(0.1);
  CHECK(bilinear2_gamma_diag(l1) == doctest::Approx(2.8716).epsilon(1e-10));
  CHECK(bilinear2_gamma_offdiag(l1) == doctest::Approx(-0.0484).epsilon(1e-10));
  const double l3 = std::sqrt(0.3);
  CHECK(bilinear2_gamma_diag(l3) == doctest::Approx(2.1036).epsilon(1e-10));
  CHECK(bilinear2_gamma_offdiag(l3) == doctest::Approx(-0.1764).epsilon(1e-10));
  const double l5 = std::sqrt(0.5);
  CHECK(bilinear2_gamma_diag(l5) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(bilinear2_gamma_offdiag(l5) == doctest::Approx(-0.25).epsilon(1e-10));
}

TEST_CASE("three-input bilinear family index structure") {
  const double lambda1 = 0.5;
  const auto m = bilinear3_model(lambda1);
  REQUIRE(m.known_first_order.size() == 3);
  CHECK(m.known_first_order[0] == 0.0);
  CHECK(m.known_first_order[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(m.known_first_order[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(m.known_variance == doctest::Approx(1.0).epsilon(1e-12));

  // x1 carries no first-order effect: its estimate is near zero even though
  // the interaction with x2 is active
  const Design design({{1}, {2}}, 3);
  const auto s = generate_pick_freeze(m.spec, design, 200000, 34);
  const auto est = estimate_S(s);
  CHECK(std::abs(est.values[0]) < 0.01);
  CHECK(std::abs(est.values[1] - 0.25) < 0.01);
}

TEST_CASE("fuel burn model magnitudes and inputs") {
  const auto m = fuel_burn_model();
  REQUIRE(m.spec.p() == 3);
  CHECK(m.spec.inputs[0].kind == DistKind::Uniform);
  CHECK(m.spec.inputs[1].kind == DistKind::Beta);
  CHECK(m.spec.inputs[2].kind == DistKind::ShiftedExponential);

  // hand-evaluated at V = 230, F = 18.9722.., SFC = 17.5198..
  const double x[] = {230.0, 18.972222222222222, 17.519855072463769};
  CHECK(m.spec.f(x) == doctest::Approx(7839.0916388934675).epsilon(1e-9));

  const Design design({{1}}, 3);
  const auto s = generate_pick_freeze(m.spec, design, 50000, 35);
  const double mu = mean(s.y);
  CHECK(mu > 7000.0);
  CHECK(mu < 8700.0);
}

TEST_CASE("discrete model validation") {
  auto m = hand_model();
  CHECK_NOTHROW(m.validate());
  CHECK(m.p() == 2);
  CHECK(m.grid_size() == 4);

  auto bad_pmf = m;
  bad_pmf.pmf[0] = {0.4, 0.4};
  CHECK_THROWS_AS(bad_pmf.validate(), ParameterError);

  auto neg_pmf = m;
  neg_pmf.pmf[0] = {-0.1, 1.1};
  CHECK_THROWS_AS(neg_pmf.validate(), ParameterError);

  auto short_values = m;
  short_values.values = {1.0, 2.0};
  CHECK_THROWS_AS(short_values.validate(), ParameterError);

  auto mismatched = m;
  mismatched.pmf[1] = {0.2, 0.3, 0.5};
  CHECK_THROWS_AS(mismatched.validate(), ParameterError);
}

TEST_CASE("discrete oracle agrees with hand enumeration") {
  const auto m = hand_model();
  const auto o1 = discrete_oracle(m, {1});
  CHECK(o1.mean == doctest::Approx(3.25).epsilon(1e-14));
  CHECK(o1.variance == doctest::Approx(2.0875).epsilon(1e-14));
  CHECK(o1.var_conditional_mean == doctest::Approx(1.3125).epsilon(1e-14));
  CHECK(o1.index == doctest::Approx(1.3125 / 2.0875).epsilon(1e-13));

  // the two oracle routes compute the same quantity
  CHECK(o1.cov_pick_freeze ==
        doctest::Approx(o1.var_conditional_mean).epsilon(1e-12));
  const auto o2 = discrete_oracle(m, {2});
  CHECK(o2.cov_pick_freeze ==
        doctest::Approx(o2.var_conditional_mean).epsilon(1e-12));
  const auto o12 = discrete_oracle(m, {1, 2});
  CHECK(o12.var_conditional_mean == doctest::Approx(o12.variance).epsilon(1e-12));
  CHECK(o12.index == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("discrete oracle rejects constant outputs") {
  auto m = hand_model();
  m.values = {2.0, 2.0, 2.0, 2.0};
  CHECK_THROWS_AS(discrete_oracle(m, {1}), DegenerateError);
}

TEST_CASE("discrete model spec reproduces the table and its law") {
  const auto m = hand_model();
  const auto spec = m.to_model_spec();
  REQUIRE(spec.p() == 2);

  // u below the first cumulative weight selects level 0, above it level 1
  const double x00[] = {0.1, 0.2};
  const double x01[] = {0.1, 0.9};
  const double x10[] = {0.9, 0.2};
  const double x11[] = {0.9, 0.9};
  CHECK(spec.f(x00) == 1.0);
  CHECK(spec.f(x01) == 2.0);
  CHECK(spec.f(x10) == 5.0);
  CHECK(spec.f(x11) == 3.0);

  const Design design({{1}}, 2);
  const auto s = generate_pick_freeze(spec, design, 200000, 36);
  const auto o = discrete_oracle(m, {1});
  CHECK(std::abs(mean(s.y) - o.mean) < 0.02);
  CHECK(std::abs(variance(s.y) - o.variance) < 0.05);
  const auto est = estimate_S(s);
  CHECK(std::abs(est.values[0] - o.index) < 0.01);
}
