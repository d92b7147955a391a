#pragma once

#include <string>
#include <vector>

#include "pickfreeze/model.hpp"

namespace pickfreeze {

// a benchmark model together with whatever is known about it in closed form
struct AnalyticModel {
  std::string name;
  ModelSpec spec;
  std::vector<double> known_first_order;  // exact first-order indices, empty if unknown
  double known_mean = 0.0;
  double known_variance = 0.0;
  double output_bound = 0.0;  // sup |f|, 0 when unbounded
};

// Ishigami benchmark: sin x1 + 7 sin^2 x2 + 0.1 x3^4 sin x1 on U[-pi,pi]^3.
// The centered variant subtracts the exact mean 7/2.
AnalyticModel ishigami_model(bool centered = false);

// Two-input Gaussian benchmark l1*x1 + l1*x2 + l2*x1*x2 with unit total
// variance (l2 = sqrt(1 - 2 l1^2)); both first-order indices equal l1^2.
AnalyticModel bilinear2_model(double lambda1);

// closed-form covariance entries of sqrt(N)(S_N - S) for the bilinear2 family
double bilinear2_gamma_diag(double lambda1);
double bilinear2_gamma_offdiag(double lambda1);

// Three-input Gaussian benchmark l1*(x2 + x3) + l2*x1*x2 with unit total
// variance. x1 alone carries no first-order effect for any l1; it stops
// mattering at all exactly when l2 = 0, i.e. l1^2 = 1/2.
AnalyticModel bilinear3_model(double lambda1);

// cruise fuel-burn model: fuel = (m_empty + m_payload) * (exp(SFC*g*Ra/(V*F)*1e-3) - 1)
// with inputs (V, F, SFC): cruise speed, lift-to-drag ratio, specific fuel consumption
struct FuelBurnConstants {
  double m_empty = 42600.0;   // kg
  double m_payload = 19900.0; // kg
  double g = 9.81;            // m/s^2
  double range_km = 3000.0;
};
AnalyticModel fuel_burn_model(const FuelBurnConstants& constants = {});

// Finite-support product model given as a plain table. Input c takes
// support[c][v] with probability pmf[c][v]; `values` enumerates f over the
// product grid with the last input index varying fastest.
struct DiscreteModel {
  std::vector<std::vector<double>> support;
  std::vector<std::vector<double>> pmf;
  std::vector<double> values;

  int p() const { return int(support.size()); }
  std::size_t grid_size() const;
  void validate() const;

  // uniform(0,1) inputs mapped through the per-coordinate inverse CDF; the
  // generated sigma-algebras match the discrete inputs, so pick-freeze
  // estimates on this spec target the same indices
  ModelSpec to_model_spec() const;
};

// exact quantities obtained by enumerating the product grid
struct DiscreteOracle {
  double mean = 0.0;
  double variance = 0.0;
  double var_conditional_mean = 0.0;  // Var(E[Y | X_u]) via conditional means
  double cov_pick_freeze = 0.0;       // Cov(Y, Y^u) via triple enumeration
  double index = 0.0;                 // var_conditional_mean / variance
};

// subset u is 1-based, as in Design
DiscreteOracle discrete_oracle(const DiscreteModel& model, const std::vector<int>& u);

}  // namespace pickfreeze
