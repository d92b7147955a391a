#pragma once

#include "pickfreeze/rng.hpp"

namespace pickfreeze {

enum class DistKind { Uniform, StandardNormal, Beta, ShiftedExponential };

// One scalar input law. Construct through the named factories, which validate
// parameters.
struct InputDistribution {
  DistKind kind = DistKind::Uniform;
  double a = 0.0;       // uniform / beta support [a, b]
  double b = 1.0;
  double alpha = 1.0;   // beta shapes
  double beta = 1.0;
  double theta1 = 0.0;  // shifted exponential: location, rate
  double theta2 = 1.0;

  static InputDistribution uniform(double a, double b);
  static InputDistribution standard_normal();
  static InputDistribution beta_on(double alpha, double beta, double a, double b);
  static InputDistribution shifted_exponential(double theta1, double theta2);

  // maps one uniform draw u in (0, 1] onto this distribution by inverse
  // transform; the beta family is sampled through gamma draws instead and has
  // no transform here
  double from_unit(double u) const;

  double sample(RngStream& g) const;

  double mean() const;
  double variance() const;
};

}  // namespace pickfreeze
