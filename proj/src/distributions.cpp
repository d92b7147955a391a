#include "pickfreeze/distributions.hpp"

#include <cmath>

#include "pickfreeze/errors.hpp"
#include "pickfreeze/special.hpp"

namespace pickfreeze {

namespace {

// Marsaglia-Tsang gamma sampler. Rejection is safe here because every sample
// row owns its substream, so a variable draw count never shifts other rows.
double gamma_draw(RngStream& g, double shape) {
  if (shape < 1.0) {
    const double u = g.next_unit();
    return gamma_draw(g, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x;
    double v;
    do {
      x = normal_quantile(g.next_unit());
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = g.next_unit();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

}  // namespace

InputDistribution InputDistribution::uniform(double a, double b) {
  if (!(a < b)) throw ParameterError("uniform: need a < b");
  InputDistribution d;
  d.kind = DistKind::Uniform;
  d.a = a;
  d.b = b;
  return d;
}

InputDistribution InputDistribution::standard_normal() {
  InputDistribution d;
  d.kind = DistKind::StandardNormal;
  return d;
}

InputDistribution InputDistribution::beta_on(double alpha, double beta, double a, double b) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ParameterError("beta: shapes must be positive");
  if (!(a < b)) throw ParameterError("beta: need a < b");
  InputDistribution d;
  d.kind = DistKind::Beta;
  d.alpha = alpha;
  d.beta = beta;
  d.a = a;
  d.b = b;
  return d;
}

InputDistribution InputDistribution::shifted_exponential(double theta1, double theta2) {
  if (!(theta2 > 0.0)) throw ParameterError("shifted_exponential: rate must be positive");
  InputDistribution d;
  d.kind = DistKind::ShiftedExponential;
  d.theta1 = theta1;
  d.theta2 = theta2;
  return d;
}

double InputDistribution::from_unit(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("from_unit: u must be in (0,1]");
  switch (kind) {
    case DistKind::Uniform:
      return a + (b - a) * u;
    case DistKind::StandardNormal:
      if (u == 1.0) throw DomainError("from_unit: u must be < 1 for the normal");
      return normal_quantile(u);
    case DistKind::ShiftedExponential:
      // u = 1 lands on the lower endpoint theta1
      return theta1 - std::log(u) / theta2;
    case DistKind::Beta:
      throw ParameterError("from_unit: beta is sampled through gamma draws");
  }
  throw ParameterError("from_unit: unknown distribution kind");
}

double InputDistribution::sample(RngStream& g) const {
  if (kind == DistKind::Beta) {
    const double g1 = gamma_draw(g, alpha);
    const double g2 = gamma_draw(g, beta);
    return a + (b - a) * (g1 / (g1 + g2));
  }
  return from_unit(g.next_unit());
}

double InputDistribution::mean() const {
  switch (kind) {
    case DistKind::Uniform:
      return 0.5 * (a + b);
    case DistKind::StandardNormal:
      return 0.0;
    case DistKind::Beta:
      return a + (b - a) * alpha / (alpha + beta);
    case DistKind::ShiftedExponential:
      return theta1 + 1.0 / theta2;
  }
  throw ParameterError("mean: unknown distribution kind");
}

double InputDistribution::variance() const {
  switch (kind) {
    case DistKind::Uniform:
      return (b - a) * (b - a) / 12.0;
    case DistKind::StandardNormal:
      return 1.0;
    case DistKind::Beta: {
      const double s = alpha + beta;
      return (b - a) * (b - a) * alpha * beta / (s * s * (s + 1.0));
    }
    case DistKind::ShiftedExponential:
      return 1.0 / (theta2 * theta2);
  }
  throw ParameterError("variance: unknown distribution kind");
}

}  // namespace pickfreeze
