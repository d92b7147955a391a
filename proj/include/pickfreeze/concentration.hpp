#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pickfreeze/model.hpp"
#include "pickfreeze/sampling.hpp"

namespace pickfreeze {

// h(x) = (1+x) ln(1+x) - x, the rate function of the Bennett inequality
double bennett_h(double x);

enum class BoundVariant { S, T };
enum class BoundSide { Above, Below };

const char* bound_variant_name(BoundVariant v);
const char* bound_side_name(BoundSide s);

// Constants feeding the deviation bounds. The S variant uses the second
// moments of U_i = Y Y^u - (S +- y) Y^2 and J_i = (S +- y) Y - Y^u; the T
// variant those of K_i = Y Y^u - (S +- y)(Y^2 + (Y^u)^2)/2, all on centered
// data. Unused fields are zero.
struct QVector {
  BoundVariant variant = BoundVariant::S;
  double V = 0.0;  // Var(Y)
  double C = 0.0;  // Cov(Y, Y^u)
  double S = 0.0;  // index estimate
  double V_U_plus = 0.0;
  double V_U_minus = 0.0;
  double V_J_plus = 0.0;
  double V_J_minus = 0.0;
  double V_K_plus = 0.0;
  double V_K_minus = 0.0;
  double b = 0.0;  // output bound: |Y|, |Y^u| <= b
  bool b_estimated = false;
};

struct BoundReport {
  BoundVariant variant = BoundVariant::S;
  BoundSide side = BoundSide::Above;
  double y = 0.0;
  std::size_t n = 0;
  double bound = 1.0;  // clamped to at most 1
  bool b_estimated = false;
  std::vector<std::pair<const char*, double>> terms;
};

// deviation bound for the covariance-ratio estimator: above-side
// M1 + 2 M2 + 2 M3, below-side M4 + 2 M2 + 2 M5
BoundReport bound_S(const QVector& q, double y, std::size_t n, BoundSide side);

// deviation bound for the pooled estimator: m1 (above) or m3 (below), plus
// twice m2/m4 when S + y - 1 >= 0; exactly zero there is an error since the
// bound is discontinuous at that point
BoundReport bound_T(const QVector& q, double y, std::size_t n, BoundSide side);

// plug-in Q from a single-subset sample at deviation y; pass b when an
// analytic output bound is known, otherwise the largest observed centered
// magnitude is used and the result is flagged
QVector estimate_Q(const PickFreezeSample& sample, BoundVariant variant, double y,
                   std::optional<double> b = std::nullopt);

// one fresh sample per (n, y) cell, then both deviation sides evaluated
std::vector<BoundReport> deviation_curve(const ModelSpec& model,
                                         const std::vector<int>& u,
                                         BoundVariant variant,
                                         const std::vector<int>& n_list,
                                         const std::vector<double>& y_grid,
                                         std::uint64_t seed,
                                         std::optional<double> b = std::nullopt,
                                         unsigned threads = 1);

}  // namespace pickfreeze
