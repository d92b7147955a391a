#pragma once

#include <cstddef>
#include <span>

namespace pickfreeze {

// Moment helpers. Everything uses the 1/N convention (no Bessel correction).

inline double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / double(x.size());
}

inline double dot_mean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / double(a.size());
}

inline double second_moment(std::span<const double> a) { return dot_mean(a, a); }

// two-pass covariance around the means; algebraically mean(ab) - mean(a)mean(b)
// but without the cancellation of the raw-moment form
inline double covariance(std::span<const double> a, std::span<const double> b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / double(a.size());
}

inline double variance(std::span<const double> a) { return covariance(a, a); }

}  // namespace pickfreeze
