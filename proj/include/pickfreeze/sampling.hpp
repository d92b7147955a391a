#pragma once

#include <cstdint>
#include <vector>

#include "pickfreeze/design.hpp"
#include "pickfreeze/model.hpp"

namespace pickfreeze {

// Pick-freeze sample: base output column y plus one column per design subset,
// where the subset coordinates are frozen and the rest are redrawn. The seed
// is recorded so the whole sample can be replayed.
struct PickFreezeSample {
  std::vector<double> y;
  std::vector<std::vector<double>> yu;  // yu[j][i]: subset j frozen for row i
  Design design;
  std::uint64_t seed = 0;

  int n() const { return int(y.size()); }
  int k() const { return int(yu.size()); }
};

// iid draws from one input distribution
std::vector<double> sample_input(const InputDistribution& dist, int n, std::uint64_t seed);

// Generates (y_i, y_i^{u_1}, .., y_i^{u_k}). Row i draws its base point from
// substream (seed, row i); column j redraws every coordinate outside u_j from
// substream (seed, column j, row i), independently across rows and columns.
// Output is bitwise identical for every `threads` value.
PickFreezeSample generate_pick_freeze(const ModelSpec& model, const Design& design, int n,
                                      std::uint64_t seed, int threads = 1);

}  // namespace pickfreeze
