#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pickfreeze/distributions.hpp"

namespace pickfreeze {

// input law plus deterministic evaluator
struct ModelSpec {
  std::vector<InputDistribution> inputs;
  std::function<double(std::span<const double>)> f;

  int p() const { return int(inputs.size()); }
};

}  // namespace pickfreeze
