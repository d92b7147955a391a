#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "pickfreeze/errors.hpp"

namespace pickfreeze {

// A subset design: k nonempty subsets of {1, .., p} (coordinates are 1-based).
// Subsets are normalized to sorted unique form on construction.
class Design {
 public:
  // empty placeholder, distinguishable by p() == 0; every real design has p >= 1
  Design() = default;

  Design(std::vector<std::vector<int>> subsets, int p) : p_(p), subsets_(std::move(subsets)) {
    if (p_ < 1) throw DesignError("design: p must be >= 1");
    if (subsets_.empty()) throw DesignError("design: at least one subset required");
    masks_.assign(subsets_.size(), std::vector<std::uint8_t>(p_, 0));
    for (std::size_t j = 0; j < subsets_.size(); ++j) {
      auto& u = subsets_[j];
      if (u.empty())
        throw DesignError("design: subset " + std::to_string(j + 1) + " is empty");
      std::sort(u.begin(), u.end());
      u.erase(std::unique(u.begin(), u.end()), u.end());
      for (int c : u) {
        if (c < 1 || c > p_)
          throw DesignError("design: coordinate " + std::to_string(c) + " outside 1.." +
                            std::to_string(p_));
        masks_[j][c - 1] = 1;
      }
    }
  }

  int p() const { return p_; }
  int k() const { return int(subsets_.size()); }
  const std::vector<std::vector<int>>& subsets() const { return subsets_; }

  // is coordinate `coord` (1-based) frozen in subset j (0-based)?
  bool frozen(int j, int coord) const { return masks_[std::size_t(j)][coord - 1] != 0; }

 private:
  int p_ = 0;
  std::vector<std::vector<int>> subsets_;
  std::vector<std::vector<std::uint8_t>> masks_;
};

}  // namespace pickfreeze
