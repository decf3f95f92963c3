/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <vector>

namespace beetle {

// Gray-code Sobol low-discrepancy sequence in [0,1)^d using the Joe-Kuo
// direction numbers, d <= 50. The first emitted point is the origin.
class SobolSampler {
 public:
  explicit SobolSampler(int dimension);

  int dimension() const { return static_cast<int>(state_.size()); }
  std::uint64_t index() const { return index_; }

  std::vector<double> next();
  void skip(std::uint64_t count);

 private:
  void advance();
  std::vector<std::vector<std::uint32_t>> directions_;  // [dim][bit]
  std::vector<std::uint32_t> state_;
  std::uint64_t index_ = 0;
};

}  // namespace beetle
