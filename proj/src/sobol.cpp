/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "sobol.hpp"

#include <bit>

#include "errors.hpp"
#include "sobol_directions.hpp"

namespace beetle {

namespace {
constexpr int kBits = 32;
}

SobolSampler::SobolSampler(int dimension) {
  if (dimension < 1 || dimension > detail::kSobolMaxDimension) {
    throw ValidationError("Sobol dimension must lie in [1, " +
                          std::to_string(detail::kSobolMaxDimension) + "], got " +
                          std::to_string(dimension));
  }
  directions_.resize(static_cast<std::size_t>(dimension));
  // Dimension 1 is the plain van der Corput sequence: v_k = 2^(32-k).
  directions_[0].resize(kBits);
  for (int k = 0; k < kBits; ++k) {
    directions_[0][static_cast<std::size_t>(k)] = 1u << (kBits - 1 - k);
  }
  for (int dim = 2; dim <= dimension; ++dim) {
    const detail::SobolDirection& d = detail::kSobolDirections[dim - 2];
    auto& v = directions_[static_cast<std::size_t>(dim - 1)];
    v.resize(kBits);
    const auto s = static_cast<int>(d.degree);
    for (int k = 0; k < s && k < kBits; ++k) {
      v[static_cast<std::size_t>(k)] = d.m[k] << (kBits - 1 - k);
    }
    for (int k = s; k < kBits; ++k) {
      std::uint32_t value = v[static_cast<std::size_t>(k - s)] ^
                            (v[static_cast<std::size_t>(k - s)] >> s);
      for (int j = 1; j < s; ++j) {
        if ((d.poly_a >> (s - 1 - j)) & 1u) value ^= v[static_cast<std::size_t>(k - j)];
      }
      v[static_cast<std::size_t>(k)] = value;
    }
  }
  state_.assign(static_cast<std::size_t>(dimension), 0u);
}

void SobolSampler::advance() {
  // Gray-code update: flip the direction of the lowest zero bit of the index.
  const int bit = std::countr_one(index_);
  if (bit >= kBits) throw ComputeError("Sobol sequence exhausted (2^32 points)");
  for (std::size_t dim = 0; dim < state_.size(); ++dim) {
    state_[dim] ^= directions_[dim][static_cast<std::size_t>(bit)];
  }
  ++index_;
}

std::vector<double> SobolSampler::next() {
  std::vector<double> point(state_.size());
  for (std::size_t dim = 0; dim < state_.size(); ++dim) {
    point[dim] = static_cast<double>(state_[dim]) * 0x1.0p-32;
  }
  advance();  // state_ now holds the following point
  return point;
}

void SobolSampler::skip(std::uint64_t count) {
  for (std::uint64_t i = 0; i < count; ++i) advance();
}

}  // namespace beetle
