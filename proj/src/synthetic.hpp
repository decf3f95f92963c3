/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace beetle {

// How one environment's performance column is derived from the base surface.
enum class RelatednessMode {
  kAffine,           // a * f + b (+ noise); a > 0 preserves the argmin
  kMonotoneWarp,     // monotone nonlinear warp of f (+ noise)
  kShuffled,         // f values permuted across rows (+ noise)
  kIndependentNoise  // fresh values, unrelated to the configurations
};

const char* to_string(RelatednessMode mode);

struct EnvRelatedness {
  RelatednessMode mode = RelatednessMode::kAffine;
  double affine_a = 1.0;
  double affine_b = 0.0;
  double noise_sd = 0.0;
};

// Specification of a synthetic community. The environment at
// `sources[planted]` must be affine(1, 0) with zero noise: it measures the
// base surface exactly and is the ground-truth bellwether.
struct CommunitySpec {
  std::string system_name = "synthetic";
  int n_binary = 10;
  int n_numeric = 0;
  int rows_per_env = 500;
  std::uint64_t base_surface_seed = 1;
  std::vector<EnvRelatedness> sources;
  std::vector<EnvRelatedness> targets;

  int planted_index() const;  // validates exactly one planted source
};

// Deterministic generator: a random tree-structured base surface plus
// pairwise interaction bonuses, measured on one shared configuration sample
// across every environment.
EnvironmentCommunity generate(const CommunitySpec& spec);

// The canned community used throughout the test harness: one planted
// bellwether, clean affine/warped derivatives, and noise-only impostors.
CommunitySpec planted_default_spec(std::uint64_t seed, int n_sources = 8, int n_targets = 3,
                                   int n_binary = 10, int rows_per_env = 500);

// Every source clearly better than the next: affine derivatives with
// sharply increasing noise. Exercises one-at-a-time racing eliminations.
CommunitySpec distinct_quality_spec(std::uint64_t seed, int n_sources = 6,
                                    int rows_per_env = 300);

}  // namespace beetle
