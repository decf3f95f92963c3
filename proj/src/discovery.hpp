/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "metrics.hpp"
#include "stats.hpp"
#include "tree.hpp"

namespace beetle {

struct RacingConfig {
  double initial_fraction = 0.10;
  double fraction_step = 0.10;
  long budget = 0;  // total measurements allowed; 0 -> all source rows
  int lives = 5;
  int repeats_per_round = 5;  // intra-round tree refits per source
  SkConfig sk;                // bootstrap/effect settings + sk seed offset
  TreeParams tree;

  void validate() const;
};

enum class Termination { kLivesExhausted, kBudgetExhausted, kNoMoreEliminations };
const char* to_string(Termination t);

struct DiscoveryRound {
  int number = 0;  // 1-based
  double fraction = 0.0;
  long new_measurements = 0;
  long cost_after = 0;
  int lives_after = 0;
  RankedGroups ranking;  // over the environments that raced this round
  std::vector<std::string> eliminated;
};

struct DiscoveryResult {
  std::vector<EnvironmentId> bellwethers;  // the final rank-1 group
  std::vector<DiscoveryRound> rounds;
  long cost = 0;
  Termination termination = Termination::kNoMoreEliminations;
  // Rows paid for per environment, in draw order; the "discovered sample
  // level" a transfer can train on without spending anything new.
  std::map<std::string, std::vector<std::size_t>> pools;

  // Percent of all source rows consumed (the RQ2 headline number).
  double percent_of_rows(const EnvironmentCommunity& community) const;
  std::string report() const;
};

// Fit a tree on the sampled source rows, then score it against every other
// environment: predicted-best configuration, NAR on that environment's
// ground truth. One score per entry of `others`.
std::vector<NarScore> score_source(const MeasurementTable& source_sample,
                                   const std::vector<const MeasurementTable*>& others,
                                   const TreeParams& tree_params);

// Racing discovery: sample a growing fraction of every surviving source,
// rank them round-robin with Scott-Knott, eliminate the last-ranked group,
// and lose a life whenever the grouping stalls. Terminates on lives, budget,
// or a single survivor.
DiscoveryResult find_bellwether(const EnvironmentCommunity& community, const RacingConfig& config,
                                std::uint64_t rng_seed);

struct TransferOutcome {
  std::string bellwether;  // environment the model was trained on
  Configuration chosen;
  std::size_t chosen_index = 0;  // into the candidate list
  double predicted = 0.0;
  long source_measurements = 0;
  long target_measurements = 0;  // always 0: transfer never samples the target
};

// Uniformly seeded pick among tied bellwethers.
const EnvironmentId& pick_bellwether(const std::vector<EnvironmentId>& bellwethers,
                                     std::uint64_t rng_seed);

// Fit on the given training table and return the predicted-best candidate.
TransferOutcome transfer_from_table(const MeasurementTable& train,
                                    const std::vector<Configuration>& candidates,
                                    Objective objective, const TreeParams& tree_params);

// The full transfer step: pick one bellwether at random, fit a tree on a
// fraction of its measurements (default: all of them), and return the best
// candidate. No target measurements are consumed.
TransferOutcome transfer(const std::vector<EnvironmentId>& bellwethers,
                         const EnvironmentCommunity& community,
                         const std::vector<Configuration>& candidates, Objective objective,
                         std::uint64_t rng_seed, const TreeParams& tree_params,
                         double train_fraction = 1.0);

}  // namespace beetle
