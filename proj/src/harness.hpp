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

#include "baselines.hpp"
#include "dataset.hpp"
#include "discovery.hpp"
#include "report.hpp"
#include "stats.hpp"

namespace beetle {

// Exhaustive round-robin at 100% sampling: every source env scored against
// every other, Scott-Knott ranked. The reference protocol racing is judged
// against.
struct Rq1Result {
  RankedGroups ranking;
  CsvDoc csv;
};
Rq1Result run_rq1(const EnvironmentCommunity& community, int repeats, std::uint64_t seed,
                  const TreeParams& tree = {});

// Racing discovery with the fine-grained (1% step) schedule, compared
// against transfer from the exhaustive 100% bellwether.
struct Rq2Result {
  DiscoveryResult discovery;       // first repeat, representative
  std::vector<std::string> exhaustive_rank1;
  double median_nar_full = 0.0;    // transfer from the 100% bellwether
  double iqr_nar_full = 0.0;
  double median_nar_racing = 0.0;  // transfer at the discovered sample level
  double iqr_nar_racing = 0.0;
  double median_delta = 0.0;       // |full - racing| per paired cell
  double iqr_delta = 0.0;
  double median_percent_rows = 0.0;  // % of all source rows racing consumed
  CsvDoc csv;
};
Rq2Result run_rq2(const EnvironmentCommunity& community, const RacingConfig& racing, int repeats,
                  std::uint64_t seed);

// Win/loss sweep against the non-transfer optimizer. A tie counts as a win.
struct WinLossCell {
  double fraction = 0.0;
  std::string target;  // "ALL" for the pooled row
  int wins = 0;
  int losses = 0;
};
struct Rq3Result {
  std::vector<WinLossCell> cells;   // per (fraction, target)
  std::vector<WinLossCell> pooled;  // per fraction, summed over targets
  int total_wins = 0;
  int total_losses = 0;
  CsvDoc csv;
};
Rq3Result run_rq3(const EnvironmentCommunity& community, const std::vector<double>& fractions,
                  int repeats, std::uint64_t seed, const RacingConfig& racing);
std::vector<double> default_rq3_fractions();  // 0.1, 0.2, ..., 1.0

// Method shoot-out: bellwether transfer vs the two transfer baselines,
// Scott-Knott ranked on NAR, plus the measurements-consumed comparison.
struct Rq4Result {
  RankedGroups ranking;  // treatments: beetle, valov, gp
  struct MethodCost {
    std::string method;
    long measurements = 0;
  };
  std::vector<MethodCost> costs;
  CsvDoc csv;
  CsvDoc cost_csv;
};
Rq4Result run_rq4(const EnvironmentCommunity& community, int repeats, std::uint64_t seed,
                  const RacingConfig& racing, const ValovParams& valov = {},
                  const GpParams& gp = {});

// Rounds table of a discovery run as CSV.
CsvDoc discovery_csv(const DiscoveryResult& result, std::string comment);

}  // namespace beetle
