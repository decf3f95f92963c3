/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace beetle {

struct Treatment {
  std::string label;
  std::vector<double> samples;
};

double mean(const std::vector<double>& xs);
// Linear-interpolation quantile on a copy of xs (numpy's default scheme).
double quantile(std::vector<double> xs, double q);
double median(const std::vector<double>& xs);
double iqr(const std::vector<double>& xs);
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Two-sample bootstrap hypothesis test on the difference of means. The null
// recenters both samples onto the pooled mean before resampling with
// replacement; significant iff the achieved level drops below 1 - confidence.
// Deterministic per seed.
bool bootstrap_differs(const std::vector<double>& a, const std::vector<double>& b,
                       int n_boot, double confidence, std::uint64_t rng_seed);

// Vargha-Delaney effect size: P(x > y) + 0.5 P(x = y) over all pairs
// (x in a, y in b), computed by sorted counting.
double a12(const std::vector<double>& a, const std::vector<double>& b);

struct SkConfig {
  int n_boot = 1000;
  double confidence = 0.95;
  double effect_threshold = 0.6;  // split needs max(A12, 1-A12) >= this
  std::uint64_t seed = 0;
};

struct GroupMember {
  std::string label;
  double median = 0.0;
  double iqr = 0.0;
};

struct RankedGroup {
  int rank = 0;
  std::vector<GroupMember> members;
  double median = 0.0;  // over the group's pooled samples
  double iqr = 0.0;
};

// Output of Scott-Knott: contiguous ranks starting at 1, ascending by group
// median (rank 1 is best when lower values are better).
struct RankedGroups {
  std::vector<RankedGroup> groups;

  int rank_of(const std::string& label) const;  // 0 when absent
  std::vector<std::set<std::string>> partition() const;
  std::vector<std::string> rank1_labels() const;
  std::size_t treatment_count() const;
};

// Recursive mean-sorted splitting at the point maximizing the between-group
// sum of squares; a split stands only if the bootstrap test rejects equality
// AND the A12 effect is not small. Input order never affects the result.
RankedGroups scott_knott(const std::vector<Treatment>& treatments, const SkConfig& config);

}  // namespace beetle
