/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "metrics.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace beetle {

NarScore nar_at(const MeasurementTable& target, std::size_t chosen_row) {
  if (chosen_row >= target.row_count()) {
    throw ValidationError("NAR: chosen row " + std::to_string(chosen_row) + " out of range");
  }
  if (target.degenerate()) return {0.0, true};
  const double best = target.objective() == Objective::kMinimize ? target.min_perf()
                                                                 : target.max_perf();
  const double range = target.max_perf() - target.min_perf();
  NarScore score;
  // Ratio first: |best - chosen| / range is exactly 1.0 for the worst row.
  score.value = 100.0 * (std::abs(best - target.perf(chosen_row)) / range);
  return score;
}

NarScore nar(const MeasurementTable& target, const Configuration& chosen) {
  const auto row = target.find_row(chosen);
  if (!row) {
    throw ValidationError("NAR: chosen configuration is not a measured row of environment '" +
                          target.env().name + "'");
  }
  return nar_at(target, *row);
}

double mmre(double predicted, double actual) {
  if (actual == 0.0) {
    throw ValidationError("MMRE is undefined for actual == 0");
  }
  return std::abs(predicted - actual) / actual * 100.0;
}

int rank_difference(int predicted_rank, int actual_rank) {
  if (predicted_rank < 1 || actual_rank < 1) {
    throw ValidationError("ranks are 1-based");
  }
  return std::abs(predicted_rank - actual_rank);
}

std::vector<int> dense_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<int> ranks(values.size(), 0);
  int rank = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || values[order[i]] != values[order[i - 1]]) ++rank;
    ranks[order[i]] = rank;
  }
  return ranks;
}

}  // namespace beetle
