/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstddef>
#include <vector>

#include "dataset.hpp"

namespace beetle {

// Normalized absolute residual, in percent. 0 means the chosen configuration
// is the environment's true optimum; 100 means it is the true worst.
struct NarScore {
  double value = 0.0;
  bool degenerate = false;
};

// NAR of a chosen configuration against the target's measured ground truth:
// 100 * |best_true - true_perf(chosen)| / (max_perf - min_perf).
// The chosen configuration must be a measured row of the target.
NarScore nar(const MeasurementTable& target, const Configuration& chosen);

// Same, addressing the chosen row by index (hot path for the harness).
NarScore nar_at(const MeasurementTable& target, std::size_t chosen_row);

// Magnitude of relative error in percent: |predicted - actual| / actual * 100.
double mmre(double predicted, double actual);

// Absolute difference of two 1-based ranks.
int rank_difference(int predicted_rank, int actual_rank);

// Dense ascending ranks (1,2,2,3): equal values share a rank and the next
// distinct value takes the following integer.
std::vector<int> dense_ranks(const std::vector<double>& values);

}  // namespace beetle
