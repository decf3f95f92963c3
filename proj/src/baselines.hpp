/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "dataset.hpp"
#include "metrics.hpp"
#include "tree.hpp"

namespace beetle {

// Shared result record: every optimizer (the bellwether transfer and the
// three baselines) reports the same fields so the harness compares
// like-for-like, including the measurement ledger.
struct MethodResult {
  Configuration chosen;
  std::size_t chosen_index = 0;  // row in the target table
  double predicted = 0.0;
  NarScore nar;
  long source_measurements = 0;
  long target_measurements = 0;
};

// Non-transfer optimizer: sample a fraction of the target itself, fit a
// regression tree, pick the predicted-best measured configuration.
MethodResult nair_non_transfer(const MeasurementTable& target, double fraction,
                               std::uint64_t rng_seed, const TreeParams& tree = {});

struct LinearTransferModel {
  double slope = 1.0;
  double intercept = 0.0;
};

// Least-squares line through (x, y) pairs; throws ComputeError when the
// x values carry no variance.
LinearTransferModel fit_linear_transfer(const std::vector<double>& xs,
                                        const std::vector<double>& ys);

// Maps Sobol points in [0,1)^N to their nearest measured rows (min-max
// normalized, ties to the lowest row index) and returns the first `count`
// distinct rows.
std::vector<std::size_t> sobol_select_rows(const MeasurementTable& table, std::size_t count);

struct ValovParams {
  int training_coefficient = 3;  // T in {3, 4, 5}
  int n_pairs = 0;               // 0 -> T * option count
  TreeParams tree;
};

// Linear-transfer baseline: tree on T*N Sobol-selected source rows, then a
// linear map from source predictions to target measurements fitted on
// n_pairs configurations measured in both environments.
MethodResult valov_transfer(const MeasurementTable& source, const MeasurementTable& target,
                            const ValovParams& params, std::uint64_t rng_seed);

struct GpParams {
  double length_scale = 1.0;  // on min-max normalized inputs
  double signal_var = 0.0;    // 0 -> sample variance of source perf
  double noise_var = -1.0;    // < 0 -> 1e-6 * signal_var
};

// Two-task Gaussian process whose cross-covariance block is the input
// kernel scaled by k_t, the Pearson correlation of source and target
// performance on their shared sampled configurations.
class GpTransferModel {
 public:
  static GpTransferModel fit(const MeasurementTable& source,
                             const MeasurementTable& target_sample, const GpParams& params);

  double k_t() const { return k_t_; }
  // Posterior mean for the target task.
  double predict(const Configuration& config) const;
  std::vector<double> predict(const std::vector<Configuration>& configs) const;

 private:
  GpTransferModel() = default;
  std::shared_ptr<const OptionSchema> schema_;
  std::vector<std::vector<double>> train_inputs_;  // normalized, source block first
  std::size_t n_source_ = 0;
  std::vector<double> alpha_;  // K^-1 (y - prior_mean)
  double prior_mean_ = 0.0;
  double k_t_ = 0.0;
  double length_scale_ = 1.0;
  double signal_var_ = 1.0;
};

// GP-transfer baseline: trains on all source rows plus n_pairs rows sampled
// from the configurations the target shares with the source, then picks the
// predicted-best measured target configuration.
MethodResult jamshidi_gp_transfer(const MeasurementTable& source, const MeasurementTable& target,
                                  int n_pairs, const GpParams& params, std::uint64_t rng_seed);

}  // namespace beetle
