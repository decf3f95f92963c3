/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace beetle {

struct TreeParams {
  int min_samples_leaf = 2;
  std::optional<int> max_depth;  // absent = unlimited; 0 = mean predictor
};

// CART regression tree: greedy variance-reduction splits on value <= threshold,
// leaf prediction = mean of its training rows. Deterministic for a fixed row
// order; immutable after fit.
class RegressionTree {
 public:
  static RegressionTree fit(const MeasurementTable& train, const TreeParams& params = {});
  static RegressionTree fit(const std::vector<Configuration>& configs,
                            const std::vector<double>& target, std::size_t n_options,
                            const TreeParams& params = {});

  double predict(const Configuration& config) const;

  struct Best {
    std::size_t index = 0;
    double predicted = 0.0;
  };
  // Extremal predicted candidate under the objective; ties break to the
  // lowest candidate index.
  Best predict_best(const std::vector<Configuration>& candidates, Objective objective) const;

  bool single_leaf() const { return nodes_.size() == 1; }
  // Set when the training set was too small for even one split.
  bool underfit() const { return underfit_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const;
  int depth() const;

  // Index of the leaf a configuration lands in (tests group rows by leaf).
  std::size_t leaf_of(const Configuration& config) const;
  double leaf_prediction(std::size_t node) const { return nodes_[node].prediction; }

  // Indented `option <= threshold` dump; debugging aid, not a stable format.
  std::string dump(const OptionSchema* schema = nullptr) const;

 private:
  struct Node {
    bool leaf = true;
    std::size_t option = 0;
    double threshold = 0.0;
    double prediction = 0.0;
    std::size_t n_train = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::vector<Node> nodes_;
  bool underfit_ = false;

  struct Builder;
};

}  // namespace beetle
