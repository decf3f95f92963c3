/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace beetle {

namespace {

double sse_of(double sum, double sum_sq, std::size_t n) {
  if (n == 0) return 0.0;
  const double sse = sum_sq - (sum * sum) / static_cast<double>(n);
  return std::max(sse, 0.0);
}

}  // namespace

struct RegressionTree::Builder {
  const std::vector<Configuration>& configs;
  const std::vector<double>& target;
  std::size_t n_options;
  TreeParams params;
  std::vector<Node>& nodes;

  struct SplitChoice {
    bool found = false;
    std::size_t option = 0;
    double threshold = 0.0;
    double gain = 0.0;
  };

  SplitChoice best_split(const std::vector<std::size_t>& rows, double node_sse) const {
    SplitChoice best;
    const auto min_leaf = static_cast<std::size_t>(params.min_samples_leaf);
    std::vector<std::pair<double, double>> points(rows.size());  // (value, y)
    for (std::size_t opt = 0; opt < n_options; ++opt) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        points[i] = {configs[rows[i]].values[opt], target[rows[i]]};
      }
      std::sort(points.begin(), points.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      double left_sum = 0.0, left_sq = 0.0;
      double total_sum = 0.0, total_sq = 0.0;
      for (const auto& [v, y] : points) {
        total_sum += y;
        total_sq += y * y;
      }
      for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        left_sum += points[i].second;
        left_sq += points[i].second * points[i].second;
        if (points[i].first == points[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = points.size() - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        const double gain = node_sse - sse_of(left_sum, left_sq, n_left) -
                            sse_of(total_sum - left_sum, total_sq - left_sq, n_right);
        if (gain > best.gain && gain > 0.0) {
          best.found = true;
          best.option = opt;
          best.threshold = points[i].first + 0.5 * (points[i + 1].first - points[i].first);
          best.gain = gain;
        }
      }
    }
    return best;
  }

  std::int32_t build(std::vector<std::size_t> rows, int depth) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t row : rows) {
      sum += target[row];
      sum_sq += target[row] * target[row];
    }
    const double node_sse = sse_of(sum, sum_sq, rows.size());

    const auto node_index = static_cast<std::int32_t>(nodes.size());
    Node node;
    node.prediction = sum / static_cast<double>(rows.size());
    node.n_train = rows.size();
    nodes.push_back(node);

    const bool depth_reached = params.max_depth && depth >= *params.max_depth;
    const auto min_leaf = static_cast<std::size_t>(params.min_samples_leaf);
    if (depth_reached || rows.size() < 2 * min_leaf || node_sse <= 0.0) {
      return node_index;
    }
    const SplitChoice split = best_split(rows, node_sse);
    if (!split.found) return node_index;

    std::vector<std::size_t> left_rows, right_rows;
    left_rows.reserve(rows.size());
    right_rows.reserve(rows.size());
    for (std::size_t row : rows) {
      if (configs[row].values[split.option] <= split.threshold) {
        left_rows.push_back(row);
      } else {
        right_rows.push_back(row);
      }
    }
    rows.clear();
    rows.shrink_to_fit();

    nodes[node_index].leaf = false;
    nodes[node_index].option = split.option;
    nodes[node_index].threshold = split.threshold;
    nodes[node_index].left = build(std::move(left_rows), depth + 1);
    nodes[node_index].right = build(std::move(right_rows), depth + 1);
    return node_index;
  }
};

RegressionTree RegressionTree::fit(const MeasurementTable& train, const TreeParams& params) {
  return fit(train.configs(), train.perf(), train.schema()->size(), params);
}

RegressionTree RegressionTree::fit(const std::vector<Configuration>& configs,
                                   const std::vector<double>& target, std::size_t n_options,
                                   const TreeParams& params) {
  if (configs.empty() || configs.size() != target.size()) {
    throw ValidationError("regression tree needs a non-empty, aligned training set");
  }
  if (params.min_samples_leaf < 1) {
    throw ValidationError("min_samples_leaf must be >= 1");
  }
  if (params.max_depth && *params.max_depth < 0) {
    throw ValidationError("max_depth must be >= 0");
  }
  RegressionTree tree;
  tree.underfit_ = configs.size() < 2 * static_cast<std::size_t>(params.min_samples_leaf);
  std::vector<std::size_t> rows(configs.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  Builder builder{configs, target, n_options, params, tree.nodes_};
  builder.build(std::move(rows), 0);
  return tree;
}

double RegressionTree::predict(const Configuration& config) const {
  return nodes_[leaf_of(config)].prediction;
}

std::size_t RegressionTree::leaf_of(const Configuration& config) const {
  std::size_t node = 0;
  while (!nodes_[node].leaf) {
    node = config.values[nodes_[node].option] <= nodes_[node].threshold
               ? static_cast<std::size_t>(nodes_[node].left)
               : static_cast<std::size_t>(nodes_[node].right);
  }
  return node;
}

RegressionTree::Best RegressionTree::predict_best(const std::vector<Configuration>& candidates,
                                                  Objective objective) const {
  if (candidates.empty()) throw ValidationError("predict_best needs at least one candidate");
  Best best;
  best.index = 0;
  best.predicted = predict(candidates[0]);
  const bool minimize = objective == Objective::kMinimize;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double p = predict(candidates[i]);
    if (minimize ? p < best.predicted : p > best.predicted) {
      best.index = i;
      best.predicted = p;
    }
  }
  return best;
}

std::size_t RegressionTree::leaf_count() const {
  std::size_t count = 0;
  for (const Node& n : nodes_) count += n.leaf ? 1 : 0;
  return count;
}

int RegressionTree::depth() const {
  // Nodes are laid out parent-before-children, so a direct walk suffices.
  std::vector<int> depths(nodes_.size(), 0);
  int max_depth = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].leaf) continue;
    depths[static_cast<std::size_t>(nodes_[i].left)] = depths[i] + 1;
    depths[static_cast<std::size_t>(nodes_[i].right)] = depths[i] + 1;
    max_depth = std::max(max_depth, depths[i] + 1);
  }
  return max_depth;
}

std::string RegressionTree::dump(const OptionSchema* schema) const {
  std::ostringstream out;
  struct Frame {
    std::size_t node;
    int depth;
  };
  std::vector<Frame> stack{{0, 0}};
  while (!stack.empty()) {
    const Frame frame = stack.back();
    stack.pop_back();
    const Node& n = nodes_[frame.node];
    for (int i = 0; i < frame.depth; ++i) out << "  ";
    if (n.leaf) {
      out << "leaf " << format_double(n.prediction) << " [n=" << n.n_train << "]\n";
    } else {
      const std::string name = schema && n.option < schema->size()
                                   ? schema->option(n.option).name
                                   : "option" + std::to_string(n.option);
      out << name << " <= " << format_double(n.threshold) << " [n=" << n.n_train << "]\n";
      stack.push_back({static_cast<std::size_t>(n.right), frame.depth + 1});
      stack.push_back({static_cast<std::size_t>(n.left), frame.depth + 1});
    }
  }
  return out.str();
}

}  // namespace beetle
