/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "baselines.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "errors.hpp"
#include "rng.hpp"
#include "sobol.hpp"
#include "stats.hpp"

namespace beetle {

namespace {

std::vector<double> normalize_config(const OptionSchema& schema, const Configuration& c) {
  std::vector<double> z(schema.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = schema.normalize(i, c.values[i]);
  return z;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return d2;
}

}  // namespace

MethodResult nair_non_transfer(const MeasurementTable& target, double fraction,
                               std::uint64_t rng_seed, const TreeParams& tree_params) {
  const MeasurementTable sample = sample_rows(target, fraction, rng_seed);
  const RegressionTree model = RegressionTree::fit(sample, tree_params);
  const auto best = model.predict_best(target.configs(), target.objective());
  MethodResult result;
  result.chosen = target.config(best.index);
  result.chosen_index = best.index;
  result.predicted = best.predicted;
  result.nar = nar_at(target, best.index);
  result.target_measurements = static_cast<long>(sample.row_count());
  return result;
}

LinearTransferModel fit_linear_transfer(const std::vector<double>& xs,
                                        const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ValidationError("linear transfer needs at least 2 aligned pairs");
  }
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) {
    throw ComputeError("linear transfer degenerate: source predictions are constant");
  }
  LinearTransferModel model;
  model.slope = sxy / sxx;
  model.intercept = my - model.slope * mx;
  return model;
}

std::vector<std::size_t> sobol_select_rows(const MeasurementTable& table, std::size_t count) {
  if (count > table.row_count()) {
    throw ValidationError("Sobol row selection: asked for " + std::to_string(count) +
                          " rows but environment '" + table.env().name + "' only has " +
                          std::to_string(table.row_count()));
  }
  const OptionSchema& schema = *table.schema();
  std::vector<std::vector<double>> normalized(table.row_count());
  for (std::size_t row = 0; row < table.row_count(); ++row) {
    normalized[row] = normalize_config(schema, table.config(row));
  }

  SobolSampler sobol(static_cast<int>(schema.size()));
  std::vector<std::size_t> selected;
  std::vector<bool> used(table.row_count(), false);
  const std::size_t max_draws = count * 64 + 256;
  for (std::size_t draw = 0; draw < max_draws && selected.size() < count; ++draw) {
    const std::vector<double> point = sobol.next();
    std::size_t nearest = 0;
    double nearest_d2 = squared_distance(point, normalized[0]);
    for (std::size_t row = 1; row < normalized.size(); ++row) {
      const double d2 = squared_distance(point, normalized[row]);
      if (d2 < nearest_d2) {
        nearest_d2 = d2;
        nearest = row;
      }
    }
    if (!used[nearest]) {
      used[nearest] = true;
      selected.push_back(nearest);
    }
  }
  // Sobol points can keep landing on already-taken rows; top up in row order.
  for (std::size_t row = 0; row < used.size() && selected.size() < count; ++row) {
    if (!used[row]) {
      used[row] = true;
      selected.push_back(row);
    }
  }
  return selected;
}

MethodResult valov_transfer(const MeasurementTable& source, const MeasurementTable& target,
                            const ValovParams& params, std::uint64_t rng_seed) {
  if (params.training_coefficient < 3 || params.training_coefficient > 5) {
    throw ValidationError("valov training coefficient must lie in {3, 4, 5}");
  }
  const std::size_t n_options = source.schema()->size();
  const std::size_t train_size = static_cast<std::size_t>(params.training_coefficient) * n_options;
  if (source.row_count() < train_size) {
    throw ValidationError("valov transfer: source '" + source.env().name + "' has " +
                          std::to_string(source.row_count()) + " rows, needs T*N = " +
                          std::to_string(train_size));
  }
  const std::size_t n_pairs =
      params.n_pairs > 0 ? static_cast<std::size_t>(params.n_pairs) : train_size;
  if (n_pairs < 2) throw ValidationError("valov transfer needs at least 2 pairs");

  const std::vector<std::size_t> train_rows = sobol_select_rows(source, train_size);
  const MeasurementTable train = source.subset(train_rows);
  const RegressionTree source_model = RegressionTree::fit(train, params.tree);

  // Configurations measured in both environments feed the transfer line.
  std::vector<std::size_t> common;  // rows of `target`
  for (std::size_t row = 0; row < target.row_count(); ++row) {
    if (source.find_row(target.config(row))) common.push_back(row);
  }
  if (common.size() < n_pairs) {
    throw ValidationError("valov transfer: only " + std::to_string(common.size()) +
                          " configurations are measured in both '" + source.env().name +
                          "' and '" + target.env().name + "', needs " + std::to_string(n_pairs));
  }
  Rng rng(rng_seed);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(common.size() - i));
    std::swap(common[i], common[j]);
  }
  common.resize(n_pairs);

  std::vector<double> xs, ys;
  xs.reserve(n_pairs);
  ys.reserve(n_pairs);
  for (std::size_t row : common) {
    xs.push_back(source_model.predict(target.config(row)));
    ys.push_back(target.perf(row));
  }
  const LinearTransferModel line = fit_linear_transfer(xs, ys);

  const bool minimize = target.objective() == Objective::kMinimize;
  std::size_t best_index = 0;
  double best_value = 0.0;
  for (std::size_t row = 0; row < target.row_count(); ++row) {
    const double value = line.slope * source_model.predict(target.config(row)) + line.intercept;
    if (row == 0 || (minimize ? value < best_value : value > best_value)) {
      best_index = row;
      best_value = value;
    }
  }

  MethodResult result;
  result.chosen = target.config(best_index);
  result.chosen_index = best_index;
  result.predicted = best_value;
  result.nar = nar_at(target, best_index);
  // The nearest-measured-row mapping presupposes the full source table.
  result.source_measurements = static_cast<long>(source.row_count());
  result.target_measurements = static_cast<long>(n_pairs);
  return result;
}

GpTransferModel GpTransferModel::fit(const MeasurementTable& source,
                                     const MeasurementTable& target_sample,
                                     const GpParams& params) {
  if (!(*source.schema() == *target_sample.schema())) {
    throw ValidationError("GP transfer: source and target schemas differ");
  }
  if (params.length_scale <= 0.0) throw ValidationError("GP length_scale must be > 0");

  GpTransferModel model;
  model.schema_ = source.schema();
  model.length_scale_ = params.length_scale;

  double signal = params.signal_var;
  if (signal <= 0.0) {
    const double m = mean(source.perf());
    double var = 0.0;
    for (double y : source.perf()) var += (y - m) * (y - m);
    var /= static_cast<double>(source.row_count());
    signal = var > 0.0 ? var : 1.0;
  }
  model.signal_var_ = signal;
  const double noise = params.noise_var >= 0.0 ? params.noise_var : 1e-6 * signal;

  // k_t: correlation of the two tasks on configurations both have measured.
  std::vector<double> shared_source, shared_target;
  for (std::size_t row = 0; row < target_sample.row_count(); ++row) {
    if (auto src_row = source.find_row(target_sample.config(row))) {
      shared_source.push_back(source.perf(*src_row));
      shared_target.push_back(target_sample.perf(row));
    }
  }
  if (shared_source.size() >= 2) {
    try {
      model.k_t_ = pearson(shared_source, shared_target);
    } catch (const ComputeError&) {
      model.k_t_ = 0.0;  // constant perf on the shared set carries no signal
    }
  }

  const std::size_t n_s = source.row_count();
  const std::size_t n_t = target_sample.row_count();
  const std::size_t n = n_s + n_t;
  model.n_source_ = n_s;
  model.train_inputs_.reserve(n);
  for (std::size_t row = 0; row < n_s; ++row) {
    model.train_inputs_.push_back(normalize_config(*model.schema_, source.config(row)));
  }
  for (std::size_t row = 0; row < n_t; ++row) {
    model.train_inputs_.push_back(normalize_config(*model.schema_, target_sample.config(row)));
  }

  Eigen::VectorXd y(n);
  for (std::size_t row = 0; row < n_s; ++row) y(static_cast<Eigen::Index>(row)) = source.perf(row);
  for (std::size_t row = 0; row < n_t; ++row) {
    y(static_cast<Eigen::Index>(n_s + row)) = target_sample.perf(row);
  }
  model.prior_mean_ = y.mean();

  const double inv_2l2 = 1.0 / (2.0 * params.length_scale * params.length_scale);
  Eigen::MatrixXd kernel(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double k = signal * std::exp(-squared_distance(model.train_inputs_[i],
                                                     model.train_inputs_[j]) * inv_2l2);
      const bool cross = (i < n_s) != (j < n_s);
      if (cross) k *= model.k_t_;
      kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k;
      kernel(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = k;
    }
  }

  const Eigen::VectorXd centered = y.array() - model.prior_mean_;
  double jitter = noise > 0.0 ? noise : 1e-12 * signal;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::MatrixXd regularized = kernel;
    regularized.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(regularized);
    if (llt.info() == Eigen::Success) {
      const Eigen::VectorXd alpha = llt.solve(centered);
      model.alpha_.assign(alpha.data(), alpha.data() + alpha.size());
      return model;
    }
    jitter *= 10.0;
  }
  throw ComputeError("GP transfer: kernel matrix is not positive definite even after jitter");
}

double GpTransferModel::predict(const Configuration& config) const {
  const std::vector<double> z = normalize_config(*schema_, config);
  const double inv_2l2 = 1.0 / (2.0 * length_scale_ * length_scale_);
  double acc = 0.0;
  for (std::size_t i = 0; i < train_inputs_.size(); ++i) {
    double k = signal_var_ * std::exp(-squared_distance(z, train_inputs_[i]) * inv_2l2);
    if (i < n_source_) k *= k_t_;  // test point lives on the target task
    acc += k * alpha_[i];
  }
  return prior_mean_ + acc;
}

std::vector<double> GpTransferModel::predict(const std::vector<Configuration>& configs) const {
  std::vector<double> out(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) out[i] = predict(configs[i]);
  return out;
}

MethodResult jamshidi_gp_transfer(const MeasurementTable& source, const MeasurementTable& target,
                                  int n_pairs, const GpParams& params, std::uint64_t rng_seed) {
  if (n_pairs <= 0) n_pairs = 3 * static_cast<int>(source.schema()->size());
  std::vector<std::size_t> shared;  // rows of `target` also measured in source
  for (std::size_t row = 0; row < target.row_count(); ++row) {
    if (source.find_row(target.config(row))) shared.push_back(row);
  }
  if (shared.size() < static_cast<std::size_t>(n_pairs)) {
    throw ValidationError("GP transfer: only " + std::to_string(shared.size()) +
                          " configurations are measured in both '" + source.env().name + "' and '" +
                          target.env().name + "', needs " + std::to_string(n_pairs));
  }
  Rng rng(rng_seed);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_pairs); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(shared.size() - i));
    std::swap(shared[i], shared[j]);
  }
  shared.resize(static_cast<std::size_t>(n_pairs));
  std::sort(shared.begin(), shared.end());
  const MeasurementTable target_sample = target.subset(shared);

  const GpTransferModel model = GpTransferModel::fit(source, target_sample, params);
  const std::vector<double> predictions = model.predict(target.configs());

  const bool minimize = target.objective() == Objective::kMinimize;
  std::size_t best_index = 0;
  for (std::size_t row = 1; row < predictions.size(); ++row) {
    if (minimize ? predictions[row] < predictions[best_index]
                 : predictions[row] > predictions[best_index]) {
      best_index = row;
    }
  }

  MethodResult result;
  result.chosen = target.config(best_index);
  result.chosen_index = best_index;
  result.predicted = predictions[best_index];
  result.nar = nar_at(target, best_index);
  result.source_measurements = static_cast<long>(source.row_count());
  result.target_measurements = n_pairs;
  return result;
}

}  // namespace beetle
