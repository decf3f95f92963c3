/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace beetle {

enum class Objective { kMinimize, kMaximize };

enum class OptionKind { kNumeric, kCategorical };

// One configurable option. Numeric options carry a [min, max] range
// (min == max marks a constant); categorical options carry ordered level
// labels and are handled as level indices everywhere downstream.
struct Option {
  std::string name;
  OptionKind kind = OptionKind::kNumeric;
  double min = 0.0;
  double max = 0.0;
  std::vector<std::string> levels;

  bool is_constant() const { return kind == OptionKind::kNumeric && min == max; }
  std::size_t level_count() const { return levels.size(); }
};

// Ordered, validated option list. Immutable once created.
class OptionSchema {
 public:
  static OptionSchema create(std::vector<Option> options);

  std::size_t size() const { return options_.size(); }
  const Option& option(std::size_t i) const { return options_[i]; }
  const std::vector<Option>& options() const { return options_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool value_in_domain(std::size_t option_index, double value) const;

  // Min-max maps a value into [0, 1]; constants map to 0.
  double normalize(std::size_t option_index, double value) const;

  bool operator==(const OptionSchema& other) const;

 private:
  OptionSchema() = default;
  std::vector<Option> options_;
  std::unordered_map<std::string, std::size_t> index_;
};

// A complete option assignment. Categorical entries hold the level index.
struct Configuration {
  std::vector<double> values;

  bool operator==(const Configuration& other) const = default;
};

std::uint64_t config_hash(const Configuration& c);

struct EnvironmentId {
  std::string name;
  std::string hardware;
  std::string workload;
  std::string version;

  bool operator==(const EnvironmentId& other) const = default;
};

// All measured (configuration, performance) rows of one environment.
// Immutable after construction; cheap to copy row subsets out of.
class MeasurementTable {
 public:
  MeasurementTable(EnvironmentId env, std::shared_ptr<const OptionSchema> schema,
                   std::vector<Configuration> configs, std::vector<double> perf,
                   Objective objective = Objective::kMinimize, std::string units = "");

  const EnvironmentId& env() const { return env_; }
  const std::shared_ptr<const OptionSchema>& schema() const { return schema_; }
  std::size_t row_count() const { return perf_.size(); }
  const Configuration& config(std::size_t row) const { return configs_[row]; }
  const std::vector<Configuration>& configs() const { return configs_; }
  double perf(std::size_t row) const { return perf_[row]; }
  const std::vector<double>& perf() const { return perf_; }
  Objective objective() const { return objective_; }
  const std::string& units() const { return units_; }

  // All rows share one perf value; NAR's denominator would vanish.
  bool degenerate() const { return degenerate_; }

  double min_perf() const { return min_perf_; }
  double max_perf() const { return max_perf_; }

  std::optional<std::size_t> find_row(const Configuration& c) const;

  MeasurementTable subset(const std::vector<std::size_t>& rows) const;

 private:
  EnvironmentId env_;
  std::shared_ptr<const OptionSchema> schema_;
  std::vector<Configuration> configs_;
  std::vector<double> perf_;
  Objective objective_;
  std::string units_;
  bool degenerate_ = false;
  double min_perf_ = 0.0;
  double max_perf_ = 0.0;
  mutable std::unordered_map<std::uint64_t, std::size_t> row_index_;
  void build_row_index() const;
};

struct OptimumRow {
  std::size_t index = 0;
  Configuration config;
  double perf = 0.0;
  bool degenerate = false;
};

// Ground-truth best row under the table's objective; ties break to the
// lowest row index. Degenerate tables yield row 0 with the flag set.
OptimumRow true_optimum(const MeasurementTable& table);

// Uniform sample without replacement of round(fraction * rows) rows
// (half-up, floored at 1). Deterministic per seed.
MeasurementTable sample_rows(const MeasurementTable& table, double fraction,
                             std::uint64_t rng_seed);

std::size_t sample_size_for(std::size_t row_count, double fraction);

// One system's measured environments, split into candidate sources
// (group 1) and transfer targets (group 2).
struct EnvironmentCommunity {
  std::string system;
  std::shared_ptr<const OptionSchema> schema;
  std::vector<MeasurementTable> sources;
  std::vector<MeasurementTable> targets;

  const MeasurementTable* find_env(std::string_view name) const;
  std::size_t total_source_rows() const;
};

// Manifest + per-environment CSV ingestion. Every invariant is checked;
// violations raise ValidationError naming the environment and row.
EnvironmentCommunity load_community(const std::filesystem::path& manifest_path);

// Canonical writer: manifest.json plus one CSV per environment, columns
// sorted by option name, floats in shortest round-trip form. save/load/save
// is byte-identical.
void save_community(const EnvironmentCommunity& community,
                    const std::filesystem::path& out_dir);

std::string format_double(double v);
double parse_double(std::string_view text, const std::string& context);

}  // namespace beetle
