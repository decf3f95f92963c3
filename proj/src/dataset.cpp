/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace beetle {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_token(const std::string& text, const std::string& what) {
  if (text.empty()) throw ValidationError(what + " must be non-empty");
  if (text.find_first_of(",\"\n\r") != std::string::npos) {
    throw ValidationError(what + " '" + text + "' contains a comma, quote, or newline");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, const std::string& context) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError(context + ": cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

OptionSchema OptionSchema::create(std::vector<Option> options) {
  if (options.empty()) throw ValidationError("schema must declare at least one option");
  OptionSchema schema;
  for (std::size_t i = 0; i < options.size(); ++i) {
    Option& opt = options[i];
    check_token(opt.name, "option name");
    if (schema.index_.count(opt.name)) {
      throw ValidationError("duplicate option name '" + opt.name + "'");
    }
    if (opt.kind == OptionKind::kCategorical) {
      if (opt.levels.size() < 2) {
        throw ValidationError("categorical option '" + opt.name + "' needs at least 2 levels");
      }
      for (const auto& level : opt.levels) check_token(level, "level of option '" + opt.name + "'");
      std::vector<std::string> sorted = opt.levels;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ValidationError("categorical option '" + opt.name + "' has duplicate levels");
      }
      opt.min = 0.0;
      opt.max = static_cast<double>(opt.levels.size() - 1);
    } else {
      if (!std::isfinite(opt.min) || !std::isfinite(opt.max)) {
        throw ValidationError("numeric option '" + opt.name + "' has a non-finite bound");
      }
      if (opt.min > opt.max) {
        throw ValidationError("numeric option '" + opt.name + "' has min > max");
      }
    }
    schema.index_.emplace(opt.name, i);
  }
  schema.options_ = std::move(options);
  return schema;
}

std::optional<std::size_t> OptionSchema::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool OptionSchema::value_in_domain(std::size_t option_index, double value) const {
  const Option& opt = options_[option_index];
  if (!std::isfinite(value)) return false;
  if (opt.kind == OptionKind::kCategorical) {
    return value == std::floor(value) && value >= 0.0 &&
           value < static_cast<double>(opt.levels.size());
  }
  return value >= opt.min && value <= opt.max;
}

double OptionSchema::normalize(std::size_t option_index, double value) const {
  const Option& opt = options_[option_index];
  if (opt.max == opt.min) return 0.0;
  return (value - opt.min) / (opt.max - opt.min);
}

bool OptionSchema::operator==(const OptionSchema& other) const {
  if (options_.size() != other.options_.size()) return false;
  for (std::size_t i = 0; i < options_.size(); ++i) {
    const Option& a = options_[i];
    const Option& b = other.options_[i];
    if (a.name != b.name || a.kind != b.kind || a.min != b.min || a.max != b.max ||
        a.levels != b.levels) {
      return false;
    }
  }
  return true;
}

std::uint64_t config_hash(const Configuration& c) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ c.values.size();
  for (double v : c.values) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    h = Rng::mix(h, bits);
  }
  return h;
}

MeasurementTable::MeasurementTable(EnvironmentId env, std::shared_ptr<const OptionSchema> schema,
                                   std::vector<Configuration> configs, std::vector<double> perf,
                                   Objective objective, std::string units)
    : env_(std::move(env)),
      schema_(std::move(schema)),
      configs_(std::move(configs)),
      perf_(std::move(perf)),
      objective_(objective),
      units_(std::move(units)) {
  if (!schema_) throw ValidationError("measurement table requires a schema");
  if (configs_.size() != perf_.size()) {
    throw ValidationError("environment '" + env_.name + "': config/perf column length mismatch");
  }
  if (perf_.empty()) {
    throw ValidationError("environment '" + env_.name + "' has no measurement rows");
  }
  min_perf_ = perf_[0];
  max_perf_ = perf_[0];
  for (std::size_t row = 0; row < perf_.size(); ++row) {
    if (configs_[row].values.size() != schema_->size()) {
      throw ValidationError("environment '" + env_.name + "' row " + std::to_string(row + 1) +
                            ": expected " + std::to_string(schema_->size()) + " option values, got " +
                            std::to_string(configs_[row].values.size()));
    }
    if (!std::isfinite(perf_[row])) {
      throw ValidationError("environment '" + env_.name + "' row " + std::to_string(row + 1) +
                            ": non-finite performance value");
    }
    min_perf_ = std::min(min_perf_, perf_[row]);
    max_perf_ = std::max(max_perf_, perf_[row]);
  }
  degenerate_ = (min_perf_ == max_perf_);
}

void MeasurementTable::build_row_index() const {
  if (!row_index_.empty() || configs_.empty()) return;
  row_index_.reserve(configs_.size() * 2);
  for (std::size_t row = 0; row < configs_.size(); ++row) {
    row_index_.emplace(config_hash(configs_[row]), row);
  }
}

std::optional<std::size_t> MeasurementTable::find_row(const Configuration& c) const {
  build_row_index();
  auto [lo, hi] = row_index_.equal_range(config_hash(c));
  for (auto it = lo; it != hi; ++it) {
    if (configs_[it->second] == c) return it->second;
  }
  // Hash collisions between distinct configs fall back to a scan.
  for (std::size_t row = 0; row < configs_.size(); ++row) {
    if (configs_[row] == c) return row;
  }
  return std::nullopt;
}

MeasurementTable MeasurementTable::subset(const std::vector<std::size_t>& rows) const {
  std::vector<Configuration> configs;
  std::vector<double> perf;
  configs.reserve(rows.size());
  perf.reserve(rows.size());
  for (std::size_t row : rows) {
    configs.push_back(configs_[row]);
    perf.push_back(perf_[row]);
  }
  return MeasurementTable(env_, schema_, std::move(configs), std::move(perf), objective_, units_);
}

OptimumRow true_optimum(const MeasurementTable& table) {
  OptimumRow best;
  best.index = 0;
  best.perf = table.perf(0);
  const bool minimize = table.objective() == Objective::kMinimize;
  for (std::size_t row = 1; row < table.row_count(); ++row) {
    const double p = table.perf(row);
    if (minimize ? p < best.perf : p > best.perf) {
      best.index = row;
      best.perf = p;
    }
  }
  best.config = table.config(best.index);
  best.degenerate = table.degenerate();
  return best;
}

std::size_t sample_size_for(std::size_t row_count, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw ValidationError("sample fraction must lie in (0, 1], got " + format_double(fraction));
  }
  const double exact = fraction * static_cast<double>(row_count);
  auto k = static_cast<std::size_t>(std::floor(exact + 0.5));
  k = std::max<std::size_t>(k, 1);
  return std::min(k, row_count);
}

MeasurementTable sample_rows(const MeasurementTable& table, double fraction,
                             std::uint64_t rng_seed) {
  const std::size_t k = sample_size_for(table.row_count(), fraction);
  Rng rng(rng_seed);
  std::vector<std::size_t> pool(table.row_count());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  // Partial Fisher-Yates: first k entries become the sample, in draw order.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return table.subset(pool);
}

const MeasurementTable* EnvironmentCommunity::find_env(std::string_view name) const {
  for (const auto& t : sources) {
    if (t.env().name == name) return &t;
  }
  for (const auto& t : targets) {
    if (t.env().name == name) return &t;
  }
  return nullptr;
}

std::size_t EnvironmentCommunity::total_source_rows() const {
  std::size_t total = 0;
  for (const auto& t : sources) total += t.row_count();
  return total;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(current);
      current.clear();
    } else if (ch != '\r') {
      current += ch;
    }
  }
  fields.push_back(current);
  return fields;
}

MeasurementTable load_table(const std::filesystem::path& csv_path, const EnvironmentId& env,
                            const std::shared_ptr<const OptionSchema>& schema,
                            Objective objective, const std::string& units) {
  std::ifstream in(csv_path);
  if (!in) {
    throw ValidationError("environment '" + env.name + "': cannot open measurement file '" +
                          csv_path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("environment '" + env.name + "': empty measurement file");
  }
  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header.back() != "perf") {
    throw ValidationError("environment '" + env.name + "': last CSV column must be 'perf'");
  }
  if (header.size() != schema->size() + 1) {
    throw ValidationError("environment '" + env.name + "': header has " +
                          std::to_string(header.size() - 1) + " option columns but the schema declares " +
                          std::to_string(schema->size()));
  }
  std::vector<std::size_t> column_to_option(header.size() - 1);
  std::vector<bool> seen(schema->size(), false);
  for (std::size_t col = 0; col + 1 < header.size(); ++col) {
    auto idx = schema->index_of(header[col]);
    if (!idx) {
      throw ValidationError("environment '" + env.name + "': CSV column '" + header[col] +
                            "' is not a schema option");
    }
    if (seen[*idx]) {
      throw ValidationError("environment '" + env.name + "': CSV column '" + header[col] +
                            "' appears twice");
    }
    seen[*idx] = true;
    column_to_option[col] = *idx;
  }

  std::vector<Configuration> configs;
  std::vector<double> perf;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> dedupe;
  std::size_t row_number = 1;  // header is line 1
  while (std::getline(in, line)) {
    ++row_number;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    const std::string where = "environment '" + env.name + "' row " + std::to_string(row_number);
    if (fields.size() != header.size()) {
      throw ValidationError(where + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
    }
    Configuration config;
    config.values.resize(schema->size());
    for (std::size_t col = 0; col + 1 < fields.size(); ++col) {
      const std::size_t opt_index = column_to_option[col];
      const Option& opt = schema->option(opt_index);
      double value;
      if (opt.kind == OptionKind::kCategorical) {
        auto it = std::find(opt.levels.begin(), opt.levels.end(), fields[col]);
        if (it == opt.levels.end()) {
          throw ValidationError(where + ": '" + fields[col] + "' is not a level of option '" +
                                opt.name + "'");
        }
        value = static_cast<double>(it - opt.levels.begin());
      } else {
        value = parse_double(fields[col], where + ", option '" + opt.name + "'");
        if (!schema->value_in_domain(opt_index, value)) {
          throw ValidationError(where + ": value " + fields[col] + " outside the domain of option '" +
                                opt.name + "'");
        }
      }
      config.values[opt_index] = value;
    }
    const double p = parse_double(fields.back(), where + ", perf");
    if (!std::isfinite(p)) {
      throw ValidationError(where + ": non-finite performance value");
    }
    const std::uint64_t h = config_hash(config);
    for (std::size_t prior : dedupe[h]) {
      if (configs[prior] == config) {
        throw ValidationError(where + ": duplicate configuration (first seen at row " +
                              std::to_string(prior + 2) + ")");
      }
    }
    dedupe[h].push_back(configs.size());
    configs.push_back(std::move(config));
    perf.push_back(p);
  }
  if (configs.size() < 2) {
    throw ValidationError("environment '" + env.name + "': needs at least 2 measurement rows, got " +
                          std::to_string(configs.size()));
  }
  return MeasurementTable(env, schema, std::move(configs), std::move(perf), objective, units);
}

Option parse_option(const ordered_json& node) {
  Option opt;
  opt.name = node.at("name").get<std::string>();
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "numeric") {
    opt.kind = OptionKind::kNumeric;
    opt.min = node.at("min").get<double>();
    opt.max = node.at("max").get<double>();
  } else if (kind == "categorical") {
    opt.kind = OptionKind::kCategorical;
    opt.levels = node.at("levels").get<std::vector<std::string>>();
  } else {
    throw ValidationError("option '" + opt.name + "': unknown kind '" + kind + "'");
  }
  return opt;
}

}  // namespace

EnvironmentCommunity load_community(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw ValidationError("cannot open manifest '" + manifest_path.string() + "'");
  }
  ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ValidationError("manifest '" + manifest_path.string() + "': " + e.what());
  }

  EnvironmentCommunity community;
  try {
    community.system = doc.at("system").get<std::string>();
    const std::string obj = doc.value("objective", std::string("minimize"));
    Objective objective;
    if (obj == "minimize") {
      objective = Objective::kMinimize;
    } else if (obj == "maximize") {
      objective = Objective::kMaximize;
    } else {
      throw ValidationError("objective must be 'minimize' or 'maximize', got '" + obj + "'");
    }

    std::vector<Option> options;
    for (const auto& node : doc.at("schema")) options.push_back(parse_option(node));
    community.schema = std::make_shared<OptionSchema>(OptionSchema::create(std::move(options)));

    const auto base_dir = manifest_path.parent_path();
    std::unordered_map<std::string, bool> names;
    for (const auto& node : doc.at("environments")) {
      EnvironmentId env;
      env.name = node.at("name").get<std::string>();
      env.hardware = node.value("hardware", std::string(""));
      env.workload = node.value("workload", std::string(""));
      env.version = node.value("version", std::string(""));
      check_token(env.name, "environment name");
      if (names.count(env.name)) {
        throw ValidationError("duplicate environment name '" + env.name + "'");
      }
      names.emplace(env.name, true);
      const std::string role = node.value("role", std::string("source"));
      if (role != "source" && role != "target") {
        throw ValidationError("environment '" + env.name + "': role must be 'source' or 'target'");
      }
      const std::string units = node.value("units", std::string(""));
      const auto csv_path = base_dir / node.at("csv").get<std::string>();
      MeasurementTable table = load_table(csv_path, env, community.schema, objective, units);
      if (role == "source") {
        community.sources.push_back(std::move(table));
      } else {
        community.targets.push_back(std::move(table));
      }
    }
  } catch (const ordered_json::exception& e) {
    throw ValidationError("manifest '" + manifest_path.string() + "': " + e.what());
  }
  if (community.sources.empty()) {
    throw ValidationError("manifest '" + manifest_path.string() + "' declares no source environments");
  }
  return community;
}

namespace {

void write_table_csv(const MeasurementTable& table, const std::filesystem::path& path) {
  const OptionSchema& schema = *table.schema();
  // Canonical column order: option names sorted, perf last.
  std::vector<std::size_t> order(schema.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return schema.option(a).name < schema.option(b).name;
  });

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ComputeError("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < order.size(); ++i) {
    out << schema.option(order[i]).name << ',';
  }
  out << "perf\n";
  for (std::size_t row = 0; row < table.row_count(); ++row) {
    const Configuration& c = table.config(row);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Option& opt = schema.option(order[i]);
      const double v = c.values[order[i]];
      if (opt.kind == OptionKind::kCategorical) {
        out << opt.levels[static_cast<std::size_t>(v)];
      } else {
        out << format_double(v);
      }
      out << ',';
    }
    out << format_double(table.perf(row)) << '\n';
  }
}

ordered_json schema_json(const OptionSchema& schema) {
  ordered_json arr = ordered_json::array();
  for (const Option& opt : schema.options()) {
    ordered_json node;
    node["name"] = opt.name;
    if (opt.kind == OptionKind::kCategorical) {
      node["kind"] = "categorical";
      node["levels"] = opt.levels;
    } else {
      node["kind"] = "numeric";
      node["min"] = opt.min;
      node["max"] = opt.max;
    }
    arr.push_back(std::move(node));
  }
  return arr;
}

}  // namespace

void save_community(const EnvironmentCommunity& community, const std::filesystem::path& out_dir) {
  if (!community.schema) throw ValidationError("community has no schema");
  std::filesystem::create_directories(out_dir);

  ordered_json doc;
  doc["system"] = community.system;
  Objective objective = Objective::kMinimize;
  if (!community.sources.empty()) objective = community.sources.front().objective();
  doc["objective"] = objective == Objective::kMinimize ? "minimize" : "maximize";
  doc["schema"] = schema_json(*community.schema);

  ordered_json envs = ordered_json::array();
  auto add_env = [&](const MeasurementTable& table, const char* role) {
    ordered_json node;
    node["name"] = table.env().name;
    node["hardware"] = table.env().hardware;
    node["workload"] = table.env().workload;
    node["version"] = table.env().version;
    node["role"] = role;
    node["units"] = table.units();
    node["csv"] = table.env().name + ".csv";
    envs.push_back(std::move(node));
    write_table_csv(table, out_dir / (table.env().name + ".csv"));
  };
  for (const auto& t : community.sources) add_env(t, "source");
  for (const auto& t : community.targets) add_env(t, "target");
  doc["environments"] = std::move(envs);

  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) throw ComputeError("cannot write '" + (out_dir / "manifest.json").string() + "'");
  out << doc.dump(2) << '\n';
}

}  // namespace beetle
