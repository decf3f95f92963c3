// Shared helpers for the unit suites.
#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "rng.hpp"

namespace beetle::testing {

// Self-cleaning unique temp directory.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("beetle_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::shared_ptr<const OptionSchema> binary_schema(int n) {
  std::vector<Option> options;
  for (int i = 0; i < n; ++i) {
    Option opt;
    opt.name = "o" + std::to_string(i);
    opt.kind = OptionKind::kCategorical;
    opt.levels = {"off", "on"};
    options.push_back(std::move(opt));
  }
  return std::make_shared<OptionSchema>(OptionSchema::create(std::move(options)));
}

inline std::shared_ptr<const OptionSchema> numeric_schema(int n, double lo = 0.0,
                                                          double hi = 1.0) {
  std::vector<Option> options;
  for (int i = 0; i < n; ++i) {
    Option opt;
    opt.name = "x" + std::to_string(i);
    opt.kind = OptionKind::kNumeric;
    opt.min = lo;
    opt.max = hi;
    options.push_back(std::move(opt));
  }
  return std::make_shared<OptionSchema>(OptionSchema::create(std::move(options)));
}

inline MeasurementTable make_table(const std::string& name,
                                   std::shared_ptr<const OptionSchema> schema,
                                   std::vector<std::vector<double>> config_values,
                                   std::vector<double> perf,
                                   Objective objective = Objective::kMinimize) {
  std::vector<Configuration> configs;
  configs.reserve(config_values.size());
  for (auto& values : config_values) configs.push_back(Configuration{std::move(values)});
  return MeasurementTable(EnvironmentId{name, "h", "w", "v"}, std::move(schema),
                          std::move(configs), std::move(perf), objective);
}

// Random table over a numeric schema with distinct configs; perf ~ U[0, 100).
inline MeasurementTable random_table(const std::string& name, int n_options, int rows,
                                     std::uint64_t seed) {
  auto schema = numeric_schema(n_options);
  Rng rng(seed);
  std::vector<std::vector<double>> configs;
  std::vector<double> perf;
  for (int r = 0; r < rows; ++r) {
    std::vector<double> values(static_cast<std::size_t>(n_options));
    for (auto& v : values) v = rng.next_double();
    configs.push_back(std::move(values));
    perf.push_back(100.0 * rng.next_double());
  }
  return make_table(name, schema, std::move(configs), std::move(perf));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace beetle::testing
