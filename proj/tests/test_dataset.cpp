#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "dataset.hpp"
#include "errors.hpp"
#include "synthetic.hpp"
#include "test_support.hpp"

using namespace beetle;
using namespace beetle::testing;

namespace {

// A well-formed 2-env community over 4 binary options, 16 rows each.
void write_minimal_community(const std::filesystem::path& dir) {
  write_file(dir / "manifest.json", R"({
    "system": "mini",
    "objective": "minimize",
    "schema": [
      {"name": "a", "kind": "categorical", "levels": ["off", "on"]},
      {"name": "b", "kind": "categorical", "levels": ["off", "on"]},
      {"name": "c", "kind": "categorical", "levels": ["off", "on"]},
      {"name": "d", "kind": "categorical", "levels": ["off", "on"]}
    ],
    "environments": [
      {"name": "e1", "hardware": "h1", "workload": "w1", "version": "v1", "csv": "e1.csv"},
      {"name": "e2", "hardware": "h2", "workload": "w1", "version": "v1", "csv": "e2.csv"}
    ]
  })");
  for (const char* env : {"e1", "e2"}) {
    std::ostringstream csv;
    csv << "a,b,c,d,perf\n";
    for (int i = 0; i < 16; ++i) {
      csv << ((i >> 3) & 1 ? "on" : "off") << ',' << ((i >> 2) & 1 ? "on" : "off") << ','
          << ((i >> 1) & 1 ? "on" : "off") << ',' << (i & 1 ? "on" : "off") << ','
          << (10 + i) << '\n';
    }
    write_file(dir / (std::string(env) + ".csv"), csv.str());
  }
}

}  // namespace

TEST_CASE("minimal manifest loads with N=4 and two sources") {
  TempDir dir("dataset_min");
  write_minimal_community(dir.path());
  const EnvironmentCommunity community = load_community(dir.path() / "manifest.json");
  CHECK(community.schema->size() == 4);
  CHECK(community.sources.size() == 2);
  CHECK(community.targets.empty());
  CHECK(community.sources[0].env().name == "e1");
  CHECK(community.sources[0].row_count() == 16);
  CHECK(community.sources[0].objective() == Objective::kMinimize);
}

TEST_CASE("schema mismatch is reported with the environment name") {
  TempDir dir("dataset_mismatch");
  write_minimal_community(dir.path());
  // Second table gains a fifth option column the schema does not declare.
  std::ostringstream csv;
  csv << "a,b,c,d,extra,perf\n";
  csv << "on,on,on,on,off,1\noff,off,off,off,on,2\n";
  write_file(dir.path() / "e2.csv", csv.str());
  CHECK_THROWS_WITH_AS(load_community(dir.path() / "manifest.json"),
                       doctest::Contains("e2"), ValidationError);
}

TEST_CASE("ingestion errors carry environment and row number") {
  TempDir dir("dataset_err");
  write_minimal_community(dir.path());

  SUBCASE("duplicate configuration") {
    write_file(dir.path() / "e1.csv",
               "a,b,c,d,perf\non,on,on,on,1\noff,on,on,on,2\non,on,on,on,3\n");
    CHECK_THROWS_WITH_AS(load_community(dir.path() / "manifest.json"),
                         doctest::Contains("row 4"), ValidationError);
  }
  SUBCASE("non-finite perf") {
    write_file(dir.path() / "e1.csv", "a,b,c,d,perf\non,on,on,on,inf\noff,on,on,on,2\n");
    CHECK_THROWS_AS(load_community(dir.path() / "manifest.json"), ValidationError);
  }
  SUBCASE("unknown categorical level") {
    write_file(dir.path() / "e1.csv", "a,b,c,d,perf\nmaybe,on,on,on,1\noff,on,on,on,2\n");
    CHECK_THROWS_WITH_AS(load_community(dir.path() / "manifest.json"),
                         doctest::Contains("e1"), ValidationError);
  }
  SUBCASE("missing manifest") {
    CHECK_THROWS_AS(load_community(dir.path() / "nope.json"), ValidationError);
  }
  SUBCASE("single-row table rejected") {
    write_file(dir.path() / "e1.csv", "a,b,c,d,perf\non,on,on,on,1\n");
    CHECK_THROWS_WITH_AS(load_community(dir.path() / "manifest.json"),
                         doctest::Contains("at least 2"), ValidationError);
  }
}

TEST_CASE("schema invariants are enforced at creation") {
  CHECK_THROWS_AS(OptionSchema::create({}), ValidationError);
  Option dup;
  dup.name = "x";
  dup.kind = OptionKind::kNumeric;
  dup.max = 1.0;
  CHECK_THROWS_AS(OptionSchema::create({dup, dup}), ValidationError);
  Option one_level;
  one_level.name = "c";
  one_level.kind = OptionKind::kCategorical;
  one_level.levels = {"only"};
  CHECK_THROWS_AS(OptionSchema::create({one_level}), ValidationError);
  Option bad_range;
  bad_range.name = "r";
  bad_range.kind = OptionKind::kNumeric;
  bad_range.min = 2.0;
  bad_range.max = 1.0;
  CHECK_THROWS_AS(OptionSchema::create({bad_range}), ValidationError);
  // A constant numeric option (min == max) is allowed.
  Option constant;
  constant.name = "k";
  constant.kind = OptionKind::kNumeric;
  constant.min = 5.0;
  constant.max = 5.0;
  CHECK(OptionSchema::create({constant}).option(0).is_constant());
}

TEST_CASE("synthetic community round-trips losslessly through save/load") {
  CommunitySpec spec = planted_default_spec(11, 4, 1, 6, 40);
  const EnvironmentCommunity original = generate(spec);

  TempDir first("dataset_rt1");
  TempDir second("dataset_rt2");
  save_community(original, first.path());
  const EnvironmentCommunity reloaded = load_community(first.path() / "manifest.json");
  save_community(reloaded, second.path());

  for (const auto& entry : std::filesystem::directory_iterator(first.path())) {
    const auto name = entry.path().filename();
    CAPTURE(name.string());
    CHECK(read_file(entry.path()) == read_file(second.path() / name));
  }

  REQUIRE(reloaded.sources.size() == original.sources.size());
  REQUIRE(reloaded.targets.size() == original.targets.size());
  for (std::size_t i = 0; i < original.sources.size(); ++i) {
    const MeasurementTable& a = original.sources[i];
    const MeasurementTable& b = reloaded.sources[i];
    REQUIRE(a.row_count() == b.row_count());
    for (std::size_t row = 0; row < a.row_count(); ++row) {
      CHECK(a.config(row) == b.config(row));
      CHECK(a.perf(row) == b.perf(row));
    }
  }
}

TEST_CASE("true_optimum picks the extremal row with first-index ties") {
  auto schema = binary_schema(2);
  SUBCASE("minimize returns the lowest latency row") {
    const MeasurementTable table =
        make_table("sqlite_like", schema, {{0, 0}, {0, 1}, {1, 1}}, {100.0, 150.0, 400.0});
    const OptimumRow best = true_optimum(table);
    CHECK(best.index == 0);
    CHECK(best.perf == 100.0);
    CHECK_FALSE(best.degenerate);
  }
  SUBCASE("maximize flips the direction") {
    const MeasurementTable table =
        make_table("t", schema, {{0, 0}, {0, 1}, {1, 1}}, {100.0, 150.0, 400.0},
                   Objective::kMaximize);
    CHECK(true_optimum(table).index == 2);
  }
  SUBCASE("all-equal perf is degenerate and returns the first row") {
    const MeasurementTable table =
        make_table("t", schema, {{0, 0}, {0, 1}, {1, 1}}, {5.0, 5.0, 5.0});
    const OptimumRow best = true_optimum(table);
    CHECK(best.index == 0);
    CHECK(best.degenerate);
  }
  SUBCASE("random table matches a linear scan") {
    const MeasurementTable table = random_table("r", 3, 50, 99);
    const OptimumRow best = true_optimum(table);
    std::size_t expected = 0;
    for (std::size_t row = 1; row < table.row_count(); ++row) {
      if (table.perf(row) < table.perf(expected)) expected = row;
    }
    CHECK(best.index == expected);
  }
}

TEST_CASE("sample_rows sizes, determinism, and coverage") {
  const MeasurementTable big = random_table("big", 2, 1000, 7);
  CHECK(sample_rows(big, 0.10, 1).row_count() == 100);

  const MeasurementTable table = random_table("t", 2, 50, 8);
  SUBCASE("fraction 1.0 returns every row, order aside") {
    const MeasurementTable full = sample_rows(table, 1.0, 3);
    REQUIRE(full.row_count() == table.row_count());
    std::multiset<double> a(full.perf().begin(), full.perf().end());
    std::multiset<double> b(table.perf().begin(), table.perf().end());
    CHECK(a == b);
  }
  SUBCASE("same seed, same rows") {
    const MeasurementTable s1 = sample_rows(table, 0.3, 42);
    const MeasurementTable s2 = sample_rows(table, 0.3, 42);
    REQUIRE(s1.row_count() == s2.row_count());
    for (std::size_t i = 0; i < s1.row_count(); ++i) {
      CHECK(s1.config(i) == s2.config(i));
      CHECK(s1.perf(i) == s2.perf(i));
    }
  }
  SUBCASE("samples are subsets of the parent table") {
    const MeasurementTable s = sample_rows(table, 0.5, 5);
    for (std::size_t i = 0; i < s.row_count(); ++i) {
      CHECK(table.find_row(s.config(i)).has_value());
    }
  }
  SUBCASE("union over 100 seeds covers the whole table at f=0.5") {
    std::set<std::size_t> covered;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const MeasurementTable s = sample_rows(table, 0.5, seed);
      for (std::size_t i = 0; i < s.row_count(); ++i) {
        covered.insert(*table.find_row(s.config(i)));
      }
    }
    CHECK(covered.size() == table.row_count());
  }
  SUBCASE("rounding is half-up with a floor of one row") {
    CHECK(sample_size_for(10, 0.05) == 1);  // 0.5 rounds up
    CHECK(sample_size_for(10, 0.04) == 1);  // floor kicks in
    CHECK(sample_size_for(10, 0.25) == 3);  // 2.5 -> 3
    CHECK(sample_size_for(3, 1.0) == 3);
    CHECK_THROWS_AS(sample_size_for(10, 0.0), ValidationError);
    CHECK_THROWS_AS(sample_size_for(10, 1.5), ValidationError);
  }
}

TEST_CASE("degenerate tables are flagged, not rejected") {
  auto schema = binary_schema(1);
  const MeasurementTable table = make_table("d", schema, {{0}, {1}}, {3.0, 3.0});
  CHECK(table.degenerate());
}

TEST_CASE("find_row distinguishes configurations exactly") {
  const MeasurementTable table = random_table("f", 4, 30, 12);
  for (std::size_t row = 0; row < table.row_count(); ++row) {
    CHECK(table.find_row(table.config(row)) == row);
  }
  Configuration absent;
  absent.values = {2.0, 2.0, 2.0, 2.0};  // outside U[0,1) draws
  CHECK_FALSE(table.find_row(absent).has_value());
}
