#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "baselines.hpp"
#include "errors.hpp"
#include "metrics.hpp"
#include "stats.hpp"
#include "discovery.hpp"
#include "synthetic.hpp"
#include "test_support.hpp"

using namespace beetle;
using namespace beetle::testing;

namespace {

MeasurementTable affine_of(const MeasurementTable& table, double a, double b,
                           const std::string& name) {
  std::vector<std::vector<double>> configs;
  for (const auto& c : table.configs()) configs.push_back(c.values);
  std::vector<double> perf;
  for (double y : table.perf()) perf.push_back(a * y + b);
  return make_table(name, table.schema(), std::move(configs), std::move(perf),
                    table.objective());
}

// Spearman rank correlation with average ranks; 0 when either side is flat.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  try {
    return pearson(ranks(xs), ranks(ys));
  } catch (const ComputeError&) {
    return 0.0;  // one side constant
  }
}

}  // namespace

TEST_CASE("nair with full information and a memorizing tree is exact") {
  const MeasurementTable target = random_table("t", 3, 40, 21);
  TreeParams memorize;
  memorize.min_samples_leaf = 1;
  const MethodResult result = nair_non_transfer(target, 1.0, 5, memorize);
  CHECK(result.nar.value == 0.0);
  CHECK(result.target_measurements == 40);
  CHECK(result.source_measurements == 0);
}

TEST_CASE("nair with a single sampled row degenerates to the tie rule") {
  const MeasurementTable target = random_table("t", 3, 20, 22);
  const MethodResult result = nair_non_transfer(target, 0.04, 9, TreeParams{});
  // One training row: the model is constant, so every candidate ties and the
  // lowest index wins.
  CHECK(result.target_measurements == 1);
  CHECK(result.chosen_index == 0);
  CHECK(result.nar.value == nar_at(target, 0).value);
}

TEST_CASE("nair median NAR weakly improves with the sampling fraction") {
  const EnvironmentCommunity community = generate(planted_default_spec(5, 2, 0, 8, 250));
  const MeasurementTable& target = community.sources[0];  // the clean surface
  std::vector<double> fractions, medians;
  for (int f = 1; f <= 10; ++f) {
    const double fraction = static_cast<double>(f) / 10.0;
    std::vector<double> nars;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      nars.push_back(nair_non_transfer(target, fraction, 900 + seed * 7, TreeParams{}).nar.value);
    }
    fractions.push_back(fraction);
    medians.push_back(median(nars));
  }
  CHECK(spearman(medians, fractions) <= 0.0);
}

TEST_CASE("linear transfer recovers exact affine maps") {
  const LinearTransferModel line = fit_linear_transfer({1, 2, 3, 4}, {7, 9, 11, 13});
  CHECK(line.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(line.intercept == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_linear_transfer({3, 3, 3}, {1, 2, 3}), ComputeError);
  CHECK_THROWS_AS(fit_linear_transfer({1}, {2}), ValidationError);
}

TEST_CASE("sobol row selection returns distinct in-range rows") {
  const MeasurementTable table = random_table("s", 4, 60, 31);
  const std::vector<std::size_t> rows = sobol_select_rows(table, 25);
  REQUIRE(rows.size() == 25);
  std::set<std::size_t> unique(rows.begin(), rows.end());
  CHECK(unique.size() == rows.size());
  for (std::size_t row : rows) CHECK(row < table.row_count());
  CHECK_THROWS_AS(sobol_select_rows(table, 61), ValidationError);
}

TEST_CASE("valov recovers an exact affine source-target relation") {
  // Exactly T*N rows, so the Sobol selection takes the whole table and a
  // min_samples_leaf=1 tree memorizes it.
  const MeasurementTable source = random_table("src", 3, 9, 41);
  const MeasurementTable target = affine_of(source, 2.0, 5.0, "tgt");
  ValovParams params;
  params.training_coefficient = 3;
  params.tree.min_samples_leaf = 1;
  const MethodResult result = valov_transfer(source, target, params, 17);
  CHECK(result.nar.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(result.chosen_index == true_optimum(target).index);
  CHECK(result.target_measurements == 9);  // n_pairs defaults to T*N
  CHECK(result.source_measurements == 9);

  SUBCASE("the fitted line itself is exact") {
    // Route the check through the tree: predictions on pair configs are the
    // measured source perfs, so the line must be y = 2x + 5.
    std::vector<double> xs, ys;
    for (std::size_t row = 0; row < source.row_count(); ++row) {
      xs.push_back(source.perf(row));
      ys.push_back(target.perf(row));
    }
    const LinearTransferModel line = fit_linear_transfer(xs, ys);
    CHECK(std::abs(line.slope - 2.0) < 1e-9);
    CHECK(std::abs(line.intercept - 5.0) < 1e-9);
  }
}

TEST_CASE("valov pays exactly n_pairs more than a bellwether transfer") {
  // Same source, same target: the transfer consumes no target rows, the
  // linear-transfer baseline consumes its pairing sample on top of the same
  // source table.
  const EnvironmentCommunity community = generate(planted_default_spec(46, 3, 1, 8, 120));
  const MeasurementTable& source = community.sources[0];
  const MeasurementTable& target = community.targets[0];

  ValovParams params;
  params.n_pairs = 20;
  const MethodResult valov = valov_transfer(source, target, params, 9);
  const TransferOutcome beetle =
      transfer({source.env()}, community, target.configs(), target.objective(), 9, TreeParams{});

  CHECK(beetle.target_measurements == 0);
  CHECK(valov.target_measurements == 20);
  CHECK(valov.source_measurements == beetle.source_measurements);
  const long valov_total = valov.source_measurements + valov.target_measurements;
  const long beetle_total = beetle.source_measurements + beetle.target_measurements;
  CHECK(valov_total - beetle_total == params.n_pairs);
}

TEST_CASE("valov error paths") {
  SUBCASE("constant source predictions are a degenerate regression") {
    auto schema = numeric_schema(2);
    std::vector<std::vector<double>> configs;
    std::vector<double> perf;
    Rng rng(5);
    for (int i = 0; i < 6; ++i) {
      configs.push_back({rng.next_double(), rng.next_double()});
      perf.push_back(4.0);  // constant
    }
    const MeasurementTable source =
        make_table("src", schema, std::move(configs), std::move(perf));
    const MeasurementTable target = affine_of(source, 1.0, 1.0, "tgt");
    ValovParams params;
    CHECK_THROWS_AS(valov_transfer(source, target, params, 1), ComputeError);
  }
  SUBCASE("too few rows for T*N") {
    const MeasurementTable source = random_table("src", 3, 8, 43);  // needs 9
    const MeasurementTable target = affine_of(source, 1.0, 0.0, "tgt");
    CHECK_THROWS_AS(valov_transfer(source, target, ValovParams{}, 1), ValidationError);
  }
  SUBCASE("too few shared configurations") {
    const MeasurementTable source = random_table("src", 3, 12, 44);
    const MeasurementTable target = random_table("tgt", 3, 12, 45);  // disjoint configs
    CHECK_THROWS_AS(valov_transfer(source, target, ValovParams{}, 1), ValidationError);
  }
}

TEST_CASE("gp transfer on an identical source and target") {
  const MeasurementTable source = random_table("src", 3, 20, 51);
  GpParams params;
  const GpTransferModel model = GpTransferModel::fit(source, source, params);
  CHECK(std::abs(model.k_t() - 1.0) < 1e-9);
  // An identical target duplicates every training input across the two task
  // blocks, so the joint kernel is near-singular; the posterior still has to
  // track the measurements closely.
  for (std::size_t row = 0; row < source.row_count(); ++row) {
    CHECK(model.predict(source.config(row)) ==
          doctest::Approx(source.perf(row)).epsilon(0.05));
  }
  // And the predicted ordering still finds the optimum.
  std::size_t best = 0;
  for (std::size_t row = 1; row < source.row_count(); ++row) {
    if (model.predict(source.config(row)) < model.predict(source.config(best))) best = row;
  }
  CHECK(nar_at(source, best).value < 5.0);
}

TEST_CASE("gp posterior interpolates as noise variance vanishes") {
  const MeasurementTable source = random_table("src", 2, 10, 52);
  GpParams params;
  params.length_scale = 0.3;
  params.noise_var = 1e-12;
  const GpTransferModel model = GpTransferModel::fit(source, source, params);
  for (std::size_t row = 0; row < source.row_count(); ++row) {
    CHECK(std::abs(model.predict(source.config(row)) - source.perf(row)) < 1e-6);
  }
}

TEST_CASE("gp k_t matches the textbook Pearson formula on shared points") {
  const MeasurementTable source = random_table("src", 2, 10, 53);
  // Target sample shares all configs with fresh perf values.
  std::vector<std::vector<double>> configs;
  for (const auto& c : source.configs()) configs.push_back(c.values);
  Rng rng(54);
  std::vector<double> perf;
  for (std::size_t i = 0; i < source.row_count(); ++i) perf.push_back(rng.uniform(0, 50));
  const MeasurementTable target_sample =
      make_table("tgt", source.schema(), std::move(configs), std::move(perf));

  const GpTransferModel model = GpTransferModel::fit(source, target_sample, GpParams{});
  CHECK(model.k_t() ==
        doctest::Approx(pearson(source.perf(), target_sample.perf())).epsilon(1e-12));
}

TEST_CASE("gp handles perfect anticorrelation") {
  // Separable surface over binary options; target is its negation.
  auto schema = binary_schema(5);
  std::vector<std::vector<double>> configs;
  std::vector<double> perf;
  for (int i = 0; i < 32; ++i) {
    std::vector<double> values(5);
    for (int bit = 0; bit < 5; ++bit) values[static_cast<std::size_t>(bit)] = (i >> bit) & 1;
    configs.push_back(values);
    perf.push_back(10.0 + 7.0 * values[0] + 3.0 * values[1] + 1.5 * values[2]);
  }
  const MeasurementTable source = make_table("src", schema, configs, perf);
  std::vector<double> negated;
  for (double y : perf) negated.push_back(-y);
  const MeasurementTable target = make_table("tgt", schema, configs, negated);

  const MethodResult result = jamshidi_gp_transfer(source, target, 12, GpParams{}, 7);
  const GpTransferModel model =
      GpTransferModel::fit(source, target, GpParams{});  // all rows shared
  CHECK(std::abs(model.k_t() + 1.0) < 1e-9);
  CHECK(result.chosen_index == true_optimum(target).index);
  CHECK(result.nar.value == 0.0);
  CHECK(result.source_measurements == 32);
  CHECK(result.target_measurements == 12);
}

TEST_CASE("gp requires enough shared configurations") {
  const MeasurementTable source = random_table("src", 3, 15, 55);
  const MeasurementTable target = random_table("tgt", 3, 15, 56);
  CHECK_THROWS_AS(jamshidi_gp_transfer(source, target, 5, GpParams{}, 1), ValidationError);
}
