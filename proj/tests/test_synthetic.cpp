#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "discovery.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "stats.hpp"
#include "synthetic.hpp"
#include "test_support.hpp"

using namespace beetle;
using namespace beetle::testing;

TEST_CASE("identical spec and seed generate byte-identical communities") {
  const CommunitySpec spec = planted_default_spec(99, 5, 2, 8, 120);
  TempDir a("synth_a");
  TempDir b("synth_b");
  save_community(generate(spec), a.path());
  save_community(generate(spec), b.path());
  for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
    const auto name = entry.path().filename();
    CAPTURE(name.string());
    CHECK(read_file(entry.path()) == read_file(b.path() / name));
  }
}

TEST_CASE("two exact copies of the base surface have identical perf columns") {
  CommunitySpec spec;
  spec.n_binary = 6;
  spec.rows_per_env = 50;
  spec.base_surface_seed = 3;
  spec.sources = {{RelatednessMode::kAffine, 1.0, 0.0, 0.0},
                  {RelatednessMode::kAffine, 1.0, 0.0, 0.0}};
  const EnvironmentCommunity community = generate(spec);
  REQUIRE(community.sources.size() == 2);
  CHECK(community.sources[0].perf() == community.sources[1].perf());
}

TEST_CASE("positive affine environments preserve the planted argmin") {
  CommunitySpec spec;
  spec.n_binary = 8;
  spec.rows_per_env = 200;
  spec.base_surface_seed = 4;
  spec.sources = {{RelatednessMode::kAffine, 1.0, 0.0, 0.0},
                  {RelatednessMode::kAffine, 3.5, -20.0, 0.0},
                  {RelatednessMode::kAffine, 0.25, 400.0, 0.0}};
  const EnvironmentCommunity community = generate(spec);
  const std::size_t planted_argmin = true_optimum(community.sources[0]).index;
  for (std::size_t i = 1; i < community.sources.size(); ++i) {
    CHECK(true_optimum(community.sources[i]).index == planted_argmin);
  }
}

TEST_CASE("monotone warp preserves the argmin ordering") {
  CommunitySpec spec;
  spec.n_binary = 8;
  spec.rows_per_env = 150;
  spec.base_surface_seed = 8;
  spec.sources = {{RelatednessMode::kAffine, 1.0, 0.0, 0.0},
                  {RelatednessMode::kMonotoneWarp, 1.0, 0.0, 0.0}};
  const EnvironmentCommunity community = generate(spec);
  CHECK(true_optimum(community.sources[1]).index ==
        true_optimum(community.sources[0]).index);
}

TEST_CASE("shuffled environments decorrelate from the base surface") {
  double total_abs_correlation = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CommunitySpec spec;
    spec.n_binary = 9;
    spec.rows_per_env = 400;
    spec.base_surface_seed = 1000 + seed;
    spec.sources = {{RelatednessMode::kAffine, 1.0, 0.0, 0.0},
                    {RelatednessMode::kShuffled, 1.0, 0.0, 0.0}};
    const EnvironmentCommunity community = generate(spec);
    total_abs_correlation += std::abs(
        pearson(community.sources[0].perf(), community.sources[1].perf()));
  }
  CHECK(total_abs_correlation / 100.0 < 0.3);
}

TEST_CASE("independent-noise sources transfer no better than the bellwether") {
  std::vector<double> planted_nars, noise_nars;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CommunitySpec spec = planted_default_spec(3000 + seed, 4, 1, 8, 200);
    spec.sources.push_back({RelatednessMode::kIndependentNoise, 1.0, 0.0, 0.0});
    const EnvironmentCommunity community = generate(spec);
    const MeasurementTable& target = community.targets[0];
    const MeasurementTable& planted = community.sources[0];
    const MeasurementTable& noise = community.sources.back();
    const TransferOutcome from_planted =
        transfer_from_table(planted, target.configs(), target.objective(), TreeParams{});
    const TransferOutcome from_noise =
        transfer_from_table(noise, target.configs(), target.objective(), TreeParams{});
    planted_nars.push_back(nar_at(target, from_planted.chosen_index).value);
    noise_nars.push_back(nar_at(target, from_noise.chosen_index).value);
  }
  CHECK(median(noise_nars) >= median(planted_nars));
}

TEST_CASE("planted environment lands in rank 1 of the exhaustive round-robin") {
  // Near-tied clean derivatives occasionally edge the planted source out of
  // the top group; the claim is statistical, not per-seed.
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const EnvironmentCommunity community =
        generate(planted_default_spec(7 + seed, 8, 0, 10, 300));
    const Rq1Result rq1 = run_rq1(community, 10, 7 + seed);
    hits += rq1.ranking.rank_of(community.sources[0].env().name) == 1 ? 1 : 0;
  }
  CHECK(hits >= 4);
}

TEST_CASE("generator validates its spec") {
  CommunitySpec spec;
  spec.sources = {{RelatednessMode::kAffine, 1.0, 0.0, 0.0}};
  spec.n_binary = 3;
  spec.rows_per_env = 9;  // 2^3 = 8 < 9: infeasible
  CHECK_THROWS_AS(generate(spec), ValidationError);

  CommunitySpec no_planted;
  no_planted.sources = {{RelatednessMode::kShuffled, 1.0, 0.0, 0.0}};
  CHECK_THROWS_AS(generate(no_planted), ValidationError);

  CommunitySpec empty;
  CHECK_THROWS_AS(generate(empty), ValidationError);
}

TEST_CASE("generated communities flow through the standard ingestion path") {
  const CommunitySpec spec = planted_default_spec(17, 3, 1, 5, 30);
  TempDir dir("synth_ingest");
  save_community(generate(spec), dir.path());
  const EnvironmentCommunity loaded = load_community(dir.path() / "manifest.json");
  CHECK(loaded.sources.size() == 3);
  CHECK(loaded.targets.size() == 1);
  CHECK(loaded.schema->size() == 5);
  CHECK(loaded.system == "planted");
}
