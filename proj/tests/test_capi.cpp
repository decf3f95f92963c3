// Exercises libbeetle strictly through its public C surface.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "beetle/beetle.h"

namespace {

constexpr size_t kErrCap = 512;

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("beetle_capi_" + tag + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string str(const char* child = nullptr) const {
    return child ? (path / child).string() : path.string();
  }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

}  // namespace

TEST_CASE("version string is present") {
  CHECK(std::strlen(beetle_version()) > 0);
}

TEST_CASE("loading a missing manifest reports a validation error") {
  char err[kErrCap] = {0};
  beetle_community* community = nullptr;
  const beetle_status status =
      beetle_community_load("/nonexistent/manifest.json", &community, err, kErrCap);
  CHECK(status == BEETLE_E_VALIDATION);
  CHECK(community == nullptr);
  CHECK(std::strstr(err, "manifest") != nullptr);
}

TEST_CASE("null arguments are rejected, not crashed on") {
  char err[kErrCap] = {0};
  CHECK(beetle_community_load(nullptr, nullptr, err, kErrCap) == BEETLE_E_VALIDATION);
  CHECK(beetle_generate(nullptr, nullptr, err, kErrCap) == BEETLE_E_VALIDATION);
  CHECK(beetle_render_csv(nullptr, nullptr, err, kErrCap) == BEETLE_E_VALIDATION);
  CHECK(beetle_community_source_count(nullptr) == 0);
  CHECK(beetle_discovery_bellwether_count(nullptr) == 0);
  beetle_community_free(nullptr);
  beetle_discovery_free(nullptr);
  beetle_string_free(nullptr);
}

TEST_CASE("generate, load, discover, and transfer through the C surface") {
  TempDir dir("full");
  char err[kErrCap] = {0};

  beetle_synth_options synth;
  beetle_synth_options_init(&synth);
  synth.n_sources = 5;
  synth.n_targets = 2;
  synth.n_binary_options = 8;
  synth.rows_per_env = 120;
  synth.seed = 11;
  REQUIRE(beetle_generate(&synth, dir.str().c_str(), err, kErrCap) == BEETLE_OK);
  REQUIRE(std::filesystem::exists(dir.path / "manifest.json"));

  beetle_community* community = nullptr;
  REQUIRE(beetle_community_load(dir.str("manifest.json").c_str(), &community, err, kErrCap) ==
          BEETLE_OK);
  REQUIRE(community != nullptr);
  CHECK(beetle_community_source_count(community) == 5);
  CHECK(beetle_community_target_count(community) == 2);
  CHECK(beetle_community_option_count(community) == 8);
  CHECK(beetle_community_env_name(community, 0, 0) != nullptr);
  CHECK(beetle_community_env_name(community, 0, 99) == nullptr);
  CHECK(beetle_community_row_count(community, beetle_community_env_name(community, 0, 0)) ==
        120);
  CHECK(beetle_community_row_count(community, "ghost") == -1);

  beetle_racing_options racing;
  beetle_racing_options_init(&racing);
  racing.repeats_per_round = 3;
  racing.bootstrap_resamples = 300;
  beetle_discovery* discovery = nullptr;
  REQUIRE(beetle_discover(community, &racing, 21, &discovery, err, kErrCap) == BEETLE_OK);
  REQUIRE(discovery != nullptr);
  CHECK(beetle_discovery_bellwether_count(discovery) >= 1);
  CHECK(beetle_discovery_bellwether_name(discovery, 0) != nullptr);
  CHECK(beetle_discovery_cost(discovery) > 0);
  CHECK(beetle_discovery_round_count(discovery) >= 1);
  const double percent = beetle_discovery_percent_rows(discovery, community);
  CHECK(percent > 0.0);
  CHECK(percent <= 100.0);
  const std::string termination = beetle_discovery_termination(discovery);
  CHECK((termination == "lives_exhausted" || termination == "budget_exhausted" ||
         termination == "no_more_eliminations"));

  char* report = nullptr;
  REQUIRE(beetle_discovery_report(discovery, &report, err, kErrCap) == BEETLE_OK);
  REQUIRE(report != nullptr);
  CHECK(std::strstr(report, "bellwethers:") != nullptr);
  beetle_string_free(report);

  const std::string rounds_csv = dir.str("rounds.csv");
  REQUIRE(beetle_discovery_write_csv(discovery, rounds_csv.c_str(), err, kErrCap) == BEETLE_OK);
  CHECK(slurp(rounds_csv).find("round,fraction") != std::string::npos);

  char* transfer_text = nullptr;
  REQUIRE(beetle_transfer(community, discovery, nullptr, nullptr, 31, &transfer_text, err,
                          kErrCap) == BEETLE_OK);
  REQUIRE(transfer_text != nullptr);
  CHECK(std::strstr(transfer_text, "target") != nullptr);
  beetle_string_free(transfer_text);

  SUBCASE("transfer accepts an explicit bellwether") {
    const char* name = beetle_community_env_name(community, 0, 0);
    char* text = nullptr;
    REQUIRE(beetle_transfer(community, nullptr, name, nullptr, 31, &text, err, kErrCap) ==
            BEETLE_OK);
    CHECK(std::strstr(text, name) != nullptr);
    beetle_string_free(text);
  }
  SUBCASE("transfer without discovery or bellwether is a validation error") {
    char* text = nullptr;
    CHECK(beetle_transfer(community, nullptr, nullptr, nullptr, 31, &text, err, kErrCap) ==
          BEETLE_E_VALIDATION);
  }
  SUBCASE("unknown names are validation errors") {
    char* text = nullptr;
    CHECK(beetle_transfer(community, discovery, "ghost", nullptr, 31, &text, err, kErrCap) ==
          BEETLE_E_VALIDATION);
    CHECK(beetle_transfer(community, discovery, nullptr, "ghost", 31, &text, err, kErrCap) ==
          BEETLE_E_VALIDATION);
    CHECK(std::strstr(err, "ghost") != nullptr);
  }

  beetle_discovery_free(discovery);
  beetle_community_free(community);
}

TEST_CASE("save round-trips byte-identically through the C surface") {
  TempDir first("rt1");
  TempDir second("rt2");
  char err[kErrCap] = {0};

  beetle_synth_options synth;
  beetle_synth_options_init(&synth);
  synth.n_sources = 3;
  synth.n_targets = 1;
  synth.rows_per_env = 40;
  synth.n_binary_options = 6;
  synth.seed = 5;
  REQUIRE(beetle_generate(&synth, first.str().c_str(), err, kErrCap) == BEETLE_OK);

  beetle_community* community = nullptr;
  REQUIRE(beetle_community_load(first.str("manifest.json").c_str(), &community, err, kErrCap) ==
          BEETLE_OK);
  REQUIRE(beetle_community_save(community, second.str().c_str(), err, kErrCap) == BEETLE_OK);
  for (const auto& entry : std::filesystem::directory_iterator(first.path)) {
    CHECK(slurp(entry.path()) == slurp(second.path / entry.path().filename()));
  }
  beetle_community_free(community);
}

TEST_CASE("rq1 runs end to end through the C surface") {
  TempDir data("rq1data");
  TempDir out("rq1out");
  char err[kErrCap] = {0};

  beetle_synth_options synth;
  beetle_synth_options_init(&synth);
  synth.n_sources = 4;
  synth.n_targets = 1;
  synth.rows_per_env = 80;
  synth.n_binary_options = 8;
  synth.seed = 13;
  REQUIRE(beetle_generate(&synth, data.str().c_str(), err, kErrCap) == BEETLE_OK);
  beetle_community* community = nullptr;
  REQUIRE(beetle_community_load(data.str("manifest.json").c_str(), &community, err, kErrCap) ==
          BEETLE_OK);

  beetle_experiment_options options;
  beetle_experiment_options_init(&options);
  options.repeats = 5;
  options.seed = 17;
  options.racing.bootstrap_resamples = 300;
  char* text = nullptr;
  REQUIRE(beetle_run_rq1(community, &options, out.str().c_str(), &text, err, kErrCap) ==
          BEETLE_OK);
  REQUIRE(text != nullptr);
  CHECK(std::strstr(text, "rank") != nullptr);
  beetle_string_free(text);
  CHECK(std::filesystem::exists(out.path / "rq1.csv"));

  char* rendered = nullptr;
  REQUIRE(beetle_render_csv((out.path / "rq1.csv").string().c_str(), &rendered, err, kErrCap) ==
          BEETLE_OK);
  CHECK(std::strstr(rendered, "environment") != nullptr);
  beetle_string_free(rendered);

  beetle_community_free(community);
}

TEST_CASE("error buffers are truncated safely") {
  char tiny[8] = {0};
  beetle_community* community = nullptr;
  const beetle_status status =
      beetle_community_load("/definitely/not/there.json", &community, tiny, sizeof(tiny));
  CHECK(status == BEETLE_E_VALIDATION);
  CHECK(tiny[7] == '\0');
  CHECK(std::strlen(tiny) <= 7);
}
