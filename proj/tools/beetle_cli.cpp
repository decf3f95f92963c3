/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "beetle/beetle.h"

namespace {

constexpr size_t kErrCap = 1024;

struct CommunityDeleter {
  void operator()(beetle_community* c) const { beetle_community_free(c); }
};
struct DiscoveryDeleter {
  void operator()(beetle_discovery* d) const { beetle_discovery_free(d); }
};
using CommunityPtr = std::unique_ptr<beetle_community, CommunityDeleter>;
using DiscoveryPtr = std::unique_ptr<beetle_discovery, DiscoveryDeleter>;

int report_failure(beetle_status status, const char* err) {
  std::fprintf(stderr, "error: %s\n", err);
  return static_cast<int>(status);
}

CommunityPtr load_or_exit(const std::string& manifest, int& exit_code) {
  char err[kErrCap] = {0};
  beetle_community* raw = nullptr;
  const beetle_status status = beetle_community_load(manifest.c_str(), &raw, err, kErrCap);
  if (status != BEETLE_OK) {
    exit_code = report_failure(status, err);
    return nullptr;
  }
  exit_code = 0;
  return CommunityPtr(raw);
}

void print_and_free(char* text) {
  if (!text) return;
  std::fputs(text, stdout);
  beetle_string_free(text);
}

struct RacingFlags {
  double frac_start;
  double frac_step;
  std::int64_t budget;
  int lives;
  int repeats_per_round;

  void attach(CLI::App* cmd, double default_start, double default_step) {
    frac_start = default_start;
    frac_step = default_step;
    budget = 0;
    lives = 5;
    repeats_per_round = 5;
    cmd->add_option("--frac-start", frac_start, "initial sampling fraction");
    cmd->add_option("--frac-step", frac_step, "per-round fraction increment");
    cmd->add_option("--budget", budget, "total measurement budget (0 = all source rows)");
    cmd->add_option("--lives", lives, "stalled rounds allowed before stopping");
    cmd->add_option("--racing-repeats", repeats_per_round, "tree refits per source per round");
  }

  void fill(beetle_racing_options* options) const {
    beetle_racing_options_init(options);
    options->initial_fraction = frac_start;
    options->fraction_step = frac_step;
    options->budget = budget;
    options->lives = lives;
    options->repeats_per_round = repeats_per_round;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bellwether discovery and configuration transfer across environments"};
  app.require_subcommand(1);
  char err[kErrCap] = {0};

  // generate
  auto* generate = app.add_subcommand("generate", "write a synthetic community to --out");
  beetle_synth_options synth;
  beetle_synth_options_init(&synth);
  std::string gen_out;
  std::uint64_t gen_seed = 1;
  generate->add_option("--out", gen_out, "output directory")->required();
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--envs", synth.n_sources, "number of source environments");
  generate->add_option("--targets", synth.n_targets, "number of target environments");
  generate->add_option("--binary", synth.n_binary_options, "number of binary options");
  generate->add_option("--rows", synth.rows_per_env, "measured rows per environment");

  // discover
  auto* discover = app.add_subcommand("discover", "race the sources to find bellwether(s)");
  std::string disc_manifest, disc_out;
  std::uint64_t disc_seed = 1;
  RacingFlags disc_flags;
  discover->add_option("--manifest", disc_manifest, "community manifest path")->required();
  discover->add_option("--seed", disc_seed, "run seed");
  discover->add_option("--out", disc_out, "also write the rounds table CSV here");
  disc_flags.attach(discover, 0.10, 0.10);

  // transfer
  auto* transfer = app.add_subcommand("transfer", "predict best configurations for targets");
  std::string tr_manifest, tr_target, tr_bellwether;
  std::uint64_t tr_seed = 1;
  RacingFlags tr_flags;
  transfer->add_option("--manifest", tr_manifest, "community manifest path")->required();
  transfer->add_option("--target", tr_target, "target environment (default: all group-2 targets)");
  transfer->add_option("--bellwether", tr_bellwether,
                       "use this environment instead of running discovery");
  transfer->add_option("--seed", tr_seed, "run seed");
  tr_flags.attach(transfer, 0.10, 0.10);

  // rq1..rq4
  struct ProtocolCmd {
    CLI::App* cmd = nullptr;
    std::string manifest;
    std::string out = ".";
    int repeats = 30;
    std::uint64_t seed = 1;
    RacingFlags flags;
  };
  ProtocolCmd protocols[4];
  const char* names[4] = {"rq1", "rq2", "rq3", "rq4"};
  const char* descriptions[4] = {
      "exhaustive round-robin source ranking",
      "racing discovery vs the 100% bellwether",
      "win/loss sweep against the non-transfer optimizer",
      "method shoot-out: bellwether transfer vs baselines"};
  for (int i = 0; i < 4; ++i) {
    ProtocolCmd& p = protocols[i];
    p.cmd = app.add_subcommand(names[i], descriptions[i]);
    p.cmd->add_option("--manifest", p.manifest, "community manifest path")->required();
    p.cmd->add_option("--out", p.out, "directory for result CSVs");
    p.cmd->add_option("--repeats", p.repeats, "repeated runs per measurement");
    p.cmd->add_option("--seed", p.seed, "base seed");
    // rq2 reproduces the fine-grained 1% schedule by default.
    p.flags.attach(p.cmd, i == 1 ? 0.01 : 0.10, i == 1 ? 0.01 : 0.10);
  }

  // report
  auto* report = app.add_subcommand("report", "render a result CSV as an aligned table");
  std::string report_in;
  report->add_option("csv", report_in, "result CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage or help text
    return e.get_name() == "CallForHelp" ? 0 : 1;
  }

  if (*generate) {
    synth.seed = gen_seed;
    const beetle_status status = beetle_generate(&synth, gen_out.c_str(), err, kErrCap);
    if (status != BEETLE_OK) return report_failure(status, err);
    std::printf("wrote community to %s\n", gen_out.c_str());
    return 0;
  }

  if (*discover) {
    int exit_code = 0;
    CommunityPtr community = load_or_exit(disc_manifest, exit_code);
    if (!community) return exit_code;
    beetle_racing_options options;
    disc_flags.fill(&options);
    beetle_discovery* raw = nullptr;
    beetle_status status = beetle_discover(community.get(), &options, disc_seed, &raw, err, kErrCap);
    if (status != BEETLE_OK) return report_failure(status, err);
    DiscoveryPtr discovery(raw);
    char* text = nullptr;
    status = beetle_discovery_report(discovery.get(), &text, err, kErrCap);
    if (status != BEETLE_OK) return report_failure(status, err);
    print_and_free(text);
    std::printf("percent_rows_used: %.2f\n",
                beetle_discovery_percent_rows(discovery.get(), community.get()));
    if (!disc_out.empty()) {
      status = beetle_discovery_write_csv(discovery.get(), disc_out.c_str(), err, kErrCap);
      if (status != BEETLE_OK) return report_failure(status, err);
    }
    return 0;
  }

  if (*transfer) {
    int exit_code = 0;
    CommunityPtr community = load_or_exit(tr_manifest, exit_code);
    if (!community) return exit_code;
    DiscoveryPtr discovery;
    if (tr_bellwether.empty()) {
      beetle_racing_options options;
      tr_flags.fill(&options);
      beetle_discovery* raw = nullptr;
      const beetle_status status =
          beetle_discover(community.get(), &options, tr_seed, &raw, err, kErrCap);
      if (status != BEETLE_OK) return report_failure(status, err);
      discovery.reset(raw);
    }
    char* text = nullptr;
    const beetle_status status = beetle_transfer(
        community.get(), discovery.get(), tr_bellwether.empty() ? nullptr : tr_bellwether.c_str(),
        tr_target.empty() ? nullptr : tr_target.c_str(), tr_seed, &text, err, kErrCap);
    if (status != BEETLE_OK) return report_failure(status, err);
    print_and_free(text);
    return 0;
  }

  for (int i = 0; i < 4; ++i) {
    ProtocolCmd& p = protocols[i];
    if (!*p.cmd) continue;
    int exit_code = 0;
    CommunityPtr community = load_or_exit(p.manifest, exit_code);
    if (!community) return exit_code;
    beetle_experiment_options options;
    beetle_experiment_options_init(&options);
    options.repeats = p.repeats;
    options.seed = p.seed;
    p.flags.fill(&options.racing);
    char* text = nullptr;
    using Runner = beetle_status (*)(const beetle_community*, const beetle_experiment_options*,
                                     const char*, char**, char*, size_t);
    static constexpr Runner runners[4] = {beetle_run_rq1, beetle_run_rq2, beetle_run_rq3,
                                          beetle_run_rq4};
    const beetle_status status =
        runners[i](community.get(), &options, p.out.c_str(), &text, err, kErrCap);
    if (status != BEETLE_OK) return report_failure(status, err);
    print_and_free(text);
    return 0;
  }

  if (*report) {
    char* text = nullptr;
    const beetle_status status = beetle_render_csv(report_in.c_str(), &text, err, kErrCap);
    if (status != BEETLE_OK) return report_failure(status, err);
    print_and_free(text);
    return 0;
  }

  return 0;
}
