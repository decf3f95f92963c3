/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "beetle/beetle.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "dataset.hpp"
#include "discovery.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "report.hpp"
#include "synthetic.hpp"

using namespace beetle;

struct beetle_community {
  EnvironmentCommunity impl;
};

struct beetle_discovery {
  DiscoveryResult impl;
};

namespace {

void set_error(char* err, size_t err_cap, const char* message) {
  if (!err || err_cap == 0) return;
  std::strncpy(err, message, err_cap - 1);
  err[err_cap - 1] = '\0';
}

// Runs fn, translating exceptions into status codes + error buffer.
template <typename Fn>
beetle_status guarded(char* err, size_t err_cap, Fn&& fn) {
  try {
    fn();
    return BEETLE_OK;
  } catch (const ValidationError& e) {
    set_error(err, err_cap, e.what());
    return BEETLE_E_VALIDATION;
  } catch (const std::exception& e) {
    set_error(err, err_cap, e.what());
    return BEETLE_E_RUNTIME;
  }
}

char* dup_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out) std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

RacingConfig to_racing_config(const beetle_racing_options* options) {
  RacingConfig config;
  if (!options) return config;
  config.initial_fraction = options->initial_fraction;
  config.fraction_step = options->fraction_step;
  config.budget = static_cast<long>(options->budget);
  config.lives = options->lives;
  config.repeats_per_round = options->repeats_per_round;
  config.tree.min_samples_leaf = options->min_samples_leaf;
  if (options->max_depth >= 0) config.tree.max_depth = options->max_depth;
  config.sk.n_boot = options->bootstrap_resamples;
  config.sk.confidence = options->confidence;
  config.sk.effect_threshold = options->effect_threshold;
  return config;
}

}  // namespace

extern "C" {

const char* beetle_version(void) { return "1.0.0"; }

void beetle_string_free(char* text) { std::free(text); }

beetle_status beetle_community_load(const char* manifest_path, beetle_community** out,
                                    char* err, size_t err_cap) {
  if (!manifest_path || !out) {
    set_error(err, err_cap, "manifest path and output handle must be non-NULL");
    return BEETLE_E_VALIDATION;
  }
  *out = nullptr;
  return guarded(err, err_cap, [&] {
    auto handle = new beetle_community{load_community(manifest_path)};
    *out = handle;
  });
}

void beetle_community_free(beetle_community* community) { delete community; }

int32_t beetle_community_source_count(const beetle_community* community) {
  return community ? static_cast<int32_t>(community->impl.sources.size()) : 0;
}

int32_t beetle_community_target_count(const beetle_community* community) {
  return community ? static_cast<int32_t>(community->impl.targets.size()) : 0;
}

int32_t beetle_community_option_count(const beetle_community* community) {
  if (!community || !community->impl.schema) return 0;
  return static_cast<int32_t>(community->impl.schema->size());
}

const char* beetle_community_env_name(const beetle_community* community, int32_t group,
                                      int32_t index) {
  if (!community || index < 0) return nullptr;
  const auto& tables = group == 0 ? community->impl.sources : community->impl.targets;
  if (static_cast<std::size_t>(index) >= tables.size()) return nullptr;
  return tables[static_cast<std::size_t>(index)].env().name.c_str();
}

int64_t beetle_community_row_count(const beetle_community* community, const char* env_name) {
  if (!community || !env_name) return -1;
  const MeasurementTable* table = community->impl.find_env(env_name);
  return table ? static_cast<int64_t>(table->row_count()) : -1;
}

beetle_status beetle_community_save(const beetle_community* community, const char* out_dir,
                                    char* err, size_t err_cap) {
  if (!community || !out_dir) {
    set_error(err, err_cap, "community and output directory must be non-NULL");
    return BEETLE_E_VALIDATION;
  }
  return guarded(err, err_cap, [&] { save_community(community->impl, out_dir); });
}

void beetle_synth_options_init(beetle_synth_options* options) {
  if (!options) return;
  options->n_sources = 8;
  options->n_targets = 3;
  options->n_binary_options = 10;
  options->rows_per_env = 500;
  options->seed = 1;
}

beetle_status beetle_generate(const beetle_synth_options* options, const char* out_dir,
                              char* err, size_t err_cap) {
  if (!options || !out_dir) {
    set_error(err, err_cap, "options and output directory must be non-NULL");
    return BEETLE_E_VALIDATION;
  }
  return guarded(err, err_cap, [&] {
    const CommunitySpec spec =
        planted_default_spec(options->seed, options->n_sources, options->n_targets,
                             options->n_binary_options, options->rows_per_env);
    save_community(generate(spec), out_dir);
  });
}

void beetle_racing_options_init(beetle_racing_options* options) {
  if (!options) return;
  options->initial_fraction = 0.10;
  options->fraction_step = 0.10;
  options->budget = 0;
  options->lives = 5;
  options->repeats_per_round = 5;
  options->min_samples_leaf = 2;
  options->max_depth = -1;
  options->bootstrap_resamples = 1000;
  options->confidence = 0.95;
  options->effect_threshold = 0.6;
}

beetle_status beetle_discover(const beetle_community* community,
                              const beetle_racing_options* options, uint64_t seed,
                              beetle_discovery** out, char* err, size_t err_cap) {
  if (!community || !out) {
    set_error(err, err_cap, "community and output handle must be non-NULL");
    return BEETLE_E_VALIDATION;
  }
  *out = nullptr;
  return guarded(err, err_cap, [&] {
    auto handle = new beetle_discovery{
        find_bellwether(community->impl, to_racing_config(options), seed)};
    *out = handle;
  });
}

void beetle_discovery_free(beetle_discovery* discovery) { delete discovery; }

int32_t beetle_discovery_bellwether_count(const beetle_discovery* discovery) {
  return discovery ? static_cast<int32_t>(discovery->impl.bellwethers.size()) : 0;
}

const char* beetle_discovery_bellwether_name(const beetle_discovery* discovery, int32_t index) {
  if (!discovery || index < 0 ||
      static_cast<std::size_t>(index) >= discovery->impl.bellwethers.size()) {
    return nullptr;
  }
  return discovery->impl.bellwethers[static_cast<std::size_t>(index)].name.c_str();
}

int64_t beetle_discovery_cost(const beetle_discovery* discovery) {
  return discovery ? static_cast<int64_t>(discovery->impl.cost) : 0;
}

int32_t beetle_discovery_round_count(const beetle_discovery* discovery) {
  return discovery ? static_cast<int32_t>(discovery->impl.rounds.size()) : 0;
}

const char* beetle_discovery_termination(const beetle_discovery* discovery) {
  return discovery ? to_string(discovery->impl.termination) : "unknown";
}

double beetle_discovery_percent_rows(const beetle_discovery* discovery,
                                     const beetle_community* community) {
  if (!discovery || !community) return 0.0;
  return discovery->impl.percent_of_rows(community->impl);
}

beetle_status beetle_discovery_report(const beetle_discovery* discovery, char** out_text,
                                      char* err, size_t err_cap) {
  if (!discovery || !out_text) {
    set_error(err, err_cap, "discovery and output pointer must be non-NULL");
    return BEETLE_E_VALIDATION;
  }
  return guarded(err, err_cap, [&] { *out_text = dup_string(discovery->impl.report()); });
}

beetle_status beetle_discovery_write_csv(const beetle_discovery* discovery, const char* path,
                                         char* err, size_t err_cap) {
  if (!discovery || !path) {
    set_error(err, err_cap, "discovery and path must be non-NULL");
    return BEETLE_E_VALIDATION;
  }
  return guarded(err, err_cap, [&] {
    discovery_csv(discovery->impl, "beetle discover").write(path);
  });
}

beetle_status beetle_transfer(const beetle_community* community,
                              const beetle_discovery* discovery, const char* bellwether,
                              const char* target_env, uint64_t seed, char** out_text,
                              char* err, size_t err_cap) {
  if (!community || !out_text) {
    set_error(err, err_cap, "community and output pointer must be non-NULL");
    return BEETLE_E_VALIDATION;
  }
  return guarded(err, err_cap, [&] {
    const EnvironmentCommunity& impl = community->impl;
    std::vector<EnvironmentId> bellwethers;
    if (bellwether) {
      const MeasurementTable* table = impl.find_env(bellwether);
      if (!table) {
        throw ValidationError("unknown bellwether environment '" + std::string(bellwether) + "'");
      }
      bellwethers.push_back(table->env());
    } else if (discovery) {
      bellwethers = discovery->impl.bellwethers;
    } else {
      throw ValidationError("transfer needs a discovery handle or an explicit bellwether name");
    }

    std::vector<const MeasurementTable*> targets;
    if (target_env) {
      const MeasurementTable* table = impl.find_env(target_env);
      if (!table) {
        throw ValidationError("unknown target environment '" + std::string(target_env) + "'");
      }
      targets.push_back(table);
    } else {
      for (const auto& t : impl.targets) targets.push_back(&t);
      if (targets.empty()) {
        throw ValidationError("community has no target environments; pass a target name");
      }
    }

    CsvDoc doc;
    doc.comment = "beetle transfer system=" + impl.system + " seed=" + std::to_string(seed);
    doc.columns = {"target", "bellwether", "predicted", "nar", "configuration"};
    for (const MeasurementTable* target : targets) {
      const TransferOutcome outcome = transfer(bellwethers, impl, target->configs(),
                                               target->objective(), seed, TreeParams{});
      std::string config_text;
      const OptionSchema& schema = *impl.schema;
      for (std::size_t i = 0; i < schema.size(); ++i) {
        if (i > 0) config_text += ' ';
        const Option& opt = schema.option(i);
        config_text += opt.name + "=";
        const double v = outcome.chosen.values[i];
        config_text += opt.kind == OptionKind::kCategorical
                           ? opt.levels[static_cast<std::size_t>(v)]
                           : format_double(v);
      }
      doc.rows.push_back({target->env().name, outcome.bellwether,
                          format_double(outcome.predicted),
                          format_double(nar_at(*target, outcome.chosen_index).value),
                          config_text});
    }
    *out_text = dup_string(render_table(doc));
  });
}

void beetle_experiment_options_init(beetle_experiment_options* options) {
  if (!options) return;
  options->repeats = 30;
  options->seed = 1;
  beetle_racing_options_init(&options->racing);
}

}  // extern "C"

namespace {

beetle_status run_protocol(const beetle_community* community,
                           const beetle_experiment_options* options, const char* out_dir,
                           char** out_text, char* err, size_t err_cap, int which) {
  if (!community || !options || !out_dir || !out_text) {
    set_error(err, err_cap, "community, options, out_dir, and out_text must be non-NULL");
    return BEETLE_E_VALIDATION;
  }
  return guarded(err, err_cap, [&] {
    const EnvironmentCommunity& impl = community->impl;
    const RacingConfig racing = to_racing_config(&options->racing);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    std::string text;
    switch (which) {
      case 1: {
        const Rq1Result r = run_rq1(impl, options->repeats, options->seed, racing.tree);
        r.csv.write(dir / "rq1.csv");
        text = render_table(r.csv);
        break;
      }
      case 2: {
        const Rq2Result r = run_rq2(impl, racing, options->repeats, options->seed);
        r.csv.write(dir / "rq2.csv");
        text = render_table(r.csv);
        break;
      }
      case 3: {
        const Rq3Result r = run_rq3(impl, default_rq3_fractions(), options->repeats,
                                    options->seed, racing);
        r.csv.write(dir / "rq3.csv");
        text = render_table(r.csv);
        break;
      }
      case 4: {
        const Rq4Result r = run_rq4(impl, options->repeats, options->seed, racing);
        r.csv.write(dir / "rq4.csv");
        r.cost_csv.write(dir / "rq4_cost.csv");
        text = render_table(r.csv) + "\n" + render_table(r.cost_csv);
        break;
      }
      default: throw ComputeError("unknown protocol");
    }
    *out_text = dup_string(text);
  });
}

}  // namespace

extern "C" {

beetle_status beetle_run_rq1(const beetle_community* community,
                             const beetle_experiment_options* options, const char* out_dir,
                             char** out_text, char* err, size_t err_cap) {
  return run_protocol(community, options, out_dir, out_text, err, err_cap, 1);
}

beetle_status beetle_run_rq2(const beetle_community* community,
                             const beetle_experiment_options* options, const char* out_dir,
                             char** out_text, char* err, size_t err_cap) {
  return run_protocol(community, options, out_dir, out_text, err, err_cap, 2);
}

beetle_status beetle_run_rq3(const beetle_community* community,
                             const beetle_experiment_options* options, const char* out_dir,
                             char** out_text, char* err, size_t err_cap) {
  return run_protocol(community, options, out_dir, out_text, err, err_cap, 3);
}

beetle_status beetle_run_rq4(const beetle_community* community,
                             const beetle_experiment_options* options, const char* out_dir,
                             char** out_text, char* err, size_t err_cap) {
  return run_protocol(community, options, out_dir, out_text, err, err_cap, 4);
}

beetle_status beetle_render_csv(const char* csv_path, char** out_text, char* err,
                                size_t err_cap) {
  if (!csv_path || !out_text) {
    set_error(err, err_cap, "csv path and output pointer must be non-NULL");
    return BEETLE_E_VALIDATION;
  }
  return guarded(err, err_cap, [&] {
    *out_text = dup_string(render_table(CsvDoc::read(csv_path)));
  });
}

}  // extern "C"
