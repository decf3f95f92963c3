/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "harness.hpp"

#include <algorithm>
#include <sstream>

#include "errors.hpp"
#include "rng.hpp"

namespace beetle {

namespace {

// Repeat 0 trains on the table as measured; later repeats refit on a
// bootstrap resample so repeated runs expose model variance.
MeasurementTable resample_for_repeat(const MeasurementTable& table, int repeat, Rng rng) {
  if (repeat == 0) return table;
  std::vector<std::size_t> rows(table.row_count());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = static_cast<std::size_t>(rng.below(table.row_count()));
  }
  return table.subset(rows);
}

std::string comment_head(const EnvironmentCommunity& community, const char* protocol,
                         int repeats, std::uint64_t seed) {
  std::ostringstream out;
  out << "beetle " << protocol << " system=" << community.system << " seed=" << seed
      << " repeats=" << repeats;
  return out.str();
}

std::string racing_comment(const RacingConfig& racing) {
  std::ostringstream out;
  out << " frac_start=" << format_double(racing.initial_fraction)
      << " frac_step=" << format_double(racing.fraction_step) << " lives=" << racing.lives
      << " budget=" << racing.budget << " racing_repeats=" << racing.repeats_per_round;
  return out.str();
}

MeasurementTable pool_table(const EnvironmentCommunity& community, const DiscoveryResult& result,
                            const std::string& env_name) {
  const MeasurementTable* table = community.find_env(env_name);
  if (!table) throw ComputeError("discovery returned unknown environment '" + env_name + "'");
  const auto it = result.pools.find(env_name);
  if (it == result.pools.end() || it->second.empty()) {
    throw ComputeError("discovery holds no sampled rows for '" + env_name + "'");
  }
  return table->subset(it->second);
}

}  // namespace

Rq1Result run_rq1(const EnvironmentCommunity& community, int repeats, std::uint64_t seed,
                  const TreeParams& tree) {
  if (community.sources.size() < 2) {
    throw ValidationError("round-robin ranking needs at least 2 source environments");
  }
  if (repeats < 1) throw ValidationError("repeats must be >= 1");

  Rng root(seed);
  std::vector<Treatment> treatments;
  for (std::size_t i = 0; i < community.sources.size(); ++i) {
    const MeasurementTable& source = community.sources[i];
    std::vector<const MeasurementTable*> others;
    for (std::size_t j = 0; j < community.sources.size(); ++j) {
      if (j != i) others.push_back(&community.sources[j]);
    }
    Treatment treatment;
    treatment.label = source.env().name;
    for (int repeat = 0; repeat < repeats; ++repeat) {
      const MeasurementTable train =
          resample_for_repeat(source, repeat, root.stream(i).stream(static_cast<std::uint64_t>(repeat)));
      for (const NarScore& score : score_source(train, others, tree)) {
        treatment.samples.push_back(score.value);
      }
    }
    treatments.push_back(std::move(treatment));
  }

  SkConfig sk;
  sk.seed = Rng::mix(seed, 0x5101ULL);
  Rq1Result result;
  result.ranking = scott_knott(treatments, sk);
  result.csv = ranked_groups_csv(result.ranking, comment_head(community, "rq1", repeats, seed),
                                 "environment");
  return result;
}

Rq2Result run_rq2(const EnvironmentCommunity& community, const RacingConfig& racing, int repeats,
                  std::uint64_t seed) {
  if (repeats < 1) throw ValidationError("repeats must be >= 1");
  Rng root(seed);

  // Reference: the bellwether set the exhaustive 100% protocol nominates.
  const Rq1Result exhaustive = run_rq1(community, repeats, Rng::mix(seed, 0xE0ULL), racing.tree);
  std::vector<EnvironmentId> full_set;
  for (const std::string& label : exhaustive.ranking.rank1_labels()) {
    full_set.push_back(community.find_env(label)->env());
  }

  Rq2Result result;
  result.exhaustive_rank1 = exhaustive.ranking.rank1_labels();

  std::vector<double> nar_full, nar_racing, deltas, percents;
  bool first = true;
  for (int repeat = 0; repeat < repeats; ++repeat) {
    const std::uint64_t repeat_seed = Rng::mix(seed, static_cast<std::uint64_t>(repeat));
    DiscoveryResult discovery = find_bellwether(community, racing, repeat_seed);
    percents.push_back(discovery.percent_of_rows(community));

    const EnvironmentId& race_pick = pick_bellwether(discovery.bellwethers, repeat_seed);
    const EnvironmentId& full_pick = pick_bellwether(full_set, repeat_seed);
    const MeasurementTable race_train = pool_table(community, discovery, race_pick.name);
    const MeasurementTable& full_train = *community.find_env(full_pick.name);

    // Evaluate both transfers on the same cells: the target group when it
    // exists, otherwise every source not used for training by either side.
    std::vector<const MeasurementTable*> eval;
    if (!community.targets.empty()) {
      for (const auto& t : community.targets) eval.push_back(&t);
    } else {
      for (const auto& t : community.sources) {
        if (t.env().name != race_pick.name && t.env().name != full_pick.name) {
          eval.push_back(&t);
        }
      }
    }
    if (eval.empty()) throw ValidationError("rq2 has no environments left to evaluate on");

    for (const MeasurementTable* target : eval) {
      const TransferOutcome race_out =
          transfer_from_table(race_train, target->configs(), target->objective(), racing.tree);
      const TransferOutcome full_out =
          transfer_from_table(full_train, target->configs(), target->objective(), racing.tree);
      const double race_nar = nar_at(*target, race_out.chosen_index).value;
      const double full_nar = nar_at(*target, full_out.chosen_index).value;
      nar_racing.push_back(race_nar);
      nar_full.push_back(full_nar);
      deltas.push_back(std::abs(full_nar - race_nar));
    }
    if (first) {
      result.discovery = std::move(discovery);
      first = false;
    }
  }

  result.median_nar_full = median(nar_full);
  result.iqr_nar_full = iqr(nar_full);
  result.median_nar_racing = median(nar_racing);
  result.iqr_nar_racing = iqr(nar_racing);
  result.median_delta = median(deltas);
  result.iqr_delta = iqr(deltas);
  result.median_percent_rows = median(percents);

  CsvDoc csv;
  csv.comment = comment_head(community, "rq2", repeats, seed) + racing_comment(racing);
  csv.columns = {"quantity", "median", "iqr"};
  csv.rows.push_back({"nar_100pct", format_double(result.median_nar_full),
                      format_double(result.iqr_nar_full)});
  csv.rows.push_back({"nar_findbellwether", format_double(result.median_nar_racing),
                      format_double(result.iqr_nar_racing)});
  csv.rows.push_back({"delta", format_double(result.median_delta),
                      format_double(result.iqr_delta)});
  csv.rows.push_back({"percent_rows_used", format_double(result.median_percent_rows), "0"});
  result.csv = std::move(csv);
  return result;
}

std::vector<double> default_rq3_fractions() {
  std::vector<double> fractions;
  for (int i = 1; i <= 10; ++i) fractions.push_back(static_cast<double>(i) / 10.0);
  return fractions;
}

Rq3Result run_rq3(const EnvironmentCommunity& community, const std::vector<double>& fractions,
                  int repeats, std::uint64_t seed, const RacingConfig& racing) {
  if (repeats < 1) throw ValidationError("repeats must be >= 1");
  if (fractions.empty()) throw ValidationError("rq3 needs at least one fraction");
  if (community.targets.empty()) {
    throw ValidationError("rq3 needs target environments (group 2) in the community");
  }

  // wins[f][t], losses[f][t]
  std::vector<std::vector<int>> wins(fractions.size(),
                                     std::vector<int>(community.targets.size(), 0));
  std::vector<std::vector<int>> losses = wins;

  for (int repeat = 0; repeat < repeats; ++repeat) {
    const std::uint64_t repeat_seed = Rng::mix(seed, static_cast<std::uint64_t>(repeat));
    const DiscoveryResult discovery = find_bellwether(community, racing, repeat_seed);
    const EnvironmentId& pick = pick_bellwether(discovery.bellwethers, repeat_seed);
    const MeasurementTable train = pool_table(community, discovery, pick.name);

    for (std::size_t t = 0; t < community.targets.size(); ++t) {
      const MeasurementTable& target = community.targets[t];
      const TransferOutcome out =
          transfer_from_table(train, target.configs(), target.objective(), racing.tree);
      const double beetle_nar = nar_at(target, out.chosen_index).value;
      for (std::size_t f = 0; f < fractions.size(); ++f) {
        const std::uint64_t nair_seed =
            Rng::mix(repeat_seed, Rng::mix(static_cast<std::uint64_t>(t) + 101,
                                           static_cast<std::uint64_t>(f)));
        const MethodResult nair =
            nair_non_transfer(target, fractions[f], nair_seed, racing.tree);
        // Ties go to the transfer side: "better (or same)" is a win.
        if (beetle_nar <= nair.nar.value) {
          ++wins[f][t];
        } else {
          ++losses[f][t];
        }
      }
    }
  }

  Rq3Result result;
  CsvDoc csv;
  csv.comment = comment_head(community, "rq3", repeats, seed) + racing_comment(racing);
  csv.columns = {"fraction", "target", "wins", "losses"};
  for (std::size_t f = 0; f < fractions.size(); ++f) {
    int pooled_wins = 0;
    int pooled_losses = 0;
    for (std::size_t t = 0; t < community.targets.size(); ++t) {
      WinLossCell cell;
      cell.fraction = fractions[f];
      cell.target = community.targets[t].env().name;
      cell.wins = wins[f][t];
      cell.losses = losses[f][t];
      pooled_wins += cell.wins;
      pooled_losses += cell.losses;
      csv.rows.push_back({format_double(cell.fraction), cell.target, std::to_string(cell.wins),
                          std::to_string(cell.losses)});
      result.cells.push_back(std::move(cell));
    }
    WinLossCell pooled;
    pooled.fraction = fractions[f];
    pooled.target = "ALL";
    pooled.wins = pooled_wins;
    pooled.losses = pooled_losses;
    csv.rows.push_back({format_double(pooled.fraction), "ALL", std::to_string(pooled.wins),
                        std::to_string(pooled.losses)});
    result.pooled.push_back(pooled);
    result.total_wins += pooled_wins;
    result.total_losses += pooled_losses;
  }
  result.csv = std::move(csv);
  return result;
}

Rq4Result run_rq4(const EnvironmentCommunity& community, int repeats, std::uint64_t seed,
                  const RacingConfig& racing, const ValovParams& valov, const GpParams& gp) {
  if (repeats < 1) throw ValidationError("repeats must be >= 1");
  if (community.targets.empty()) {
    throw ValidationError("rq4 needs target environments (group 2) in the community");
  }
  if (community.sources.empty()) {
    throw ValidationError("rq4 needs source environments");
  }

  Treatment beetle_t{"beetle", {}};
  Treatment valov_t{"valov", {}};
  Treatment gp_t{"gp", {}};
  long beetle_cost = 0;
  long valov_pairs = 0;
  long gp_pairs = 0;

  Rng root(seed);
  for (int repeat = 0; repeat < repeats; ++repeat) {
    const std::uint64_t repeat_seed = Rng::mix(seed, static_cast<std::uint64_t>(repeat));
    const DiscoveryResult discovery = find_bellwether(community, racing, repeat_seed);
    beetle_cost += discovery.cost;
    const EnvironmentId& pick = pick_bellwether(discovery.bellwethers, repeat_seed);
    const MeasurementTable train = pool_table(community, discovery, pick.name);

    for (std::size_t t = 0; t < community.targets.size(); ++t) {
      const MeasurementTable& target = community.targets[t];
      const TransferOutcome out =
          transfer_from_table(train, target.configs(), target.objective(), racing.tree);
      beetle_t.samples.push_back(nar_at(target, out.chosen_index).value);

      // The baselines do no source selection: a source is drawn at random.
      Rng pick_rng = root.stream(static_cast<std::uint64_t>(repeat)).stream(t);
      const MeasurementTable& valov_source =
          community.sources[pick_rng.below(community.sources.size())];
      const MethodResult valov_out =
          valov_transfer(valov_source, target, valov, Rng::mix(repeat_seed, t * 2 + 1));
      valov_t.samples.push_back(valov_out.nar.value);
      valov_pairs += valov_out.target_measurements;

      const MeasurementTable& gp_source =
          community.sources[pick_rng.below(community.sources.size())];
      const MethodResult gp_out =
          jamshidi_gp_transfer(gp_source, target, 0, gp, Rng::mix(repeat_seed, t * 2 + 2));
      gp_t.samples.push_back(gp_out.nar.value);
      gp_pairs += gp_out.target_measurements;
    }
  }

  SkConfig sk;
  sk.seed = Rng::mix(seed, 0x5104ULL);
  Rq4Result result;
  result.ranking = scott_knott({beetle_t, valov_t, gp_t}, sk);
  result.csv = ranked_groups_csv(
      result.ranking, comment_head(community, "rq4", repeats, seed) + racing_comment(racing),
      "learner");

  // Measurement ledger, averaged per repeat. Without source selection the
  // baselines presuppose the whole group-1 corpus plus their target pairs;
  // racing pays only for the rows it drew.
  const long availability = static_cast<long>(community.total_source_rows());
  const long n_repeats = static_cast<long>(repeats);
  result.costs.push_back({"beetle", beetle_cost / n_repeats});
  result.costs.push_back({"valov", availability + valov_pairs / n_repeats});
  result.costs.push_back({"gp", availability + gp_pairs / n_repeats});

  CsvDoc cost_csv;
  cost_csv.comment = comment_head(community, "rq4-cost", repeats, seed) + racing_comment(racing);
  cost_csv.columns = {"learner", "measurements"};
  for (const auto& c : result.costs) {
    cost_csv.rows.push_back({c.method, std::to_string(c.measurements)});
  }
  result.cost_csv = std::move(cost_csv);
  return result;
}

CsvDoc discovery_csv(const DiscoveryResult& result, std::string comment) {
  CsvDoc doc;
  doc.comment = std::move(comment);
  doc.columns = {"round", "fraction", "new_measurements", "cost_after", "lives_after",
                 "groups", "eliminated"};
  for (const DiscoveryRound& round : result.rounds) {
    std::ostringstream groups;
    for (std::size_t g = 0; g < round.ranking.groups.size(); ++g) {
      if (g > 0) groups << '|';
      const RankedGroup& group = round.ranking.groups[g];
      for (std::size_t m = 0; m < group.members.size(); ++m) {
        if (m > 0) groups << ' ';
        groups << group.members[m].label;
      }
    }
    std::ostringstream eliminated;
    for (std::size_t e = 0; e < round.eliminated.size(); ++e) {
      if (e > 0) eliminated << ' ';
      eliminated << round.eliminated[e];
    }
    doc.rows.push_back({std::to_string(round.number), format_fixed(round.fraction, 4),
                        std::to_string(round.new_measurements), std::to_string(round.cost_after),
                        std::to_string(round.lives_after), groups.str(), eliminated.str()});
  }
  return doc;
}

}  // namespace beetle
