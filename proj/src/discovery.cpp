/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "discovery.hpp"

#include <algorithm>
#include <set>
#include <cstdio>
#include <sstream>

#include "errors.hpp"
#include "rng.hpp"

namespace beetle {

void RacingConfig::validate() const {
  if (!(initial_fraction > 0.0) || initial_fraction > 1.0) {
    throw ValidationError("racing initial fraction must lie in (0, 1]");
  }
  if (!(fraction_step > 0.0) || fraction_step > 1.0) {
    throw ValidationError("racing fraction step must lie in (0, 1]");
  }
  if (lives < 1) throw ValidationError("racing needs at least 1 life");
  if (repeats_per_round < 1) throw ValidationError("racing needs at least 1 repeat per round");
  if (budget < 0) throw ValidationError("racing budget must be >= 1 (or 0 for all rows)");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kLivesExhausted: return "lives_exhausted";
    case Termination::kBudgetExhausted: return "budget_exhausted";
    case Termination::kNoMoreEliminations: return "no_more_eliminations";
  }
  return "unknown";
}

double DiscoveryResult::percent_of_rows(const EnvironmentCommunity& community) const {
  const std::size_t total = community.total_source_rows();
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(cost) / static_cast<double>(total);
}

std::vector<NarScore> score_source(const MeasurementTable& source_sample,
                                   const std::vector<const MeasurementTable*>& others,
                                   const TreeParams& tree_params) {
  if (others.empty()) throw ValidationError("score_source needs at least one other environment");
  const RegressionTree model = RegressionTree::fit(source_sample, tree_params);
  std::vector<NarScore> scores;
  scores.reserve(others.size());
  for (const MeasurementTable* other : others) {
    const auto best = model.predict_best(other->configs(), other->objective());
    scores.push_back(nar_at(*other, best.index));
  }
  return scores;
}

namespace {

// Training rows for one (source, repeat) pair: repeat 0 uses the paid-for
// pool as-is, later repeats refit on a bootstrap resample of the same pool
// so the round's ranking sees model variance without extra measurements.
MeasurementTable repeat_train_table(const MeasurementTable& source,
                                    const std::vector<std::size_t>& pool, int repeat, Rng rng) {
  if (repeat == 0) return source.subset(pool);
  std::vector<std::size_t> rows(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    rows[i] = pool[rng.below(pool.size())];
  }
  return source.subset(rows);
}

}  // namespace

DiscoveryResult find_bellwether(const EnvironmentCommunity& community, const RacingConfig& config,
                                std::uint64_t rng_seed) {
  config.validate();
  const std::vector<MeasurementTable>& sources = community.sources;
  const std::size_t n_sources = sources.size();
  if (n_sources < 2) {
    throw ValidationError("bellwether discovery needs at least 2 source environments");
  }
  const long budget = config.budget > 0
                          ? config.budget
                          : static_cast<long>(community.total_source_rows());

  // The first round must be affordable before anything is sampled.
  long first_round = 0;
  for (const MeasurementTable& t : sources) {
    first_round += static_cast<long>(sample_size_for(t.row_count(), config.initial_fraction));
  }
  if (budget < first_round) {
    throw ValidationError("racing budget " + std::to_string(budget) +
                          " cannot fund the first round (" + std::to_string(first_round) +
                          " measurements)");
  }

  Rng root(rng_seed);
  DiscoveryResult result;
  std::vector<std::size_t> survivors(n_sources);
  for (std::size_t i = 0; i < n_sources; ++i) survivors[i] = i;

  // Per-environment cumulative sample pool, drawn without replacement by
  // continuing one Fisher-Yates walk across rounds.
  std::vector<std::vector<std::size_t>> draw_order(n_sources);
  std::vector<std::size_t> drawn(n_sources, 0);
  for (std::size_t i = 0; i < n_sources; ++i) {
    draw_order[i].resize(sources[i].row_count());
    for (std::size_t r = 0; r < draw_order[i].size(); ++r) draw_order[i][r] = r;
  }

  int lives = config.lives;
  long cost = 0;
  std::set<std::set<std::string>> previous_partition;
  bool have_previous = false;
  RankedGroups last_ranking;

  for (int round = 1;; ++round) {
    const double fraction =
        std::min(config.initial_fraction + (round - 1) * config.fraction_step, 1.0);

    long planned = 0;
    std::vector<std::size_t> want(n_sources, 0);
    for (std::size_t i : survivors) {
      want[i] = sample_size_for(sources[i].row_count(), fraction);
      if (want[i] > drawn[i]) planned += static_cast<long>(want[i] - drawn[i]);
    }
    if (cost + planned > budget) {
      result.termination = Termination::kBudgetExhausted;
      break;
    }
    for (std::size_t i : survivors) {
      Rng draw_rng = root.stream(1).stream(static_cast<std::uint64_t>(round)).stream(i);
      auto& order = draw_order[i];
      while (drawn[i] < want[i]) {
        const std::size_t pos = drawn[i];
        const std::size_t j = pos + static_cast<std::size_t>(draw_rng.below(order.size() - pos));
        std::swap(order[pos], order[j]);
        ++drawn[i];
      }
    }
    cost += planned;

    // Round-robin: every surviving source scored against all other survivors.
    std::vector<Treatment> treatments;
    treatments.reserve(survivors.size());
    for (std::size_t i : survivors) {
      std::vector<const MeasurementTable*> others;
      for (std::size_t j : survivors) {
        if (j != i) others.push_back(&sources[j]);
      }
      const std::vector<std::size_t> pool(draw_order[i].begin(),
                                          draw_order[i].begin() + static_cast<long>(drawn[i]));
      Treatment treatment;
      treatment.label = sources[i].env().name;
      for (int repeat = 0; repeat < config.repeats_per_round; ++repeat) {
        Rng repeat_rng = root.stream(2)
                             .stream(static_cast<std::uint64_t>(round))
                             .stream(i)
                             .stream(static_cast<std::uint64_t>(repeat));
        const MeasurementTable train = repeat_train_table(sources[i], pool, repeat, repeat_rng);
        for (const NarScore& score : score_source(train, others, config.tree)) {
          treatment.samples.push_back(score.value);
        }
      }
      treatments.push_back(std::move(treatment));
    }

    SkConfig sk = config.sk;
    sk.seed = Rng::mix(Rng::mix(config.sk.seed, Rng::mix(rng_seed, 0x5c077ULL)),
                       static_cast<std::uint64_t>(round));
    RankedGroups ranking = scott_knott(treatments, sk);
    const auto parts = ranking.partition();
    const std::set<std::set<std::string>> partition(parts.begin(), parts.end());

    DiscoveryRound entry;
    entry.number = round;
    entry.fraction = fraction;
    entry.new_measurements = planned;
    entry.cost_after = cost;
    last_ranking = ranking;
    entry.ranking = std::move(ranking);

    const bool unchanged = have_previous && partition == previous_partition;
    previous_partition = partition;
    have_previous = true;

    if (unchanged || entry.ranking.groups.size() == 1) {
      // Stalled grouping, or a single group that must not be wiped out.
      --lives;
      entry.lives_after = lives;
      result.rounds.push_back(std::move(entry));
      if (lives == 0) {
        result.termination = Termination::kLivesExhausted;
        break;
      }
      continue;
    }

    const RankedGroup& last_group = entry.ranking.groups.back();
    for (const GroupMember& member : last_group.members) {
      entry.eliminated.push_back(member.label);
      for (std::size_t k = 0; k < survivors.size(); ++k) {
        if (sources[survivors[k]].env().name == member.label) {
          survivors.erase(survivors.begin() + static_cast<long>(k));
          break;
        }
      }
    }
    entry.lives_after = lives;
    result.rounds.push_back(std::move(entry));
    if (survivors.size() == 1) {
      result.termination = Termination::kNoMoreEliminations;
      break;
    }
  }

  result.cost = cost;
  for (std::size_t i = 0; i < n_sources; ++i) {
    if (drawn[i] == 0) continue;
    result.pools[sources[i].env().name] = std::vector<std::size_t>(
        draw_order[i].begin(), draw_order[i].begin() + static_cast<long>(drawn[i]));
  }
  for (const std::string& label : last_ranking.rank1_labels()) {
    const MeasurementTable* table = community.find_env(label);
    result.bellwethers.push_back(table->env());
  }
  return result;
}

std::string DiscoveryResult::report() const {
  std::ostringstream out;
  out << "round  frac   cost  lives  groups\n";
  for (const DiscoveryRound& r : rounds) {
    std::ostringstream groups;
    for (std::size_t g = 0; g < r.ranking.groups.size(); ++g) {
      if (g > 0) groups << " | ";
      const RankedGroup& group = r.ranking.groups[g];
      for (std::size_t m = 0; m < group.members.size(); ++m) {
        if (m > 0) groups << ' ';
        char med[32];
        std::snprintf(med, sizeof(med), "%.2f", group.members[m].median);
        groups << group.members[m].label << '(' << med << ')';
      }
    }
    char frac[32];
    std::snprintf(frac, sizeof(frac), "%.2f", r.fraction);
    out << "  " << r.number << "    " << frac << "  " << r.cost_after
        << "  " << r.lives_after << "  " << groups.str();
    if (!r.eliminated.empty()) {
      out << "  [eliminated:";
      for (const std::string& e : r.eliminated) out << ' ' << e;
      out << "]";
    }
    out << '\n';
  }
  out << "bellwethers:";
  for (const EnvironmentId& b : bellwethers) out << ' ' << b.name;
  out << "\ncost: " << cost << "\ntermination: " << to_string(termination) << '\n';
  return out.str();
}

const EnvironmentId& pick_bellwether(const std::vector<EnvironmentId>& bellwethers,
                                     std::uint64_t rng_seed) {
  if (bellwethers.empty()) throw ValidationError("transfer needs at least one bellwether");
  Rng rng(rng_seed);
  return bellwethers[rng.below(bellwethers.size())];
}

TransferOutcome transfer_from_table(const MeasurementTable& train,
                                    const std::vector<Configuration>& candidates,
                                    Objective objective, const TreeParams& tree_params) {
  if (candidates.empty()) throw ValidationError("transfer needs at least one candidate");
  const RegressionTree model = RegressionTree::fit(train, tree_params);
  const auto best = model.predict_best(candidates, objective);
  TransferOutcome outcome;
  outcome.bellwether = train.env().name;
  outcome.chosen = candidates[best.index];
  outcome.chosen_index = best.index;
  outcome.predicted = best.predicted;
  outcome.source_measurements = static_cast<long>(train.row_count());
  return outcome;
}

TransferOutcome transfer(const std::vector<EnvironmentId>& bellwethers,
                         const EnvironmentCommunity& community,
                         const std::vector<Configuration>& candidates, Objective objective,
                         std::uint64_t rng_seed, const TreeParams& tree_params,
                         double train_fraction) {
  const EnvironmentId& picked = pick_bellwether(bellwethers, rng_seed);
  const MeasurementTable* table = community.find_env(picked.name);
  if (!table) {
    throw ValidationError("bellwether '" + picked.name + "' is not part of the community");
  }
  if (train_fraction < 1.0) {
    const MeasurementTable train =
        sample_rows(*table, train_fraction, Rng::mix(rng_seed, 0x7261696eULL));
    return transfer_from_table(train, candidates, objective, tree_params);
  }
  return transfer_from_table(*table, candidates, objective, tree_params);
}

}  // namespace beetle
