/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace beetle {

const char* to_string(RelatednessMode mode) {
  switch (mode) {
    case RelatednessMode::kAffine: return "affine";
    case RelatednessMode::kMonotoneWarp: return "warp";
    case RelatednessMode::kShuffled: return "shuffled";
    case RelatednessMode::kIndependentNoise: return "noise";
  }
  return "unknown";
}

int CommunitySpec::planted_index() const {
  // First source measuring the base surface exactly. Duplicates are allowed
  // (a community of identical environments is a legitimate fixture); none is
  // an error, since every oracle builds on the planted ground truth.
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const EnvRelatedness& r = sources[i];
    if (r.mode == RelatednessMode::kAffine && r.affine_a == 1.0 && r.affine_b == 0.0 &&
        r.noise_sd == 0.0) {
      return static_cast<int>(i);
    }
  }
  throw ValidationError(
      "community spec needs a planted source: affine(1, 0) with zero noise");
}

namespace {

// Random axis-aligned tree over the options; leaves carry the surface level.
struct SurfaceNode {
  bool leaf = true;
  std::size_t option = 0;
  double threshold = 0.5;
  double value = 0.0;
  int left = -1;
  int right = -1;
};

class BaseSurface {
 public:
  BaseSurface(const OptionSchema& schema, Rng rng) : schema_(schema) {
    build(rng, 0);
    const std::size_t pair_count = std::min<std::size_t>(3, schema.size() / 2);
    Rng pair_rng = rng.stream(101);
    for (std::size_t p = 0; p < pair_count; ++p) {
      Interaction inter;
      inter.first = static_cast<std::size_t>(pair_rng.below(schema.size()));
      inter.second = static_cast<std::size_t>(pair_rng.below(schema.size()));
      inter.weight = pair_rng.uniform(0.0, 5.0);
      interactions_.push_back(inter);
    }
  }

  double value(const Configuration& c) const {
    int node = 0;
    while (!nodes_[static_cast<std::size_t>(node)].leaf) {
      const SurfaceNode& n = nodes_[static_cast<std::size_t>(node)];
      const double z = schema_.normalize(n.option, c.values[n.option]);
      node = z <= n.threshold ? n.left : n.right;
    }
    double v = nodes_[static_cast<std::size_t>(node)].value;
    for (const Interaction& inter : interactions_) {
      v += inter.weight * schema_.normalize(inter.first, c.values[inter.first]) *
           schema_.normalize(inter.second, c.values[inter.second]);
    }
    return v;
  }

 private:
  struct Interaction {
    std::size_t first = 0;
    std::size_t second = 0;
    double weight = 0.0;
  };

  int build(Rng rng, int depth) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const bool split = depth < 4 && rng.next_double() < (depth == 0 ? 1.0 : 0.8);
    if (!split) {
      nodes_[static_cast<std::size_t>(index)].value = rng.uniform(10.0, 100.0);
      return index;
    }
    SurfaceNode node;
    node.leaf = false;
    node.option = static_cast<std::size_t>(rng.below(schema_.size()));
    node.threshold = rng.uniform(0.25, 0.75);
    nodes_[static_cast<std::size_t>(index)] = node;
    const int left = build(rng.stream(2 * static_cast<std::uint64_t>(depth) + 3), depth + 1);
    const int right = build(rng.stream(2 * static_cast<std::uint64_t>(depth) + 4), depth + 1);
    nodes_[static_cast<std::size_t>(index)].left = left;
    nodes_[static_cast<std::size_t>(index)].right = right;
    return index;
  }

  const OptionSchema& schema_;
  std::vector<SurfaceNode> nodes_;
  std::vector<Interaction> interactions_;
};

std::vector<double> derive_perf(const std::vector<double>& base, const EnvRelatedness& rel,
                                Rng rng) {
  const std::size_t n = base.size();
  std::vector<double> perf(n);
  const double base_min = *std::min_element(base.begin(), base.end());
  const double base_max = *std::max_element(base.begin(), base.end());
  const double range = std::max(base_max - base_min, 1e-12);

  switch (rel.mode) {
    case RelatednessMode::kAffine:
      for (std::size_t i = 0; i < n; ++i) perf[i] = rel.affine_a * base[i] + rel.affine_b;
      break;
    case RelatednessMode::kMonotoneWarp: {
      // Rank-preserving concave warp of the normalized surface; stretches
      // the low end, so the argmin stays recoverable from leaf means.
      const double power = 0.4 + 0.3 * rng.next_double();
      for (std::size_t i = 0; i < n; ++i) {
        const double z = (base[i] - base_min) / range;
        perf[i] = base_min + range * std::pow(z, power);
      }
      break;
    }
    case RelatednessMode::kShuffled: {
      perf = base;
      for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(perf[i - 1], perf[j]);
      }
      break;
    }
    case RelatednessMode::kIndependentNoise:
      for (std::size_t i = 0; i < n; ++i) perf[i] = rng.uniform(base_min, base_max);
      break;
  }
  if (rel.noise_sd > 0.0) {
    for (std::size_t i = 0; i < n; ++i) perf[i] += rel.noise_sd * rng.normal();
  }
  return perf;
}

}  // namespace

EnvironmentCommunity generate(const CommunitySpec& spec) {
  if (spec.n_binary < 0 || spec.n_numeric < 0 || spec.n_binary + spec.n_numeric < 1) {
    throw ValidationError("community spec needs at least one option");
  }
  if (spec.rows_per_env < 2) {
    throw ValidationError("community spec needs at least 2 rows per environment");
  }
  if (spec.sources.empty()) {
    throw ValidationError("community spec needs at least one source environment");
  }
  spec.planted_index();

  std::vector<Option> options;
  for (int i = 0; i < spec.n_binary; ++i) {
    Option opt;
    opt.name = "bin" + std::to_string(i);
    opt.kind = OptionKind::kCategorical;
    opt.levels = {"off", "on"};
    options.push_back(std::move(opt));
  }
  for (int i = 0; i < spec.n_numeric; ++i) {
    Option opt;
    opt.name = "num" + std::to_string(i);
    opt.kind = OptionKind::kNumeric;
    opt.min = 0.0;
    opt.max = 100.0;
    options.push_back(std::move(opt));
  }
  auto schema = std::make_shared<OptionSchema>(OptionSchema::create(std::move(options)));

  if (spec.n_numeric == 0) {
    const double space = std::pow(2.0, spec.n_binary);
    if (static_cast<double>(spec.rows_per_env) > space) {
      throw ValidationError("community spec infeasible: " + std::to_string(spec.rows_per_env) +
                            " distinct rows requested from a configuration space of " +
                            format_double(space));
    }
  }

  Rng root(spec.base_surface_seed);

  // One shared configuration sample, measured in every environment.
  Rng config_rng = root.stream(1);
  std::vector<Configuration> configs;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> dedupe;
  const std::size_t want = static_cast<std::size_t>(spec.rows_per_env);
  std::size_t attempts = 0;
  const std::size_t max_attempts = want * 1000 + 10000;
  while (configs.size() < want) {
    if (++attempts > max_attempts) {
      throw ValidationError("community spec infeasible: cannot draw " + std::to_string(want) +
                            " distinct configurations");
    }
    Configuration c;
    c.values.resize(schema->size());
    for (std::size_t i = 0; i < schema->size(); ++i) {
      const Option& opt = schema->option(i);
      if (opt.kind == OptionKind::kCategorical) {
        c.values[i] = static_cast<double>(config_rng.below(opt.levels.size()));
      } else {
        c.values[i] = config_rng.uniform(opt.min, opt.max);
      }
    }
    const std::uint64_t h = config_hash(c);
    bool duplicate = false;
    for (std::size_t prior : dedupe[h]) {
      if (configs[prior] == c) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    dedupe[h].push_back(configs.size());
    configs.push_back(std::move(c));
  }

  const BaseSurface surface(*schema, root.stream(2));
  std::vector<double> base(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) base[i] = surface.value(configs[i]);

  EnvironmentCommunity community;
  community.system = spec.system_name;
  community.schema = schema;

  auto make_table = [&](const EnvRelatedness& rel, std::size_t index, bool is_source) {
    const std::string prefix = is_source ? "src" : "tgt";
    EnvironmentId env;
    env.name = prefix + std::to_string(index) + "_" + to_string(rel.mode);
    env.hardware = "h" + std::to_string(index);
    env.workload = "w" + std::to_string(index % 4);
    env.version = "v1";
    Rng env_rng = root.stream(is_source ? 1000 + index : 2000 + index);
    std::vector<double> perf = derive_perf(base, rel, env_rng);
    return MeasurementTable(env, schema, configs, std::move(perf), Objective::kMinimize, "ms");
  };

  for (std::size_t i = 0; i < spec.sources.size(); ++i) {
    community.sources.push_back(make_table(spec.sources[i], i, true));
  }
  for (std::size_t i = 0; i < spec.targets.size(); ++i) {
    community.targets.push_back(make_table(spec.targets[i], i, false));
  }
  return community;
}

CommunitySpec planted_default_spec(std::uint64_t seed, int n_sources, int n_targets,
                                   int n_binary, int rows_per_env) {
  if (n_sources < 2) throw ValidationError("planted community needs at least 2 sources");
  CommunitySpec spec;
  spec.system_name = "planted";
  spec.n_binary = n_binary;
  spec.n_numeric = 0;
  spec.rows_per_env = rows_per_env;
  spec.base_surface_seed = seed;

  // A block of mild transforms of the planted surface plus unrelated
  // impostors. Junk stays a minority of the round-robin targets: scores on a
  // shuffled target are a lottery over the few rows a source's trees pick,
  // and too many lottery cells swamp the real differences.
  spec.sources.push_back({RelatednessMode::kAffine, 1.0, 0.0, 0.0});  // the planted bellwether
  const EnvRelatedness recipes[] = {
      {RelatednessMode::kAffine, 1.6, 12.0, 0.5},
      {RelatednessMode::kAffine, 0.7, -4.0, 0.5},
      {RelatednessMode::kMonotoneWarp, 1.0, 0.0, 0.5},
      {RelatednessMode::kAffine, 1.2, 3.0, 0.8},
      {RelatednessMode::kAffine, 0.85, -2.0, 0.8},
      {RelatednessMode::kShuffled, 1.0, 0.0, 0.0},
      {RelatednessMode::kIndependentNoise, 1.0, 0.0, 0.0},
  };
  for (int i = 1; i < n_sources; ++i) {
    spec.sources.push_back(recipes[(i - 1) % std::size(recipes)]);
  }
  const EnvRelatedness target_recipes[] = {
      {RelatednessMode::kAffine, 1.3, 5.0, 0.0},
      {RelatednessMode::kMonotoneWarp, 1.0, 0.0, 0.0},
      {RelatednessMode::kAffine, 0.9, 2.0, 0.5},
  };
  for (int i = 0; i < n_targets; ++i) {
    spec.targets.push_back(target_recipes[i % std::size(target_recipes)]);
  }
  return spec;
}

CommunitySpec distinct_quality_spec(std::uint64_t seed, int n_sources, int rows_per_env) {
  if (n_sources < 2) throw ValidationError("community needs at least 2 sources");
  CommunitySpec spec;
  spec.system_name = "distinct";
  spec.n_binary = 10;
  spec.n_numeric = 0;
  spec.rows_per_env = rows_per_env;
  spec.base_surface_seed = seed;
  spec.sources.push_back({RelatednessMode::kAffine, 1.0, 0.0, 0.0});
  double noise = 4.0;
  for (int i = 1; i < n_sources; ++i) {
    spec.sources.push_back({RelatednessMode::kAffine, 1.0, 0.0, noise});
    noise *= 2.5;  // each source worse than the one before
  }
  return spec;
}

}  // namespace beetle
