/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "stats.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace beetle {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw ValidationError("mean of an empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw ValidationError("quantile of an empty sample");
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi) return xs[lo];
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] + frac * (xs[hi] - xs[lo]);
}

double median(const std::vector<double>& xs) { return quantile(xs, 0.5); }

double iqr(const std::vector<double>& xs) { return quantile(xs, 0.75) - quantile(xs, 0.25); }

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ValidationError("pearson needs two aligned samples of size >= 2");
  }
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ComputeError("pearson undefined: zero variance sample");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

bool bootstrap_differs(const std::vector<double>& a, const std::vector<double>& b,
                       int n_boot, double confidence, std::uint64_t rng_seed) {
  if (a.size() < 3 || b.size() < 3) {
    throw ValidationError("bootstrap test needs at least 3 samples per side");
  }
  if (n_boot < 1 || confidence <= 0.0 || confidence >= 1.0) {
    throw ValidationError("bootstrap test: invalid n_boot or confidence");
  }
  const double mean_a = mean(a);
  const double mean_b = mean(b);
  const double observed = std::abs(mean_a - mean_b);
  if (observed == 0.0) return false;

  double pooled = 0.0;
  for (double x : a) pooled += x;
  for (double x : b) pooled += x;
  pooled /= static_cast<double>(a.size() + b.size());

  // Shift each side onto the pooled mean so the null of equal means holds.
  std::vector<double> null_a(a), null_b(b);
  for (double& x : null_a) x += pooled - mean_a;
  for (double& x : null_b) x += pooled - mean_b;

  Rng rng(rng_seed);
  int at_least_observed = 0;
  for (int i = 0; i < n_boot; ++i) {
    double sum_a = 0.0;
    for (std::size_t j = 0; j < null_a.size(); ++j) sum_a += null_a[rng.below(null_a.size())];
    double sum_b = 0.0;
    for (std::size_t j = 0; j < null_b.size(); ++j) sum_b += null_b[rng.below(null_b.size())];
    const double delta = std::abs(sum_a / static_cast<double>(null_a.size()) -
                                  sum_b / static_cast<double>(null_b.size()));
    if (delta >= observed) ++at_least_observed;
  }
  const double p = static_cast<double>(at_least_observed) / static_cast<double>(n_boot);
  return p < 1.0 - confidence;
}

double a12(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw ValidationError("a12 needs non-empty samples");
  std::vector<double> sorted_b(b);
  std::sort(sorted_b.begin(), sorted_b.end());
  std::uint64_t greater = 0, equal = 0;
  for (double x : a) {
    const auto lo = std::lower_bound(sorted_b.begin(), sorted_b.end(), x);
    const auto hi = std::upper_bound(lo, sorted_b.end(), x);
    greater += static_cast<std::uint64_t>(lo - sorted_b.begin());
    equal += static_cast<std::uint64_t>(hi - lo);
  }
  return (static_cast<double>(greater) + 0.5 * static_cast<double>(equal)) /
         (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

int RankedGroups::rank_of(const std::string& label) const {
  for (const RankedGroup& g : groups) {
    for (const GroupMember& m : g.members) {
      if (m.label == label) return g.rank;
    }
  }
  return 0;
}

std::vector<std::set<std::string>> RankedGroups::partition() const {
  std::vector<std::set<std::string>> parts;
  for (const RankedGroup& g : groups) {
    std::set<std::string> part;
    for (const GroupMember& m : g.members) part.insert(m.label);
    parts.push_back(std::move(part));
  }
  return parts;
}

std::vector<std::string> RankedGroups::rank1_labels() const {
  std::vector<std::string> labels;
  if (!groups.empty()) {
    for (const GroupMember& m : groups.front().members) labels.push_back(m.label);
  }
  return labels;
}

std::size_t RankedGroups::treatment_count() const {
  std::size_t n = 0;
  for (const RankedGroup& g : groups) n += g.members.size();
  return n;
}

namespace {

struct SkState {
  const std::vector<const Treatment*>& sorted;  // ascending by (mean, label)
  const SkConfig& config;
  std::uint64_t boot_counter = 0;
  std::vector<std::pair<std::size_t, std::size_t>> segments;  // [lo, hi)

  std::vector<double> pool(std::size_t lo, std::size_t hi) const {
    std::vector<double> xs;
    for (std::size_t i = lo; i < hi; ++i) {
      xs.insert(xs.end(), sorted[i]->samples.begin(), sorted[i]->samples.end());
    }
    return xs;
  }

  void split(std::size_t lo, std::size_t hi) {
    if (hi - lo <= 1) {
      segments.emplace_back(lo, hi);
      return;
    }
    const std::vector<double> all = pool(lo, hi);
    const double grand_mean = mean(all);
    const auto n_total = static_cast<double>(all.size());

    double best_delta = -1.0;
    std::size_t best_cut = lo;
    double left_sum = 0.0;
    double left_n = 0.0;
    double total_sum = 0.0;
    for (double x : all) total_sum += x;
    for (std::size_t cut = lo + 1; cut < hi; ++cut) {
      for (double x : sorted[cut - 1]->samples) left_sum += x;
      left_n += static_cast<double>(sorted[cut - 1]->samples.size());
      const double right_n = n_total - left_n;
      const double mu_l = left_sum / left_n;
      const double mu_r = (total_sum - left_sum) / right_n;
      const double delta = (left_n / n_total) * (mu_l - grand_mean) * (mu_l - grand_mean) +
                           (right_n / n_total) * (mu_r - grand_mean) * (mu_r - grand_mean);
      if (delta > best_delta) {
        best_delta = delta;
        best_cut = cut;
      }
    }

    const std::vector<double> left = pool(lo, best_cut);
    const std::vector<double> right = pool(best_cut, hi);
    const std::uint64_t boot_seed = Rng::mix(config.seed, boot_counter++);
    bool accepted = bootstrap_differs(left, right, config.n_boot, config.confidence, boot_seed);
    if (accepted) {
      const double effect = a12(left, right);
      accepted = std::max(effect, 1.0 - effect) >= config.effect_threshold;
    }
    if (!accepted) {
      segments.emplace_back(lo, hi);
      return;
    }
    split(lo, best_cut);
    split(best_cut, hi);
  }
};

}  // namespace

RankedGroups scott_knott(const std::vector<Treatment>& treatments, const SkConfig& config) {
  if (treatments.empty()) throw ValidationError("scott_knott needs at least one treatment");
  for (const Treatment& t : treatments) {
    if (t.samples.empty()) {
      throw ValidationError("treatment '" + t.label + "' has no samples");
    }
  }

  std::vector<const Treatment*> sorted;
  sorted.reserve(treatments.size());
  for (const Treatment& t : treatments) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(), [](const Treatment* a, const Treatment* b) {
    const double ma = mean(a->samples);
    const double mb = mean(b->samples);
    if (ma != mb) return ma < mb;
    return a->label < b->label;
  });

  SkState state{sorted, config, 0, {}};
  state.split(0, sorted.size());

  RankedGroups result;
  for (const auto& [lo, hi] : state.segments) {
    RankedGroup group;
    const std::vector<double> pooled = state.pool(lo, hi);
    group.median = median(pooled);
    group.iqr = iqr(pooled);
    for (std::size_t i = lo; i < hi; ++i) {
      GroupMember m;
      m.label = sorted[i]->label;
      m.median = median(sorted[i]->samples);
      m.iqr = iqr(sorted[i]->samples);
      group.members.push_back(std::move(m));
    }
    std::sort(group.members.begin(), group.members.end(),
              [](const GroupMember& a, const GroupMember& b) {
                if (a.median != b.median) return a.median < b.median;
                return a.label < b.label;
              });
    result.groups.push_back(std::move(group));
  }
  // Segments come out in mean order; ranks must ascend by group median.
  std::stable_sort(result.groups.begin(), result.groups.end(),
                   [](const RankedGroup& a, const RankedGroup& b) { return a.median < b.median; });
  for (std::size_t i = 0; i < result.groups.size(); ++i) {
    result.groups[i].rank = static_cast<int>(i) + 1;
  }
  return result;
}

}  // namespace beetle
