#pragma once

// Wilcoxon rank-sum with the common-language effect size, and Fleiss' kappa.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/label.hpp"

namespace ftc {

struct RankSumResult {
  double u_statistic = 0.0;  // U for group a
  double z_score = 0.0;
  double p_value = 1.0;      // two-sided
  double rho = 0.5;          // U / (n_a * n_b)
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

// Midranks (1-based) of `values`; also returns sum(t^3 - t) over tie groups.
inline std::vector<double> midranks(std::span<const double> values, double* tie_term = nullptr) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  double ties = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    const double t = static_cast<double>(j - i + 1);
    ties += t * t * t - t;
    i = j + 1;
  }
  if (tie_term) *tie_term = ties;
  return ranks;
}

// Normal approximation with tie-corrected variance and a 0.5 continuity
// correction. Zero variance (every value tied) gives p = 1, rho = 0.5.
inline RankSumResult rank_sum(std::span<const double> group_a, std::span<const double> group_b) {
  if (group_a.empty() || group_b.empty()) throw ArgumentError("rank_sum: both groups must be non-empty");
  for (double v : group_a)
    if (std::isnan(v)) throw ArgumentError("rank_sum: NaN in group a");
  for (double v : group_b)
    if (std::isnan(v)) throw ArgumentError("rank_sum: NaN in group b");

  // U from the rank sum of a equals a merge count over the sorted groups:
  // each a-value scores the b-values below it plus half the tied ones.
  std::vector<double> a(group_a.begin(), group_a.end());
  std::vector<double> b(group_b.begin(), group_b.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double u = 0.0;
  double tie_term = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    const double v = j == b.size() || (i < a.size() && a[i] < b[j]) ? a[i] : b[j];
    std::size_t ca = 0;
    std::size_t cb = 0;
    while (i < a.size() && a[i] == v) ++i, ++ca;
    while (j < b.size() && b[j] == v) ++j, ++cb;
    u += static_cast<double>(ca) * (static_cast<double>(j - cb) + 0.5 * static_cast<double>(cb));
    const double t = static_cast<double>(ca + cb);
    tie_term += t * t * t - t;
  }

  RankSumResult r;
  r.n_a = group_a.size();
  r.n_b = group_b.size();
  const double na = static_cast<double>(r.n_a);
  const double nb = static_cast<double>(r.n_b);
  const double n = na + nb;
  r.u_statistic = u;
  r.rho = r.u_statistic / (na * nb);

  const double mean = na * nb / 2.0;
  const double var = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(var > 0.0)) {
    r.z_score = 0.0;
    r.p_value = 1.0;
    r.rho = 0.5;
    return r;
  }
  const double diff = r.u_statistic - mean;
  const double corrected = std::max(0.0, std::abs(diff) - 0.5);
  r.z_score = std::copysign(corrected / std::sqrt(var), diff);
  r.p_value = std::min(1.0, std::erfc(std::abs(r.z_score) / std::sqrt(2.0)));
  return r;
}

struct KappaResult {
  double kappa = 1.0;
  double observed_agreement = 1.0;  // P-bar
  double chance_agreement = 1.0;    // P-bar_e
  std::vector<double> category_proportions;
};

// ratings[i][j] = number of raters assigning item i to category j.
inline KappaResult fleiss_kappa(const std::vector<std::vector<int>>& ratings, int raters_per_item) {
  if (raters_per_item < 2) throw ArgumentError("fleiss_kappa: need at least two raters per item");
  if (ratings.empty()) throw ArgumentError("fleiss_kappa: no items");
  const std::size_t k = ratings.front().size();
  if (k == 0) throw ArgumentError("fleiss_kappa: no categories");

  const double n = raters_per_item;
  const double items = static_cast<double>(ratings.size());
  std::vector<double> totals(k, 0.0);
  double p_bar = 0.0;
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    const auto& row = ratings[i];
    if (row.size() != k) throw ArgumentError("fleiss_kappa: ragged rating matrix");
    long sum = 0;
    double sq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (row[j] < 0) throw ArgumentError("fleiss_kappa: negative count");
      sum += row[j];
      sq += static_cast<double>(row[j]) * row[j];
      totals[j] += row[j];
    }
    if (sum != raters_per_item)
      throw ArgumentError("fleiss_kappa: row " + std::to_string(i) + " sums to " + std::to_string(sum) +
                          ", expected " + std::to_string(raters_per_item));
    p_bar += (sq - n) / (n * (n - 1.0));
  }
  p_bar /= items;

  KappaResult r;
  double p_e = 0.0;
  for (double t : totals) {
    const double p = t / (items * n);
    r.category_proportions.push_back(p);
    p_e += p * p;
  }
  r.observed_agreement = p_bar;
  r.chance_agreement = p_e;
  // every rating in one category: agreement is perfect by definition
  r.kappa = (p_e >= 1.0) ? 1.0 : (p_bar - p_e) / (1.0 - p_e);
  return r;
}

// Count matrix over {E, C, N} from per-item label lists of equal length.
inline std::vector<std::vector<int>> label_count_matrix(const std::vector<std::vector<Label>>& items) {
  std::vector<std::vector<int>> out;
  out.reserve(items.size());
  for (const auto& labels : items) {
    std::vector<int> row(3, 0);
    for (Label l : labels) ++row[index_of(l)];
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace ftc
