#pragma once

// FTC metric family and the LAS/LRA comparison metrics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "ftc/errors.hpp"
#include "ftc/label.hpp"

namespace ftc {

struct MetricConfig {
  double alpha = 0.5;         // ground distance between N and either of E, C
  double kl_floor = 1e-12;    // probability floor before the log

  void validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("metric alpha must be in [0, 1]");
    if (!(kl_floor > 0.0 && kl_floor < 1.0)) throw ConfigError("kl_floor must be in (0, 1)");
  }
};

enum class FtcVariant : std::uint8_t { Delta, Kl, Wasserstein };

inline std::string to_string(FtcVariant v) {
  switch (v) {
    case FtcVariant::Delta: return "ftc_delta";
    case FtcVariant::Kl: return "ftc_kl";
    case FtcVariant::Wasserstein: return "ftc_w";
  }
  return {};
}

inline constexpr FtcVariant kAllVariants[] = {FtcVariant::Delta, FtcVariant::Kl,
                                              FtcVariant::Wasserstein};

// 1 when the prediction's argmax (ties to the lowest label) is y_cf.
inline double ftc_delta(const LabelDistribution& pred, Label y_cf, const MetricConfig& = {}) {
  return pred.argmax() == y_cf ? 1.0 : 0.0;
}

// 1 - KL(onehot(y_cf) || pred) = 1 + ln pred(y_cf).
inline double ftc_kl(const LabelDistribution& pred, Label y_cf, const MetricConfig& cfg = {}) {
  return 1.0 + std::log(std::max(pred[y_cf], cfg.kl_floor));
}

inline double ground_distance(Label a, Label b, double alpha) {
  if (a == b) return 0.0;
  if (a == Label::N || b == Label::N) return alpha;
  return 1.0;
}

// 1 - W1(pred, point mass at y_cf).
inline double ftc_wasserstein(const LabelDistribution& pred, Label y_cf, const MetricConfig& cfg = {}) {
  double cost = 0.0;
  for (Label l : kAllLabels) cost += pred[l] * ground_distance(l, y_cf, cfg.alpha);
  return 1.0 - cost;
}

inline double ftc(FtcVariant v, const LabelDistribution& pred, Label y_cf, const MetricConfig& cfg = {}) {
  switch (v) {
    case FtcVariant::Delta: return ftc_delta(pred, y_cf, cfg);
    case FtcVariant::Kl: return ftc_kl(pred, y_cf, cfg);
    case FtcVariant::Wasserstein: return ftc_wasserstein(pred, y_cf, cfg);
  }
  return 0.0;
}

struct LasRow {
  int correct_with_x_and_e = 0;
  int correct_with_x = 0;
  int leak = 0;  // simulator correct from the explanation alone

  void validate() const {
    for (int v : {correct_with_x_and_e, correct_with_x, leak})
      if (v != 0 && v != 1) throw ArgumentError("LAS inputs must be 0/1");
  }
};

struct LasResult {
  std::optional<double> las0;  // non-leaking group
  std::optional<double> las1;  // leaking group
  std::optional<double> las;
  std::size_t n0 = 0;
  std::size_t n1 = 0;
};

// Each leakage group is averaged over its own size; an empty group leaves
// its score and the macro average undefined.
inline LasResult las_scores(std::span<const LasRow> rows) {
  LasResult r;
  double sum0 = 0.0;
  double sum1 = 0.0;
  for (const LasRow& row : rows) {
    row.validate();
    const double benefit = row.correct_with_x_and_e - row.correct_with_x;
    if (row.leak) {
      sum1 += benefit;
      ++r.n1;
    } else {
      sum0 += benefit;
      ++r.n0;
    }
  }
  if (r.n0) r.las0 = sum0 / static_cast<double>(r.n0);
  if (r.n1) r.las1 = sum1 / static_cast<double>(r.n1);
  if (r.las0 && r.las1) r.las = 0.5 * (*r.las0 + *r.las1);
  return r;
}

struct LraRow {
  int flip_robust = 0;      // F in {0, 1}
  int simulatability = 0;   // Z in {-1, 0, 1}

  void validate() const {
    if (flip_robust != 0 && flip_robust != 1) throw ArgumentError("LRA: F must be 0 or 1");
    if (simulatability < -1 || simulatability > 1) throw ArgumentError("LRA: Z must be in {-1, 0, 1}");
  }
};

// Fraction of rows with F == Z, compared as integers.
inline double lra_score(std::span<const LraRow> rows) {
  if (rows.empty()) throw ArgumentError("lra_score: no rows");
  std::size_t hits = 0;
  for (const LraRow& row : rows) {
    row.validate();
    if (row.flip_robust == row.simulatability) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

}  // namespace ftc
