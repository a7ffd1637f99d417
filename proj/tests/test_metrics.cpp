#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ftc/metrics.hpp"

using namespace ftc;

namespace {

LabelDistribution one_hot(Label l) {
  LabelDistribution d{0, 0, 0};
  d[l] = 1.0;
  return d;
}

// Dirichlet(1,1,1) draws, with occasional exact zeros and ties.
LabelDistribution random_distribution(std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::uniform_int_distribution<int> shape(0, 9);
  double v[3] = {ex(rng), ex(rng), ex(rng)};
  const int s = shape(rng);
  if (s == 0) v[shape(rng) % 3] = 0.0;
  if (s == 1) v[1] = v[0];
  const double z = v[0] + v[1] + v[2];
  return {v[0] / z, v[1] / z, v[2] / z};
}

Label random_label(std::mt19937_64& rng) {
  return kAllLabels[std::uniform_int_distribution<int>(0, 2)(rng)];
}

}  // namespace

TEST(FtcDelta, Examples) {
  EXPECT_EQ(ftc_delta({0.1, 0.8, 0.1}, Label::C), 1.0);
  EXPECT_EQ(ftc_delta({0.8, 0.1, 0.1}, Label::C), 0.0);
  EXPECT_EQ(ftc_delta({0.5, 0.5, 0.0}, Label::E), 1.0);
  EXPECT_EQ(ftc_delta({0.5, 0.5, 0.0}, Label::C), 0.0);
  EXPECT_EQ(ftc_delta({0.0, 0.5, 0.5}, Label::C), 1.0);
}

TEST(FtcKl, Examples) {
  for (Label y : kAllLabels) EXPECT_DOUBLE_EQ(ftc_kl(one_hot(y), y), 1.0);
  const double third = 1.0 / 3.0;
  EXPECT_NEAR(ftc_kl({third, third, third}, Label::N), 1.0 - std::log(3.0), 1e-12);
  EXPECT_NEAR(1.0 - std::log(3.0), -0.0986, 1e-4);
  const double inv_e = std::exp(-1.0);
  EXPECT_NEAR(ftc_kl({inv_e, 1.0 - inv_e, 0.0}, Label::E), 0.0, 1e-12);
}

TEST(FtcKl, FloorKeepsValueFinite) {
  const double v = ftc_kl(one_hot(Label::E), Label::C);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, 1.0 + std::log(1e-12), 1e-9);
  MetricConfig cfg;
  cfg.kl_floor = 1e-3;
  EXPECT_NEAR(ftc_kl(one_hot(Label::E), Label::C, cfg), 1.0 + std::log(1e-3), 1e-12);
}

TEST(FtcWasserstein, Examples) {
  for (Label y : kAllLabels) EXPECT_DOUBLE_EQ(ftc_wasserstein(one_hot(y), y), 1.0);
  EXPECT_DOUBLE_EQ(ftc_wasserstein(one_hot(Label::C), Label::E), 0.0);
  EXPECT_DOUBLE_EQ(ftc_wasserstein(one_hot(Label::N), Label::E), 0.5);
  MetricConfig cfg;
  cfg.alpha = 0.2;
  EXPECT_DOUBLE_EQ(ftc_wasserstein(one_hot(Label::N), Label::C, cfg), 0.8);
  EXPECT_DOUBLE_EQ(ftc_wasserstein(one_hot(Label::E), Label::N, cfg), 0.8);
}

TEST(FtcWasserstein, UniformClosedForm) {
  const double third = 1.0 / 3.0;
  for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
    MetricConfig cfg;
    cfg.alpha = alpha;
    // mean distance from y to the other two labels
    const double mean_ec = (1.0 + alpha) / 2.0;
    const double mean_n = alpha;
    EXPECT_NEAR(ftc_wasserstein({third, third, third}, Label::E, cfg), 1.0 - 2.0 / 3.0 * mean_ec, 1e-12);
    EXPECT_NEAR(ftc_wasserstein({third, third, third}, Label::C, cfg), 1.0 - 2.0 / 3.0 * mean_ec, 1e-12);
    EXPECT_NEAR(ftc_wasserstein({third, third, third}, Label::N, cfg), 1.0 - 2.0 / 3.0 * mean_n, 1e-12);
  }
}

// Against a point mass the only feasible plan sends each label's mass to y,
// so W1 is that plan's cost under the full ground matrix.
TEST(FtcWasserstein, MatchesTransportDefinition) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const LabelDistribution p = random_distribution(rng);
    const Label y = random_label(rng);
    const double alpha = ua(rng);
    const double d[3][3] = {{0, 1, alpha}, {1, 0, alpha}, {alpha, alpha, 0}};
    const int yi = static_cast<int>(y);
    double cost = 0.0;
    for (int l = 0; l < 3; ++l) cost += p[kAllLabels[l]] * d[l][yi];
    MetricConfig cfg;
    cfg.alpha = alpha;
    EXPECT_NEAR(ftc_wasserstein(p, y, cfg), 1.0 - cost, 1e-12);
  }
}

TEST(Ftc, DispatchAndNames) {
  const LabelDistribution p{0.2, 0.5, 0.3};
  EXPECT_EQ(ftc::ftc(FtcVariant::Delta, p, Label::C), ftc_delta(p, Label::C));
  EXPECT_EQ(ftc::ftc(FtcVariant::Kl, p, Label::C), ftc_kl(p, Label::C));
  EXPECT_EQ(ftc::ftc(FtcVariant::Wasserstein, p, Label::C), ftc_wasserstein(p, Label::C));
  EXPECT_EQ(to_string(FtcVariant::Delta), "ftc_delta");
  EXPECT_EQ(to_string(FtcVariant::Kl), "ftc_kl");
  EXPECT_EQ(to_string(FtcVariant::Wasserstein), "ftc_w");
}

TEST(MetricConfig, Validation) {
  MetricConfig c;
  c.alpha = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c.alpha = 0.5;
  c.kl_floor = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(FtcProperty, RangesOnRandomDistributions) {
  std::mt19937_64 rng(1);
  MetricConfig cfg;
  for (int i = 0; i < 1000; ++i) {
    const LabelDistribution p = random_distribution(rng);
    ASSERT_TRUE(p.valid());
    const Label y = random_label(rng);
    const double d = ftc_delta(p, y, cfg);
    EXPECT_TRUE(d == 0.0 || d == 1.0);
    const double w = ftc_wasserstein(p, y, cfg);
    EXPECT_GE(w, -1e-12);
    EXPECT_LE(w, 1.0 + 1e-12);
    const double k = ftc_kl(p, y, cfg);
    EXPECT_LE(k, 1.0 + 1e-12);
    if (p[y] < 1.0 - 1e-9) {
      EXPECT_LT(k, 1.0);
    }
  }
}

TEST(FtcProperty, OneHotCorrectIsOneForAllVariants) {
  for (double alpha : {0.0, 0.5, 1.0})
    for (Label y : kAllLabels)
      for (FtcVariant v : kAllVariants) {
        MetricConfig cfg;
        cfg.alpha = alpha;
        EXPECT_DOUBLE_EQ(ftc::ftc(v, one_hot(y), y, cfg), 1.0);
      }
}

TEST(FtcProperty, MonotoneInTargetMass) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const LabelDistribution p = random_distribution(rng);
    const Label y = random_label(rng);
    // raise p(y) to t, scale the rest proportionally
    const double t = p[y] + (1.0 - p[y]) * u(rng);
    LabelDistribution q = p;
    const double rest = 1.0 - p[y];
    for (Label l : kAllLabels) {
      if (l == y) q[l] = t;
      else if (rest > 0) q[l] = p[l] * (1.0 - t) / rest;
    }
    MetricConfig cfg;
    cfg.alpha = u(rng);
    for (FtcVariant v : kAllVariants)
      EXPECT_GE(ftc::ftc(v, q, y, cfg) + 1e-12, ftc::ftc(v, p, y, cfg)) << to_string(v);
  }
}

// ---- LAS ----

TEST(Las, Examples) {
  const std::vector<LasRow> rows{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {0, 1, 1}};
  const LasResult r = las_scores(rows);
  EXPECT_DOUBLE_EQ(*r.las0, 0.5);
  EXPECT_DOUBLE_EQ(*r.las1, -0.5);
  EXPECT_DOUBLE_EQ(*r.las, 0.0);
  EXPECT_EQ(r.n0, 2u);
  EXPECT_EQ(r.n1, 2u);
}

TEST(Las, EmptyGroupUndefined) {
  const std::vector<LasRow> rows{{1, 0, 0}, {1, 0, 0}};
  const LasResult r = las_scores(rows);
  EXPECT_DOUBLE_EQ(*r.las0, 1.0);
  EXPECT_FALSE(r.las1.has_value());
  EXPECT_FALSE(r.las.has_value());
}

TEST(Las, NoBenefitIsZero) {
  const std::vector<LasRow> rows{{1, 1, 0}, {0, 0, 0}, {1, 1, 1}, {0, 0, 1}};
  EXPECT_DOUBLE_EQ(*las_scores(rows).las, 0.0);
}

TEST(Las, RejectsNonBinary) {
  const std::vector<LasRow> rows{{2, 0, 0}};
  EXPECT_THROW(las_scores(rows), ArgumentError);
}

// ---- LRA ----

TEST(Lra, Examples) {
  EXPECT_DOUBLE_EQ(lra_score(std::vector<LraRow>{{1, 1}, {1, 1}}), 1.0);
  EXPECT_DOUBLE_EQ(lra_score(std::vector<LraRow>{{1, 1}, {0, 0}, {1, 0}, {0, -1}}), 0.5);
  EXPECT_DOUBLE_EQ(lra_score(std::vector<LraRow>{{0, -1}, {0, -1}}), 0.0);
}

TEST(Lra, Errors) {
  EXPECT_THROW(lra_score(std::vector<LraRow>{}), ArgumentError);
  EXPECT_THROW(lra_score(std::vector<LraRow>{{2, 0}}), ArgumentError);
  EXPECT_THROW(lra_score(std::vector<LraRow>{{1, 2}}), ArgumentError);
}

// Brute-force transcription from raw simulator predictions:
//   k_i = 1[y_hat | e == y],  LAS_k = mean over group k of 1[y_hat | x,e == y] - 1[y_hat | x == y]
//   Z_i = 1[y_hat | x,e == y] - 1[y_hat | x == y],  LRA = mean 1[F_i == Z_i]
TEST(LasLraProperty, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> nrows(1, 12);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int t = 0; t < 1000; ++t) {
    const int n = nrows(rng);
    std::vector<LasRow> las;
    std::vector<LraRow> lra;
    double s[2] = {0, 0};
    int cnt[2] = {0, 0};
    int lra_hits = 0;
    for (int i = 0; i < n; ++i) {
      const Label y = random_label(rng);
      const Label y_xe = random_label(rng);
      const Label y_x = random_label(rng);
      const Label y_e = random_label(rng);
      const int f = bit(rng);
      const int k = (y_e == y) ? 1 : 0;
      const int z = (y_xe == y ? 1 : 0) - (y_x == y ? 1 : 0);
      s[k] += z;
      cnt[k] += 1;
      if (f == z) ++lra_hits;
      las.push_back({y_xe == y ? 1 : 0, y_x == y ? 1 : 0, k});
      lra.push_back({f, z});
    }
    const LasResult r = las_scores(las);
    for (int k = 0; k < 2; ++k) {
      const auto& got = k == 0 ? r.las0 : r.las1;
      if (cnt[k] == 0) {
        EXPECT_FALSE(got.has_value());
      } else {
        ASSERT_TRUE(got.has_value());
        EXPECT_EQ(*got, s[k] / cnt[k]);
      }
    }
    if (cnt[0] && cnt[1]) {
      EXPECT_EQ(*r.las, (s[0] / cnt[0] + s[1] / cnt[1]) / 2);
    } else {
      EXPECT_FALSE(r.las.has_value());
    }
    EXPECT_EQ(lra_score(lra), static_cast<double>(lra_hits) / n);
  }
}
