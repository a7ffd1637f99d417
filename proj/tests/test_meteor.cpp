#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "ftc/meteor.hpp"

using namespace ftc;

namespace {

nlohmann::json load_reference() {
  std::ifstream in(std::string(FTC_TEST_DATA_DIR) + "/meteor_reference.json");
  EXPECT_TRUE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(Meteor, IdenticalThreeTokens) {
  // P = R = 1, one chunk over three matches
  const double expect = 1.0 - 0.5 * std::pow(1.0 / 3.0, 3.0);
  EXPECT_NEAR(meteor_single("a dog runs", "a dog runs"), expect, 1e-12);
  EXPECT_NEAR(meteor_single("a dog runs", "a dog runs"), 0.9815, 1e-4);
}

TEST(Meteor, CaseInsensitive) {
  EXPECT_DOUBLE_EQ(meteor_single("A Dog runs", "a dog runs"), meteor_single("a dog runs", "a dog runs"));
}

TEST(Meteor, DegenerateInputs) {
  EXPECT_EQ(meteor_single("the cat sleeps", "a dog barks"), 0.0);
  EXPECT_EQ(meteor_single("", "a dog runs"), 0.0);
  EXPECT_EQ(meteor_single("   ", "a dog runs"), 0.0);
  EXPECT_EQ(meteor("a dog", std::vector<std::string>{}), 0.0);
}

TEST(Meteor, StemStageMatches) {
  // dogs/dog and running/run only meet through the stemmer
  const double s = meteor_single("dogs running", "dog run");
  const double expect = 1.0 - 0.5 * std::pow(1.0 / 2.0, 3.0);
  EXPECT_NEAR(s, expect, 1e-12);
}

TEST(Meteor, FragmentationPenalty) {
  // three matches in three chunks
  const double expect = 1.0 - 0.5 * 1.0;
  EXPECT_NEAR(meteor_single("runs dog a", "a dog runs"), expect, 1e-12);
}

TEST(Meteor, UnequalLengthsHandComputed) {
  // 2 matches, P = 2/4, R = 2/2, one chunk
  const double p = 0.5, r = 1.0;
  const double fmean = 10 * p * r / (r + 9 * p);
  const double expect = fmean * (1.0 - 0.5 * std::pow(0.5, 3.0));
  EXPECT_NEAR(meteor_single("a dog and cat", "a dog"), expect, 1e-12);
}

TEST(Meteor, MultiReferenceTakesBest) {
  const std::vector<std::string> refs{"the cat sleeps", "a dog runs"};
  EXPECT_DOUBLE_EQ(meteor("a dog runs", refs), meteor_single("a dog runs", "a dog runs"));
}

TEST(MeteorProperty, ReferenceOrderAndDuplicates) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> words{"a", "dog", "dogs", "runs", "running", "the", "cat", "on", "bench"};
  auto sentence = [&] {
    std::string s;
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int i = 0; i < n; ++i) s += (i ? " " : "") + words[rng() % words.size()];
    return s;
  };
  for (int t = 0; t < 200; ++t) {
    const std::string cand = sentence();
    std::vector<std::string> refs{sentence(), sentence(), sentence()};
    const double base = meteor(cand, refs);
    std::shuffle(refs.begin(), refs.end(), rng);
    EXPECT_DOUBLE_EQ(meteor(cand, refs), base);
    const std::vector<std::string> same(3, refs[0]);
    EXPECT_DOUBLE_EQ(meteor(cand, same), meteor_single(cand, refs[0]));
    EXPECT_GE(base, 0.0);
    EXPECT_LE(base, 1.0);
  }
}

// Frozen scores from the NLTK implementation with synonyms disabled,
// produced by tests/oracles/meteor_reference.py.
TEST(MeteorReference, AgreesWithNltk) {
  const auto ref = load_reference();
  const auto& pairs = ref.at("pairs");
  ASSERT_EQ(pairs.size(), 50u);
  for (const auto& p : pairs) {
    const std::string c = p.at("candidate");
    const std::string r = p.at("reference");
    EXPECT_NEAR(meteor_single(c, r), p.at("score").get<double>(), 0.02) << c << " | " << r;
  }
}
