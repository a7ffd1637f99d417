#pragma once

// Synthetic oracle-world datasets for the end-to-end, sensitivity and
// replay tests. Every instance carries its gold spans and gold
// counterfactual text, written out by template rather than produced by the
// rewrite engine.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ftc/core.hpp"
#include "ftc/mock.hpp"
#include "ftc/oracle.hpp"
#include "ftc/sensitivity.hpp"

namespace ftc::testkit {

struct GoldCounterfactual {
  Branch branch;
  std::string x_cf;
  Label y_cf;
};

struct FixtureItem {
  Instance instance;
  std::string gold_a;
  std::string gold_b;
  std::vector<GoldCounterfactual> gold;
  // explanation variants used by the sensitivity harness
  std::string random_edge;    // label template with a random B
  std::string swapped;        // hypothesis terms in the wrong roles
  std::string other_premise;  // B taken from a different scene
};

struct Fixture {
  OracleWorld world;
  std::vector<FixtureItem> items;

  std::vector<Instance> instances() const;
  // Explanations permuted within each gold class.
  std::vector<Instance> shuffled(std::uint64_t seed) const;
  std::vector<ConditionedExplanationSet> sensitivity_sets() const;
  // Canned generator answers that echo the gold spans and rewrites.
  std::vector<CannedResponse> echo_responses(const std::vector<FixtureItem>& subset) const;
};

struct FixtureOptions {
  std::size_t per_class = 200;
  std::uint64_t seed = 7;
  double annotator_error = 0.1;
  int annotators = 3;
};

Fixture make_fixture(const FixtureOptions& opts = {});

// Directory for scratch files, unique per call.
std::string scratch_dir(const std::string& tag);

}  // namespace ftc::testkit
