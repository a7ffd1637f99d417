#pragma once

// Random small oracle worlds and a brute-force labeller that enumerates
// every truth assignment to the atoms of a hypothesis.

#include <random>
#include <string>
#include <vector>

#include "ftc/label.hpp"
#include "ftc/oracle.hpp"

namespace ftc::testkit {

struct RandomWorld {
  OracleWorld world;
  std::string premise = "scene";
  std::vector<std::string> terms;
  std::vector<std::string> locations;
};

struct RandomHypothesis {
  std::string text;
  std::vector<Literal> literals;  // in rendered order
};

RandomWorld random_world(std::mt19937_64& rng);
RandomHypothesis random_hypothesis(const RandomWorld& w, std::mt19937_64& rng);

// E if every admissible model satisfies the conjunction, C if none does,
// N otherwise. Admissible: derivable atoms true, refuted atoms false.
Label enumerate_label(const RandomWorld& w, const std::vector<Literal>& literals);

}  // namespace ftc::testkit
