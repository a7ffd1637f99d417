#include "support/fixture.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>

#include "ftc/rewrite.hpp"
#include "ftc/text.hpp"

namespace ftc::testkit {

namespace {

const std::vector<std::string> kDogs{"poodle", "terrier", "beagle", "collie", "husky"};
const std::vector<std::string> kCats{"tabby", "siamese", "persian"};
const std::vector<std::string> kPeople{"girl", "boy", "man", "woman"};
const std::vector<std::string> kFurniture{"bench", "sofa", "chair", "stool", "bed"};
const std::vector<std::string> kPlay{"tire swing", "slide", "bench"};
const std::vector<std::pair<std::string, std::string>> kPlaces{
    {"outside", "outside"}, {"indoors", "indoors"}, {"at the beach", "beach"}, {"in the park", "park"}};

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

template <typename T>
const T& pick_other(const std::vector<T>& v, const T& not_this, std::mt19937_64& rng) {
  for (;;) {
    const T& x = pick(v, rng);
    if (!(x == not_this)) return x;
  }
}

OracleWorld build_world() {
  OracleWorld w;
  auto vocab = [&](const std::vector<std::string>& terms) { w.vocabulary.insert(terms.begin(), terms.end()); };
  vocab(kDogs);
  vocab(kCats);
  vocab(kPeople);
  vocab(kFurniture);
  vocab({"dog", "cat", "animal", "person", "furniture", "ball", "tire swing", "slide"});
  for (const auto& [phrase, loc] : kPlaces) w.locations.insert(loc);
  w.relations = {"barking at", "chasing", "playing with", "sitting on", "lying on", "on"};

  for (const auto& d : kDogs) w.add_isa(d, "dog");
  for (const auto& c : kCats) w.add_isa(c, "cat");
  w.add_isa("dog", "animal");
  w.add_isa("cat", "animal");
  for (const auto& p : kPeople) w.add_isa(p, "person");
  for (const auto& f : kFurniture) w.add_isa(f, "furniture");

  auto pairwise = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) w.add_disjoint(v[i], v[j]);
  };
  pairwise(kDogs);
  pairwise(kCats);
  pairwise(kFurniture);
  w.add_disjoint("dog", "cat");
  w.add_disjoint("man", "woman");
  w.add_disjoint("boy", "girl");
  w.add_disjoint("outside", "indoors");
  w.add_disjoint("beach", "park");
  w.add_disjoint("indoors", "beach");
  w.add_disjoint("indoors", "park");
  return w;
}

std::vector<Label> annotate(Label truth, const FixtureOptions& opts, std::mt19937_64& rng) {
  std::vector<Label> votes;
  std::bernoulli_distribution wrong(opts.annotator_error);
  for (int k = 0; k < opts.annotators; ++k) {
    if (wrong(rng)) {
      std::vector<Label> others;
      for (Label l : kAllLabels)
        if (l != truth) others.push_back(l);
      votes.push_back(pick(others, rng));
    } else {
      votes.push_back(truth);
    }
  }
  return votes;
}

std::string id_of(char cls, std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%04zu", cls, i);
  return buf;
}

void make_entailment(Fixture& fx, std::size_t i, std::mt19937_64& rng) {
  const bool dog = std::bernoulli_distribution(0.5)(rng);
  const std::string family = dog ? "dog" : "cat";
  const auto& breeds = dog ? kDogs : kCats;
  const std::string breed = pick(breeds, rng);
  const std::vector<std::string> rels =
      dog ? std::vector<std::string>{"barking at", "chasing", "playing with"}
          : std::vector<std::string>{"chasing", "playing with"};
  const std::string rel = pick(rels, rng);
  std::vector<std::string> objects = kPeople;
  objects.push_back("ball");
  const std::string obj = pick(objects, rng);

  FixtureItem it;
  it.instance.id = id_of('e', i);
  it.instance.premise_ref = "scene-" + it.instance.id;
  it.instance.gold_label = Label::E;
  it.instance.hypothesis = "The " + family + " is " + rel + " the " + obj + ".";
  it.instance.explanation = "The " + family + " is a " + breed + ".";
  it.gold_a = family;
  it.gold_b = breed;
  it.gold.push_back({Branch::Main, "The " + breed + " is " + rel + " the " + obj + ".", Label::E});
  it.random_edge = "The " + family + " is a " + pick_other(breeds, breed, rng) + ".";
  it.swapped = "The " + family + " is a " + obj + ".";
  fx.world.add_fact(it.instance.premise_ref, {breed, rel, obj});
  fx.items.push_back(std::move(it));
}

void make_contradiction(Fixture& fx, std::size_t i, std::mt19937_64& rng) {
  const std::string subj = pick(kPeople, rng);
  const std::string rel = std::bernoulli_distribution(0.5)(rng) ? "sitting on" : "lying on";
  const std::string truth = pick(kFurniture, rng);
  const std::string claim = pick_other(kFurniture, truth, rng);

  FixtureItem it;
  it.instance.id = id_of('c', i);
  it.instance.premise_ref = "scene-" + it.instance.id;
  it.instance.gold_label = Label::C;
  it.instance.hypothesis = "A " + subj + " is " + rel + " a " + claim + ".";
  it.instance.explanation = "A " + claim + " is not a " + truth + ".";
  it.gold_a = claim;
  it.gold_b = truth;
  it.gold.push_back({Branch::Main, "A " + subj + " is " + rel + " a " + truth + ".", Label::E});
  std::string random_b;
  do {
    random_b = pick(kFurniture, rng);
  } while (random_b == truth || random_b == claim);
  it.random_edge = "A " + claim + " is not a " + random_b + ".";
  it.swapped = "A " + claim + " is not a " + subj + ".";
  fx.world.add_fact(it.instance.premise_ref, {subj, rel, truth});
  fx.items.push_back(std::move(it));
}

std::string object_known_explanation(const std::string& obj, const std::string& place) {
  return "A " + obj + " is not necessarily " + place + ".";
}

std::string place_known_explanation(const std::string& obj, const std::string& place) {
  return text::capitalize_first(place) + " does not mean on a " + obj + ".";
}

void make_neutral(Fixture& fx, std::size_t i, std::mt19937_64& rng) {
  const std::string subj = pick(kPeople, rng);
  const std::string obj = pick(kPlay, rng);
  const auto& [place, loc] = pick(kPlaces, rng);
  const bool object_known = std::bernoulli_distribution(0.5)(rng);

  FixtureItem it;
  it.instance.id = id_of('n', i);
  it.instance.premise_ref = "scene-" + it.instance.id;
  it.instance.gold_label = Label::N;
  it.instance.hypothesis = "A " + subj + " on a " + obj + " " + place + ".";
  const std::string faithful = object_known ? object_known_explanation(obj, place)
                                            : place_known_explanation(obj, place);
  const std::string unfaithful = object_known ? place_known_explanation(obj, place)
                                              : object_known_explanation(obj, place);
  it.instance.explanation = faithful;
  if (object_known) {
    it.gold_a = obj;
    it.gold_b = place;
    it.gold.push_back({Branch::ABranch, "A " + subj + " on a " + obj + ".", Label::E});
    it.gold.push_back({Branch::NegBBranch, "A " + subj + " not " + place + ".", Label::N});
    fx.world.add_fact(it.instance.premise_ref, {subj, "on", obj});
  } else {
    it.gold_a = place;
    it.gold_b = "on a " + obj;
    it.gold.push_back({Branch::ABranch, "A " + subj + " " + place + ".", Label::E});
    it.gold.push_back({Branch::NegBBranch, "A " + subj + " not on a " + obj + ".", Label::N});
    fx.world.add_fact(it.instance.premise_ref, {subj, std::string(kLocatedRelation), loc});
  }
  it.random_edge = std::bernoulli_distribution(0.5)(rng) ? faithful : unfaithful;
  it.swapped = unfaithful;
  fx.items.push_back(std::move(it));
}

}  // namespace

Fixture make_fixture(const FixtureOptions& opts) {
  Fixture fx;
  fx.world = build_world();
  std::mt19937_64 rng(opts.seed);
  for (std::size_t i = 0; i < opts.per_class; ++i) make_entailment(fx, i, rng);
  for (std::size_t i = 0; i < opts.per_class; ++i) make_contradiction(fx, i, rng);
  for (std::size_t i = 0; i < opts.per_class; ++i) make_neutral(fx, i, rng);

  // u_only: the explanation template filled from some other scene of the class
  std::map<Label, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < fx.items.size(); ++i) by_class[fx.items[i].instance.gold_label].push_back(i);
  for (auto& it : fx.items) {
    const auto& peers = by_class[it.instance.gold_label];
    std::size_t j;
    do {
      j = pick(peers, rng);
    } while (peers.size() > 1 && fx.items[j].instance.id == it.instance.id);
    const FixtureItem& other = fx.items[j];
    switch (it.instance.gold_label) {
      case Label::E:
        it.other_premise = "The " + it.gold_a + " is a " + other.gold_b + ".";
        break;
      case Label::C:
        it.other_premise = "A " + it.gold_a + " is not a " + other.gold_b + ".";
        break;
      case Label::N:
        it.other_premise = other.instance.explanation;
        break;
    }
  }

  for (auto& it : fx.items)
    for (const auto& g : it.gold) it.instance.branch_annotator_labels[g.branch] = annotate(g.y_cf, opts, rng);
  fx.world.validate();
  return fx;
}

std::vector<Instance> Fixture::instances() const {
  std::vector<Instance> out;
  for (const auto& it : items) out.push_back(it.instance);
  return out;
}

std::vector<Instance> Fixture::shuffled(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out = instances();
  for (Label l : kAllLabels) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i].gold_label == l) idx.push_back(i);
    std::vector<std::string> expl;
    for (auto i : idx) expl.push_back(out[i].explanation);
    std::shuffle(expl.begin(), expl.end(), rng);
    for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]].explanation = expl[k];
  }
  for (auto& inst : out) {
    inst.annotator_labels.clear();
    inst.branch_annotator_labels.clear();
  }
  return out;
}

std::vector<ConditionedExplanationSet> Fixture::sensitivity_sets() const {
  std::vector<ConditionedExplanationSet> sets;
  for (AblationCondition c : kAllConditions) {
    ConditionedExplanationSet s{c, {}};
    for (const auto& it : items) {
      switch (c) {
        case AblationCondition::FullYxu: s.explanations[it.instance.id] = it.instance.explanation; break;
        case AblationCondition::YOnly: s.explanations[it.instance.id] = it.random_edge; break;
        case AblationCondition::XOnly: s.explanations[it.instance.id] = it.swapped; break;
        case AblationCondition::UOnly: s.explanations[it.instance.id] = it.other_premise; break;
      }
    }
    sets.push_back(std::move(s));
  }
  return sets;
}

std::vector<CannedResponse> Fixture::echo_responses(const std::vector<FixtureItem>& subset) const {
  const FspTemplates t;
  std::vector<CannedResponse> out;
  for (const auto& it : subset) {
    const Instance& inst = it.instance;
    out.push_back({detail::render(t.extract.input_pattern,
                                  {{"hypothesis", inst.hypothesis}, {"explanation", inst.explanation}}),
                   "A: " + it.gold_a + " | B: " + it.gold_b});
    for (const auto& g : it.gold) {
      out.push_back({detail::render(t.transform.input_pattern, {{"hypothesis", inst.hypothesis},
                                                                {"a", it.gold_a},
                                                                {"b", it.gold_b},
                                                                {"branch", detail::branch_goal(g.branch)}}),
                     g.x_cf});
    }
  }
  return out;
}

std::string scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("ftc-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace ftc::testkit
