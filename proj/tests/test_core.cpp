#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "ftc/core.hpp"
#include "ftc/label.hpp"

using namespace ftc;

namespace {

DatasetFormatConfig tsv_config() {
  return DatasetFormatConfig::from_json(json{{"format", "tsv"},
                                             {"columns",
                                              {{"id", "pairID"},
                                               {"premise", "Flickr30kID"},
                                               {"hypothesis", "hypothesis"},
                                               {"label", "gold_label"},
                                               {"explanation", "Explanation_1"},
                                               {"annotator_labels", {"ann1", "ann2", "ann3"}}}}});
}

DatasetFormatConfig jsonl_config() {
  return DatasetFormatConfig::from_json(
      json{{"format", "jsonl"},
           {"columns", {{"annotator_labels", {"votes"}}, {"branch_annotator_labels", {{"negB_branch", {"negb_votes"}}}}}}});
}

std::string random_text(std::mt19937_64& rng, bool allow_json_only) {
  static const std::vector<std::string> pieces{"dog", "The", " ", "girl", ",", "é", "ß", "\"q\"", "\\", "日本",
                                               "x", "."};
  std::string s;
  const int n = std::uniform_int_distribution<int>(1, 8)(rng);
  for (int i = 0; i < n; ++i) s += pieces[rng() % pieces.size()];
  if (allow_json_only && rng() % 4 == 0) s += "\ttab";
  if (text::trim(s).empty()) s = "z";
  return s;
}

std::vector<Label> random_labels(std::mt19937_64& rng, std::size_t max) {
  std::vector<Label> out(rng() % (max + 1));
  for (auto& l : out) l = kAllLabels[rng() % 3];
  return out;
}

}  // namespace

TEST(Labels, OrderAndCodes) {
  EXPECT_EQ(index_of(Label::E), 0u);
  EXPECT_EQ(index_of(Label::C), 1u);
  EXPECT_EQ(index_of(Label::N), 2u);
  EXPECT_EQ(parse_label_code("N"), Label::N);
  EXPECT_THROW(parse_label_code("X"), ArgumentError);
}

TEST(Labels, ArgmaxTiesFavourEarlierLabel) {
  EXPECT_EQ((LabelDistribution{0.5, 0.5, 0.0}).argmax(), Label::E);
  EXPECT_EQ((LabelDistribution{0.0, 0.5, 0.5}).argmax(), Label::C);
  EXPECT_EQ((LabelDistribution{0.2, 0.3, 0.5}).argmax(), Label::N);
}

TEST(Labels, DistributionValidation) {
  EXPECT_TRUE((LabelDistribution{0.2, 0.3, 0.5}).valid());
  EXPECT_TRUE((LabelDistribution{0.2, 0.3, 0.5 + 5e-7}).valid());
  EXPECT_FALSE((LabelDistribution{0.2, 0.3, 0.51}).valid());
  EXPECT_FALSE((LabelDistribution{-0.1, 0.6, 0.5}).valid());
  EXPECT_THROW((LabelDistribution{0.4, 0.4, 0.4}).validate(), ArgumentError);
}

TEST(ParseInstances, TsvRowFromEsnli) {
  const std::string data =
      "pairID\tFlickr30kID\thypothesis\tgold_label\tExplanation_1\tann1\tann2\tann3\n"
      "p1\t3416050480.jpg\tThe dog is barking at the girl.\tentailment\tThe dog is an animal.\tE\tE\t\n";
  const auto r = parse_instances(data, tsv_config());
  ASSERT_TRUE(r.errors.empty());
  ASSERT_EQ(r.instances.size(), 1u);
  const Instance& i = r.instances[0];
  EXPECT_EQ(i.gold_label, Label::E);
  EXPECT_EQ(i.premise_ref, "3416050480.jpg");
  EXPECT_EQ(i.hypothesis, "The dog is barking at the girl.");
  EXPECT_EQ(i.explanation, "The dog is an animal.");
  EXPECT_EQ(i.annotator_labels, (std::vector<Label>{Label::E, Label::E}));
}

TEST(ParseInstances, EmptyStreamWithHeader) {
  const auto r = parse_instances(
      std::string("pairID\tFlickr30kID\thypothesis\tgold_label\tExplanation_1\tann1\tann2\tann3\n"), tsv_config());
  EXPECT_TRUE(r.instances.empty());
  EXPECT_TRUE(r.errors.empty());
}

TEST(ParseInstances, AliasesAreCaseInsensitive) {
  auto cfg = DatasetFormatConfig::from_json(json{{"label_aliases", {{"Entailment", "E"}, {"yes", "E"}}}});
  const auto r = parse_instances(std::string("id\tpremise\thypothesis\tlabel\texplanation\n"
                                             "1\tu\th\t ENTAILMENT \te\n"
                                             "2\tu\th\tYES\te\n"),
                                 cfg);
  ASSERT_EQ(r.instances.size(), 2u);
  EXPECT_EQ(r.instances[0].gold_label, Label::E);
  EXPECT_EQ(r.instances[1].gold_label, Label::E);
}

TEST(ParseInstances, BadRowsReportedWithRowNumbers) {
  DatasetFormatConfig cfg;
  const auto r = parse_instances(std::string("id\tpremise\thypothesis\tlabel\texplanation\n"
                                             "1\tu\th\tentailment\te\n"
                                             "2\tu\th\tmaybe\te\n"
                                             "3\tu\th\n"
                                             "4\tu\t  \tneutral\te\n"
                                             "1\tu\th\tneutral\te\r\n"
                                             "6\tu\th\tcontradiction\te\r\n"),
                                 cfg);
  ASSERT_EQ(r.instances.size(), 2u);
  EXPECT_EQ(r.instances[1].id, "6");
  ASSERT_EQ(r.errors.size(), 4u);
  EXPECT_EQ(r.errors[0].row, 3u);
  EXPECT_NE(r.errors[0].message.find("maybe"), std::string::npos);
  EXPECT_EQ(r.errors[1].row, 4u);
  EXPECT_EQ(r.errors[2].row, 5u);
  EXPECT_EQ(r.errors[3].row, 6u);
  EXPECT_NE(r.errors[3].message.find("duplicate"), std::string::npos);
}

TEST(ParseInstances, MissingColumnIsFatal) {
  EXPECT_THROW(parse_instances(std::string("id\tpremise\thypothesis\tlabel\n"), DatasetFormatConfig{}),
               ConfigError);
}

TEST(ParseInstances, ErrorLimitAborts) {
  DatasetFormatConfig cfg;
  cfg.max_errors = 2;
  std::string data = "id\tpremise\thypothesis\tlabel\texplanation\n";
  for (int i = 0; i < 5; ++i) data += std::to_string(i) + "\tu\th\t??\te\n";
  EXPECT_THROW(parse_instances(data, cfg), DatasetError);
}

TEST(ParseInstances, JsonlRows) {
  const auto r = parse_instances(
      std::string(R"({"id":"a","premise":"img1","hypothesis":"h","label":"neutral","explanation":"e","votes":["N","N","E"]})"
                  "\n\n"
                  R"({"id":"b","premise":"img2","hypothesis":"h","label":"E","explanation":"e"})"
                  "\n"
                  R"({"id":"c","premise":"img2","hypothesis":"h"})"
                  "\n"
                  "not json\n"),
      jsonl_config());
  ASSERT_EQ(r.instances.size(), 2u);
  EXPECT_EQ(r.instances[0].annotator_labels.size(), 3u);
  ASSERT_EQ(r.errors.size(), 2u);
  EXPECT_EQ(r.errors[0].row, 4u);
  EXPECT_EQ(r.errors[1].row, 5u);
}

TEST(ParseInstances, ConfigRejectsDoubleMappedColumn) {
  EXPECT_THROW(DatasetFormatConfig::from_json(json{{"columns", {{"hypothesis", "text"}, {"explanation", "text"}}}}),
               ConfigError);
  EXPECT_THROW(DatasetFormatConfig::from_json(json{{"format", "csv"}}), ConfigError);
}

TEST(ParseInstancesProperty, TsvRoundTrip) {
  std::mt19937_64 rng(11);
  const auto cfg = tsv_config();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Instance> in;
    const int n = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      Instance inst;
      inst.id = "id" + std::to_string(trial) + "_" + std::to_string(i);
      inst.premise_ref = random_text(rng, false);
      inst.hypothesis = random_text(rng, false);
      inst.explanation = random_text(rng, false);
      inst.gold_label = kAllLabels[rng() % 3];
      inst.annotator_labels = random_labels(rng, 3);
      in.push_back(inst);
    }
    std::ostringstream os;
    serialize_instances(os, in, cfg);
    const auto r = parse_instances(os.str(), cfg);
    ASSERT_TRUE(r.errors.empty());
    ASSERT_EQ(r.instances, in);
    std::ostringstream again;
    serialize_instances(again, r.instances, cfg);
    EXPECT_EQ(again.str(), os.str());
  }
}

TEST(ParseInstancesProperty, JsonlRoundTrip) {
  std::mt19937_64 rng(12);
  const auto cfg = jsonl_config();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Instance> in;
    const int n = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      Instance inst;
      inst.id = "id" + std::to_string(i);
      inst.premise_ref = random_text(rng, true);
      inst.hypothesis = random_text(rng, true);
      inst.explanation = random_text(rng, true);
      inst.gold_label = kAllLabels[rng() % 3];
      inst.annotator_labels = random_labels(rng, 5);
      auto negb = random_labels(rng, 3);
      if (!negb.empty()) inst.branch_annotator_labels[Branch::NegBBranch] = negb;
      in.push_back(inst);
    }
    std::ostringstream os;
    serialize_instances(os, in, cfg);
    const auto r = parse_instances(os.str(), cfg);
    ASSERT_TRUE(r.errors.empty());
    ASSERT_EQ(r.instances, in);
  }
}

TEST(ParseInstances, TsvRefusesTabsInFields) {
  Instance inst;
  inst.id = "1";
  inst.hypothesis = "a\tb";
  inst.explanation = "e";
  std::ostringstream os;
  EXPECT_THROW(serialize_instances(os, std::vector<Instance>{inst}, DatasetFormatConfig{}), ArgumentError);
}

TEST(MajorityVote, Examples) {
  using L = Label;
  EXPECT_EQ(majority_vote(std::vector<L>{L::E, L::E, L::C}), L::E);
  EXPECT_EQ(majority_vote(std::vector<L>{L::E, L::C, L::N}), std::nullopt);
  EXPECT_EQ(majority_vote(std::vector<L>{L::C, L::C, L::C}), L::C);
  EXPECT_EQ(majority_vote(std::vector<L>{L::C, L::E}), std::nullopt);
  EXPECT_THROW(majority_vote(std::vector<L>{}), ArgumentError);
}

TEST(MajorityVoteProperty, PermutationInvariantAndStrict) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    auto labels = random_labels(rng, 7);
    if (labels.empty()) labels.push_back(Label::N);
    const auto expected = majority_vote(labels);
    // brute-force: a label with more than half the votes
    std::optional<Label> brute;
    for (Label l : kAllLabels)
      if (2 * static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l)) > labels.size()) brute = l;
    ASSERT_EQ(expected, brute);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(labels.begin(), labels.end(), rng);
      ASSERT_EQ(majority_vote(labels), expected);
    }
  }
}

TEST(FilterConsistent, Examples) {
  auto rec = [](std::vector<Label> ann) {
    AnnotatedRecord r;
    r.instance.id = "x";
    r.instance.annotator_labels = std::move(ann);
    r.record.y_cf = Label::E;
    return r;
  };
  const std::vector<AnnotatedRecord> in{rec({Label::E, Label::E, Label::E}), rec({Label::C, Label::C, Label::E}),
                                        rec({Label::E, Label::C, Label::N}), rec({})};
  const auto out = filter_consistent(in);
  ASSERT_EQ(out.kept.size(), 1u);
  ASSERT_EQ(out.dropped.size(), 3u);
  EXPECT_EQ(out.dropped[0].reason, DropReason::MajorityMismatch);
  EXPECT_EQ(out.dropped[1].reason, DropReason::Tie);
  EXPECT_EQ(out.dropped[2].reason, DropReason::Unannotated);
}

TEST(FilterConsistent, BranchLabelsTakePrecedence) {
  AnnotatedRecord r;
  r.instance.annotator_labels = {Label::N, Label::N, Label::N};
  r.instance.branch_annotator_labels[Branch::ABranch] = {Label::E, Label::E, Label::N};
  r.record.branch = Branch::ABranch;
  r.record.y_cf = Label::E;
  EXPECT_EQ(consistency_verdict(r.instance, r.record), std::nullopt);
  r.record.branch = Branch::NegBBranch;
  r.record.y_cf = Label::N;
  EXPECT_EQ(consistency_verdict(r.instance, r.record), std::nullopt);
}

TEST(FilterConsistentProperty, PartitionsInputInOrder) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<AnnotatedRecord> in(rng() % 12);
    for (std::size_t i = 0; i < in.size(); ++i) {
      in[i].instance.id = std::to_string(i);
      in[i].instance.annotator_labels = random_labels(rng, 4);
      in[i].record.instance_id = in[i].instance.id;
      in[i].record.y_cf = kAllLabels[rng() % 3];
    }
    const auto out = filter_consistent(in);
    ASSERT_EQ(out.kept.size() + out.dropped.size(), in.size());
    std::vector<std::string> kept_ids, dropped_ids, all;
    for (const auto& k : out.kept) kept_ids.push_back(k.instance.id);
    for (const auto& d : out.dropped) dropped_ids.push_back(d.item.instance.id);
    ASSERT_TRUE(std::is_sorted(kept_ids.begin(), kept_ids.end(),
                               [](auto& a, auto& b) { return std::stoi(a) < std::stoi(b); }));
    ASSERT_TRUE(std::is_sorted(dropped_ids.begin(), dropped_ids.end(),
                               [](auto& a, auto& b) { return std::stoi(a) < std::stoi(b); }));
    all = kept_ids;
    all.insert(all.end(), dropped_ids.begin(), dropped_ids.end());
    std::sort(all.begin(), all.end());
    ASSERT_TRUE(std::adjacent_find(all.begin(), all.end()) == all.end());
  }
}
