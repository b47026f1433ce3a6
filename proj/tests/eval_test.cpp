#include "isgspot/eval.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "graph_fixtures.hpp"
#include "isgspot/error.hpp"

namespace isgspot {
namespace {

using testing::make_graph;

DetectionResult single_group(const ISGraph& g, std::vector<NodeId> nodes) {
  DetectionResult r;
  r.groups.push_back({0, make_group(g, std::move(nodes))});
  return r;
}

TEST(ScoresTest, TriangleMembersAndOutsiders) {
  const auto g = make_graph({0, 0, 0, 0}, {{0, 1, 2}, {1, 2, 2}, {0, 2, 2}});
  const auto t = suspiciousness_scores(g, single_group(g, {0, 1, 2}));
  EXPECT_EQ(t.scores, (std::vector<double>{4, 4, 4, 0}));
  EXPECT_EQ(t.ranks(), (std::vector<std::size_t>{1, 1, 1, 4}));
}

TEST(ScoresTest, SingletonGroup) {
  const auto g = make_graph({5, 1}, {{0, 1, 3}});
  const auto t = suspiciousness_scores(g, single_group(g, {0}));
  EXPECT_EQ(t.scores, (std::vector<double>{5, 0}));
}

TEST(ScoresTest, MissingNodeIsConsistencyError) {
  const auto g = make_graph({5, 1, 0}, {});
  const auto small = make_graph({5}, {});
  try {
    suspiciousness_scores(small, single_group(g, {2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConsistency);
  }
}

TEST(ScoresTest, DetectedGroupsScoreTheirContributions) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_disconnected_graph(rng, 30);
    const auto r = detect(g);
    const auto t = suspiciousness_scores(r.graph, r);
    ASSERT_EQ(t.scores.size(), g.node_count());
    std::vector<bool> member(g.node_count(), false);
    for (const auto& d : r.groups) {
      for (NodeId u : d.group.nodes) {
        member[u] = true;
        EXPECT_NEAR(t.scores[u], node_weight(r.graph, u, d.group.nodes), 1e-12 * (1 + t.scores[u]));
      }
    }
    for (NodeId u = 0; u < g.node_count(); ++u) {
      EXPECT_GE(t.scores[u], 0.0);
      if (!member[u]) EXPECT_EQ(t.scores[u], 0.0);
    }
  }
}

TEST(AucTest, Examples) {
  EXPECT_EQ(auc(std::vector<double>{5, 4, 1, 0}, {true, true, false, false}).auc, 1.0);
  const auto ties = auc(std::vector<double>{2, 2, 2, 2}, {true, false, true, false});
  EXPECT_EQ(ties.auc, 0.5);
  EXPECT_EQ(ties.ties, 4u);
  const auto hand = auc(std::vector<double>{3, 2, 1, 0}, {true, false, true, false});
  EXPECT_EQ(hand.auc, 0.75);
  EXPECT_EQ(hand.positives, 2u);
  EXPECT_EQ(hand.negatives, 2u);
  EXPECT_EQ(hand.ties, 0u);
}

TEST(AucTest, SingleClassIsUndefined) {
  for (const std::vector<bool>& labels : {std::vector<bool>{true, true}, std::vector<bool>{false, false}}) {
    try {
      auc(std::vector<double>{1, 2}, labels);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kUndefinedAuc);
      EXPECT_EQ(e.exit_status(), 1);
    }
  }
  EXPECT_THROW(auc(std::vector<double>{1}, {true, false}), Error);
}

double pairwise_auc(const std::vector<double>& s, const std::vector<bool>& y) {
  double credit = 0;
  double pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!y[i] || y[j]) continue;
      pairs += 1;
      credit += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
    }
  }
  return credit / pairs;
}

TEST(AucPropertyTest, MatchesPairCountAndTransforms) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(2, 60);
  std::uniform_int_distribution<int> level(0, 6);  // coarse scores produce ties
  for (int trial = 0; trial < 300; ++trial) {
    const int n = size(rng);
    std::vector<double> s(n);
    std::vector<bool> y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = level(rng);
      y[i] = (rng() & 1) != 0;
    }
    y[0] = true;
    y[1] = false;
    const double a = auc(s, y).auc;
    EXPECT_NEAR(a, pairwise_auc(s, y), 1e-12);

    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = std::exp(3 * s[i]) - 7;
    EXPECT_NEAR(auc(t, y).auc, a, 1e-12);

    // Complement with tie-free scores.
    std::vector<double> distinct(n);
    for (int i = 0; i < n; ++i) distinct[i] = s[i] + 1e-3 * i;
    std::vector<bool> flipped(n);
    for (int i = 0; i < n; ++i) flipped[i] = !y[i];
    EXPECT_NEAR(auc(distinct, y).auc + auc(distinct, flipped).auc, 1.0, 1e-12);
  }
}

TEST(CsvReadersTest, ScoresAndLabels) {
  std::istringstream scores("entity,score,rank\nalice,4.5,1\r\nbob,0,2\n\n");
  const auto s = read_scores_csv(scores);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].entity, "alice");
  EXPECT_EQ(s[0].score, 4.5);

  std::istringstream labels("entity,label\nalice,1\nbob,false\ncarol,fraud\ndave,legit\n");
  const auto l = read_labels_csv(labels);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_TRUE(l[0].fraud);
  EXPECT_FALSE(l[1].fraud);
  EXPECT_TRUE(l[2].fraud);
  EXPECT_FALSE(l[3].fraud);

  std::istringstream bad_score("entity,score\nalice,high\n");
  EXPECT_THROW(read_scores_csv(bad_score), Error);
  std::istringstream bad_label("entity,label\nalice,maybe\n");
  EXPECT_THROW(read_labels_csv(bad_label), Error);
  std::istringstream short_row("entity,label\nalice\n");
  EXPECT_THROW(read_labels_csv(short_row), Error);
}

TEST(EvaluateTest, JoinRules) {
  const std::vector<NamedScore> scores{{"a", 3}, {"c", 1}};
  const std::vector<NamedLabel> labels{{"a", true}, {"b", false}, {"c", true}, {"d", false}};
  // b and d are unscored and score 0.
  EXPECT_EQ(evaluate(scores, labels).auc, 1.0);

  const std::vector<NamedScore> stray{{"zed", 1}};
  try {
    evaluate(stray, labels);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConsistency);
  }
}

}  // namespace
}  // namespace isgspot
