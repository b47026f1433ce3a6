#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "isgspot/dspot.hpp"
#include "isgspot/isg.hpp"

namespace isgspot {

// Suspiciousness per graph node (= entity), in nats.
struct ScoreTable {
  std::vector<double> scores;

  // 1 + number of entities with a strictly higher score.
  std::vector<std::size_t> ranks() const;
};

// Members of a detected group score w(a, group); everyone else scores 0.
ScoreTable suspiciousness_scores(const ISGraph& graph, const DetectionResult& result);

struct AucReport {
  double auc = 0.5;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t ties = 0;  // positive/negative pairs with equal scores
};

// Mann-Whitney AUC with half credit for ties. Needs both classes.
AucReport auc(std::span<const double> scores, const std::vector<bool>& labels);

struct NamedScore {
  std::string entity;
  double score = 0.0;
};

struct NamedLabel {
  std::string entity;
  bool fraud = false;
};

std::vector<NamedScore> read_scores_csv(std::istream& in);
std::vector<NamedLabel> read_labels_csv(std::istream& in);

// Joins on the label set: unscored entities score 0; a scored entity with no
// label is a consistency error.
AucReport evaluate(std::span<const NamedScore> scores, std::span<const NamedLabel> labels);

}  // namespace isgspot
