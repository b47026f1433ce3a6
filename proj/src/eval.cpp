#include "isgspot/eval.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <unordered_map>

#include "isgspot/error.hpp"

namespace isgspot {

std::vector<std::size_t> ScoreTable::ranks() const {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<std::size_t> rank(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const bool tied = i > 0 && scores[order[i]] == scores[order[i - 1]];
    rank[order[i]] = tied ? rank[order[i - 1]] : i + 1;
  }
  return rank;
}

ScoreTable suspiciousness_scores(const ISGraph& graph, const DetectionResult& result) {
  ScoreTable table;
  table.scores.assign(graph.node_count(), 0.0);
  for (const auto& detected : result.groups) {
    for (NodeId u : detected.group.nodes) {
      if (u >= graph.node_count()) {
        fail(ErrorKind::kConsistency, "group node " + std::to_string(u) + " is not in the graph");
      }
    }
    const DenseGroup recomputed = make_group(graph, detected.group.nodes);
    for (std::size_t i = 0; i < recomputed.nodes.size(); ++i) {
      table.scores[recomputed.nodes[i]] = recomputed.contributions[i];
    }
  }
  return table;
}

AucReport auc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) fail(ErrorKind::kContract, "scores and labels differ in length");
  AucReport report;
  for (bool l : labels) (l ? report.positives : report.negatives) += 1;
  if (report.positives == 0 || report.negatives == 0) {
    fail(ErrorKind::kUndefinedAuc, "labels contain a single class");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Walk tie groups from low to high; each positive beats every negative seen
  // in earlier groups and ties with negatives in its own group.
  double wins = 0.0;
  std::size_t negatives_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t pos = 0;
    std::size_t neg = 0;
    for (; j < order.size() && scores[order[j]] == scores[order[i]]; ++j) (labels[order[j]] ? pos : neg) += 1;
    wins += static_cast<double>(pos) * (static_cast<double>(negatives_below) + 0.5 * static_cast<double>(neg));
    report.ties += pos * neg;
    negatives_below += neg;
    i = j;
  }
  report.auc = wins / (static_cast<double>(report.positives) * static_cast<double>(report.negatives));
  return report;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename Fn>
void for_each_row(std::istream& in, const char* what, std::size_t min_fields, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() < min_fields) {
      fail(ErrorKind::kParse, std::string(what) + " line " + std::to_string(line_no) + ": too few fields");
    }
    fn(fields, line_no);
  }
}

}  // namespace

std::vector<NamedScore> read_scores_csv(std::istream& in) {
  std::vector<NamedScore> out;
  for_each_row(in, "scores", 2, [&](const std::vector<std::string>& f, std::size_t line_no) {
    NamedScore s{f[0], 0.0};
    try {
      std::size_t used = 0;
      s.score = std::stod(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(ErrorKind::kParse, "scores line " + std::to_string(line_no) + ": bad score '" + f[1] + "'");
    }
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<NamedLabel> read_labels_csv(std::istream& in) {
  std::vector<NamedLabel> out;
  for_each_row(in, "labels", 2, [&](const std::vector<std::string>& f, std::size_t line_no) {
    const std::string& v = f[1];
    bool fraud = false;
    if (v == "1" || v == "true" || v == "fraud") {
      fraud = true;
    } else if (v != "0" && v != "false" && v != "legit") {
      fail(ErrorKind::kParse, "labels line " + std::to_string(line_no) + ": bad label '" + v + "'");
    }
    out.push_back({f[0], fraud});
  });
  return out;
}

AucReport evaluate(std::span<const NamedScore> scores, std::span<const NamedLabel> labels) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<double> joined(labels.size(), 0.0);
  std::vector<bool> flags(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!index.emplace(labels[i].entity, i).second) {
      fail(ErrorKind::kConsistency, "entity '" + labels[i].entity + "' labeled twice");
    }
    flags[i] = labels[i].fraud;
  }
  for (const auto& s : scores) {
    auto it = index.find(s.entity);
    if (it == index.end()) fail(ErrorKind::kConsistency, "scored entity '" + s.entity + "' has no label");
    joined[it->second] = s.score;
  }
  return auc(joined, flags);
}

}  // namespace isgspot
