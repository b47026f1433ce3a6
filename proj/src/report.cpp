#include "isgspot/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace isgspot {

double round_significant(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
  return buf;
}

namespace {

double edge_density_of(const ISGraph& g) {
  const auto n = static_cast<double>(g.node_count());
  if (g.node_count() < 2) return 0.0;
  return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

}  // namespace

nlohmann::json graph_stats_json(const BuildResult& built, bool prune_applied) {
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& s : built.skipped) {
    skipped.push_back({{"dimension", s.dim}, {"entities", s.entities}, {"value", s.value_text}});
  }
  return {
      {"node_count", built.graph.node_count()},
      {"edge_count", built.graph.edge_count()},
      {"edge_density", round_significant(edge_density_of(built.graph))},
      {"theta", round_significant(built.theta)},
      {"prune_applied", prune_applied},
      {"pruned_edges", built.pruned_edges},
      {"total_edge_weight", round_significant(built.graph.total_edge_weight())},
      {"total_node_weight", round_significant(built.graph.total_node_weight())},
      {"skipped_groups", std::move(skipped)},
  };
}

nlohmann::json detection_json(const DetectionResult& result, std::span<const std::string> entity_names,
                              std::optional<double> wall_clock_seconds) {
  nlohmann::json groups = nlohmann::json::array();
  std::size_t nontrivial = 0;
  for (const auto& d : result.groups) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < d.group.nodes.size(); ++i) {
      nodes.push_back({{"entity", entity_names[d.group.nodes[i]]},
                       {"w", round_significant(d.group.contributions[i])}});
    }
    if (d.group.f_score > 0.0) ++nontrivial;
    groups.push_back({{"component", d.component},
                      {"f_score", round_significant(d.group.f_score)},
                      {"size", d.group.nodes.size()},
                      {"nodes", std::move(nodes)}});
  }
  nlohmann::json summary = {
      {"group_count", result.groups.size()},
      {"positive_groups", nontrivial},
      {"best_f", round_significant(result.best_f())},
      {"node_count", result.graph.node_count()},
      {"edge_count", result.graph.edge_count()},
      {"theta", round_significant(result.theta)},
      {"pruned_edges", result.pruned_edges},
      {"prune", result.options.prune},
  };
  if (wall_clock_seconds) summary["wall_clock_seconds"] = round_significant(*wall_clock_seconds, 4);
  return {{"groups", std::move(groups)}, {"summary", std::move(summary)}};
}

nlohmann::json auc_json(const AucReport& report) {
  return {{"auc", round_significant(report.auc)},
          {"positives", report.positives},
          {"negatives", report.negatives},
          {"ties", report.ties}};
}

std::string render_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

void write_scores_csv(std::ostream& out, const ScoreTable& table, std::span<const std::string> entity_names) {
  const auto ranks = table.ranks();
  std::vector<std::size_t> order(table.scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return table.scores[a] > table.scores[b]; });
  out << "entity,score,rank\n";
  for (std::size_t u : order) out << entity_names[u] << ',' << format_real(table.scores[u]) << ',' << ranks[u] << '\n';
}

void write_groups_csv(std::ostream& out, const DetectionResult& result, std::span<const std::string> entity_names) {
  out << "component,entity,w,f_score\n";
  for (const auto& d : result.groups) {
    for (std::size_t i = 0; i < d.group.nodes.size(); ++i) {
      out << d.component << ',' << entity_names[d.group.nodes[i]] << ',' << format_real(d.group.contributions[i])
          << ',' << format_real(d.group.f_score) << '\n';
    }
  }
}

}  // namespace isgspot
