#include "isgspot/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "isgspot/error.hpp"
#include "isgspot/numeric.hpp"

namespace isgspot {

std::size_t block_cardinality(const Relation& relation, const Block& block, std::size_t dim) {
  const auto column = relation.column(dim);
  std::vector<bool> seen(relation.distinct_count(dim), false);
  std::size_t distinct = 0;
  for (std::size_t e : block.entries) {
    if (e >= relation.size()) fail(ErrorKind::kContract, "block entry outside the relation");
    if (!seen[column[e]]) {
      seen[column[e]] = true;
      ++distinct;
    }
  }
  return distinct;
}

double arithmetic_average_mass(const Relation& relation, const Block& block, std::span<const std::size_t> dims) {
  require(!block.entries.empty(), "arithmetic_average_mass needs a non-empty block");
  require(!dims.empty(), "arithmetic_average_mass needs at least one dimension");
  double total = 0.0;
  for (std::size_t d : dims) total += static_cast<double>(block_cardinality(relation, block, d));
  return static_cast<double>(block.entries.size()) / (total / static_cast<double>(dims.size()));
}

Block whole_relation(const Relation& relation) {
  Block b;
  b.entries.resize(relation.size());
  std::iota(b.entries.begin(), b.entries.end(), std::size_t{0});
  return b;
}

namespace {

std::vector<bool> membership(const ISGraph& graph, std::span<const NodeId> nodes) {
  std::vector<bool> in(graph.node_count(), false);
  for (NodeId u : nodes) {
    if (u >= graph.node_count()) fail(ErrorKind::kContract, "node " + std::to_string(u) + " not in graph");
    in[u] = true;
  }
  return in;
}

}  // namespace

double edge_density(const ISGraph& graph, std::span<const NodeId> nodes) {
  require(nodes.size() >= 2, "edge_density needs at least two nodes");
  const auto in = membership(graph, nodes);
  std::size_t ordered = 0;
  for (NodeId u : nodes) {
    for (const auto& nb : graph.neighbors(u)) ordered += in[nb.node] ? 1 : 0;
  }
  const auto n = static_cast<double>(nodes.size());
  return static_cast<double>(ordered) / (n * (n - 1.0));
}

double f_score(const ISGraph& graph, std::span<const NodeId> nodes) {
  require(!nodes.empty(), "f_score needs a non-empty node set");
  const auto in = membership(graph, nodes);
  CompensatedSum s;
  for (NodeId u : nodes) {
    s += graph.node_weight(u);
    for (const auto& nb : graph.neighbors(u)) {
      if (nb.node > u && in[nb.node]) s += nb.weight;
    }
  }
  return s.value() / static_cast<double>(nodes.size());
}

DenseGroup make_group(const ISGraph& graph, std::vector<NodeId> nodes) {
  require(!nodes.empty(), "a dense group needs at least one node");
  std::sort(nodes.begin(), nodes.end());
  const auto in = membership(graph, nodes);
  DenseGroup g;
  g.contributions.reserve(nodes.size());
  for (NodeId u : nodes) {
    CompensatedSum w;
    w += graph.node_weight(u);
    for (const auto& nb : graph.neighbors(u)) {
      if (in[nb.node]) w += nb.weight;
    }
    g.contributions.push_back(w.value());
  }
  g.f_score = f_score(graph, nodes);
  g.nodes = std::move(nodes);
  return g;
}

}  // namespace isgspot
