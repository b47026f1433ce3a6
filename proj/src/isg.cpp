#include "isgspot/isg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "isgspot/error.hpp"
#include "isgspot/numeric.hpp"

namespace isgspot {

ISGraph ISGraph::from_parts(std::vector<double> node_weights, std::vector<Edge> edges) {
  const std::size_t n = node_weights.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(node_weights[i]) || node_weights[i] < 0.0) {
      fail(ErrorKind::kConsistency, "node " + std::to_string(i) + " has invalid weight");
    }
  }
  for (auto& e : edges) {
    if (e.u == e.v) fail(ErrorKind::kConsistency, "self-loop on node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.v >= n) fail(ErrorKind::kConsistency, "edge endpoint " + std::to_string(e.v) + " out of range");
    if (!std::isfinite(e.weight) || !(e.weight > 0.0)) {
      fail(ErrorKind::kConsistency,
           "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") has non-positive weight");
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      fail(ErrorKind::kConsistency,
           "duplicate edge (" + std::to_string(edges[i].u) + "," + std::to_string(edges[i].v) + ")");
    }
  }

  ISGraph g;
  g.node_weights_ = std::move(node_weights);
  g.edges_ = std::move(edges);

  std::vector<std::size_t> degree(n + 1, 0);
  for (const auto& e : g.edges_) {
    ++degree[e.u + 1];
    ++degree[e.v + 1];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i + 1];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so each adjacency list comes out sorted: lower
  // neighbors arrive while scanning their own u, higher ones afterwards.
  for (const auto& e : g.edges_) g.adjacency_[cursor[e.v]++] = {e.u, e.weight};
  for (const auto& e : g.edges_) g.adjacency_[cursor[e.u]++] = {e.v, e.weight};
  return g;
}

std::optional<double> ISGraph::edge_weight(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return std::nullopt;
  auto adj = neighbors(u);
  auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const Neighbor& nb, NodeId x) { return nb.node < x; });
  if (it == adj.end() || it->node != v) return std::nullopt;
  return it->weight;
}

double ISGraph::total_edge_weight() const {
  CompensatedSum s;
  for (const auto& e : edges_) s += e.weight;
  return s.value();
}

double ISGraph::total_node_weight() const {
  CompensatedSum s;
  for (double w : node_weights_) s += w;
  return s.value();
}

double pair_info(const DimensionModel& model, ValueId a) { return 2.0 * model.surprisal(a); }

double self_info(const DimensionModel& model, ValueId a, std::size_t multiplicity) {
  require(multiplicity >= 2, "self_info needs multiplicity >= 2");
  return static_cast<double>(multiplicity) * model.surprisal(a);
}

namespace {

struct PairContribution {
  NodeId u;
  NodeId v;
  double info;
};

struct DimensionPartial {
  std::vector<PairContribution> pairs;
  std::vector<double> node_info;
  std::vector<SkippedGroup> skipped;
};

// Key-value pass over one dimension: bucket entries by value, then charge
// every entity pair in a bucket and every repeated entity.
DimensionPartial accumulate_dimension(const Relation& relation, const DimensionModel& model,
                                      std::size_t max_group_size) {
  const std::size_t dim = model.dim();
  const auto values = relation.column(dim);
  const auto entities = relation.column(relation.target_dim());
  const std::size_t distinct = relation.distinct_count(dim);

  std::vector<std::size_t> offsets(distinct + 1, 0);
  for (ValueId v : values) ++offsets[v + 1];
  for (std::size_t i = 0; i < distinct; ++i) offsets[i + 1] += offsets[i];
  std::vector<NodeId> bucketed(values.size());
  {
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t e = 0; e < values.size(); ++e) bucketed[cursor[values[e]]++] = entities[e];
  }

  DimensionPartial out;
  out.node_info.assign(relation.entity_count(), 0.0);
  std::vector<NodeId> members;
  std::vector<std::size_t> multiplicity;

  for (ValueId a = 0; a < distinct; ++a) {
    auto first = bucketed.begin() + static_cast<std::ptrdiff_t>(offsets[a]);
    auto last = bucketed.begin() + static_cast<std::ptrdiff_t>(offsets[a + 1]);
    std::sort(first, last);
    members.clear();
    multiplicity.clear();
    for (auto it = first; it != last; ++it) {
      if (members.empty() || members.back() != *it) {
        members.push_back(*it);
        multiplicity.push_back(1);
      } else {
        ++multiplicity.back();
      }
    }
    if (members.size() > max_group_size) {
      out.skipped.push_back({dim, a, relation.values(dim).text(a), members.size()});
      continue;
    }
    const double surprisal = model.surprisal(a);
    if (!(surprisal > 0.0)) continue;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (multiplicity[i] >= 2) out.node_info[members[i]] += self_info(model, a, multiplicity[i]);
    }
    const double info = 2.0 * surprisal;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) out.pairs.push_back({members[i], members[j], info});
    }
  }
  return out;
}

}  // namespace

BuildResult build_isg(const Relation& relation, std::span<const DimensionModel> models, const BuildOptions& options) {
  const std::size_t k = relation.dimension_count() - 1;
  if (models.size() != k) {
    fail(ErrorKind::kContract, "expected " + std::to_string(k) + " dimension models, got " +
                                   std::to_string(models.size()));
  }
  for (const auto& m : models) {
    if (m.dim() == relation.target_dim() || m.dim() >= relation.dimension_count()) {
      fail(ErrorKind::kContract, "model for dimension " + std::to_string(m.dim()) + " is not a feature dimension");
    }
  }

  std::vector<DimensionPartial> partials(models.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(models.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < models.size(); ++i) {
      partials[i] = accumulate_dimension(relation, models[i], options.max_group_size);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < models.size(); i = next++) {
          partials[i] = accumulate_dimension(relation, models[i], options.max_group_size);
        }
      });
    }
  }

  // Canonical merge: dimension order, then a stable sort by (u, v), so the
  // summation order does not depend on the worker count.
  const std::size_t n = relation.entity_count();
  std::vector<double> node_weights(n, 0.0);
  std::vector<PairContribution> all;
  std::size_t total_pairs = 0;
  BuildResult result;
  for (auto& p : partials) total_pairs += p.pairs.size();
  all.reserve(total_pairs);
  for (auto& p : partials) {
    all.insert(all.end(), p.pairs.begin(), p.pairs.end());
    std::vector<PairContribution>().swap(p.pairs);
    for (std::size_t i = 0; i < n; ++i) node_weights[i] += p.node_info[i];
    result.skipped.insert(result.skipped.end(), p.skipped.begin(), p.skipped.end());
  }
  std::stable_sort(all.begin(), all.end(), [](const PairContribution& a, const PairContribution& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < all.size();) {
    CompensatedSum s;
    std::size_t j = i;
    for (; j < all.size() && all[j].u == all[i].u && all[j].v == all[i].v; ++j) s += all[j].info;
    if (s.value() > 0.0) edges.push_back({all[i].u, all[i].v, s.value()});
    i = j;
  }
  std::vector<PairContribution>().swap(all);

  result.graph = ISGraph::from_parts(std::move(node_weights), std::move(edges));
  result.theta = prune_threshold(result.graph);
  if (options.prune) {
    const std::size_t before = result.graph.edge_count();
    result.graph = prune_edges(result.graph, result.theta);
    result.pruned_edges = before - result.graph.edge_count();
  }
  return result;
}

double prune_threshold(const ISGraph& graph) {
  const auto n = static_cast<double>(graph.node_count());
  if (graph.node_count() < 2) return 0.0;
  return graph.total_edge_weight() / (n * (n - 1.0));
}

ISGraph prune_edges(const ISGraph& graph, double theta) {
  require(theta >= 0.0, "pruning threshold must be non-negative");
  std::vector<Edge> kept;
  kept.reserve(graph.edge_count());
  for (const auto& e : graph.edges()) {
    if (!(e.weight < theta)) kept.push_back(e);
  }
  return ISGraph::from_parts(std::vector<double>(graph.node_weights().begin(), graph.node_weights().end()),
                             std::move(kept));
}

namespace {

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

}  // namespace

void write_edge_list(std::ostream& out, const ISGraph& graph) {
  for (const auto& e : graph.edges()) out << e.u << '\t' << e.v << '\t' << format_weight(e.weight) << '\n';
}

void write_node_weights(std::ostream& out, const ISGraph& graph) {
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    out << i << '\t' << format_weight(graph.node_weight(static_cast<NodeId>(i))) << '\n';
  }
}

ISGraph read_graph(std::istream& edges_in, std::istream& nodes_in) {
  std::vector<double> node_weights;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(nodes_in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream ss(line);
    std::size_t id = 0;
    double w = 0.0;
    if (!(ss >> id >> w)) fail(ErrorKind::kParse, "node list line " + std::to_string(line_no));
    if (id != node_weights.size()) {
      fail(ErrorKind::kParse, "node list line " + std::to_string(line_no) + ": ids must be dense and ascending");
    }
    node_weights.push_back(w);
  }
  std::vector<Edge> edges;
  line_no = 0;
  while (std::getline(edges_in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream ss(line);
    Edge e;
    if (!(ss >> e.u >> e.v >> e.weight)) fail(ErrorKind::kParse, "edge list line " + std::to_string(line_no));
    edges.push_back(e);
  }
  try {
    return ISGraph::from_parts(std::move(node_weights), std::move(edges));
  } catch (const Error& e) {
    fail(ErrorKind::kParse, e.what());
  }
}

}  // namespace isgspot
