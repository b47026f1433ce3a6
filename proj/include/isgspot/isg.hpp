#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isgspot/probmodel.hpp"
#include "isgspot/relation.hpp"

namespace isgspot {

// Node ids coincide with the target dimension's value ids.
using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  double weight = 0.0;
  bool operator==(const Edge&) const = default;
};

struct Neighbor {
  NodeId node = 0;
  double weight = 0.0;
};

// Information Sharing Graph: undirected, weighted on both nodes (self
// sharing) and edges (pairwise sharing). Weights are in nats.
class ISGraph {
 public:
  ISGraph() = default;

  // Validates and canonicalizes: endpoints are swapped to u < v and edges are
  // sorted by (u, v). Rejects self-loops, duplicate pairs, non-positive or
  // non-finite edge weights and negative node weights.
  static ISGraph from_parts(std::vector<double> node_weights, std::vector<Edge> edges);

  std::size_t node_count() const { return node_weights_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  double node_weight(NodeId u) const { return node_weights_[u]; }
  std::span<const double> node_weights() const { return node_weights_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(NodeId u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
  }
  std::optional<double> edge_weight(NodeId u, NodeId v) const;

  double total_edge_weight() const;
  double total_node_weight() const;

  bool operator==(const ISGraph& other) const {
    return node_weights_ == other.node_weights_ && edges_ == other.edges_;
  }

 private:
  std::vector<double> node_weights_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;  // CSR, neighbors sorted by id
};

// Information carried by two distinct entities sharing value a: -2 ln p(a).
double pair_info(const DimensionModel& model, ValueId a);

// Information of one entity repeating value a `multiplicity` times:
// multiplicity * -ln p(a). Requires multiplicity >= 2.
double self_info(const DimensionModel& model, ValueId a, std::size_t multiplicity);

struct BuildOptions {
  std::size_t max_group_size = 10'000;
  bool prune = false;
  unsigned workers = 1;
};

// A (dimension, value) group that exceeded max_group_size and was left out.
struct SkippedGroup {
  std::size_t dim = 0;
  ValueId value = 0;
  std::string value_text;
  std::size_t entities = 0;
};

struct BuildResult {
  ISGraph graph;
  std::vector<SkippedGroup> skipped;
  double theta = 0.0;          // pruning threshold of the unpruned graph
  std::size_t pruned_edges = 0;
};

// One model per non-target dimension, in dimension order (see fit_models).
BuildResult build_isg(const Relation& relation, std::span<const DimensionModel> models,
                      const BuildOptions& options = {});

// Mean edge information over all ordered node pairs; 0 for fewer than 2 nodes.
double prune_threshold(const ISGraph& graph);

// Drops every edge with weight < theta. Nodes are kept.
ISGraph prune_edges(const ISGraph& graph, double theta);

// Text dumps: "u\tv\tweight" per edge and "u\tweight" per node.
void write_edge_list(std::ostream& out, const ISGraph& graph);
void write_node_weights(std::ostream& out, const ISGraph& graph);
ISGraph read_graph(std::istream& edges, std::istream& nodes);

}  // namespace isgspot
