#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "isgspot/isg.hpp"
#include "isgspot/metrics.hpp"

namespace isgspot {

// Maximal edge-connected node sets, each ascending, ordered by smallest member.
std::vector<std::vector<NodeId>> connected_components(const ISGraph& graph);

// w(u, alive): self weight plus edges from u into the alive set.
double node_weight(const ISGraph& graph, NodeId u, std::span<const NodeId> alive);

// Mean of node_weight over the alive set (each internal edge counted twice).
double removal_threshold(const ISGraph& graph, std::span<const NodeId> alive);

struct RemovalBatch {
  std::vector<NodeId> nodes;    // in removal order
  std::vector<double> weights;  // running w of each member when the batch was formed
  double threshold = 0.0;       // mean w of the alive set when the batch was formed
};

// Bookkeeping of one peel. Per-node vectors are parallel to `nodes`.
struct PeelTrace {
  std::vector<NodeId> nodes;                // peeled node set, ascending
  std::vector<std::size_t> deletion_order;  // 1-based removal index
  std::vector<double> removal_weight;       // running w at the moment of removal
  std::vector<double> f_after;              // F after i removals, i in [0, |V|)
  std::size_t best_index = 0;
  double best_f = 0.0;
  std::vector<RemovalBatch> batches;
};

// Snapshot handed to a PeelObserver after every single removal. Spans are
// parallel to PeelTrace::nodes.
struct PeelState {
  std::span<const NodeId> nodes;
  const std::vector<bool>& alive;
  std::span<const double> running_weight;
  NodeId removed = 0;
};

using PeelObserver = std::function<void(const PeelState&)>;

struct PeelResult {
  DenseGroup group;
  PeelTrace trace;
};

// Batch peel: each round removes every node whose running weight is at most
// the round's mean, lightest first, and tracks F after each single removal.
// Returns the alive set at the best F (earliest on ties).
PeelResult peel_partition(const ISGraph& graph, std::span<const NodeId> component,
                          const PeelObserver& observer = {});

// Classic greedy peel: always removes the single lightest node.
PeelResult reference_peel_single(const ISGraph& graph, std::span<const NodeId> component,
                                 const PeelObserver& observer = {});

struct DetectOptions {
  bool prune = true;
  unsigned workers = 1;
};

struct DetectedGroup {
  std::size_t component = 0;
  DenseGroup group;
};

struct DetectionResult {
  std::vector<DetectedGroup> groups;  // one per component, by component id
  ISGraph graph;                      // the graph that was peeled (pruned if requested)
  double theta = 0.0;
  std::size_t pruned_edges = 0;
  DetectOptions options;

  double best_f() const;
};

DetectionResult detect(const ISGraph& graph, const DetectOptions& options = {});

}  // namespace isgspot
