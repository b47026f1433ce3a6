#include "isgspot/dspot.hpp"

#include <algorithm>
#include <atomic>
#include <queue>
#include <thread>

#include "isgspot/error.hpp"
#include "isgspot/numeric.hpp"

namespace isgspot {

std::vector<std::vector<NodeId>> connected_components(const ISGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> stack;
  for (NodeId start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<NodeId> comp;
    seen[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (const auto& nb : graph.neighbors(u)) {
        if (!seen[nb.node]) {
          seen[nb.node] = true;
          stack.push_back(nb.node);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

namespace {

std::vector<NodeId> sorted_unique(std::span<const NodeId> nodes, const ISGraph& graph) {
  std::vector<NodeId> v(nodes.begin(), nodes.end());
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) fail(ErrorKind::kContract, "node set has duplicates");
  if (!v.empty() && v.back() >= graph.node_count()) fail(ErrorKind::kContract, "node not in graph");
  return v;
}

bool contains(std::span<const NodeId> sorted, NodeId u) { return std::binary_search(sorted.begin(), sorted.end(), u); }

// Subgraph induced by a node set, re-indexed 0..m-1 in ascending global id.
struct LocalGraph {
  std::vector<NodeId> global;
  std::vector<double> self;
  std::vector<std::size_t> offsets;
  std::vector<Neighbor> adj;  // Neighbor::node holds local ids

  std::span<const Neighbor> neighbors(std::size_t i) const {
    return {adj.data() + offsets[i], adj.data() + offsets[i + 1]};
  }
};

LocalGraph induce(const ISGraph& graph, std::vector<NodeId> nodes) {
  LocalGraph g;
  g.global = std::move(nodes);
  const std::size_t m = g.global.size();
  g.self.resize(m);
  g.offsets.assign(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    g.self[i] = graph.node_weight(g.global[i]);
    for (const auto& nb : graph.neighbors(g.global[i])) {
      auto it = std::lower_bound(g.global.begin(), g.global.end(), nb.node);
      if (it != g.global.end() && *it == nb.node) {
        g.adj.push_back({static_cast<NodeId>(it - g.global.begin()), nb.weight});
      }
    }
    g.offsets[i + 1] = g.adj.size();
  }
  return g;
}

// Shared removal bookkeeping for both peels.
class Peeler {
 public:
  Peeler(const ISGraph& graph, std::span<const NodeId> component, const PeelObserver& observer)
      : local_(induce(graph, sorted_unique(component, graph))), observer_(observer) {
    require(!local_.global.empty(), "cannot peel an empty node set");
    const std::size_t m = local_.global.size();
    w_.resize(m);
    alive_.assign(m, true);
    alive_count_ = m;
    CompensatedSum total;
    for (std::size_t i = 0; i < m; ++i) {
      CompensatedSum wi;
      wi += local_.self[i];
      total += local_.self[i];
      for (const auto& nb : local_.neighbors(i)) {
        wi += nb.weight;
        if (nb.node > i) total += nb.weight;
      }
      w_[i] = wi.value();
    }
    s_sum_ = total.value();
    trace_.nodes = local_.global;
    trace_.deletion_order.assign(m, 0);
    trace_.removal_weight.assign(m, 0.0);
    trace_.best_f = s_sum_ / static_cast<double>(m);
    trace_.best_index = 0;
    trace_.f_after.push_back(trace_.best_f);
  }

  std::size_t size() const { return local_.global.size(); }
  std::size_t alive_count() const { return alive_count_; }
  bool alive(std::size_t i) const { return alive_[i]; }
  double weight(std::size_t i) const { return w_[i]; }
  std::span<const Neighbor> neighbors(std::size_t i) const { return local_.neighbors(i); }
  PeelTrace& trace() { return trace_; }

  void remove(std::size_t u) {
    alive_[u] = false;
    --alive_count_;
    s_sum_ -= w_[u];
    trace_.removal_weight[u] = w_[u];
    trace_.deletion_order[u] = ++index_;
    if (alive_count_ > 0) {
      const double f = s_sum_ / static_cast<double>(alive_count_);
      trace_.f_after.push_back(f);
      if (f > trace_.best_f) {
        trace_.best_f = f;
        trace_.best_index = index_;
      }
    }
    for (const auto& nb : local_.neighbors(u)) {
      if (alive_[nb.node]) w_[nb.node] -= nb.weight;
    }
    if (observer_) observer_(PeelState{local_.global, alive_, w_, local_.global[u]});
  }

  PeelResult finish(const ISGraph& graph) {
    std::vector<NodeId> best;
    for (std::size_t i = 0; i < size(); ++i) {
      if (trace_.deletion_order[i] > trace_.best_index) best.push_back(local_.global[i]);
    }
    return {make_group(graph, std::move(best)), std::move(trace_)};
  }

 private:
  LocalGraph local_;
  const PeelObserver& observer_;
  std::vector<double> w_;
  std::vector<bool> alive_;
  std::size_t alive_count_ = 0;
  double s_sum_ = 0.0;
  std::size_t index_ = 0;
  PeelTrace trace_;
};

}  // namespace

double node_weight(const ISGraph& graph, NodeId u, std::span<const NodeId> alive) {
  const auto sorted = sorted_unique(alive, graph);
  require(contains(sorted, u), "node_weight: node is not alive");
  CompensatedSum w;
  w += graph.node_weight(u);
  for (const auto& nb : graph.neighbors(u)) {
    if (contains(sorted, nb.node)) w += nb.weight;
  }
  return w.value();
}

double removal_threshold(const ISGraph& graph, std::span<const NodeId> alive) {
  require(!alive.empty(), "removal_threshold needs a non-empty alive set");
  const auto sorted = sorted_unique(alive, graph);
  CompensatedSum total;
  for (NodeId u : sorted) {
    total += graph.node_weight(u);
    for (const auto& nb : graph.neighbors(u)) {
      if (contains(sorted, nb.node)) total += nb.weight;
    }
  }
  return total.value() / static_cast<double>(sorted.size());
}

PeelResult peel_partition(const ISGraph& graph, std::span<const NodeId> component, const PeelObserver& observer) {
  Peeler peeler(graph, component, observer);
  std::vector<std::size_t> batch;
  while (peeler.alive_count() > 0) {
    CompensatedSum sum;
    double min_w = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < peeler.size(); ++i) {
      if (!peeler.alive(i)) continue;
      sum += peeler.weight(i);
      if (first || peeler.weight(i) < min_w) min_w = peeler.weight(i);
      first = false;
    }
    const double mean = sum.value() / static_cast<double>(peeler.alive_count());
    // The minimum is never above the mean; guard against rounding so the
    // batch is never empty.
    const double cutoff = std::max(mean, min_w);
    batch.clear();
    for (std::size_t i = 0; i < peeler.size(); ++i) {
      if (peeler.alive(i) && peeler.weight(i) <= cutoff) batch.push_back(i);
    }
    std::sort(batch.begin(), batch.end(), [&](std::size_t a, std::size_t b) {
      return peeler.weight(a) != peeler.weight(b) ? peeler.weight(a) < peeler.weight(b) : a < b;
    });
    RemovalBatch record;
    record.threshold = mean;
    for (std::size_t u : batch) {
      record.nodes.push_back(peeler.trace().nodes[u]);
      record.weights.push_back(peeler.weight(u));
    }
    for (std::size_t u : batch) peeler.remove(u);
    peeler.trace().batches.push_back(std::move(record));
  }
  return peeler.finish(graph);
}

PeelResult reference_peel_single(const ISGraph& graph, std::span<const NodeId> component,
                                 const PeelObserver& observer) {
  Peeler peeler(graph, component, observer);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t i = 0; i < peeler.size(); ++i) heap.emplace(peeler.weight(i), i);
  while (peeler.alive_count() > 0) {
    auto [w, u] = heap.top();
    heap.pop();
    if (!peeler.alive(u) || w != peeler.weight(u)) continue;
    peeler.trace().batches.push_back({{peeler.trace().nodes[u]}, {w}, w});
    peeler.remove(u);
    for (const auto& nb : peeler.neighbors(u)) {
      if (peeler.alive(nb.node)) heap.emplace(peeler.weight(nb.node), nb.node);
    }
  }
  return peeler.finish(graph);
}

double DetectionResult::best_f() const {
  double best = 0.0;
  for (const auto& g : groups) best = std::max(best, g.group.f_score);
  return best;
}

DetectionResult detect(const ISGraph& graph, const DetectOptions& options) {
  DetectionResult result;
  result.options = options;
  if (graph.node_count() == 0) return result;

  result.theta = prune_threshold(graph);
  if (options.prune) {
    result.graph = prune_edges(graph, result.theta);
    result.pruned_edges = graph.edge_count() - result.graph.edge_count();
  } else {
    result.graph = graph;
  }

  const auto components = connected_components(result.graph);
  result.groups.resize(components.size());
  auto peel_one = [&](std::size_t c) {
    result.groups[c] = {c, peel_partition(result.graph, components[c]).group};
  };
  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1 || components.size() < 2) {
    for (std::size_t c = 0; c < components.size(); ++c) peel_one(c);
  } else {
    // Largest components first so one big peel does not trail the pool.
    std::vector<std::size_t> order(components.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return components[a].size() > components[b].size(); });
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, components.size()); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < order.size(); i = next++) peel_one(order[i]);
      });
    }
  }
  return result;
}

}  // namespace isgspot
