#include "isgspot/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "isgspot/error.hpp"
#include "isgspot/metrics.hpp"

namespace isgspot {

OracleResult brute_force_optimum(const ISGraph& graph, std::span<const NodeId> nodes, std::size_t limit) {
  std::vector<NodeId> pool(nodes.begin(), nodes.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (pool.size() > limit || pool.size() >= 63) {
    fail(ErrorKind::kOracleRefusal,
         std::to_string(pool.size()) + " nodes exceeds the enumeration limit of " + std::to_string(limit));
  }
  OracleResult best;
  if (pool.empty()) return best;

  const std::size_t n = pool.size();
  std::vector<NodeId> subset;
  bool have = false;
  // Size-major; within a size, Gosper's hack walks masks in increasing order.
  for (std::size_t k = 1; k <= n; ++k) {
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    const std::uint64_t end = std::uint64_t{1} << n;
    while (mask < end) {
      subset.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) subset.push_back(pool[i]);
      }
      const double f = f_score(graph, subset);
      ++best.subsets_examined;
      // Larger sizes come later, so only a strict improvement may replace
      // a smaller subset; equal sizes compare lexicographically.
      if (!have || f > best.best_f ||
          (f == best.best_f && subset.size() == best.best_nodes.size() && subset < best.best_nodes)) {
        best.best_f = f;
        best.best_nodes = subset;
        have = true;
      }
      const std::uint64_t c = mask & (~mask + 1);
      const std::uint64_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
  return best;
}

OracleResult brute_force_optimum(const ISGraph& graph, std::size_t limit) {
  std::vector<NodeId> all(graph.node_count());
  std::iota(all.begin(), all.end(), NodeId{0});
  return brute_force_optimum(graph, all, limit);
}

GuaranteeReport verify_guarantee(const ISGraph& graph, double detected_best_f, std::size_t limit) {
  GuaranteeReport report;
  report.opt_f = brute_force_optimum(graph, limit).best_f;
  report.ratio = report.opt_f > 0.0 ? detected_best_f / report.opt_f : 1.0;
  report.pass = detected_best_f >= 0.5 * report.opt_f - 1e-9 * report.opt_f;
  return report;
}

}  // namespace isgspot
