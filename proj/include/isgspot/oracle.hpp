#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "isgspot/isg.hpp"

namespace isgspot {

// Exhaustive search for the F-maximizing node subset. Test-scale only.
struct OracleResult {
  std::vector<NodeId> best_nodes;  // ascending
  double best_f = 0.0;
  std::uint64_t subsets_examined = 0;
};

inline constexpr std::size_t kOracleDefaultLimit = 20;

// Every non-empty subset of `nodes`; ties go to the smaller subset, then the
// lexicographically smaller one. Refuses more than `limit` nodes.
OracleResult brute_force_optimum(const ISGraph& graph, std::span<const NodeId> nodes,
                                 std::size_t limit = kOracleDefaultLimit);
OracleResult brute_force_optimum(const ISGraph& graph, std::size_t limit = kOracleDefaultLimit);

struct GuaranteeReport {
  double opt_f = 0.0;
  double ratio = 1.0;
  bool pass = false;
};

// Checks detected_best_f >= opt/2 with 1e-9 relative slack.
GuaranteeReport verify_guarantee(const ISGraph& graph, double detected_best_f,
                                 std::size_t limit = kOracleDefaultLimit);

}  // namespace isgspot
