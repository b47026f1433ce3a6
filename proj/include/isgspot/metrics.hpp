#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "isgspot/isg.hpp"
#include "isgspot/relation.hpp"

namespace isgspot {

// A subset of a relation's entries, addressed by entry position.
struct Block {
  std::vector<std::size_t> entries;
};

// Distinct values of `dim` within the block.
std::size_t block_cardinality(const Relation& relation, const Block& block, std::size_t dim);

// |B| divided by the mean cardinality of B over `dims`.
double arithmetic_average_mass(const Relation& relation, const Block& block, std::span<const std::size_t> dims);

// Block covering every entry of the relation.
Block whole_relation(const Relation& relation);

// Ordered connected pairs over |V'|(|V'|-1); complete subgraphs score 1.
double edge_density(const ISGraph& graph, std::span<const NodeId> nodes);

// Internal edge weight plus node weight, divided by the node count.
double f_score(const ISGraph& graph, std::span<const NodeId> nodes);

// A detected subgraph with each member's contribution w(u, group).
struct DenseGroup {
  std::vector<NodeId> nodes;          // ascending
  double f_score = 0.0;
  std::vector<double> contributions;  // parallel to nodes
};

// Builds a DenseGroup for `nodes`, computing F and w from scratch.
DenseGroup make_group(const ISGraph& graph, std::vector<NodeId> nodes);

}  // namespace isgspot
