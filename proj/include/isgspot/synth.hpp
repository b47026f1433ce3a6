#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "isgspot/relation.hpp"

namespace isgspot {

// mt19937_64 output is fixed by the standard; the bounded draws below are
// written out by hand because std:: distributions differ between vendors.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  // `count` distinct values from [0, bound), in draw order.
  std::vector<std::uint64_t> sample_distinct(std::uint64_t bound, std::size_t count);
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

struct SyntheticSpec {
  std::size_t total_entries = 10'000;
  // Index 0 is the user (target) dimension.
  std::vector<std::size_t> cardinalities{1000, 500, 500, 500, 500, 500, 500};
  std::size_t block_entity_count = 50;
  std::size_t block_mass = 500;
  std::size_t lambda = 1;  // feature dimensions on which the block is densest
  std::size_t dense_cardinality = 12;
  std::size_t loose_cardinality = 25;
  // Feature dimensions (1-based positions in the relation) that get the dense
  // pools. Empty means the first `lambda` features.
  std::vector<std::size_t> dense_dims;
  std::uint64_t seed = 0;
};

struct LabeledRelation {
  Relation relation;
  std::vector<bool> labels;  // by target ValueId; true = fraud

  std::size_t fraud_count() const;
};

// Uniform background entries followed by one appended block. Fraud users are
// a random subset of the user domain.
LabeledRelation generate_synthetic(const SyntheticSpec& spec);

struct BlockSpec {
  // Distinct values used by the block, one per dimension (the target entry is
  // the number of injected entities).
  std::vector<std::size_t> pool_sizes;
  std::size_t mass_min = 0;
  std::size_t mass_max = 0;
};

// Appends a block over pools drawn from values already in the relation. The
// entities come from those not yet labeled fraud, so repeated injections
// produce disjoint groups.
LabeledRelation inject_block(const LabeledRelation& base, const BlockSpec& block, std::uint64_t seed);

// "entity,label" with label 1 for fraud, 0 otherwise; entities in id order.
void write_labels_csv(std::ostream& out, const LabeledRelation& data);

}  // namespace isgspot
