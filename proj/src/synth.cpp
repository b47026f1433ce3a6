#include "isgspot/synth.hpp"

#include <algorithm>
#include <ostream>
#include <string>
#include <unordered_set>

#include "isgspot/error.hpp"

namespace isgspot {

std::uint64_t PortableRng::below(std::uint64_t bound) {
  require(bound > 0, "PortableRng::below needs a positive bound");
  // Rejection sampling on the top of the range removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

std::vector<std::uint64_t> PortableRng::sample_distinct(std::uint64_t bound, std::size_t count) {
  require(count <= bound, "cannot sample more distinct values than exist");
  std::vector<std::uint64_t> out;
  out.reserve(count);
  if (count * 4 >= bound) {
    std::vector<std::uint64_t> all(bound);
    for (std::uint64_t i = 0; i < bound; ++i) all[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(all[i], all[i + below(bound - i)]);
      out.push_back(all[i]);
    }
    return out;
  }
  std::unordered_set<std::uint64_t> taken;
  while (out.size() < count) {
    const auto v = below(bound);
    if (taken.insert(v).second) out.push_back(v);
  }
  return out;
}

std::size_t LabeledRelation::fraud_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
}

namespace {

std::string value_text(std::size_t dim, std::uint64_t v) {
  return (dim == 0 ? "u" : "v") + std::to_string(v);
}

// One column of a block: every pool member at least once (when the mass
// allows), the remainder uniform over the pool, then shuffled.
template <typename T>
std::vector<T> block_column(const std::vector<T>& pool, std::size_t mass, PortableRng& rng) {
  std::vector<T> col;
  col.reserve(mass);
  for (std::size_t i = 0; i < mass; ++i) {
    col.push_back(i < pool.size() ? pool[i] : pool[rng.below(pool.size())]);
  }
  rng.shuffle(col);
  return col;
}

void validate(const SyntheticSpec& spec) {
  const std::size_t n = spec.cardinalities.size();
  if (n < 2) fail(ErrorKind::kSpec, "need a user dimension and at least one feature");
  for (auto c : spec.cardinalities) {
    if (c == 0) fail(ErrorKind::kSpec, "dimension cardinalities must be positive");
  }
  if (spec.lambda < 1 || spec.lambda > n - 1) {
    fail(ErrorKind::kSpec, "lambda must lie in [1, " + std::to_string(n - 1) + "]");
  }
  if (spec.block_entity_count == 0 || spec.block_entity_count > spec.cardinalities[0]) {
    fail(ErrorKind::kSpec, "block entity count must lie in [1, user cardinality]");
  }
  if (spec.block_mass == 0 || spec.block_mass > spec.total_entries) {
    fail(ErrorKind::kSpec, "block mass must lie in [1, total entries]");
  }
  if (spec.dense_cardinality == 0 || spec.loose_cardinality == 0) {
    fail(ErrorKind::kSpec, "block pools must be non-empty");
  }
  const std::size_t widest = std::max({spec.block_entity_count, spec.dense_cardinality, spec.loose_cardinality});
  if (widest > spec.block_mass) fail(ErrorKind::kSpec, "block mass cannot cover every pool value");
  for (std::size_t d = 1; d < n; ++d) {
    if (std::max(spec.dense_cardinality, spec.loose_cardinality) > spec.cardinalities[d]) {
      fail(ErrorKind::kSpec, "block pool exceeds the cardinality of dimension " + std::to_string(d));
    }
  }
  if (!spec.dense_dims.empty()) {
    if (spec.dense_dims.size() != spec.lambda) fail(ErrorKind::kSpec, "dense_dims must list exactly lambda dims");
    std::unordered_set<std::size_t> seen;
    for (auto d : spec.dense_dims) {
      if (d < 1 || d >= n || !seen.insert(d).second) fail(ErrorKind::kSpec, "invalid dense dimension");
    }
  }
}

}  // namespace

LabeledRelation generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  const std::size_t n = spec.cardinalities.size();
  std::vector<bool> dense(n, false);
  if (spec.dense_dims.empty()) {
    for (std::size_t d = 1; d <= spec.lambda; ++d) dense[d] = true;
  } else {
    for (auto d : spec.dense_dims) dense[d] = true;
  }
  for (std::size_t d = 1; d < n; ++d) {
    const std::size_t pool = dense[d] ? spec.dense_cardinality : spec.loose_cardinality;
    if (pool > spec.cardinalities[d]) {
      fail(ErrorKind::kSpec, "block pool of " + std::to_string(pool) + " exceeds cardinality of dimension " +
                                 std::to_string(d));
    }
  }

  PortableRng rng(spec.seed);
  std::vector<std::string> names;
  for (std::size_t d = 0; d < n; ++d) names.push_back("A" + std::to_string(d + 1));
  RelationBuilder builder(std::move(names), 0);

  std::vector<std::string> texts(n);
  std::vector<std::string_view> row(n);
  auto push = [&] {
    for (std::size_t d = 0; d < n; ++d) row[d] = texts[d];
    builder.add(row);
  };

  for (std::size_t e = 0; e < spec.total_entries; ++e) {
    for (std::size_t d = 0; d < n; ++d) texts[d] = value_text(d, rng.below(spec.cardinalities[d]));
    push();
  }

  std::vector<std::vector<std::uint64_t>> columns(n);
  const auto fraud_users = rng.sample_distinct(spec.cardinalities[0], spec.block_entity_count);
  columns[0] = block_column(fraud_users, spec.block_mass, rng);
  for (std::size_t d = 1; d < n; ++d) {
    const std::size_t pool = dense[d] ? spec.dense_cardinality : spec.loose_cardinality;
    columns[d] = block_column(rng.sample_distinct(spec.cardinalities[d], pool), spec.block_mass, rng);
  }
  for (std::size_t e = 0; e < spec.block_mass; ++e) {
    for (std::size_t d = 0; d < n; ++d) texts[d] = value_text(d, columns[d][e]);
    push();
  }

  LabeledRelation out{std::move(builder).build(), {}};
  out.labels.assign(out.relation.entity_count(), false);
  const auto& users = out.relation.values(0);
  for (auto u : fraud_users) {
    if (auto id = users.find(value_text(0, u))) out.labels[*id] = true;
  }
  return out;
}

LabeledRelation inject_block(const LabeledRelation& base, const BlockSpec& block, std::uint64_t seed) {
  const Relation& rel = base.relation;
  const std::size_t n = rel.dimension_count();
  if (block.pool_sizes.size() != n) fail(ErrorKind::kSpec, "block needs one pool size per dimension");
  if (block.mass_min == 0 || block.mass_min > block.mass_max) fail(ErrorKind::kSpec, "invalid mass range");
  if (base.labels.size() != rel.entity_count()) fail(ErrorKind::kSpec, "labels do not cover the entities");

  const std::size_t target = rel.target_dim();
  std::vector<ValueId> unlabeled;
  for (ValueId u = 0; u < base.labels.size(); ++u) {
    if (!base.labels[u]) unlabeled.push_back(u);
  }
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t available = d == target ? unlabeled.size() : rel.distinct_count(d);
    if (block.pool_sizes[d] == 0 || block.pool_sizes[d] > available) {
      fail(ErrorKind::kSpec, "pool of " + std::to_string(block.pool_sizes[d]) + " on dimension " +
                                 std::to_string(d) + " exceeds the " + std::to_string(available) +
                                 " available values");
    }
  }

  if (*std::max_element(block.pool_sizes.begin(), block.pool_sizes.end()) > block.mass_min) {
    fail(ErrorKind::kSpec, "block mass cannot cover every pool value");
  }

  PortableRng rng(seed);
  const std::size_t mass = rng.between(block.mass_min, block.mass_max);
  std::vector<std::vector<ValueId>> columns(n);
  for (std::size_t d = 0; d < n; ++d) {
    std::vector<ValueId> pool;
    if (d == target) {
      for (auto i : rng.sample_distinct(unlabeled.size(), block.pool_sizes[d])) pool.push_back(unlabeled[i]);
    } else {
      for (auto v : rng.sample_distinct(rel.distinct_count(d), block.pool_sizes[d])) {
        pool.push_back(static_cast<ValueId>(v));
      }
    }
    columns[d] = block_column(pool, mass, rng);
  }

  RelationBuilder builder(rel);
  std::vector<std::string_view> row(n);
  for (std::size_t e = 0; e < mass; ++e) {
    for (std::size_t d = 0; d < n; ++d) row[d] = rel.values(d).text(columns[d][e]);
    builder.add(row);
  }
  LabeledRelation out{std::move(builder).build(), base.labels};
  for (ValueId u : columns[target]) out.labels[u] = true;
  return out;
}

void write_labels_csv(std::ostream& out, const LabeledRelation& data) {
  out << "entity,label\n";
  for (ValueId u = 0; u < data.labels.size(); ++u) {
    out << data.relation.entity_name(u) << ',' << (data.labels[u] ? 1 : 0) << '\n';
  }
}

}  // namespace isgspot
