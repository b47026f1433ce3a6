#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace isgspot {

using ValueId = std::uint32_t;

// Bidirectional raw text <-> dense id mapping for one dimension. Ids are
// handed out in first-appearance order.
class ValueTable {
 public:
  ValueId intern(std::string_view raw);
  std::optional<ValueId> find(std::string_view raw) const;
  const std::string& text(ValueId id) const;
  std::size_t size() const { return values_.size(); }

  bool operator==(const ValueTable& other) const { return values_ == other.values_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> values_;
  std::unordered_map<std::string, ValueId, Hash, std::equal_to<>> index_;
};

// An N-dimensional event log stored column-wise. Every entry carries one
// interned value per dimension plus a unique entry identifier. Immutable once
// built; use RelationBuilder to create or extend one.
class Relation {
 public:
  std::size_t dimension_count() const { return names_.size(); }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::size_t target_dim() const { return target_; }

  const std::vector<std::string>& dimension_names() const { return names_; }
  std::span<const ValueId> column(std::size_t dim) const;
  ValueId value(std::size_t entry, std::size_t dim) const { return columns_[dim][entry]; }
  const std::string& entry_id(std::size_t entry) const { return ids_[entry]; }
  const ValueTable& values(std::size_t dim) const;
  std::size_t distinct_count(std::size_t dim) const { return values(dim).size(); }

  // Distinct target values; these are the entities being scored.
  std::size_t entity_count() const { return distinct_count(target_); }
  const std::string& entity_name(ValueId entity) const { return tables_[target_].text(entity); }

  bool operator==(const Relation& other) const = default;

 private:
  friend class RelationBuilder;

  std::vector<std::string> names_;
  std::size_t target_ = 0;
  std::vector<std::vector<ValueId>> columns_;
  std::vector<ValueTable> tables_;
  std::vector<std::string> ids_;
};

class RelationBuilder {
 public:
  RelationBuilder(std::vector<std::string> dimension_names, std::size_t target_dim);
  // Continue appending to a copy of an existing relation.
  explicit RelationBuilder(const Relation& base);

  // Appends one entry. Without an explicit id the entry is numbered by its
  // position, so relations built without ids get 0, 1, 2, ...
  void add(std::span<const std::string_view> values, std::optional<std::string> id = std::nullopt);
  void add(std::initializer_list<std::string_view> values, std::optional<std::string> id = std::nullopt) {
    add(std::span<const std::string_view>(values.begin(), values.size()), std::move(id));
  }

  std::size_t size() const { return rel_.size(); }
  Relation build() &&;

 private:
  Relation rel_;
  std::unordered_map<std::string, std::size_t> seen_ids_;
};

struct Schema {
  // Column name, or a zero-based index written as digits.
  std::string target;
  // Entry-identifier column; sequential ids are synthesized when absent.
  std::optional<std::string> id_column;
};

struct LoadOptions {
  char delimiter = ',';
  bool header = true;
};

Relation load_relation(std::istream& source, const Schema& schema, const LoadOptions& options = {});
Relation load_relation_file(const std::filesystem::path& path, const Schema& schema,
                            const LoadOptions& options = {});

void write_relation_csv(std::ostream& out, const Relation& relation, char delimiter = ',');

struct DimensionStats {
  std::size_t dim = 0;
  std::vector<std::uint64_t> counts;  // indexed by ValueId
  std::size_t distinct_count = 0;
  std::uint64_t total = 0;            // |R|
  double entropy_nats = 0.0;
};

DimensionStats dimension_stats(const Relation& relation, std::size_t dim);

// Shannon entropy in nats of the distribution proportional to counts.
double entropy_nats(std::span<const std::uint64_t> counts);

}  // namespace isgspot
