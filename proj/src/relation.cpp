#include "isgspot/relation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "isgspot/error.hpp"

namespace isgspot {

ValueId ValueTable::intern(std::string_view raw) {
  if (auto it = index_.find(raw); it != index_.end()) return it->second;
  const auto id = static_cast<ValueId>(values_.size());
  values_.emplace_back(raw);
  index_.emplace(values_.back(), id);
  return id;
}

std::optional<ValueId> ValueTable::find(std::string_view raw) const {
  if (auto it = index_.find(raw); it != index_.end()) return it->second;
  return std::nullopt;
}

const std::string& ValueTable::text(ValueId id) const {
  if (id >= values_.size()) fail(ErrorKind::kLookup, "value id " + std::to_string(id) + " not interned");
  return values_[id];
}

std::span<const ValueId> Relation::column(std::size_t dim) const {
  if (dim >= columns_.size()) fail(ErrorKind::kIndex, "dimension " + std::to_string(dim) + " out of range");
  return columns_[dim];
}

const ValueTable& Relation::values(std::size_t dim) const {
  if (dim >= tables_.size()) fail(ErrorKind::kIndex, "dimension " + std::to_string(dim) + " out of range");
  return tables_[dim];
}

RelationBuilder::RelationBuilder(std::vector<std::string> dimension_names, std::size_t target_dim) {
  if (dimension_names.empty()) fail(ErrorKind::kSchema, "relation needs at least one dimension");
  if (target_dim >= dimension_names.size()) fail(ErrorKind::kSchema, "target dimension out of range");
  rel_.target_ = target_dim;
  rel_.columns_.resize(dimension_names.size());
  rel_.tables_.resize(dimension_names.size());
  rel_.names_ = std::move(dimension_names);
}

RelationBuilder::RelationBuilder(const Relation& base) : rel_(base) {
  seen_ids_.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) seen_ids_.emplace(base.entry_id(i), i);
}

void RelationBuilder::add(std::span<const std::string_view> values, std::optional<std::string> id) {
  const std::size_t n = rel_.names_.size();
  if (values.size() != n) {
    fail(ErrorKind::kParse, "entry has " + std::to_string(values.size()) + " values, expected " + std::to_string(n));
  }
  std::string entry_id = id ? std::move(*id) : std::to_string(rel_.ids_.size());
  if (!seen_ids_.emplace(entry_id, rel_.ids_.size()).second) {
    fail(ErrorKind::kParse, "duplicate entry identifier '" + entry_id + "'");
  }
  for (std::size_t d = 0; d < n; ++d) rel_.columns_[d].push_back(rel_.tables_[d].intern(values[d]));
  rel_.ids_.push_back(std::move(entry_id));
}

Relation RelationBuilder::build() && { return std::move(rel_); }

namespace {

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::size_t resolve_column(const std::vector<std::string>& header, const std::string& key, const char* role) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == key) return i;
  }
  if (auto idx = parse_index(key); idx && *idx < header.size()) return *idx;
  fail(ErrorKind::kSchema, std::string("unknown ") + role + " column '" + key + "'");
}

void strip_eol(std::string& line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
}

}  // namespace

Relation load_relation(std::istream& source, const Schema& schema, const LoadOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::size_t width = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(source, line)) {
      ++line_no;
      strip_eol(line);
      if (!line.empty()) return true;
    }
    return false;
  };

  std::optional<std::string> pending;
  if (options.header) {
    if (!next_line()) fail(ErrorKind::kEmptyRelation, "input has no header row");
    for (auto f : split(line, options.delimiter)) header.emplace_back(f);
    width = header.size();
  } else {
    if (!next_line()) fail(ErrorKind::kEmptyRelation, "input has no rows");
    width = split(line, options.delimiter).size();
    for (std::size_t i = 0; i < width; ++i) header.push_back("c" + std::to_string(i));
    pending = line;
  }

  const std::size_t target_col = resolve_column(header, schema.target, "target");
  std::optional<std::size_t> id_col;
  if (schema.id_column) {
    id_col = resolve_column(header, *schema.id_column, "identifier");
    if (*id_col == target_col) fail(ErrorKind::kSchema, "identifier column cannot be the target");
  }

  std::vector<std::string> names;
  std::vector<std::size_t> dim_cols;
  std::size_t target_dim = 0;
  for (std::size_t c = 0; c < width; ++c) {
    if (id_col && c == *id_col) continue;
    if (c == target_col) target_dim = names.size();
    names.push_back(header[c]);
    dim_cols.push_back(c);
  }

  RelationBuilder builder(std::move(names), target_dim);
  std::vector<std::string_view> row(dim_cols.size());
  const std::size_t first_data_line = line_no;

  auto consume = [&](const std::string& text) {
    const auto fields = split(text, options.delimiter);
    if (fields.size() != width) {
      fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                                  " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t d = 0; d < dim_cols.size(); ++d) row[d] = fields[dim_cols[d]];
    std::optional<std::string> id;
    if (id_col) id = std::string(fields[*id_col]);
    try {
      builder.add(row, std::move(id));
    } catch (const Error& e) {
      fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  };

  if (pending) {
    line_no = first_data_line;
    consume(*pending);
  }
  while (next_line()) consume(line);

  if (builder.size() == 0) fail(ErrorKind::kEmptyRelation, "input has no data rows");
  return std::move(builder).build();
}

Relation load_relation_file(const std::filesystem::path& path, const Schema& schema, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  return load_relation(in, schema, options);
}

void write_relation_csv(std::ostream& out, const Relation& relation, char delimiter) {
  out << "x";
  for (const auto& name : relation.dimension_names()) out << delimiter << name;
  out << '\n';
  for (std::size_t e = 0; e < relation.size(); ++e) {
    out << relation.entry_id(e);
    for (std::size_t d = 0; d < relation.dimension_count(); ++d) {
      out << delimiter << relation.values(d).text(relation.value(e, d));
    }
    out << '\n';
  }
}

double entropy_nats(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 0.0;
  double h = 0.0;
  const double inv = 1.0 / static_cast<double>(total);
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) * inv;
    h -= p * std::log(p);
  }
  return h < 0.0 ? 0.0 : h;
}

DimensionStats dimension_stats(const Relation& relation, std::size_t dim) {
  if (dim >= relation.dimension_count()) {
    fail(ErrorKind::kIndex, "dimension " + std::to_string(dim) + " out of range");
  }
  DimensionStats stats;
  stats.dim = dim;
  stats.counts.assign(relation.distinct_count(dim), 0);
  for (ValueId v : relation.column(dim)) ++stats.counts[v];
  stats.distinct_count = stats.counts.size();
  stats.total = relation.size();
  stats.entropy_nats = std::min(entropy_nats(stats.counts), std::log(static_cast<double>(stats.distinct_count)));
  return stats;
}

}  // namespace isgspot
