#pragma once

#include <cstddef>
#include <unordered_map>
#include <variant>
#include <vector>

#include "isgspot/relation.hpp"

namespace isgspot {

// Smallest probability fed to a logarithm.
inline constexpr double kMinProbability = 1e-300;

enum class ModelKind { kUniform, kEmpirical, kCustom };

const char* to_string(ModelKind kind);

namespace policy {
struct Uniform {};
struct Empirical {};
// Empirical when entropy < threshold_ratio * ln(distinct_count), else Uniform.
struct Auto {
  double threshold_ratio = 0.5;
};
struct Custom {
  std::unordered_map<ValueId, double> table;
};
}  // namespace policy

using ModelPolicy = std::variant<policy::Uniform, policy::Empirical, policy::Auto, policy::Custom>;

// p^k(a) for one non-target dimension.
class DimensionModel {
 public:
  std::size_t dim() const { return dim_; }
  ModelKind kind() const { return kind_; }
  std::size_t distinct_count() const { return probs_.size(); }

  // Throws kLookup for ids outside the dimension (or missing from a custom table).
  double probability(ValueId a) const;

  // -ln p, clamped away from infinity.
  double surprisal(ValueId a) const;

 private:
  friend DimensionModel fit_dimension_model(const DimensionStats&, const ModelPolicy&);

  std::size_t dim_ = 0;
  ModelKind kind_ = ModelKind::kUniform;
  std::vector<double> probs_;  // indexed by ValueId; 0 marks "absent from custom table"
};

DimensionModel fit_dimension_model(const DimensionStats& stats, const ModelPolicy& policy);

// Fits one model per non-target dimension, in dimension order. `policies` is
// indexed by dimension; dimensions without an entry use `fallback`.
std::vector<DimensionModel> fit_models(const Relation& relation,
                                       const std::unordered_map<std::size_t, ModelPolicy>& policies = {},
                                       const ModelPolicy& fallback = policy::Auto{});

}  // namespace isgspot
