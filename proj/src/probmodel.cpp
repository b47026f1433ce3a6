#include "isgspot/probmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isgspot/error.hpp"

namespace isgspot {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kUniform: return "uniform";
    case ModelKind::kEmpirical: return "empirical";
    case ModelKind::kCustom: return "custom";
  }
  return "?";
}

double DimensionModel::probability(ValueId a) const {
  if (a >= probs_.size() || probs_[a] <= 0.0) {
    fail(ErrorKind::kLookup, "no probability for value id " + std::to_string(a) + " on dimension " +
                                 std::to_string(dim_));
  }
  return probs_[a];
}

double DimensionModel::surprisal(ValueId a) const {
  return -std::log(std::max(probability(a), kMinProbability));
}

namespace {

void fill_uniform(std::vector<double>& probs, std::size_t distinct) {
  probs.assign(distinct, 1.0 / static_cast<double>(distinct));
}

void fill_empirical(std::vector<double>& probs, const DimensionStats& stats) {
  probs.resize(stats.counts.size());
  const double total = static_cast<double>(stats.total);
  std::transform(stats.counts.begin(), stats.counts.end(), probs.begin(),
                 [total](std::uint64_t c) { return static_cast<double>(c) / total; });
}

}  // namespace

DimensionModel fit_dimension_model(const DimensionStats& stats, const ModelPolicy& policy) {
  if (stats.distinct_count == 0 || stats.total == 0) {
    fail(ErrorKind::kModel, "dimension " + std::to_string(stats.dim) + " has no values");
  }
  DimensionModel model;
  model.dim_ = stats.dim;

  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, policy::Uniform>) {
          model.kind_ = ModelKind::kUniform;
          fill_uniform(model.probs_, stats.distinct_count);
        } else if constexpr (std::is_same_v<P, policy::Empirical>) {
          model.kind_ = ModelKind::kEmpirical;
          fill_empirical(model.probs_, stats);
        } else if constexpr (std::is_same_v<P, policy::Auto>) {
          const double max_entropy = std::log(static_cast<double>(stats.distinct_count));
          if (stats.distinct_count == 1 || stats.entropy_nats < p.threshold_ratio * max_entropy) {
            model.kind_ = ModelKind::kEmpirical;
            fill_empirical(model.probs_, stats);
          } else {
            model.kind_ = ModelKind::kUniform;
            fill_uniform(model.probs_, stats.distinct_count);
          }
        } else {
          model.kind_ = ModelKind::kCustom;
          model.probs_.assign(stats.distinct_count, 0.0);
          for (const auto& [id, prob] : p.table) {
            if (!(prob > 0.0 && prob <= 1.0)) {
              fail(ErrorKind::kModel, "custom probability " + std::to_string(prob) + " for value id " +
                                          std::to_string(id) + " outside (0, 1]");
            }
            if (id >= model.probs_.size()) model.probs_.resize(id + 1, 0.0);
            model.probs_[id] = prob;
          }
        }
      },
      policy);
  return model;
}

std::vector<DimensionModel> fit_models(const Relation& relation,
                                       const std::unordered_map<std::size_t, ModelPolicy>& policies,
                                       const ModelPolicy& fallback) {
  std::vector<DimensionModel> models;
  for (std::size_t d = 0; d < relation.dimension_count(); ++d) {
    if (d == relation.target_dim()) continue;
    auto it = policies.find(d);
    models.push_back(fit_dimension_model(dimension_stats(relation, d), it != policies.end() ? it->second : fallback));
  }
  return models;
}

}  // namespace isgspot
