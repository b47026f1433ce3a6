#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "isgspot/dspot.hpp"
#include "isgspot/eval.hpp"
#include "isgspot/isg.hpp"

namespace isgspot {

// Output rendering shared by the CLI and the acceptance suite. JSON keys are
// sorted and reals carry 9 significant digits so reports diff cleanly.

double round_significant(double x, int digits = 9);
std::string format_real(double x);

nlohmann::json graph_stats_json(const BuildResult& built, bool prune_applied);
nlohmann::json detection_json(const DetectionResult& result, std::span<const std::string> entity_names,
                              std::optional<double> wall_clock_seconds = std::nullopt);
nlohmann::json auc_json(const AucReport& report);

// Pretty JSON followed by a newline.
std::string render_json(const nlohmann::json& doc);

// "entity,score,rank", highest score first, ties by entity id.
void write_scores_csv(std::ostream& out, const ScoreTable& table, std::span<const std::string> entity_names);

// "component,entity,w,f_score", one row per group member.
void write_groups_csv(std::ostream& out, const DetectionResult& result, std::span<const std::string> entity_names);

}  // namespace isgspot
