// isgspot: build information sharing graphs from event logs, detect dense
// groups, synthesize labeled benchmarks and score rankings.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "isgspot/dspot.hpp"
#include "isgspot/error.hpp"
#include "isgspot/eval.hpp"
#include "isgspot/isg.hpp"
#include "isgspot/probmodel.hpp"
#include "isgspot/relation.hpp"
#include "isgspot/report.hpp"
#include "isgspot/synth.hpp"

namespace fs = std::filesystem;
using namespace isgspot;

namespace {

struct RunConfig {
  std::string input;
  std::string graph_dir;
  std::string output;
  std::string target = "0";
  std::string id_column;
  std::string delimiter = ",";
  bool no_header = false;
  std::vector<std::string> prob;
  double auto_ratio = 0.5;
  std::string prune = "on";
  std::size_t max_group_size = 10'000;
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  bool timing = false;

  // synth
  std::size_t lambda = 1;
  std::size_t entries = 10'000;
  std::size_t block_entities = 50;
  std::size_t block_mass = 500;
  std::vector<std::size_t> cardinalities;
  std::vector<std::size_t> dense_dims;

  // eval
  std::string scores;
  std::string labels;
};

void require_readable(const std::string& path, const char* what) {
  if (path.empty()) fail(ErrorKind::kIo, std::string("missing ") + what + " path");
  std::ifstream probe(path);
  if (!probe) fail(ErrorKind::kIo, std::string("cannot read ") + what + " '" + path + "'");
}

fs::path prepare_output_dir(const std::string& dir) {
  if (dir.empty()) fail(ErrorKind::kIo, "missing --output directory");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(ErrorKind::kIo, "cannot create output directory '" + dir + "'");
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) fail(ErrorKind::kIo, "cannot write '" + path.string() + "'");
}

bool prune_flag(const std::string& v) {
  if (v == "on") return true;
  if (v == "off") return false;
  fail(ErrorKind::kParse, "--prune takes on|off, got '" + v + "'");
}

Relation load_input(const RunConfig& cfg) {
  require_readable(cfg.input, "input");
  if (cfg.delimiter.size() != 1) fail(ErrorKind::kParse, "--delimiter must be a single character");
  Schema schema{cfg.target, std::nullopt};
  if (!cfg.id_column.empty()) schema.id_column = cfg.id_column;
  const char delim = cfg.delimiter == "\\t" ? '\t' : cfg.delimiter[0];
  return load_relation_file(cfg.input, schema, LoadOptions{delim, !cfg.no_header});
}

std::unordered_map<std::size_t, ModelPolicy> parse_policies(const Relation& rel, const RunConfig& cfg) {
  std::unordered_map<std::size_t, ModelPolicy> out;
  for (const auto& item : cfg.prob) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorKind::kParse, "--prob expects <dim>=<policy>, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string name = item.substr(eq + 1);
    std::optional<std::size_t> dim;
    const auto& names = rel.dimension_names();
    for (std::size_t d = 0; d < names.size(); ++d) {
      if (names[d] == key) dim = d;
    }
    if (!dim && !key.empty() && key.find_first_not_of("0123456789") == std::string::npos) {
      if (std::stoul(key) < names.size()) dim = std::stoul(key);
    }
    if (!dim) fail(ErrorKind::kSchema, "--prob names unknown dimension '" + key + "'");
    if (*dim == rel.target_dim()) fail(ErrorKind::kSchema, "--prob cannot target the entity dimension");
    if (name == "uniform") {
      out[*dim] = policy::Uniform{};
    } else if (name == "empirical") {
      out[*dim] = policy::Empirical{};
    } else if (name == "auto") {
      out[*dim] = policy::Auto{cfg.auto_ratio};
    } else {
      fail(ErrorKind::kParse, "unknown probability policy '" + name + "'");
    }
  }
  return out;
}

BuildResult build_graph(const Relation& rel, const RunConfig& cfg, bool prune) {
  const auto models = fit_models(rel, parse_policies(rel, cfg), policy::Auto{cfg.auto_ratio});
  BuildOptions options;
  options.max_group_size = cfg.max_group_size;
  options.prune = prune;
  options.workers = cfg.workers;
  auto built = build_isg(rel, models, options);
  for (const auto& s : built.skipped) {
    std::cerr << "warning: skipped group on dimension '" << rel.dimension_names()[s.dim] << "' value '"
              << s.value_text << "' with " << s.entities << " entities (max-group-size "
              << cfg.max_group_size << ")\n";
  }
  return built;
}

std::vector<std::string> entity_names(const Relation& rel) {
  std::vector<std::string> names(rel.entity_count());
  for (ValueId u = 0; u < names.size(); ++u) names[u] = rel.entity_name(u);
  return names;
}

int cmd_build(const RunConfig& cfg) {
  const bool prune = prune_flag(cfg.prune);
  const Relation rel = load_input(cfg);
  const fs::path out = prepare_output_dir(cfg.output);
  const auto built = build_graph(rel, cfg, prune);

  std::ostringstream edges, nodes, entities;
  write_edge_list(edges, built.graph);
  write_node_weights(nodes, built.graph);
  for (ValueId u = 0; u < rel.entity_count(); ++u) entities << u << '\t' << rel.entity_name(u) << '\n';
  write_file(out / "edges.tsv", edges.str());
  write_file(out / "nodes.tsv", nodes.str());
  write_file(out / "entities.tsv", entities.str());
  write_file(out / "stats.json", render_json(graph_stats_json(built, prune)));
  return 0;
}

// Graph dump written by `build`: edges.tsv, nodes.tsv, entities.tsv.
std::pair<ISGraph, std::vector<std::string>> load_graph_dump(const std::string& dir) {
  const fs::path base(dir);
  for (const char* f : {"edges.tsv", "nodes.tsv", "entities.tsv"}) require_readable((base / f).string(), "graph dump");
  std::ifstream edges(base / "edges.tsv"), nodes(base / "nodes.tsv"), entities(base / "entities.tsv");
  ISGraph graph = read_graph(edges, nodes);
  std::vector<std::string> names(graph.node_count());
  std::string line;
  while (std::getline(entities, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    const std::size_t id = std::stoul(line.substr(0, tab));
    if (id < names.size()) names[id] = line.substr(tab + 1);
  }
  return {std::move(graph), std::move(names)};
}

int cmd_detect(const RunConfig& cfg) {
  const bool prune = prune_flag(cfg.prune);
  if (cfg.format != "json" && cfg.format != "csv") fail(ErrorKind::kParse, "--format takes json|csv");
  const auto start = std::chrono::steady_clock::now();

  ISGraph graph;
  std::vector<std::string> names;
  if (!cfg.graph_dir.empty()) {
    std::tie(graph, names) = load_graph_dump(cfg.graph_dir);
  } else {
    try {
      const Relation rel = load_input(cfg);
      graph = build_graph(rel, cfg, false).graph;
      names = entity_names(rel);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kEmptyRelation) throw;
      std::cerr << "note: " << e.what() << "; writing an empty report\n";
    }
  }
  const fs::path out = prepare_output_dir(cfg.output);

  DetectOptions options;
  options.prune = prune;
  options.workers = cfg.workers;
  const DetectionResult result = detect(graph, options);
  const ScoreTable scores = suspiciousness_scores(result.graph, result);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (cfg.format == "json") {
    std::optional<double> wall;
    if (cfg.timing) wall = seconds;
    write_file(out / "report.json", render_json(detection_json(result, names, wall)));
  } else {
    std::ostringstream groups;
    write_groups_csv(groups, result, names);
    write_file(out / "groups.csv", groups.str());
  }
  std::ostringstream scores_csv;
  write_scores_csv(scores_csv, scores, names);
  write_file(out / "scores.csv", scores_csv.str());
  return 0;
}

int cmd_synth(const RunConfig& cfg) {
  if (!cfg.seed) fail(ErrorKind::kParse, "synth requires --seed");
  SyntheticSpec spec;
  spec.seed = *cfg.seed;
  spec.lambda = cfg.lambda;
  spec.total_entries = cfg.entries;
  spec.block_entity_count = cfg.block_entities;
  spec.block_mass = cfg.block_mass;
  if (!cfg.cardinalities.empty()) spec.cardinalities = cfg.cardinalities;
  spec.dense_dims = cfg.dense_dims;
  const fs::path out = prepare_output_dir(cfg.output);
  const LabeledRelation data = generate_synthetic(spec);

  std::ostringstream rel, labels;
  write_relation_csv(rel, data.relation);
  write_labels_csv(labels, data);
  write_file(out / "relation.csv", rel.str());
  write_file(out / "labels.csv", labels.str());

  nlohmann::json meta = {
      {"seed", spec.seed},
      {"lambda", spec.lambda},
      {"background_entries", spec.total_entries},
      {"block_mass", spec.block_mass},
      {"block_entities", spec.block_entity_count},
      {"block_entries", "appended"},
      {"cardinalities", spec.cardinalities},
      {"dense_cardinality", spec.dense_cardinality},
      {"loose_cardinality", spec.loose_cardinality},
      {"total_entries", data.relation.size()},
      {"fraud_entities", data.fraud_count()},
      {"target", "A1"},
      {"id_column", "x"},
  };
  write_file(out / "metadata.json", render_json(meta));
  return 0;
}

int cmd_eval(const RunConfig& cfg) {
  require_readable(cfg.scores, "scores");
  require_readable(cfg.labels, "labels");
  std::ifstream scores_in(cfg.scores), labels_in(cfg.labels);
  const auto scores = read_scores_csv(scores_in);
  const auto labels = read_labels_csv(labels_in);
  const std::string text = render_json(auc_json(evaluate(scores, labels)));
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << text;
  } else {
    write_file(cfg.output, text);
  }
  return 0;
}

void add_relation_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--input", cfg.input, "Delimited relation file");
  cmd->add_option("--target", cfg.target, "Target column (name or zero-based index)");
  cmd->add_option("--id-column", cfg.id_column, "Entry identifier column (optional)");
  cmd->add_option("--delimiter", cfg.delimiter, "Field delimiter (use \\t for tab)");
  cmd->add_flag("--no-header", cfg.no_header, "Input has no header row");
  cmd->add_option("--prob", cfg.prob, "Per-dimension model: <dim>=uniform|empirical|auto");
  cmd->add_option("--auto-ratio", cfg.auto_ratio, "Entropy ratio below which auto picks empirical");
  cmd->add_option("--prune", cfg.prune, "Edge pruning: on|off");
  cmd->add_option("--max-group-size", cfg.max_group_size, "Skip (dimension, value) groups larger than this");
  cmd->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense fraud-group detection on information sharing graphs"};
  app.set_config("--config", "", "TOML/INI config file; flags take precedence");
  app.require_subcommand(1);
  RunConfig cfg;

  auto* build = app.add_subcommand("build", "Build the information sharing graph and dump it");
  add_relation_flags(build, cfg);
  build->add_option("--output", cfg.output, "Output directory");

  auto* det = app.add_subcommand("detect", "Detect dense groups and score entities");
  add_relation_flags(det, cfg);
  det->add_option("--graph", cfg.graph_dir, "Read a graph dump directory instead of --input");
  det->add_option("--output", cfg.output, "Output directory");
  det->add_option("--format", cfg.format, "Report format: json|csv");
  det->add_flag("--timing", cfg.timing, "Include wall-clock seconds in the report");

  auto* syn = app.add_subcommand("synth", "Generate a labeled synthetic relation");
  syn->add_option("--output", cfg.output, "Output directory");
  syn->add_option("--seed", cfg.seed, "Random seed");
  syn->add_option("--lambda", cfg.lambda, "Feature dimensions on which the block is densest");
  syn->add_option("--entries", cfg.entries, "Background entries");
  syn->add_option("--block-entities", cfg.block_entities, "Fraud users in the block");
  syn->add_option("--block-mass", cfg.block_mass, "Entries in the block");
  syn->add_option("--cardinalities", cfg.cardinalities, "Per-dimension cardinalities, users first")->delimiter(',');
  syn->add_option("--dense-dims", cfg.dense_dims, "1-based feature dimensions that get dense pools")->delimiter(',');

  auto* ev = app.add_subcommand("eval", "Compute AUC of a score ranking against labels");
  ev->add_option("--scores", cfg.scores, "Scores CSV (entity,score[,rank])");
  ev->add_option("--labels", cfg.labels, "Labels CSV (entity,label)");
  ev->add_option("--output", cfg.output, "Output JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*build) return cmd_build(cfg);
    if (*det) return cmd_detect(cfg);
    if (*syn) return cmd_synth(cfg);
    if (*ev) return cmd_eval(cfg);
  } catch (const Error& e) {
    std::cerr << "isgspot: " << e.what() << '\n';
    return e.exit_status();
  } catch (const std::exception& e) {
    std::cerr << "isgspot: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
