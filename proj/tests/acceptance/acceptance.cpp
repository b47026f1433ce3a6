// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance              run every criterion
//   acceptance --criterion N

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "graph_fixtures.hpp"
#include "isgspot/dspot.hpp"
#include "isgspot/eval.hpp"
#include "isgspot/isg.hpp"
#include "isgspot/metrics.hpp"
#include "isgspot/oracle.hpp"
#include "isgspot/probmodel.hpp"
#include "isgspot/relation.hpp"
#include "isgspot/synth.hpp"

namespace fs = std::filesystem;
using namespace isgspot;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// ---- 1: entropy anchors -------------------------------------------------

Relation one_feature(const std::vector<std::pair<std::string, std::size_t>>& value_counts) {
  RelationBuilder b({"user", "f"}, 0);
  std::size_t i = 0;
  for (const auto& [value, count] : value_counts) {
    for (std::size_t c = 0; c < count; ++c) {
      const std::string user = "u" + std::to_string(i++);
      b.add(std::vector<std::string_view>{user, value});
    }
  }
  return std::move(b).build();
}

Outcome entropy_anchors() {
  std::vector<std::pair<std::string, std::size_t>> uniform, skewed;
  for (int v = 0; v < 50; ++v) uniform.push_back({"v" + std::to_string(v), 10});
  skewed.push_back({"v0", 441});
  for (int v = 1; v < 50; ++v) skewed.push_back({"v" + std::to_string(v), 1});
  const double hu = dimension_stats(one_feature(uniform), 1).entropy_nats;
  const double hs = dimension_stats(one_feature(skewed), 1).entropy_nats;
  const bool pass = std::abs(hu - 3.912) <= 0.005 && std::abs(hs - 0.714) <= 0.005;
  return {pass, "H(uniform/50)=" + fmt("%.4f", hu) + " H(0.9-concentrated/50)=" + fmt("%.4f", hs) +
                    " (want 3.912, 0.714 within 0.005)"};
}

// ---- 2 and 6 share one instance set --------------------------------------

constexpr int kRandomGraphs = 600;
constexpr int kDisconnectedGraphs = 150;
constexpr std::uint64_t kGraphSeed = 20240611;

std::vector<ISGraph> random_instances() {
  std::mt19937_64 rng(kGraphSeed);
  std::vector<ISGraph> out;
  for (int i = 0; i < kRandomGraphs; ++i) out.push_back(testing::random_graph(rng));
  return out;
}

std::vector<ISGraph> disconnected_instances() {
  std::mt19937_64 rng(kGraphSeed + 1);
  std::vector<ISGraph> out;
  for (int i = 0; i < kDisconnectedGraphs; ++i) out.push_back(testing::random_disconnected_graph(rng, 12));
  return out;
}

std::vector<NodeId> all_nodes(const ISGraph& g) {
  std::vector<NodeId> v(g.node_count());
  std::iota(v.begin(), v.end(), NodeId{0});
  return v;
}

Outcome approximation_guarantee() {
  int failures = 0;
  int checked = 0;
  double worst = 1.0;
  auto check = [&](const ISGraph& peeled, double best_f) {
    const double opt = brute_force_optimum(peeled).best_f;
    ++checked;
    if (best_f < 0.5 * opt - 1e-9 * opt) ++failures;
    if (opt > 0) worst = std::min(worst, best_f / opt);
  };
  const auto instances = random_instances();
  const auto split = disconnected_instances();
  for (const auto* set : {&instances, &split}) {
    for (const auto& g : *set) {
      DetectOptions off;
      off.prune = false;
      check(g, detect(g, off).best_f());
      const auto pruned = detect(g);  // default: prune on, judged on the graph it peeled
      check(pruned.graph, pruned.best_f());
    }
  }

  int mismatches = 0;
  for (const auto& g : split) {
    double best = 0.0;
    for (const auto& comp : connected_components(g)) best = std::max(best, brute_force_optimum(g, comp).best_f);
    if (brute_force_optimum(g).best_f != best) ++mismatches;
  }
  const bool pass = failures == 0 && mismatches == 0;
  return {pass, std::to_string(checked) + " detect runs on " + std::to_string(instances.size() + split.size()) +
                    " graphs (|V|<=12), " + std::to_string(failures) + " below opt/2, worst ratio " +
                    fmt("%.4f", worst) + "; " + std::to_string(mismatches) + "/" + std::to_string(split.size()) +
                    " disconnected instances where global opt != best component opt"};
}

Outcome peel_consistency() {
  double worst_gap = 0.0;
  std::size_t max_excess = 0;
  bool iterations_ok = true;
  std::size_t graphs = 0;
  auto run = [&](const ISGraph& g) {
    ++graphs;
    for (const auto& comp : connected_components(g)) {
      const auto r = peel_partition(g, comp, [&](const PeelState& s) {
        std::vector<NodeId> alive;
        for (std::size_t i = 0; i < s.nodes.size(); ++i) {
          if (s.alive[i]) alive.push_back(s.nodes[i]);
        }
        for (std::size_t i = 0; i < s.nodes.size(); ++i) {
          if (!s.alive[i]) continue;
          worst_gap = std::max(worst_gap, std::abs(s.running_weight[i] - node_weight(g, s.nodes[i], alive)));
        }
      });
      if (r.trace.batches.size() > comp.size()) {
        iterations_ok = false;
        max_excess = std::max(max_excess, r.trace.batches.size() - comp.size());
      }
    }
  };
  for (const auto& g : random_instances()) run(g);
  for (const auto& g : disconnected_instances()) run(g);
  const bool pass = worst_gap <= 1e-9 && iterations_ok;
  return {pass, std::to_string(graphs) + " graphs; max |running w - recomputed w| = " + fmt("%.3g", worst_gap) +
                    " (tol 1e-9); outer iterations " + (iterations_ok ? "<= |V| everywhere" : "exceed |V|")};
}

// ---- 3: completeness on constructed relations -----------------------------

Outcome completeness() {
  bool pass = true;
  std::string detail;
  for (std::size_t k : {3u, 10u, 50u}) {
    // k entities share value "a"; 4k outsiders hold unique values, so p(a) = 1/5
    // under the empirical model and 1/(4k+1) under the uniform one.
    for (int empirical = 0; empirical < 2; ++empirical) {
      RelationBuilder b({"user", "f"}, 0);
      for (std::size_t i = 0; i < k; ++i) b.add(std::vector<std::string_view>{"u" + std::to_string(i), "a"});
      for (std::size_t i = 0; i < 4 * k; ++i) {
        const std::string user = "x" + std::to_string(i);
        const std::string value = "b" + std::to_string(i);
        b.add(std::vector<std::string_view>{user, value});
      }
      const Relation rel = std::move(b).build();
      const ModelPolicy pol = empirical ? ModelPolicy{policy::Empirical{}} : ModelPolicy{policy::Uniform{}};
      const auto models = fit_models(rel, {}, pol);
      const auto g = build_isg(rel, models).graph;
      std::vector<NodeId> group(k);
      for (std::size_t i = 0; i < k; ++i) group[i] = *rel.values(0).find("u" + std::to_string(i));
      std::sort(group.begin(), group.end());
      const double p = models[0].probability(*rel.values(1).find("a"));
      const double rho = edge_density(g, group);
      const double f = f_score(g, group);
      const double bound = (static_cast<double>(k) - 1.0) * (-2.0 * std::log(p)) - 1e-9;
      const bool ok = rho == 1.0 && f >= bound;
      pass = pass && ok;
      detail += (detail.empty() ? "" : "; ") + std::string("k=") + std::to_string(k) +
                (empirical ? " emp" : " uni") + " rho_edge=" + fmt("%.6g", rho) + " F=" + fmt("%.6g", f) +
                " bound=" + fmt("%.6g", bound);
    }
  }
  return {pass, detail};
}

// ---- 4 and 5: synthetic AUC -----------------------------------------------

double pipeline_auc(const LabeledRelation& data, bool prune) {
  const auto models = fit_models(data.relation, {});
  const auto built = build_isg(data.relation, models);
  DetectOptions opts;
  opts.prune = prune;
  const auto result = detect(built.graph, opts);
  const auto scores = suspiciousness_scores(result.graph, result);
  return auc(scores.scores, data.labels).auc;
}

LabeledRelation synthetic(std::size_t lambda, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.lambda = lambda;
  spec.seed = seed;
  return generate_synthetic(spec);
}

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

Outcome synthetic_auc() {
  std::string detail;
  bool pass = true;
  for (auto [lambda, floor] : {std::pair<std::size_t, double>{1, 0.95}, {5, 0.99}}) {
    double sum = 0;
    std::string per_seed;
    for (auto seed : kSeeds) {
      const double a = pipeline_auc(synthetic(lambda, seed), true);
      sum += a;
      per_seed += (per_seed.empty() ? "" : ",") + fmt("%.4f", a);
    }
    const double mean = sum / std::size(kSeeds);
    pass = pass && mean >= floor;
    detail += (detail.empty() ? "" : "; ") + std::string("lambda=") + std::to_string(lambda) + " mean AUC " +
              fmt("%.4f", mean) + " (>= " + fmt("%.2f", floor) + ") [" + per_seed + "]";
  }
  return {pass, detail};
}

Outcome pruning_neutrality() {
  bool pass = true;
  double worst = 0;
  std::string per_seed;
  for (auto seed : kSeeds) {
    const auto data = synthetic(3, seed);
    const double on = pipeline_auc(data, true);
    const double off = pipeline_auc(data, false);
    worst = std::max(worst, std::abs(on - off));
    pass = pass && std::abs(on - off) <= 0.02;
    per_seed += (per_seed.empty() ? "" : " ") + fmt("%.4f", on) + "/" + fmt("%.4f", off);
  }
  return {pass, "lambda=3 AUC on/off per seed: " + per_seed + "; max gap " + fmt("%.4f", worst) + " (<= 0.02)"};
}

// ---- 7: CLI determinism ---------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int shell(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("isgspot_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = std::string("\"") + ISGSPOT_CLI_PATH + "\"";
  const std::string quiet = " > /dev/null 2>&1";
  int status = shell(cli + " synth --seed 1 --lambda 1 --output \"" + (dir / "data").string() + "\"" + quiet);
  const std::string detect = cli + " detect --input \"" + (dir / "data" / "relation.csv").string() +
                             "\" --target A1 --id-column x";
  status |= shell(detect + " --workers 1 --output \"" + (dir / "w1").string() + "\"" + quiet);
  status |= shell(detect + " --workers 8 --output \"" + (dir / "w8").string() + "\"" + quiet);
  const std::string r1 = slurp(dir / "w1" / "report.json");
  const std::string r8 = slurp(dir / "w8" / "report.json");
  const bool same_scores = slurp(dir / "w1" / "scores.csv") == slurp(dir / "w8" / "scores.csv");
  fs::remove_all(dir);
  const bool pass = status == 0 && !r1.empty() && r1 == r8 && same_scores;
  return {pass, "exit status " + std::to_string(status) + ", report.json " + std::to_string(r1.size()) + " bytes " +
                    (r1 == r8 ? "identical" : "DIFFERENT") + ", scores.csv " + (same_scores ? "identical" : "DIFFERENT")};
}

// ---- 8: scaling smoke -----------------------------------------------------

Relation subsample(const Relation& rel, std::size_t count, std::uint64_t seed) {
  PortableRng rng(seed);
  auto picks = rng.sample_distinct(rel.size(), count);
  std::sort(picks.begin(), picks.end());
  std::vector<std::string> names = rel.dimension_names();
  RelationBuilder b(names, rel.target_dim());
  std::vector<std::string_view> row(rel.dimension_count());
  for (auto e : picks) {
    for (std::size_t d = 0; d < row.size(); ++d) row[d] = rel.values(d).text(rel.value(e, d));
    b.add(row, rel.entry_id(e));
  }
  return std::move(b).build();
}

double pipeline_seconds(const Relation& rel, std::size_t& edges) {
  double best = 1e300;
  for (int rep = 0; rep < 3; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    const auto built = build_isg(rel, fit_models(rel, {}));
    const auto result = detect(built.graph);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (result.graph.node_count() == 0) return -1;
    edges = built.graph.edge_count();
    best = std::min(best, s);
  }
  return best;
}

Outcome scaling() {
  SyntheticSpec spec;
  spec.total_entries = 199'500;
  spec.block_mass = 500;
  spec.cardinalities = {50'000, 100'000, 100'000, 100'000, 100'000, 100'000, 100'000};
  spec.seed = 8;
  const Relation full = generate_synthetic(spec).relation;
  const Relation quarter = subsample(full, full.size() / 4, 9);
  double ratio = 0;
  double small = 0, big = 0;
  std::size_t small_edges = 0, big_edges = 0;
  bool pass = false;
  for (int attempt = 0; attempt < 3 && !pass; ++attempt) {
    small = pipeline_seconds(quarter, small_edges);
    big = pipeline_seconds(full, big_edges);
    ratio = big / small;
    pass = small > 0 && ratio <= 6.0;
  }
  return {pass, std::to_string(quarter.size()) + " entries " + fmt("%.3fs", small) + " (" +
                    std::to_string(small_edges) + " edges), " + std::to_string(full.size()) + " entries " +
                    fmt("%.3fs", big) + " (" + std::to_string(big_edges) + " edges), growth " + fmt("%.2fx", ratio) +
                    " (<= 6x); edge growth " + fmt("%.2fx", double(big_edges) / double(small_edges))};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "entropy anchors in nats", entropy_anchors},
      {2, "half-approximation against brute force", approximation_guarantee},
      {3, "completeness on shared-value cliques", completeness},
      {4, "synthetic AUC at lambda 1 and 5", synthetic_auc},
      {5, "pruning neutrality at lambda 3", pruning_neutrality},
      {6, "peel running-weight consistency", peel_consistency},
      {7, "worker-count determinism of detect", determinism},
      {8, "near-linear scaling smoke", scaling},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": " << o.detail << " ["
              << fmt("%.2fs", s) << "]" << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
