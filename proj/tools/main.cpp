#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperwalk/expansion.hpp"
#include "hyperwalk/harness.hpp"
#include "hyperwalk/walk.hpp"

using namespace hyperwalk;
using nlohmann::json;

namespace {

struct CommonFlags {
  double alpha = 0.8;
  std::uint64_t seed = 1;
  int replicas = 0;
  int n_max = 0;
  std::size_t budget_vertices = 0;
  std::string out;
  std::string summary;
  std::string config;
  std::map<std::string, CLI::Option*> given;
};

void add_common(CLI::App* app, CommonFlags& f) {
  f.given["alpha"] = app->add_option("--alpha", f.alpha, "Probability of an alpha-step, in (2/3, 1)");
  f.given["seed"] = app->add_option("--seed", f.seed, "Master seed");
  f.given["replicas"] = app->add_option("--replicas", f.replicas, "Number of replicas");
  f.given["n_max"] = app->add_option("--n-max", f.n_max, "Walk length");
  f.given["budget_vertices"] = app->add_option("--budget-vertices", f.budget_vertices, "Vertex budget per map");
  app->add_option("--out", f.out, "CSV output path (default: stdout)");
  app->add_option("--summary", f.summary, "JSON summary path (default: <out>.json, or stderr)");
  app->add_option("--config", f.config, "JSON config file; flags override it");
}

// defaults < config file < flags
ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig c;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw std::runtime_error("cannot open config " + f.config);
    c.merge_json(json::parse(in));
  }
  if (f.given.at("alpha")->count()) c.alpha = f.alpha;
  if (f.given.at("seed")->count()) c.seed = f.seed;
  if (f.given.at("replicas")->count()) c.replicas = f.replicas;
  if (f.given.at("n_max")->count()) c.n_max = f.n_max;
  if (f.given.at("budget_vertices")->count()) c.budget_vertices = f.budget_vertices;
  return c;
}

void emit(const CommonFlags& f, const ExperimentConfig& c, const RunResult& r) {
  if (f.out.empty()) {
    write_csv(std::cout, c, r.experiment, r.rows);
  } else {
    std::ofstream out(f.out);
    if (!out) throw std::runtime_error("cannot write " + f.out);
    write_csv(out, c, r.experiment, r.rows);
  }
  std::string path = f.summary;
  if (path.empty() && !f.out.empty()) path = f.out + ".json";
  if (path.empty()) {
    std::cerr << r.summary.dump(2) << "\n";
  } else {
    std::ofstream out(path);
    out << r.summary.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperwalk: random walks on lazily peeled hyperbolic half-plane triangulations"};
  app.require_subcommand(1);

  std::map<std::string, CommonFlags> flags;
  std::map<std::string, RunResult (*)(const ExperimentConfig&)> experiments{
      {"speed", run_speed},   {"return-prob", run_return_prob},     {"volume", run_volume},
      {"boundary-dist", run_boundary_distance}, {"step-tails", run_step_tails}, {"traps", run_traps}};
  for (const auto& [name, fn] : experiments) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " experiment");
    add_common(sub, flags[name]);
  }

  CommonFlags map_flags;
  int radius = 2;
  auto* sample = app.add_subcommand("sample-map", "Reveal the hull of a ball around the root and print the map JSON");
  add_common(sample, map_flags);
  sample->add_option("--radius", radius, "Hull radius");

  CommonFlags walk_flags;
  auto* walk = app.add_subcommand("walk", "Run one walk and print its trajectory");
  add_common(walk, walk_flags);

  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "Run an invariant suite");
  verify->add_option("suite", suite, "boltzmann, steplaw, maps, expansion, traps, walk-oracles or all");
  verify->add_option("--seed", verify_seed, "Master seed");
  verify->add_option("--out", verify_out, "JSON report path (default: stdout)");

  std::string graph_path;
  double iso = 0.2;
  int size_cap = 12;
  auto* graph = app.add_subcommand("graph", "Expansion analytics for an edge-list graph");
  graph->add_option("file", graph_path, "Edge-list file")->required();
  graph->add_option("--i", iso, "Isolation parameter");
  graph->add_option("--size-cap", size_cap, "Largest core searched");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [name, fn] : experiments) {
      if (app.got_subcommand(name)) {
        const auto config = resolve(flags[name]);
        emit(flags[name], config, fn(config));
        return 0;
      }
    }
    if (app.got_subcommand("sample-map")) {
      const auto c = resolve(map_flags);
      LazyHalfPlane lazy(std::make_shared<const StepLaw>(make_step_law(c.alpha)), replica_seed(c.seed, "sample-map", 0), 8,
                         c.budget());
      lazy.reveal_hull({lazy.map().root_vertex()}, radius);
      const std::string text = serialize(lazy.map());
      if (map_flags.out.empty()) {
        std::cout << text << "\n";
      } else {
        std::ofstream(map_flags.out) << text << "\n";
      }
      return 0;
    }
    if (app.got_subcommand("walk")) {
      const auto c = resolve(walk_flags);
      const std::uint64_t s = replica_seed(c.seed, "walk", 0);
      WalkState state(std::make_shared<const StepLaw>(make_step_law(c.alpha)), s, c.budget());
      std::vector<ResultRow> rows;
      for (int n = 0; n <= c.n_max; ++n) {
        if (n > 0 && state.step() == StepStatus::Paused) break;
        const auto home = distance_to_start(state);
        rows.push_back(ResultRow{"walk", "root_upper", s, 0, static_cast<double>(n), static_cast<double>(home.upper), 0.0,
                                 home.exact ? 1 : 0, state.lazy().peel_count()});
        rows.push_back(ResultRow{"walk", "on_line", s, 0, static_cast<double>(n),
                                 state.map().on_line(state.position()) ? 1.0 : 0.0, 0.0, 1, 0});
      }
      RunResult r{"walk", rows, json{{"steps", state.step_index()}, {"boundary_visits", state.boundary_visits()}}};
      emit(walk_flags, c, r);
      return 0;
    }
    if (app.got_subcommand("verify")) {
      const auto report = run_verify(suite, verify_seed);
      json j = report.to_json();
      j["suite"] = suite;
      j["seed"] = verify_seed;
      if (verify_out.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::ofstream(verify_out) << j.dump(2) << "\n";
      }
      for (const auto& c : report.checks) {
        std::fprintf(stderr, "%s %s/%s: %s\n", c.passed ? "ok  " : "FAIL", c.suite.c_str(), c.name.c_str(), c.detail.c_str());
      }
      return report.passed() ? 0 : 1;
    }
    if (app.got_subcommand("graph")) {
      std::ifstream in(graph_path);
      if (!in) throw std::runtime_error("cannot open " + graph_path);
      const auto g = read_edge_list(in);
      const auto cores = enumerate_cores(g, iso, size_cap);
      const auto spectral = spectral_bound_check(g);
      json j{{"vertices", g.size()},
             {"edges", g.edge_count()},
             {"cheeger", spectral.cheeger},
             {"norm", spectral.norm},
             {"norm_bound", spectral.bound},
             {"spectral_holds", spectral.holds},
             {"i", iso},
             {"cores", cores.sets.size()},
             {"union", cores.union_set},
             {"islands", cores.islands},
             {"oceans", cores.oceans},
             {"partial", cores.partial}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
