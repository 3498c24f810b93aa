#include "fxlab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "fxlab/error.hpp"
#include "fxlab/exact.hpp"
#include "fxlab/experiment.hpp"
#include "fxlab/generators.hpp"
#include "fxlab/moran.hpp"
#include "fxlab/optimizers.hpp"
#include "fxlab/weak_selection.hpp"

namespace fxlab {

using nlohmann::json;

namespace {

struct GraphArgs {
  std::string path;
  std::string gen;
  bool directed = false;
  bool weighted = false;

  void attach(CLI::App* cmd) {
    auto* g = cmd->add_option("--graph", path, "Edge-list file");
    auto* gen_opt = cmd->add_option("--gen", gen, "Generator, e.g. cycle(50) or random-connected(10,15,1)");
    g->excludes(gen_opt);
    cmd->add_flag("--directed", directed, "Read the edge list as directed arcs")->excludes(gen_opt);
    cmd->add_flag("--weighted", weighted, "Edge lines carry a third weight column (directed only)")
        ->excludes(gen_opt);
  }

  Graph load() const {
    if (!gen.empty()) return generate(gen);
    if (path.empty()) throw Error(ErrorCode::InvalidArgument, "one of --graph or --gen is required");
    return load_edge_list(path, {directed, weighted});
  }
};

ActiveSet parse_active(const Graph& g, const std::string& list) {
  std::vector<NodeId> nodes;
  std::stringstream in(list);
  for (std::string label; std::getline(in, label, ',');) {
    if (!label.empty()) nodes.push_back(g.find(label));
  }
  return ActiveSet(std::move(nodes));
}

// Integers are absolute budgets; anything with a decimal point is a fraction of n.
std::size_t parse_budget(const std::string& text, std::size_t n) {
  try {
    std::size_t used = 0;
    if (text.find_first_of(".eE") != std::string::npos) {
      const double f = std::stod(text, &used);
      if (used == text.size() && f >= 0.0 && f <= 1.0) return std::size_t(std::floor(f * double(n)));
    } else {
      const unsigned long long k = std::stoull(text, &used);
      if (used == text.size()) return std::size_t(k);
    }
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::InvalidArgument, "bad budget '" + text + "' (integer or fraction in [0,1])");
}

double rounded(double x) { return std::stod(format_real(x)); }

json labels_of(const Graph& g, const ActiveSet& s) {
  json out = json::array();
  for (NodeId u : s) out.push_back(g.label(u));
  return out;
}

json estimate_json(const FpEstimate& e) {
  return {{"mean", rounded(e.mean)},
          {"stderr", rounded(e.std_error)},
          {"ci95", {rounded(e.ci95.first), rounded(e.ci95.second)}},
          {"trials", e.trials},
          {"fixations", e.fixations},
          {"timeouts", e.timeouts},
          {"mean_steps", rounded(e.mean_steps())}};
}

json exact_json(const Graph& g, const ExactResult& r) {
  json per = json::object();
  for (NodeId u = 0; u < g.size(); ++u) per[g.label(u)] = rounded(r.per_start[u]);
  return {{"average", rounded(r.average)}, {"per_start", per}};
}

void apply_thread_limit() {
  if (const char* env = std::getenv("FXLAB_THREADS")) {
    const int threads = std::atoi(env);
    if (threads > 0) omp_set_num_threads(threads);
  }
}

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument: return 1;
    default: return 2;
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixation probabilities and node activation for the positional Moran process", "fxlab"};
  app.require_subcommand(1);

  GraphArgs graph;
  std::string active;
  double delta = 0.0;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::uint64_t cap = 0;
  std::size_t cap_n = kDefaultExactCap;
  std::string budget = "1";
  std::string heuristic;
  std::string regime = "strong";
  bool exact = false;
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  bool timing = false;

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo fixation probability at finite delta");
  graph.attach(simulate);
  simulate->add_option("--active", active, "Comma-separated active node labels");
  simulate->add_option("--delta", delta, "Mutant fitness advantage")->check(CLI::NonNegativeNumber);
  simulate->add_option("--trials", trials)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed);
  simulate->add_option("--cap", cap, "Step cap per trial (required for directed graphs)");

  auto* exact_cmd = app.add_subcommand("exact", "Exact fixation probability on small graphs");
  graph.attach(exact_cmd);
  exact_cmd->add_option("--active", active);
  exact_cmd->add_option("--delta", delta)->check(CLI::NonNegativeNumber);
  exact_cmd->add_option("--cap-n", cap_n, "Largest n solved exactly");

  auto* strong = app.add_subcommand("strong", "Strong-selection fixation probability");
  graph.attach(strong);
  strong->add_option("--active", active);
  strong->add_option("--trials", trials)->check(CLI::PositiveNumber);
  strong->add_option("--seed", seed);
  strong->add_flag("--exact", exact, "Solve the absorbing chain instead of simulating");
  strong->add_option("--cap-n", cap_n);

  auto* weak = app.add_subcommand("weak-select", "Optimal active set under weak selection");
  graph.attach(weak);
  weak->add_option("-k,--k", budget, "Budget: integer or fraction of n");

  auto* select = app.add_subcommand("select", "Run one activation heuristic");
  graph.attach(select);
  select->add_option("--heuristic", heuristic)->required();
  select->add_option("-k,--k", budget);
  select->add_option("--seed", seed);
  select->add_option("--regime", regime, "Lazy-greedy objective: strong, weak or finite");
  select->add_option("--delta", delta)->check(CLI::NonNegativeNumber);
  select->add_option("--trials", trials, "Monte-Carlo trials per oracle call")->check(CLI::PositiveNumber);

  auto* experiment = app.add_subcommand("experiment", "Compare heuristics as described by a JSON config");
  experiment->add_option("--config", config_path)->required();
  experiment->add_option("--out", out_path, "Report path (defaults to the config's output or stdout)");
  experiment->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  experiment->add_flag("--timing", timing, "Append wall-clock time per row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  apply_thread_limit();
  try {
    if (*simulate) {
      const Graph g = graph.load();
      ProcessParams params{parse_active(g, active), delta};
      std::optional<std::uint64_t> step_cap;
      if (cap > 0) step_cap = cap;
      out << estimate_json(estimate_fp(g, params, trials, seed, step_cap)).dump() << '\n';
    } else if (*exact_cmd) {
      const Graph g = graph.load();
      out << exact_json(g, exact_fp(g, parse_active(g, active), delta, cap_n)).dump() << '\n';
    } else if (*strong) {
      const Graph g = graph.load();
      const ActiveSet s = parse_active(g, active);
      if (exact) {
        out << exact_json(g, exact_fp_strong(g, s, cap_n)).dump() << '\n';
      } else {
        out << estimate_json(estimate_fp_strong(g, s, trials, seed)).dump() << '\n';
      }
    } else if (*weak) {
      const Graph g = graph.load();
      const auto w = weak_select(g, parse_budget(budget, g.size()));
      out << json{{"chosen", labels_of(g, w.chosen)}, {"objective", rounded(w.objective)}}.dump() << '\n';
    } else if (*select) {
      const Graph g = graph.load();
      const std::size_t k = parse_budget(budget, g.size());
      Regime objective = Regime::Strong;
      if (regime == "weak") objective = Regime::Weak;
      else if (regime == "finite") objective = Regime::Finite;
      else if (regime != "strong") throw Error(ErrorCode::InvalidArgument, "unknown regime '" + regime + "'");

      const auto h = parse_heuristic(heuristic);
      if (!h) throw Error(ErrorCode::InvalidArgument, "unknown heuristic '" + heuristic + "'");
      Selection sel = [&]() -> Selection {
        switch (*h) {
          case Heuristic::Random: return select_random(g, k, seed);
          case Heuristic::HighDegree: return select_high_degree(g, k);
          case Heuristic::Centrality: return select_centrality(g, k);
          case Heuristic::Temperature: return select_temperature(g, k);
          case Heuristic::VertexCover: return select_vertex_cover(g, k);
          case Heuristic::WeakSelector: return select_weak(g, k);
          case Heuristic::LazyGreedy: break;
        }
        SetOracle oracle;
        if (objective == Regime::Weak) {
          auto alpha = alpha_scores(g);
          oracle = [alpha](const ActiveSet& s) { return OracleValue{linear_objective(alpha, s), 0.0}; };
        } else if (objective == Regime::Strong) {
          if (g.size() <= cap_n) {
            oracle = [&g, cap_n](const ActiveSet& s) {
              return OracleValue{exact_fp_strong(g, s, cap_n).average, 0.0};
            };
          } else {
            oracle = [&g, trials, seed](const ActiveSet& s) {
              auto e = estimate_fp_strong(g, s, trials, seed);
              return OracleValue{e.mean, e.std_error};
            };
          }
        } else {
          const std::uint64_t step_cap = default_step_cap(g.size(), delta);
          oracle = [&g, delta, trials, seed, step_cap](const ActiveSet& s) {
            auto e = estimate_fp(g, {s, delta}, trials, seed, step_cap);
            return OracleValue{e.mean, e.std_error};
          };
        }
        return lazy_greedy(g.size(), k, oracle);
      }();
      json j = {{"heuristic", std::string(to_string(sel.heuristic))},
                {"k", k},
                {"chosen", labels_of(g, sel.chosen)},
                {"oracle_evals", sel.oracle_evals}};
      if (sel.objective) j["objective"] = rounded(*sel.objective);
      out << j.dump() << '\n';
    } else if (*experiment) {
      const ExperimentConfig cfg = load_experiment_config(config_path);
      const ExperimentReport report = run_experiment(cfg);
      std::string target = out_path;
      if (target.empty()) target = format == "json" ? cfg.json_out.value_or("") : cfg.csv_out.value_or("");
      auto write = [&](std::ostream& os) {
        if (format == "json") write_json(report, os, timing);
        else write_csv(report, os, timing);
      };
      if (target.empty()) {
        write(out);
      } else {
        std::ofstream file(target, std::ios::binary);
        if (!file) throw Error(ErrorCode::IoError, "cannot write '" + target + "'");
        write(file);
      }
    }
  } catch (const Error& e) {
    err << "fxlab: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "fxlab: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace fxlab
