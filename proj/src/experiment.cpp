#include "fxlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fxlab/error.hpp"
#include "fxlab/exact.hpp"
#include "fxlab/generators.hpp"
#include "fxlab/moran.hpp"
#include "fxlab/optimizers.hpp"
#include "fxlab/rng.hpp"
#include "fxlab/weak_selection.hpp"

namespace fxlab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

namespace {

const std::set<std::string> kLayouts = {"spaced", "contiguous"};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

Regime parse_regime(const std::string& s) {
  if (s == "strong") return Regime::Strong;
  if (s == "weak") return Regime::Weak;
  if (s == "finite") return Regime::Finite;
  config_error("unknown regime '" + s + "' (expected strong, weak or finite)");
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) config_error("unknown field '" + key + "' in " + where);
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (graphs.empty()) config_error("no graphs given");
  std::set<std::string> ids;
  for (const auto& g : graphs) {
    if (g.id.empty()) config_error("graph id must not be empty");
    if (!ids.insert(g.id).second) config_error("duplicate graph id '" + g.id + "'");
    if (bool(g.path) == bool(g.gen)) config_error("graph '" + g.id + "' needs exactly one of path or gen");
    if (g.gen && (g.directed || g.weighted))
      config_error("graph '" + g.id + "': directed and weighted apply to edge-list files only");
  }
  if (ks.empty() && budget_fractions.empty()) config_error("no budgets given");
  for (double f : budget_fractions) {
    if (!(f >= 0.0 && f <= 1.0)) config_error("budget fractions must lie in [0, 1]");
  }
  if (regime == Regime::Finite && !(std::isfinite(delta) && delta >= 0.0)) {
    config_error("finite regime needs a finite delta >= 0");
  }
  if (trials == 0 || greedy_trials == 0) config_error("trial counts must be >= 1");
  std::set<std::string> names;
  for (const auto& h : heuristics) {
    if (!parse_heuristic(h) && !kLayouts.count(h)) config_error("unknown heuristic '" + h + "'");
    if (!names.insert(h).second) config_error("heuristic '" + h + "' listed twice");
  }
  for (const auto& e : explicit_sets) {
    if (e.name.empty()) config_error("explicit set needs a name");
    if (!names.insert(e.name).second) config_error("name '" + e.name + "' used twice");
  }
  if (names.empty()) config_error("no heuristics or explicit sets given");
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  reject_unknown(j,
                 {"graphs", "budgets", "ks", "regime", "delta", "heuristics", "explicit_sets", "trials",
                  "greedy_trials", "seed", "exact_cap", "csv_out", "json_out"},
                 "config");

  ExperimentConfig cfg;
  for (const auto& g : j.value("graphs", json::array())) {
    reject_unknown(g, {"id", "path", "gen", "directed", "weighted"}, "graph entry");
    GraphSource src;
    if (g.contains("path")) src.path = get_as<std::string>(g, "path");
    if (g.contains("gen")) src.gen = get_as<std::string>(g, "gen");
    src.directed = g.value("directed", false);
    src.weighted = g.value("weighted", false);
    src.id = g.contains("id") ? get_as<std::string>(g, "id") : src.gen.value_or(src.path.value_or(""));
    cfg.graphs.push_back(std::move(src));
  }
  if (j.contains("budgets")) cfg.budget_fractions = get_as<std::vector<double>>(j, "budgets");
  if (j.contains("ks")) cfg.ks = get_as<std::vector<std::size_t>>(j, "ks");
  if (j.contains("regime")) cfg.regime = parse_regime(get_as<std::string>(j, "regime"));
  if (j.contains("delta")) cfg.delta = get_as<double>(j, "delta");
  if (j.contains("heuristics")) cfg.heuristics = get_as<std::vector<std::string>>(j, "heuristics");
  for (const auto& e : j.value("explicit_sets", json::array())) {
    reject_unknown(e, {"name", "nodes"}, "explicit set");
    cfg.explicit_sets.push_back({get_as<std::string>(e, "name"), get_as<std::vector<std::string>>(e, "nodes")});
  }
  if (j.contains("trials")) cfg.trials = get_as<std::uint64_t>(j, "trials");
  if (j.contains("greedy_trials")) cfg.greedy_trials = get_as<std::uint64_t>(j, "greedy_trials");
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("exact_cap")) cfg.exact_cap = get_as<std::size_t>(j, "exact_cap");
  if (j.contains("csv_out")) cfg.csv_out = get_as<std::string>(j, "csv_out");
  if (j.contains("json_out")) cfg.json_out = get_as<std::string>(j, "json_out");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg = parse_experiment_config(buf.str());
  // Graph files are resolved against the config's directory.
  const auto base = std::filesystem::path(path).parent_path();
  for (auto& g : cfg.graphs) {
    if (g.path && std::filesystem::path(*g.path).is_relative()) g.path = (base / *g.path).string();
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Layouts and normalization

ActiveSet spaced_layout(std::size_t n, std::size_t k) {
  k = std::min(k, n);
  std::vector<NodeId> nodes;
  for (std::size_t i = 0; i < k; ++i) nodes.push_back(NodeId(i * n / k));
  return ActiveSet(std::move(nodes));
}

ActiveSet contiguous_layout(std::size_t n, std::size_t k) {
  k = std::min(k, n);
  std::vector<NodeId> nodes(k);
  for (std::size_t i = 0; i < k; ++i) nodes[i] = NodeId(i);
  return ActiveSet(std::move(nodes));
}

void normalize_scores(std::vector<ReportRow>& rows) {
  std::map<std::pair<std::string, std::size_t>, std::vector<ReportRow*>> groups;
  for (auto& r : rows) groups[{r.graph_id, r.k}].push_back(&r);
  for (auto& [key, members] : groups) {
    double top = members.front()->raw;
    for (const ReportRow* r : members) top = std::max(top, r->raw);
    ReportRow* best = nullptr;
    for (ReportRow* r : members) {
      r->normalized = top > 0.0 ? r->raw / top : 1.0;
      r->best = false;
      if (r->raw == top && (!best || r->heuristic < best->heuristic)) best = r;
    }
    best->best = true;
  }
}

// ---------------------------------------------------------------------------
// Running

namespace {

std::uint64_t derive_seed(std::uint64_t master, const std::string& graph_id, std::size_t k,
                          const std::string& name) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ hash_name(graph_id));
  s = splitmix64(s ^ std::uint64_t(k));
  return splitmix64(s ^ hash_name(name));
}

Graph load_graph(const GraphSource& src) {
  if (src.gen) return generate(*src.gen);
  return load_edge_list(*src.path, {src.directed, src.weighted});
}

struct Score {
  double raw = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t timeouts = 0;
  std::string status = "ok";
};

Score from_estimate(const FpEstimate& e) { return {e.mean, e.std_error, e.trials, e.timeouts, "ok"}; }

class GraphRun {
 public:
  GraphRun(const ExperimentConfig& cfg, const Graph& g) : cfg_(cfg), g_(g) {}

  const WeakSelectionTables& tables() {
    if (!tables_) tables_ = WeakSelectionTables::compute(g_);
    return *tables_;
  }

  std::uint64_t finite_cap() const { return default_step_cap(g_.size(), cfg_.delta); }

  Score score(const ActiveSet& s, std::uint64_t seed) {
    switch (cfg_.regime) {
      case Regime::Weak:
        return {linear_objective(tables().alpha, s), 0.0, 0, 0, "ok"};
      case Regime::Strong:
        if (g_.size() <= cfg_.exact_cap) return {exact_fp_strong(g_, s, cfg_.exact_cap).average, 0.0, 0, 0, "ok"};
        return guarded([&] { return estimate_fp_strong(g_, s, cfg_.trials, seed); });
      case Regime::Finite:
        return guarded([&] { return estimate_fp(g_, {s, cfg_.delta}, cfg_.trials, seed, finite_cap()); });
    }
    return {};
  }

  SetOracle oracle(std::uint64_t seed) {
    switch (cfg_.regime) {
      case Regime::Weak:
        return [this](const ActiveSet& s) { return OracleValue{linear_objective(tables().alpha, s), 0.0}; };
      case Regime::Strong:
        if (g_.size() <= cfg_.exact_cap) {
          return [this](const ActiveSet& s) {
            return OracleValue{exact_fp_strong(g_, s, cfg_.exact_cap).average, 0.0};
          };
        }
        return [this, seed](const ActiveSet& s) {
          auto e = estimate_fp_strong(g_, s, cfg_.greedy_trials, seed);
          return OracleValue{e.mean, e.std_error};
        };
      case Regime::Finite:
        return [this, seed](const ActiveSet& s) {
          auto e = estimate_fp(g_, {s, cfg_.delta}, cfg_.greedy_trials, seed, finite_cap());
          return OracleValue{e.mean, e.std_error};
        };
    }
    return {};
  }

 private:
  template <typename F>
  static Score guarded(F&& f) {
    try {
      return from_estimate(f());
    } catch (const ExcessiveTimeouts& e) {
      Score s = from_estimate(e.estimate());
      s.status = "excessive-timeouts";
      return s;
    }
  }

  const ExperimentConfig& cfg_;
  const Graph& g_;
  std::optional<WeakSelectionTables> tables_;
};

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  for (const auto& src : cfg.graphs) {
    const Graph g = load_graph(src);
    const std::size_t n = g.size();
    if (cfg.regime == Regime::Strong && !g.undirected()) {
      throw Error(ErrorCode::DirectedUnsupported, "strong regime needs undirected graphs; '" + src.id + "' is directed");
    }

    std::vector<std::size_t> ks = cfg.ks;
    if (ks.empty()) {
      for (double f : cfg.budget_fractions) ks.push_back(std::size_t(std::floor(f * double(n))));
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<std::pair<std::string, ActiveSet>> fixed;
    for (const auto& e : cfg.explicit_sets) {
      std::vector<NodeId> nodes;
      for (const auto& label : e.nodes) nodes.push_back(g.find(label));
      fixed.emplace_back(e.name, ActiveSet(std::move(nodes)));
    }

    GraphRun run(cfg, g);
    for (std::size_t k : ks) {
      // All rows of a group share the scoring seed, so equal sets score equally.
      const std::uint64_t score_seed = derive_seed(cfg.seed, src.id, k, "#score");

      auto emit = [&](const std::string& name, auto&& choose) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::uint64_t seed = derive_seed(cfg.seed, src.id, k, name);
        const ActiveSet chosen = choose(seed);
        const Score sc = run.score(chosen, score_seed);
        ReportRow row;
        row.graph_id = src.id;
        row.n = n;
        row.k = k;
        row.heuristic = name;
        for (NodeId u : chosen) row.chosen.push_back(g.label(u));
        row.raw = sc.raw;
        row.std_error = sc.std_error;
        row.seed = seed;
        row.trials = sc.trials;
        row.timeouts = sc.timeouts;
        row.status = sc.status;
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        report.rows.push_back(std::move(row));
      };

      for (const auto& name : cfg.heuristics) {
        emit(name, [&](std::uint64_t seed) -> ActiveSet {
          if (name == "spaced") return spaced_layout(n, k);
          if (name == "contiguous") return contiguous_layout(n, k);
          switch (*parse_heuristic(name)) {
            case Heuristic::Random: return select_random(g, k, seed).chosen;
            case Heuristic::HighDegree: return select_high_degree(g, k).chosen;
            case Heuristic::Centrality: return select_centrality(g, k).chosen;
            case Heuristic::Temperature: return select_temperature(g, k).chosen;
            case Heuristic::VertexCover: return select_vertex_cover(g, k).chosen;
            case Heuristic::WeakSelector: return select_weak(run.tables(), k).chosen;
            case Heuristic::LazyGreedy: return lazy_greedy(n, k, run.oracle(seed)).chosen;
          }
          return {};
        });
      }
      for (const auto& [name, set] : fixed) {
        emit(name, [&](std::uint64_t) { return set; });
      }
    }
  }

  std::sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.graph_id, a.k, a.heuristic) < std::tie(b.graph_id, b.k, b.heuristic);
  });
  normalize_scores(report.rows);
  return report;
}

// ---------------------------------------------------------------------------
// Writers

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

double rounded(double x) { return std::stod(format_real(x)); }

}  // namespace

void write_csv(const ExperimentReport& report, std::ostream& out, bool timing) {
  out << "graph_id,n,k,heuristic,chosen,raw,stderr,normalized,best,seed,trials,timeouts,status";
  if (timing) out << ",wall_ms";
  out << '\n';
  for (const auto& r : report.rows) {
    out << csv_field(r.graph_id) << ',' << r.n << ',' << r.k << ',' << csv_field(r.heuristic) << ','
        << csv_field(join(r.chosen, ';')) << ',' << format_real(r.raw) << ',' << format_real(r.std_error) << ','
        << format_real(r.normalized) << ',' << (r.best ? 1 : 0) << ',' << r.seed << ',' << r.trials << ','
        << r.timeouts << ',' << r.status;
    if (timing) out << ',' << format_real(r.wall_ms);
    out << '\n';
  }
}

void write_json(const ExperimentReport& report, std::ostream& out, bool timing) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row = {{"graph_id", r.graph_id}, {"n", r.n},
                {"k", r.k},               {"heuristic", r.heuristic},
                {"chosen", r.chosen},     {"raw", rounded(r.raw)},
                {"stderr", rounded(r.std_error)}, {"normalized", rounded(r.normalized)},
                {"best", r.best},         {"seed", r.seed},
                {"trials", r.trials},     {"timeouts", r.timeouts},
                {"status", r.status}};
    if (timing) row["wall_ms"] = rounded(r.wall_ms);
    rows.push_back(std::move(row));
  }
  out << rows.dump(2) << '\n';
}

}  // namespace fxlab
