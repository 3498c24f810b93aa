#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fxlab/error.hpp"
#include "fxlab/experiment.hpp"

using namespace fxlab;

namespace {

ReportRow row(std::string graph, std::size_t k, std::string heuristic, double raw) {
  ReportRow r;
  r.graph_id = std::move(graph);
  r.k = k;
  r.heuristic = std::move(heuristic);
  r.raw = raw;
  return r;
}

ErrorCode config_code(const std::string& text) {
  try {
    parse_experiment_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("config accepted: " << text);
  return ErrorCode::InvalidArgument;
}

const ReportRow& find(const ExperimentReport& r, const std::string& heuristic) {
  for (const ReportRow& row : r.rows)
    if (row.heuristic == heuristic) return row;
  throw std::runtime_error("missing row " + heuristic);
}

}  // namespace

TEST_CASE("normalize_scores") {
  std::vector<ReportRow> rows{row("g", 1, "a", 0.5), row("g", 1, "b", 0.25), row("g", 2, "a", 0.3),
                              row("h", 1, "a", 0.0), row("h", 1, "b", 0.0)};
  normalize_scores(rows);
  CHECK(rows[0].normalized == 1.0);
  CHECK(rows[1].normalized == 0.5);
  CHECK(rows[2].normalized == 1.0);
  CHECK(rows[3].normalized == 1.0);
  CHECK(rows[4].normalized == 1.0);
  CHECK(rows[0].best);
  CHECK_FALSE(rows[1].best);
  CHECK(rows[2].best);
  CHECK(rows[3].best);
  CHECK_FALSE(rows[4].best);
}

TEST_CASE("layouts") {
  CHECK(spaced_layout(10, 3) == ActiveSet({0, 3, 6}));
  CHECK(spaced_layout(50, 18).size() == 18);
  CHECK(contiguous_layout(10, 3) == ActiveSet({0, 1, 2}));
  CHECK(spaced_layout(10, 0).empty());
}

TEST_CASE("config parsing") {
  ExperimentConfig cfg = parse_experiment_config(
      R"J({"graphs":[{"id":"c","gen":"cycle(6)"}],"regime":"weak","ks":[1,2],"seed":4})J");
  CHECK(cfg.graphs.size() == 1);
  CHECK(cfg.regime == Regime::Weak);
  CHECK(cfg.ks == std::vector<std::size_t>{1, 2});
  CHECK(cfg.seed == 4);
  CHECK(cfg.heuristics.size() == 7);

  CHECK(config_code("{") == ErrorCode::ConfigError);
  CHECK(config_code(R"J({"graphs":[]})J") == ErrorCode::ConfigError);
  CHECK(config_code(R"J({"graphs":[{"id":"c","gen":"cycle(6)"}],"bogus":1})J") == ErrorCode::ConfigError);
  CHECK(config_code(R"J({"graphs":[{"id":"c","gen":"cycle(6)"}],"regime":"finite","delta":-1})J") ==
        ErrorCode::ConfigError);
  CHECK(config_code(R"J({"graphs":[{"id":"c","gen":"cycle(6)"}],"heuristics":["nope"]})J") ==
        ErrorCode::ConfigError);
  CHECK(config_code(R"J({"graphs":[{"id":"c"}]})J") == ErrorCode::ConfigError);
  CHECK(config_code(R"J({"graphs":[{"id":"c","gen":"cycle(6)"}],"budgets":[-0.1]})J") == ErrorCode::ConfigError);
}

TEST_CASE("weak regime on star(4)") {
  ExperimentConfig cfg = parse_experiment_config(
      R"J({"graphs":[{"id":"s","gen":"star(4)"}],"regime":"weak","ks":[1],
          "heuristics":["weak-selector","high-degree","random"],"seed":3})J");
  ExperimentReport r = run_experiment(cfg);
  REQUIRE(r.rows.size() == 3);
  const ReportRow& w = find(r, "weak-selector");
  CHECK(w.raw == doctest::Approx(9.0 / 40.0).epsilon(1e-12));
  CHECK(w.normalized == 1.0);
  CHECK(w.chosen == std::vector<std::string>{"0"});
  CHECK(find(r, "high-degree").normalized == 1.0);
  CHECK(find(r, "high-degree").best);
  CHECK_FALSE(w.best);
}

TEST_CASE("identical sets normalize to 1") {
  ExperimentConfig cfg = parse_experiment_config(
      R"J({"graphs":[{"id":"s","gen":"star(6)"}],"regime":"finite","delta":1.0,"ks":[1],
          "heuristics":["high-degree","centrality","temperature","vertex-cover"],"trials":2000})J");
  ExperimentReport r = run_experiment(cfg);
  REQUIRE(r.rows.size() == 4);
  for (const ReportRow& row : r.rows) {
    CHECK(row.chosen == std::vector<std::string>{"0"});
    CHECK(row.normalized == 1.0);
    CHECK(row.raw == r.rows[0].raw);
  }
}

TEST_CASE("strong regime uses exact scores on small graphs") {
  ExperimentConfig cfg = parse_experiment_config(
      R"J({"graphs":[{"id":"c","gen":"cycle(6)"}],"regime":"strong","ks":[3],
          "heuristics":["vertex-cover","contiguous"]})J");
  ExperimentReport r = run_experiment(cfg);
  CHECK(find(r, "vertex-cover").raw == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(find(r, "contiguous").raw < 0.75);

  CHECK(config_code(R"J({"graphs":[{"id":"d","gen":"cycle(4)","directed":true}]})J") == ErrorCode::ConfigError);
}

TEST_CASE("strong regime Monte Carlo on a larger cycle") {
  ExperimentConfig cfg = parse_experiment_config(
      R"J({"graphs":[{"id":"c","gen":"cycle(12)"}],"regime":"strong","ks":[6],
          "heuristics":["vertex-cover"],"trials":20000})J");
  ExperimentReport r = run_experiment(cfg);
  const ReportRow& v = r.rows.at(0);
  CHECK(std::abs(v.raw - 0.75) <= 4 * v.std_error);
  CHECK(v.trials == 20000);
}

TEST_CASE("explicit sets and budget fractions") {
  ExperimentConfig cfg = parse_experiment_config(
      R"J({"graphs":[{"id":"c","gen":"cycle(10)"}],"regime":"weak","budgets":[0.3,0.35],
          "heuristics":["temperature"],"explicit_sets":[{"name":"mine","nodes":["2","7","9"]}]})J");
  ExperimentReport r = run_experiment(cfg);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].k == 3);
  CHECK(find(r, "mine").chosen == std::vector<std::string>{"2", "7", "9"});
}

TEST_CASE("reports are deterministic and well formed") {
  const std::string text =
      R"J({"graphs":[{"id":"r","gen":"random-connected(9,14,2)"}],"regime":"finite","delta":0.5,
          "ks":[2],"trials":3000,"greedy_trials":300,"seed":11})J";
  ExperimentReport a = run_experiment(parse_experiment_config(text));
  ExperimentReport b = run_experiment(parse_experiment_config(text));
  std::ostringstream ca, cb, ja;
  write_csv(a, ca);
  write_csv(b, cb);
  write_json(a, ja);
  CHECK(ca.str() == cb.str());
  const std::string csv = ca.str();
  CHECK(csv.rfind("graph_id,n,k,heuristic,chosen,raw,stderr,normalized,best,seed,trials,timeouts,status\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
  auto parsed = nlohmann::json::parse(ja.str());
  REQUIRE(parsed.size() == 7);
  CHECK(parsed[2]["heuristic"] == "lazy-greedy");
  CHECK(parsed[2]["raw"].get<double>() == doctest::Approx(a.rows[2].raw).epsilon(1e-11));
  std::ostringstream timed;
  write_csv(a, timed, true);
  CHECK(timed.str().find(",wall_ms\n") != std::string::npos);
}

TEST_CASE("config files resolve graph paths relative to themselves") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fxlab_cfg_test";
  fs::create_directories(dir);
  std::ofstream(dir / "tri.edges") << "a b\nb c\nc a\n";
  std::ofstream(dir / "cfg.json") << R"J({"graphs":[{"id":"t","path":"tri.edges"}],"regime":"weak","ks":[1],
                                        "heuristics":["high-degree"]})J";
  ExperimentReport r = run_experiment(load_experiment_config((dir / "cfg.json").string()));
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].chosen == std::vector<std::string>{"a"});
  CHECK_THROWS_AS(load_experiment_config((dir / "missing.json").string()), Error);

  std::ofstream(dir / "arcs.edges") << "0 1\n1 2\n2 0\n";
  std::ofstream(dir / "strong.json") << R"J({"graphs":[{"id":"d","path":"arcs.edges","directed":true}],
                                           "regime":"strong","ks":[1]})J";
  try {
    run_experiment(load_experiment_config((dir / "strong.json").string()));
    FAIL("directed strong experiment accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DirectedUnsupported);
  }
  fs::remove_all(dir);
}

TEST_CASE("format_real") {
  CHECK(format_real(0.225) == "0.225");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(28984.0 / 94153.0) == "0.307839367837");
}
