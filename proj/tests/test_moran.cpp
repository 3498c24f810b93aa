#include <doctest.h>

#include <cmath>
#include <omp.h>

#include "fxlab/error.hpp"
#include "fxlab/generators.hpp"
#include "fxlab/moran.hpp"
#include "oracles.hpp"

using namespace fxlab;

namespace {

// |mean - expected| within z standard errors of a Bernoulli estimate.
bool within(const FpEstimate& e, double expected, double z) {
  const double se = std::sqrt(expected * (1.0 - expected) / double(e.trials));
  return std::abs(e.mean - expected) <= z * se;
}

bool same(const FpEstimate& a, const FpEstimate& b) {
  return a.mean == b.mean && a.trials == b.trials && a.fixations == b.fixations &&
         a.timeouts == b.timeouts && a.std_error == b.std_error && a.ci95 == b.ci95 &&
         a.total_steps == b.total_steps;
}

}  // namespace

TEST_CASE("fitness") {
  Configuration cfg(4, std::vector<NodeId>{0, 1});
  ProcessParams p{ActiveSet({0, 2}), 1.0 / 3.0};
  CHECK(fitness(cfg, p, 0) == doctest::Approx(4.0 / 3.0));
  CHECK(fitness(cfg, p, 2) == 1.0);
  CHECK(fitness(cfg, p, 3) == 1.0);
  ProcessParams inactive{ActiveSet({2}), 10.0};
  CHECK(fitness(cfg, inactive, 1) == 1.0);
  CHECK(total_fitness(cfg, p) == doctest::Approx(4.0 + 1.0 / 3.0));
}

TEST_CASE("ProcessParams validation") {
  CHECK_THROWS_AS((ProcessParams{ActiveSet({5}), 0.0}.validate(4)), Error);
  CHECK_THROWS_AS((ProcessParams{ActiveSet(), -1.0}.validate(4)), Error);
  CHECK_THROWS_AS((ProcessParams{ActiveSet(), INFINITY}.validate(4)), Error);
  CHECK_NOTHROW((ProcessParams{ActiveSet({3}), 2.0}.validate(4)));
}

TEST_CASE("step leaves absorbing states alone and moves by at most one") {
  Graph g = complete_graph(4);
  ProcessParams p{ActiveSet({0}), 1.0};
  Rng rng(3);
  CHECK(step(g, p, Configuration::full(4), rng) == Configuration::full(4));
  CHECK(step(g, p, Configuration(4), rng) == Configuration(4));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Graph h = oracle::random_undirected(6, seed);
    Configuration c = Configuration::single(6, 2);
    for (int t = 0; t < 500 && !c.absorbing(); ++t) {
      Configuration next = step(h, p, c, rng);
      const long d = long(next.mutant_count()) - long(c.mutant_count());
      CHECK(std::abs(d) <= 1);
      c = next;
    }
  }
}

TEST_CASE("one step on K2 fixates half the time") {
  Graph g = complete_graph(2);
  ProcessParams p{ActiveSet(), 0.0};
  Rng rng(11);
  const int trials = 40000;
  int fixed = 0;
  for (int i = 0; i < trials; ++i) fixed += step(g, p, Configuration::single(2, 0), rng).fixated();
  const double se = std::sqrt(0.25 / trials);
  CHECK(std::abs(fixed / double(trials) - 0.5) <= 4 * se);
}

TEST_CASE("simulate from absorbing starts") {
  Graph g = complete_graph(4);
  ProcessParams p{ActiveSet({0}), 1.0};
  Rng rng(1);
  Outcome a = simulate(g, p, Configuration::full(4), rng, 100);
  CHECK(a.kind == OutcomeKind::Fixation);
  CHECK(a.steps == 0);
  Outcome b = simulate(g, p, Configuration(4), rng, 100);
  CHECK(b.kind == OutcomeKind::Extinction);
  CHECK(b.steps == 0);
  Outcome c = simulate_stepwise(g, p, Configuration::full(4), rng, 100);
  CHECK(c.kind == OutcomeKind::Fixation);
  CHECK(c.steps == 0);
}

TEST_CASE("complete graph with every node active matches the birth-death formula") {
  const double expected = oracle::complete_graph_fixation(2.0, 4);
  CHECK(expected == doctest::Approx(8.0 / 15.0));
  Graph g = complete_graph(4);
  ProcessParams p{ActiveSet({0, 1, 2, 3}), 1.0};
  CHECK(within(estimate_fp(g, p, 40000, 21), expected, 4.0));

  Rng rng(5);
  const int trials = 20000;
  int fixed = 0;
  for (int i = 0; i < trials; ++i)
    fixed += simulate_stepwise(g, p, Configuration::single(4, i % 4), rng, 1u << 30).kind ==
             OutcomeKind::Fixation;
  const double se = std::sqrt(expected * (1 - expected) / trials);
  CHECK(std::abs(fixed / double(trials) - expected) <= 4 * se);
}

TEST_CASE("K2 with one active node matches the two-state solution") {
  // From {0}: node 0 reproduces with prob (1+d)/(2+d); from {1}: 1/2.
  const double d = 1.0;
  const double expected = 0.5 * ((1 + d) / (2 + d) + 0.5);
  CHECK(expected == doctest::Approx(7.0 / 12.0));
  Graph g = complete_graph(2);
  CHECK(within(estimate_fp(g, ProcessParams{ActiveSet({0}), d}, 40000, 2), expected, 4.0));
}

TEST_CASE("K4 two active nodes") {
  Graph g = complete_graph(4);
  FpEstimate e = estimate_fp(g, ProcessParams{ActiveSet({0, 1}), 1.0 / 3.0}, 100000, 17);
  CHECK(std::abs(e.mean - 28984.0 / 94153.0) <= 3 * e.std_error);
  CHECK(e.timeouts == 0);
  CHECK(e.ci95.first <= e.mean);
  CHECK(e.ci95.second >= e.mean);
}

TEST_CASE("neutral process fixates with probability 1/n") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Graph g = oracle::random_undirected(5 + seed, seed);
    FpEstimate e = estimate_fp(g, ProcessParams{ActiveSet({0, 1}), 0.0}, 30000, seed);
    CHECK(within(e, 1.0 / double(g.size()), 4.0));
  }
}

TEST_CASE("event engine agrees with the stepwise reference") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Graph g = oracle::random_undirected(6, seed);
    ProcessParams p{ActiveSet({0, 3}), 2.0};
    const double exact = oracle::iterated_fp(g, p.active, p.delta);
    const int trials = 20000;
    Rng rng(seed);
    int fixed = 0;
    double steps_a = 0, steps_b = 0;
    for (int i = 0; i < trials; ++i) {
      Outcome o = simulate_stepwise(g, p, Configuration::single(6, i % 6), rng, 1u << 30);
      fixed += o.kind == OutcomeKind::Fixation;
      steps_a += double(o.steps);
    }
    FpEstimate e = estimate_fp(g, p, trials, seed);
    steps_b = double(e.total_steps);
    const double se = std::sqrt(exact * (1 - exact) / trials);
    CHECK(std::abs(fixed / double(trials) - exact) <= 4 * se);
    CHECK(std::abs(e.mean - exact) <= 4 * se);
    // Mean absorption times agree to a few percent.
    CHECK(std::abs(steps_a - steps_b) / steps_a < 0.05);
  }
}

TEST_CASE("directed graphs need an explicit cap") {
  Graph g = oracle::random_directed(5, 3);
  ProcessParams p{ActiveSet({1}), 1.0};
  CHECK_THROWS_AS(estimate_fp(g, p, 100, 1), Error);
  const double exact = oracle::iterated_fp(g, p.active, p.delta);
  FpEstimate e = estimate_fp(g, p, 30000, 1, std::uint64_t{1} << 40);
  CHECK(within(e, exact, 4.0));
}

TEST_CASE("ExcessiveTimeouts carries the partial estimate") {
  Graph g = cycle_graph(12);
  ProcessParams p{ActiveSet(), 0.0};
  try {
    estimate_fp(g, p, 1000, 1, 3);
    FAIL("no timeout error");
  } catch (const ExcessiveTimeouts& e) {
    CHECK(e.code() == ErrorCode::ExcessiveTimeouts);
    CHECK(e.estimate().timeouts > 1);
    CHECK(e.estimate().trials == 1000);
  }
}

TEST_CASE("estimates are bit-identical across thread counts") {
  Graph g = oracle::random_undirected(9, 4);
  ProcessParams p{ActiveSet({1, 4, 7}), 0.7};
  FpEstimate ref = estimate_fp_serial(g, p, 5000, 99);
  FpEstimate ref_s = estimate_fp_strong_serial(g, ActiveSet({2}), 5000, 99);
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    CHECK(same(estimate_fp(g, p, 5000, 99), ref));
    CHECK(same(estimate_fp_strong(g, ActiveSet({2}), 5000, 99), ref_s));
  }
  CHECK_FALSE(same(estimate_fp_serial(g, p, 5000, 100), ref));
}

TEST_CASE("statistical monotonicity") {
  Rng rng(8);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Graph g = oracle::random_undirected(6, seed);
    ActiveSet s = oracle::random_subset(6, rng);
    ActiveSet s2 = s.with(NodeId(seed % 6)).with(NodeId((seed + 2) % 6));
    const double d1 = 0.5 * uniform01(rng) * 2, d2 = d1 + uniform01(rng);
    FpEstimate a = estimate_fp(g, ProcessParams{s, d1}, 20000, seed);
    FpEstimate b = estimate_fp(g, ProcessParams{s2, d2}, 20000, seed + 50);
    CHECK(a.mean <= b.mean + 4 * (a.std_error + b.std_error));
  }
}

TEST_CASE("strong-selection simulation") {
  Graph c4 = cycle_graph(4);
  Rng rng(1);
  Outcome o = simulate_strong(c4, ActiveSet({1}), Configuration::single(4, 1), rng, 100);
  CHECK(o.kind == OutcomeKind::Fixation);
  CHECK(o.steps == 0);

  // Calibration across seeds: pooled mean within 3 stderr, spread of the
  // per-seed z-scores close to one.
  double pooled = 0.0, z2 = 0.0;
  const int seeds = 20;
  for (int s = 1; s <= seeds; ++s) {
    FpEstimate cover = estimate_fp_strong(c4, ActiveSet({0, 2}), 20000, s);
    pooled += cover.mean / seeds;
    const double z = (cover.mean - 0.75) / std::sqrt(0.75 * 0.25 / 20000);
    z2 += z * z / seeds;
  }
  CHECK(std::abs(pooled - 0.75) <= 3 * std::sqrt(0.75 * 0.25 / (20000.0 * seeds)));
  CHECK(z2 > 0.3);
  CHECK(z2 < 2.5);

  FpEstimate all = estimate_fp_strong(c4, ActiveSet({0, 1, 2, 3}), 1000, 3);
  CHECK(all.mean == 1.0);

  FpEstimate star = estimate_fp_strong(star_graph(4), ActiveSet({0}), 40000, 4);
  CHECK(within(star, 13.0 / 16.0, 4.0));
  CHECK(oracle::iterated_fp_strong(star_graph(4), ActiveSet({0})) == doctest::Approx(13.0 / 16.0));

  FpEstimate k2 = estimate_fp_strong(complete_graph(2), ActiveSet({0}), 40000, 5);
  CHECK(within(k2, 0.75, 4.0));

  FpEstimate none = estimate_fp_strong(cycle_graph(5), ActiveSet(), 40000, 6);
  CHECK(within(none, 0.2, 4.0));

  CHECK_THROWS_AS(estimate_fp_strong(oracle::random_directed(4, 1), ActiveSet({0}), 10, 1), Error);
}

TEST_CASE("caps and trial counts") {
  CHECK(default_step_cap(2, 0.0) == 20u * 64u);
  CHECK(default_step_cap(10, 1.0) == 40'000'000ull);
  CHECK(default_step_cap(1'000'000, 1e6) == UINT64_MAX);
  CHECK(default_strong_cap(3) == 20u * 729u);
  // ln(40) / (2 * 0.01^2) = 18444.4
  CHECK(hoeffding_trials(0.01) == 18445);
  CHECK(hoeffding_trials(0.1, 0.95) == 185);
}

TEST_CASE("Configuration") {
  Configuration c(5);
  CHECK(c.extinct());
  c.set(2, true);
  c.set(2, true);
  CHECK(c.mutant_count() == 1);
  CHECK(c.mutants() == std::vector<NodeId>{2});
  c.set(2, false);
  CHECK(c.extinct());
  CHECK(Configuration::full(5).fixated());
  CHECK(Configuration::single(5, 4).contains(4));
}
