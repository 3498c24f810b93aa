#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fxlab/error.hpp"
#include "fxlab/exact.hpp"
#include "fxlab/generators.hpp"
#include "fxlab/weak_selection.hpp"
#include "oracles.hpp"

using namespace fxlab;

TEST_CASE("pi examples") {
  auto k2 = solve_pi(complete_graph(2));
  CHECK(k2[0] == doctest::Approx(0.5));
  CHECK(k2[1] == doctest::Approx(0.5));
  std::vector<WeightedEdge> e{{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}};
  for (double v : solve_pi(build_directed(3, e))) CHECK(v == doctest::Approx(1.0 / 3.0));
  auto star = solve_pi(star_graph(4));
  CHECK(star[0] == doctest::Approx(0.1));
  for (int l = 1; l < 4; ++l) CHECK(star[l] == doctest::Approx(0.3));
}

TEST_CASE("pi closed form") {
  auto p3 = pi_closed_form_undirected(path_graph(3));
  CHECK(p3[0] == doctest::Approx(0.4));
  CHECK(p3[1] == doctest::Approx(0.2));
  CHECK(p3[2] == doctest::Approx(0.4));
  for (double v : pi_closed_form_undirected(cycle_graph(7))) CHECK(v == doctest::Approx(1.0 / 7));
  auto star = pi_closed_form_undirected(star_graph(4));
  CHECK(star[0] == doctest::Approx(0.1));
  CHECK(star[3] == doctest::Approx(0.3));
  CHECK_THROWS_AS(pi_closed_form_undirected(oracle::random_directed(4, 2)), Error);
}

TEST_CASE("pi agrees with closed form and with exact neutral starts") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Graph u = oracle::random_undirected(4 + seed % 5, seed);
    auto a = solve_pi(u), b = pi_closed_form_undirected(u);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);

    Graph d = oracle::random_directed(3 + seed % 5, seed);
    auto p = solve_pi(d);
    auto ex = exact_fp(d, ActiveSet(), 0.0).per_start;
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - ex[i]) <= 1e-9);
  }
}

TEST_CASE("psi examples") {
  auto k2 = solve_psi(complete_graph(2));
  CHECK(k2[1] == doctest::Approx(0.5));
  CHECK(k2[2] == doctest::Approx(0.5));
  CHECK(k2[0] == 0.0);
  auto star = solve_psi(star_graph(4));
  for (int l = 1; l < 4; ++l) {
    CHECK(star[0 * 4 + l] == doctest::Approx(3.0));
    CHECK(star[l * 4 + 0] == doctest::Approx(3.0));
    for (int m = 1; m < 4; ++m)
      if (m != l) CHECK(star[l * 4 + m] == doctest::Approx(4.5));
  }
}

TEST_CASE("psi matches occupation counts") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Graph g = seed % 2 ? oracle::random_directed(3 + seed % 4, seed)
                       : oracle::random_undirected(3 + seed % 4, seed);
    auto a = solve_psi(g), b = exact_occupation_psi(g);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9);
  }
}

TEST_CASE("alpha examples") {
  auto k2 = alpha_scores(complete_graph(2));
  CHECK(std::abs(k2[0] - 0.125) <= 1e-10);
  CHECK(std::abs(k2[1] - 0.125) <= 1e-10);
  auto star = alpha_scores(star_graph(4));
  CHECK(std::abs(star[0] - 9.0 / 40.0) <= 1e-10);
  for (int l = 1; l < 4; ++l) CHECK(std::abs(star[l] - 3.0 / 40.0) <= 1e-10);
}

TEST_CASE("alpha sums match the derivative of fp") {
  Rng rng(31);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Graph g = seed % 2 ? oracle::random_directed(3 + seed % 4, seed)
                       : oracle::random_undirected(3 + seed % 4, seed);
    ActiveSet s = oracle::random_subset(g.size(), rng);
    auto alpha = alpha_scores(g);
    double sum = 0.0;
    for (NodeId u : s) sum += alpha[u];
    CHECK(std::abs(sum - finite_diff_fp_derivative(g, s)) <= 1e-3);
  }
}

TEST_CASE("weak_select") {
  WeakSelection star = weak_select(star_graph(4), 1);
  CHECK(star.chosen == ActiveSet({0}));
  CHECK(std::abs(star.objective - 9.0 / 40.0) <= 1e-12);
  WeakSelection k2 = weak_select(complete_graph(2), 1);
  CHECK(k2.chosen == ActiveSet({0}));
  CHECK(std::abs(k2.objective - 0.125) <= 1e-12);
  WeakSelection none = weak_select(star_graph(4), 0);
  CHECK(none.chosen.empty());
  CHECK(none.objective == 0.0);
  CHECK(weak_select(star_graph(4), 9).chosen.size() == 4);
}

TEST_CASE("weak_select is optimal for the linear objective") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Graph g = oracle::random_undirected(4 + seed % 4, seed);
    auto tables = WeakSelectionTables::compute(g);
    for (std::size_t k = 1; k <= 3; ++k) {
      double best = -1.0;
      for (const ActiveSet& s : oracle::subsets_of_size(g.size(), k))
        best = std::max(best, linear_objective(tables.alpha, s));
      CHECK(weak_select(tables, k).objective == best);
    }
  }
}
