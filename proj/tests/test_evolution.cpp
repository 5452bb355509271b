#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ncsim/errors.hpp"
#include "ncsim/evolution.hpp"

using namespace ncsim;

TEST_SUITE("evolution") {

TEST_CASE("p = 1, r = 1: newborn joins one of the three edges uniformly") {
  std::array<std::int64_t, 3> edge_counts{};  // which initial vertex was left out
  const int trials = 3000;
  for (int trial = 0; trial < trials; ++trial) {
    GraphState s({3, 1.0, 0.5, 1.0});
    RngStream rng(1000, static_cast<std::uint64_t>(trial));
    const StepOutcome out = step(s, rng);
    CHECK(out.branch == Branch::NewPref);
    CHECK(s.vertex_count() == 4);
    CHECK(s.vertex(1).degree == 2);
    CHECK(s.vertex(1).weight == 1);
    for (int i = 0; i < 3; ++i) {
      const VertexLabel initial = -i;
      if (std::find(out.vertex_set.begin(), out.vertex_set.end(), initial) ==
          out.vertex_set.end()) {
        ++edge_counts[static_cast<std::size_t>(i)];
      }
    }
  }
  for (const auto c : edge_counts) {
    CHECK(std::fabs(static_cast<double>(c) / trials - 1.0 / 3.0) < 0.04);
  }
}

TEST_CASE("p = 0, q = 1: the unique triangle is re-chosen with certainty") {
  // p = 0 never reaches the coefficient formulas; the dynamics stay defined
  GraphState s({3, 0.0, 1.0, 0.5});
  RngStream rng(5, 0);
  for (int t = 0; t < 50; ++t) {
    const StepOutcome out = step(s, rng);
    CHECK(out.branch == Branch::OldPref);
    CHECK(out.new_edges == 0);
  }
  CHECK(s.vertex_count() == 3);
  for (VertexLabel l : {0, -1, -2}) {
    CHECK(s.vertex(l).weight == 51);
    CHECK(s.vertex(l).degree == 2);
  }
}

TEST_CASE("branch frequencies match (pr, p(1-r), (1-p)q, (1-p)(1-q))") {
  RunOptions options;
  options.params = {3, 0.5, 0.5, 0.5};
  options.steps = 100000;
  options.seed = 42;
  options.record_histories = false;
  const TrajectoryRecord rec = run(options);
  for (const auto count : rec.branch_counts) {
    CHECK(std::fabs(static_cast<double>(count) / static_cast<double>(options.steps) - 0.25) <
          0.005);
  }
  // V_n = N + number of new-vertex steps, exactly
  CHECK(rec.checkpoints.back().vertex_count == 3 + rec.branch_counts[0] + rec.branch_counts[1]);
}

TEST_CASE("participation probability at the initial state") {
  const ModelParams params{3, 0.5, 0.5, 0.5};
  const Coefficients coeffs = derive_coefficients(params);
  CHECK(coeffs.alpha == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  CHECK(coeffs.beta == doctest::Approx(2.5).epsilon(1e-15));
  GraphState s(params);
  for (VertexLabel l : {0, -1, -2}) {
    CHECK(participation_probability(s, l, coeffs) ==
          doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(participation_probability(s, 3, coeffs), UnknownVertex);
}

TEST_CASE("participation probability 1 in the pure preferential old branch") {
  GraphState s({3, 0.0, 1.0, 0.5});
  const Coefficients degenerate{1.0, 0.0, 1.0, 0.0, 0.0, 0.0};  // p -> 0, q = 1 limit
  CHECK(participation_probability(s, 0, degenerate) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("participation probability stays in [0,1] along random trajectories") {
  for (const ModelParams params : {ModelParams{3, 0.3, 0.8, 0.2}, ModelParams{4, 0.9, 0.1, 0.9},
                                   ModelParams{5, 0.5, 1.0, 1.0}}) {
    const Coefficients coeffs = derive_coefficients(params);
    GraphState s(params);
    RngStream rng(77, 0);
    for (int t = 0; t < 300; ++t) {
      step(s, rng);
      for (const auto& v : s.vertices()) {
        const double pi = participation_probability(s, v.label, coeffs);
        CHECK(pi >= 0.0);
        CHECK(pi <= 1.0 + 1e-15);
      }
    }
  }
}

TEST_CASE("per-branch edge contracts") {
  GraphState s({3, 0.5, 0.5, 0.5});
  RngStream rng(9, 0);
  for (int t = 0; t < 2000; ++t) {
    const StepOutcome out = step(s, rng);
    if (out.branch == Branch::OldPref) CHECK(out.new_edges == 0);
    if (out.branch == Branch::NewPref) CHECK(out.new_edges == 2);
    if (out.branch == Branch::NewUniform) {
      // newborn contributes exactly N-1 edges, plus whatever was missing
      // among the old subset
      CHECK(out.new_edges >= 2);
      CHECK(s.vertex(*out.born_label).degree == 2);
    }
    const bool is_new = out.branch == Branch::NewPref || out.branch == Branch::NewUniform;
    CHECK(is_new == out.born_label.has_value());
  }
}

TEST_CASE("empirical one-step participation matches the closed probability") {
  const ModelParams params{3, 0.5, 0.5, 0.5};
  const Coefficients coeffs = derive_coefficients(params);
  // evolve a small state, then replay its next step many times
  GraphState base(params);
  RngStream setup(31, 0);
  for (int t = 0; t < 6; ++t) step(base, setup);
  const double pi = participation_probability(base, 0, coeffs);
  const int trials = 40000;
  int participated = 0;
  for (int trial = 0; trial < trials; ++trial) {
    GraphState s = base;
    RngStream rng(500, static_cast<std::uint64_t>(trial));
    const StepOutcome out = step(s, rng);
    participated += std::find(out.vertex_set.begin(), out.vertex_set.end(), VertexLabel{0}) !=
                    out.vertex_set.end();
  }
  const double freq = static_cast<double>(participated) / trials;
  const double sigma = std::sqrt(pi * (1.0 - pi) / trials);
  CHECK(std::fabs(freq - pi) < 4.5 * sigma + 1e-9);
}

TEST_CASE("run with zero steps records only the initial state") {
  RunOptions options;
  options.params = {3, 0.5, 0.5, 0.5};
  options.steps = 0;
  options.seed = 1;
  const TrajectoryRecord rec = run(options);
  REQUIRE(rec.checkpoints.size() == 1);
  CHECK(rec.checkpoints[0].n == 0);
  CHECK(rec.checkpoints[0].vertex_count == 3);
  CHECK(rec.v_history == std::vector<std::int64_t>{3});
  CHECK(rec.w_history[0] == std::vector<std::int64_t>{1});   // label 0 exists
  CHECK(rec.w_history[1] == std::vector<std::int64_t>{0});   // label 1 unborn
}

TEST_CASE("identical inputs give bit-identical records") {
  RunOptions options;
  options.params = {3, 0.4, 0.6, 0.5};
  options.steps = 3000;
  options.seed = 2024;
  options.stream = 7;
  const TrajectoryRecord a = run(options);
  const TrajectoryRecord b = run(options);
  CHECK(identical_data(a, b));
  options.stream = 8;
  const TrajectoryRecord c = run(options);
  CHECK(!identical_data(a, c));
}

TEST_CASE("histories have length steps+1 and V increments lie in {0,1}") {
  RunOptions options;
  options.params = {4, 0.7, 0.2, 0.6};
  options.steps = 500;
  options.seed = 3;
  const TrajectoryRecord rec = run(options);
  REQUIRE(rec.v_history.size() == 501);
  for (std::size_t i = 1; i < rec.v_history.size(); ++i) {
    const auto inc = rec.v_history[i] - rec.v_history[i - 1];
    CHECK(inc >= 0);
    CHECK(inc <= 1);
  }
  for (const auto& w : rec.w_history) {
    REQUIRE(w.size() == 501);
    for (std::size_t i = 1; i < w.size(); ++i) {
      const auto inc = w[i] - w[i - 1];
      CHECK(inc >= 0);
      CHECK(inc <= 1);
    }
  }
}

TEST_CASE("geometric checkpoints are sorted, unique, and bracket the run") {
  const auto cps = geometric_checkpoints(100000);
  REQUIRE(!cps.empty());
  CHECK(cps.front() == 0);
  CHECK(cps.back() == 100000);
  for (std::size_t i = 1; i < cps.size(); ++i) CHECK(cps[i] > cps[i - 1]);
  CHECK(geometric_checkpoints(0) == std::vector<std::int64_t>{0});
}

}  // TEST_SUITE
