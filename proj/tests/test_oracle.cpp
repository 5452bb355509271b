#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ncsim/errors.hpp"
#include "ncsim/oracle.hpp"
#include "ncsim/verify.hpp"

using namespace ncsim;

TEST_SUITE("oracle") {

TEST_CASE("initial-state enumeration, midpoint parameters") {
  const ModelParams params{3, 0.5, 0.5, 0.5};
  GraphState s(params);
  const TransitionDistribution dist = transition_distribution(s);

  // 3 preferential pairs + 3 uniform pairs (+ newborn) + the triangle twice
  REQUIRE(dist.outcomes.size() == 8);
  CHECK(dist.total_mass() == doctest::Approx(1.0).epsilon(1e-15));

  std::set<std::pair<int, std::vector<VertexLabel>>> canonical;
  for (const auto& o : dist.outcomes) {
    canonical.insert({static_cast<int>(o.branch), o.vertex_set});
    switch (o.branch) {
      case Branch::NewPref:
      case Branch::NewUniform:
        CHECK(o.probability == doctest::Approx(0.25 / 3.0).epsilon(1e-15));
        REQUIRE(o.born_label.has_value());
        CHECK(*o.born_label == 1);
        break;
      case Branch::OldPref:
      case Branch::OldUniform:
        CHECK(o.probability == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(o.vertex_set == std::vector<VertexLabel>{-2, -1, 0});
        CHECK(!o.born_label.has_value());
        break;
    }
  }
  CHECK(canonical.size() == 8);  // no duplicates after canonicalization
}

TEST_CASE("p = 1 omits the zero-probability old branches") {
  GraphState s({3, 1.0, 0.5, 0.5});
  const TransitionDistribution dist = transition_distribution(s);
  CHECK(dist.outcomes.size() == 6);
  for (const auto& o : dist.outcomes) {
    CHECK((o.branch == Branch::NewPref || o.branch == Branch::NewUniform));
  }
  CHECK(dist.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("enumerated marginal equals the closed participation probability") {
  const ModelParams params{3, 0.5, 0.5, 0.5};
  const Coefficients coeffs = derive_coefficients(params);
  GraphState s(params);
  const TransitionDistribution dist = transition_distribution(s);
  CHECK(marginal_participation(dist, 0) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(std::fabs(marginal_participation(dist, 0) -
                  participation_probability(s, 0, coeffs)) < 1e-15);
}

TEST_CASE("expected degree at the initial state is 7/3") {
  const ModelParams params{3, 0.5, 0.5, 0.5};
  const Coefficients coeffs = derive_coefficients(params);
  GraphState s(params);
  CHECK(expected_degree_next_enum(s, 0) == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
  CHECK(expected_degree_next_closed(s, 0, coeffs) == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
  const DegreeIncrementLaw law = degree_increment_law(params, coeffs, 1, 2, 3, 0);
  CHECK(law.mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(law.prob[2] == 0.0);  // nobody is a non-neighbor at the start
}

TEST_CASE("pure preferential old branch never moves the degree") {
  GraphState s({3, 0.0, 1.0, 0.5});
  const Coefficients degenerate{1.0, 0.0, 1.0, 0.0, 0.0, 0.0};
  CHECK(expected_degree_next_enum(s, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(expected_degree_next_closed(s, 0, degenerate) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("a fully connected vertex still gains degree in expectation") {
  // after one newborn interaction, vertex 0 is adjacent to everyone (D = V-1)
  GraphState s({3, 0.5, 0.5, 0.5});
  const VertexLabel born = s.create_vertex();
  s.apply_interaction(std::vector<VertexLabel>{0, -1, born}, born, Branch::NewUniform);
  REQUIRE(s.vertex(0).degree == s.vertex_count() - 1);
  const Coefficients coeffs = derive_coefficients(s.params());
  const double expected = expected_degree_next_closed(s, 0, coeffs);
  CHECK(expected >= s.vertex(0).degree);
  CHECK(std::fabs(expected - expected_degree_next_enum(s, 0)) < 1e-12);
}

TEST_CASE("closed form tracks enumeration over random reachable states") {
  const OracleSuiteResult suite = oracle_suite({3, 4}, {0.3, 0.5, 0.8}, 120, 12, 9001);
  CHECK(suite.states == 120);
  CHECK(suite.max_mass_error <= 1e-12);
  CHECK(suite.max_participation_error <= 1e-12);
  CHECK(suite.max_degree_gap <= 1e-10);
  CHECK(suite.max_rising_gap <= 1e-12);
}

TEST_CASE("remainder at the initial state: value 1/6 inside bound 5/6") {
  const ModelParams params{3, 0.5, 0.5, 0.5};
  const Coefficients coeffs = derive_coefficients(params);
  GraphState s(params);
  const Remainder rem = remainder_R(s, 0, coeffs);
  CHECK(rem.value == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(rem.bound == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(rem.value >= 0.0);
  CHECK(rem.value <= rem.bound);
  CHECK(rem.component_new_uniform + rem.component_old_uniform ==
        doctest::Approx(rem.value).epsilon(1e-12));
}

TEST_CASE("remainder vanishes identically when beta = 0") {
  const ModelParams params{3, 1.0, 0.5, 1.0};
  const Coefficients coeffs = derive_coefficients(params);
  REQUIRE(coeffs.beta == 0.0);
  GraphState s(params);
  RngStream rng(4, 0);
  for (int t = 0; t < 50; ++t) step(s, rng);
  for (const auto& v : s.vertices()) {
    const Remainder rem = remainder_R(s, v.label, coeffs);
    CHECK(std::fabs(rem.value) <= 1e-12);
    CHECK(rem.bound == 0.0);
  }
}

TEST_CASE("remainder bounds hold across the random-state suite") {
  const OracleSuiteResult suite = oracle_suite({3, 4}, {0.3, 0.5, 0.8}, 150, 12, 31337);
  CHECK(suite.min_remainder >= -1e-12);
  CHECK(suite.max_remainder_minus_bound <= 1e-12);
  CHECK(suite.max_r1_v_excess <= 1e-12);
  CHECK(suite.max_r2_v_excess <= 1e-12);
  CHECK(suite.max_decomposition_gap <= 1e-12);
}

TEST_CASE("rising binomial expectation: k = 1 reduces to W + participation") {
  const ModelParams params{3, 0.5, 0.5, 0.5};
  const Coefficients coeffs = derive_coefficients(params);
  GraphState s(params);
  CHECK(expected_rising_binomial_next(s, 0, 1, coeffs) ==
        doctest::Approx(11.0 / 6.0).epsilon(1e-15));
  for (int k : {1, 2, 3}) {
    CHECK(std::fabs(expected_rising_binomial_next(s, 0, k, coeffs) -
                    expected_rising_binomial_proof_form(s, 0, k, coeffs)) < 1e-14);
  }
  CHECK_THROWS_AS(expected_rising_binomial_next(s, 0, 0, coeffs), InvalidParams);
}

TEST_CASE("enumeration refuses oversized states") {
  GraphState s({3, 0.5, 0.5, 0.5});
  CHECK_THROWS_AS(transition_distribution(s, 2), TooLargeToEnumerate);
}

}  // TEST_SUITE
