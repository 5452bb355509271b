#include <doctest.h>

#include <algorithm>

#include "ncsim/verify.hpp"

using namespace ncsim;

TEST_SUITE("verify") {

TEST_CASE("hard-check battery passes on a reduced budget") {
  VerifyOptions options;
  options.oracle_states = 60;
  options.audit_steps = 1500;
  options.stat_steps = 5000;
  options.replicas = 4;
  options.only = {"oracle", "remainder", "martingale", "supermartingale", "sequence",
                  "invariants", "analysis"};
  const auto results = run_battery(options);
  REQUIRE(!results.empty());
  for (const auto& r : results) {
    INFO(r.name, ": statistic=", r.statistic, " tol=", r.tolerance, " note=", r.note);
    CHECK(r.pass);
    CHECK(r.hard);
  }
  CHECK(battery_passed(results));
}

TEST_CASE("corrupt mode forces the martingale check red") {
  VerifyOptions options;
  options.audit_steps = 1500;
  options.corrupt_b_table = true;
  options.only = {"martingale.residual"};
  const auto results = run_battery(options);
  REQUIRE(results.size() == 1);
  CHECK(!results[0].pass);
  CHECK(!battery_passed(results));
}

TEST_CASE("negative control is part of the default battery") {
  VerifyOptions options;
  options.audit_steps = 1500;
  options.only = {"martingale.negative_control"};
  const auto results = run_battery(options);
  REQUIRE(results.size() == 1);
  CHECK(results[0].pass);  // corrupted table must be detected
}

TEST_CASE("only-filters select subsets by substring") {
  VerifyOptions options;
  options.audit_steps = 500;
  options.only = {"sequence"};
  options.asym_n = 100000;
  const auto results = run_battery(options);
  REQUIRE(results.size() == 1);
  CHECK(results[0].name == "sequence.asymptotics");
}

TEST_CASE("statistical checks carry p-values above the floor") {
  VerifyOptions options;
  options.stat_steps = 20000;
  options.replicas = 8;
  options.gof_draws = 200000;
  options.only = {"stat."};
  const auto results = run_battery(options);
  REQUIRE(results.size() >= 5);
  for (const auto& r : results) {
    INFO(r.name, " p=", r.p_value, " statistic=", r.statistic);
    CHECK(!r.hard);
    CHECK(r.p_value >= 1e-3);
    CHECK(r.pass);
  }
}

TEST_CASE("determinism check and invariant sweep") {
  CHECK(determinism_check({3, 0.5, 0.5, 0.5}, 2000, 7));
  const InvariantSweepResult sweep = invariant_sweep({4, 0.6, 0.3, 0.8}, 3000, 7);
  CHECK(sweep.steps == 3000);
  CHECK(sweep.deep_checks > 5);
}

TEST_CASE("remainder along a trajectory respects its bounds") {
  const RemainderTrajectoryResult rem = remainder_along_trajectory({3, 0.5, 0.5, 0.5}, 2000, 5);
  CHECK(rem.evaluated > 2000);
  CHECK(rem.min_remainder >= -1e-12);
  CHECK(rem.max_remainder_minus_bound <= 1e-12);

  const RemainderTrajectoryResult beta0 = remainder_along_trajectory({3, 1.0, 0.5, 1.0}, 500, 5);
  CHECK(beta0.max_abs_remainder <= 1e-12);
}

}  // TEST_SUITE
