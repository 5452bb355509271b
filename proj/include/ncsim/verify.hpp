#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ncsim/analysis.hpp"
#include "ncsim/oracle.hpp"

namespace ncsim {

struct CheckResult {
  std::string name;
  bool hard = true;  // hard checks gate the exit code; soft ones carry p-values
  bool pass = false;
  double statistic = 0.0;
  double tolerance = 0.0;
  double p_value = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

// A random state reachable from the initial graph: up to max_steps evolution
// steps, stopping early once v_cap vertices exist.
GraphState random_reachable_state(const ModelParams& params, std::int64_t v_cap,
                                  std::int64_t max_steps, RngStream& rng);

// Exhaustive-enumeration audit over random reachable states, cycling through
// every (N, p, q, r) combination given. Collects worst-case gaps between the
// enumeration and each closed form, plus the remainder-bound extremes.
struct OracleSuiteResult {
  int states = 0;
  double max_mass_error = 0.0;
  double max_participation_error = 0.0;
  double max_degree_gap = 0.0;
  double max_rising_gap = 0.0;
  double min_remainder = std::numeric_limits<double>::infinity();
  double max_remainder_minus_bound = -std::numeric_limits<double>::infinity();
  double max_r1_v_excess = -std::numeric_limits<double>::infinity();  // R1*V - (N-1)
  double max_r2_v_excess = -std::numeric_limits<double>::infinity();  // R2*V - (N-1)
  double max_decomposition_gap = 0.0;  // |R - (beta1 p R1 + beta2 p R2)|
};

OracleSuiteResult oracle_suite(const std::vector<int>& clique_sizes,
                               const std::vector<double>& corner_values, int total_states,
                               std::int64_t v_cap, std::uint64_t seed);

// R_n along a full trajectory for tracked labels {0, 1}.
struct RemainderTrajectoryResult {
  std::int64_t steps = 0;
  std::int64_t evaluated = 0;
  double min_remainder = std::numeric_limits<double>::infinity();
  double max_remainder_minus_bound = -std::numeric_limits<double>::infinity();
  double max_abs_remainder = 0.0;
};

RemainderTrajectoryResult remainder_along_trajectory(const ModelParams& params,
                                                     std::int64_t steps, std::uint64_t seed);

// Martingale and supermartingale audits over one trajectory, optionally with
// the corrupted-b negative control rerun.
struct AuditBundle {
  std::int64_t steps = 0;
  double max_relative_residual = 0.0;
  std::int64_t martingale_rows = 0;
  double max_slack = 0.0;
  std::int64_t supermartingale_rows = 0;
  std::int64_t skipped_weight1 = 0;
  double corrupted_max_residual = 0.0;  // only when control requested
};

AuditBundle audit_trajectory(const ModelParams& params, std::int64_t steps,
                             const std::vector<int>& ks, const std::vector<VertexLabel>& js,
                             std::uint64_t seed, bool corruption_control);

// Worst deviation of b[n,k] n^{k a}/Gamma(1+k a) and e_n n^{-a}/Gamma(1-a)
// from 1 at the given horizon.
struct SequenceAsymptoticsResult {
  double max_b_gap = 0.0;
  double max_e_gap = 0.0;
};

SequenceAsymptoticsResult sequence_asymptotics(const std::vector<double>& alphas,
                                               const std::vector<int>& ks, std::int64_t n);

// Replica ensemble for the statistical growth-law checks.
struct EnsembleStats {
  int replicas = 0;
  std::int64_t steps = 0;
  std::int64_t mid_n = 0;             // checkpoint nearest steps/10
  std::vector<double> ratio_dw;       // D[n,0]/W[n,0] at the final step
  std::vector<double> ratio_dw_mid;   // same at mid_n
  std::vector<double> ratio_max;      // maxD/maxW at the final step
  std::vector<double> ratio_max_mid;
  std::vector<double> slope_w;        // log-log slope of W[n,0] over the window
  std::vector<double> slope_maxw;
  std::vector<double> v_over_pn;
  double mean_ratio_dw = 0.0;
  double mean_ratio_max = 0.0;
  int slope_w_within = 0;     // |slope - alpha| <= slope_tol
  int slope_maxw_within = 0;
  int v_within = 0;           // |V/(pn) - 1| <= v_tol
};

EnsembleStats ensemble_stats(const ModelParams& params, std::int64_t steps, int replicas,
                             std::uint64_t seed, int jobs, std::int64_t window_lo,
                             std::int64_t window_hi, double slope_tol, double v_tol);

// Structural invariants checked at every step of a live run (maintained
// totals, per-touched-vertex bounds, branch/edge contracts) with full deep
// recomputations on a geometric grid. Throws std::logic_error on the first
// violation.
struct InvariantSweepResult {
  std::int64_t steps = 0;
  int deep_checks = 0;
};

InvariantSweepResult invariant_sweep(const ModelParams& params, std::int64_t steps,
                                     std::uint64_t seed);

// Two identical runs must produce identical records.
bool determinism_check(const ModelParams& params, std::int64_t steps, std::uint64_t seed);

struct PerfResult {
  std::int64_t steps_small = 0, steps_large = 0;
  double seconds_small = 0.0, seconds_large = 0.0;
};

PerfResult measure_performance(const ModelParams& params, std::int64_t steps_small,
                               std::int64_t steps_large, std::uint64_t seed);

// Goodness-of-fit p-values for the two sampling primitives and the branch mix.
double weighted_sampler_gof_p(std::uint64_t seed, std::int64_t draws);
double uniform_subset_gof_p(std::uint64_t seed, std::int64_t draws);
double branch_frequency_gof_p(const ModelParams& params, std::int64_t steps, std::uint64_t seed);

struct VerifyOptions {
  ModelParams params{3, 0.5, 0.5, 0.5};
  std::vector<int> ks{1, 2, 3};
  std::int64_t audit_steps = 10000;
  std::int64_t asym_n = 1000000;
  int oracle_states = 300;
  std::int64_t oracle_v_cap = 12;
  std::int64_t stat_steps = 100000;
  int replicas = 16;
  std::int64_t gof_draws = 1000000;
  std::uint64_t seed = 42;
  int jobs = 1;
  bool corrupt_b_table = false;       // negative-control mode: audits run corrupted
  std::vector<std::string> only;      // substring filters on check names
};

std::vector<CheckResult> run_battery(const VerifyOptions& options);

// False when any hard check failed or any statistical p-value fell below 1e-3.
bool battery_passed(const std::vector<CheckResult>& results);

}  // namespace ncsim
