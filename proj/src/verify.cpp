#include "ncsim/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "ncsim/math_util.hpp"
#include "ncsim/parallel.hpp"

namespace ncsim {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

GraphState random_reachable_state(const ModelParams& params, std::int64_t v_cap,
                                  std::int64_t max_steps, RngStream& rng) {
  GraphState state(params);
  const auto target = static_cast<std::int64_t>(rng.uniform_below(
      static_cast<std::uint64_t>(max_steps) + 1));
  for (std::int64_t t = 0; t < target && state.vertex_count() < v_cap; ++t) {
    step(state, rng);
  }
  return state;
}

OracleSuiteResult oracle_suite(const std::vector<int>& clique_sizes,
                               const std::vector<double>& corner_values, int total_states,
                               std::int64_t v_cap, std::uint64_t seed) {
  std::vector<ModelParams> combos;
  for (int n : clique_sizes) {
    for (double p : corner_values) {
      for (double q : corner_values) {
        for (double r : corner_values) combos.push_back({n, p, q, r});
      }
    }
  }

  OracleSuiteResult res;
  RngStream rng(seed, 0);
  for (int i = 0; i < total_states; ++i) {
    const ModelParams& params = combos[static_cast<std::size_t>(i) % combos.size()];
    const Coefficients coeffs = derive_coefficients(params);
    const GraphState state = random_reachable_state(params, v_cap, 40, rng);
    const TransitionDistribution dist = transition_distribution(state, v_cap);
    ++res.states;

    res.max_mass_error = std::max(res.max_mass_error, std::fabs(dist.total_mass() - 1.0));

    for (const VertexRecord& v : state.vertices()) {
      const double marginal = marginal_participation(dist, v.label);
      const double closed_probability = participation_probability(state, v.label, coeffs);
      res.max_participation_error =
          std::max(res.max_participation_error, std::fabs(marginal - closed_probability));

      const double enumerated = expected_degree_next_enum(state, v.label, v_cap);
      const double closed = expected_degree_next_closed(state, v.label, coeffs);
      res.max_degree_gap = std::max(res.max_degree_gap, std::fabs(closed - enumerated));

      for (int k = 1; k <= 3; ++k) {
        const double direct = expected_rising_binomial_next(state, v.label, k, coeffs);
        const double proof = expected_rising_binomial_proof_form(state, v.label, k, coeffs);
        res.max_rising_gap =
            std::max(res.max_rising_gap, std::fabs(direct - proof) / (1.0 + std::fabs(direct)));
      }

      const Remainder rem = remainder_R(state, v.label, coeffs);
      res.min_remainder = std::min(res.min_remainder, rem.value);
      res.max_remainder_minus_bound =
          std::max(res.max_remainder_minus_bound, rem.value - rem.bound);
      const auto vcount = static_cast<double>(state.vertex_count());
      res.max_r1_v_excess = std::max(res.max_r1_v_excess, rem.r1 * vcount - (params.N - 1.0));
      res.max_r2_v_excess = std::max(res.max_r2_v_excess, rem.r2 * vcount - (params.N - 1.0));
      res.max_decomposition_gap = std::max(
          res.max_decomposition_gap,
          std::fabs(rem.value - (rem.component_new_uniform + rem.component_old_uniform)));
    }
  }
  return res;
}

RemainderTrajectoryResult remainder_along_trajectory(const ModelParams& params,
                                                     std::int64_t steps, std::uint64_t seed) {
  RunOptions options;
  options.params = params;
  options.steps = steps;
  options.tracked_labels = {0, 1};
  options.seed = seed;
  const TrajectoryRecord rec = run(options);
  const Coefficients& coeffs = rec.coeffs;

  RemainderTrajectoryResult res;
  res.steps = steps;
  for (std::size_t slot = 0; slot < rec.tracked_labels.size(); ++slot) {
    const auto& w = rec.w_history[slot];
    const auto& d = rec.d_history[slot];
    const std::int64_t birth = rec.birth_of(rec.tracked_labels[slot]);
    for (std::int64_t n = birth; n <= steps; ++n) {
      const auto i = static_cast<std::size_t>(n);
      const Remainder rem = remainder_R(params, coeffs, w[i], d[i], rec.v_history[i], n);
      res.min_remainder = std::min(res.min_remainder, rem.value);
      res.max_remainder_minus_bound =
          std::max(res.max_remainder_minus_bound, rem.value - rem.bound);
      res.max_abs_remainder = std::max(res.max_abs_remainder, std::fabs(rem.value));
      ++res.evaluated;
    }
  }
  return res;
}

AuditBundle audit_trajectory(const ModelParams& params, std::int64_t steps,
                             const std::vector<int>& ks, const std::vector<VertexLabel>& js,
                             std::uint64_t seed, bool corruption_control) {
  RunOptions options;
  options.params = params;
  options.steps = steps;
  options.tracked_labels = js;
  options.seed = seed;
  const TrajectoryRecord rec = run(options);

  AuditBundle bundle;
  bundle.steps = steps;
  SequenceCache cache(rec.coeffs.alpha, ks, steps);
  for (const int k : ks) {
    for (const VertexLabel j : js) {
      const MartingaleAudit audit = audit_martingale(rec, k, j, cache);
      bundle.max_relative_residual =
          std::max(bundle.max_relative_residual, audit.max_relative_residual);
      bundle.martingale_rows += audit.audited;
    }
  }
  for (const VertexLabel j : js) {
    const SupermartingaleAudit audit = audit_supermartingale(rec, j, cache);
    bundle.max_slack = std::max(bundle.max_slack, audit.max_slack);
    bundle.supermartingale_rows += audit.audited;
    bundle.skipped_weight1 += audit.skipped_weight1;
  }

  if (corruption_control) {
    SequenceCache corrupted(rec.coeffs.alpha, ks, steps);
    corrupted.corrupt_b(1e-6, std::max<std::int64_t>(1, steps / 10));
    for (const int k : ks) {
      for (const VertexLabel j : js) {
        const MartingaleAudit audit = audit_martingale(rec, k, j, corrupted);
        bundle.corrupted_max_residual =
            std::max(bundle.corrupted_max_residual, audit.max_relative_residual);
      }
    }
  }
  return bundle;
}

SequenceAsymptoticsResult sequence_asymptotics(const std::vector<double>& alphas,
                                               const std::vector<int>& ks, std::int64_t n) {
  SequenceAsymptoticsResult res;
  const double log_n = std::log(static_cast<double>(n));
  for (const double alpha : alphas) {
    for (const int k : ks) {
      const double b = b_value(n, k, alpha);
      const double scaled = b * std::exp(alpha * k * log_n) / gamma_fn(1.0 + alpha * k);
      res.max_b_gap = std::max(res.max_b_gap, std::fabs(scaled - 1.0));
    }
    const double e = e_value(n, alpha);
    const double scaled = e * std::exp(-alpha * log_n) / gamma_fn(1.0 - alpha);
    res.max_e_gap = std::max(res.max_e_gap, std::fabs(scaled - 1.0));
  }
  return res;
}

EnsembleStats ensemble_stats(const ModelParams& params, std::int64_t steps, int replicas,
                             std::uint64_t seed, int jobs, std::int64_t window_lo,
                             std::int64_t window_hi, double slope_tol, double v_tol) {
  const Coefficients coeffs = derive_coefficients(params);
  EnsembleStats stats;
  stats.replicas = replicas;
  stats.steps = steps;
  stats.ratio_dw.assign(static_cast<std::size_t>(replicas), 0.0);
  stats.ratio_dw_mid.assign(static_cast<std::size_t>(replicas), 0.0);
  stats.ratio_max.assign(static_cast<std::size_t>(replicas), 0.0);
  stats.ratio_max_mid.assign(static_cast<std::size_t>(replicas), 0.0);
  stats.slope_w.assign(static_cast<std::size_t>(replicas), 0.0);
  stats.slope_maxw.assign(static_cast<std::size_t>(replicas), 0.0);
  stats.v_over_pn.assign(static_cast<std::size_t>(replicas), 0.0);

  for (const std::int64_t n : geometric_checkpoints(steps)) {
    if (std::llabs(10 * n - steps) < std::llabs(10 * stats.mid_n - steps)) stats.mid_n = n;
  }

  parallel_for(replicas, jobs, [&](std::int64_t rep) {
    RunOptions options;
    options.params = params;
    options.steps = steps;
    options.tracked_labels = {0};
    options.seed = seed;
    options.stream = static_cast<std::uint64_t>(rep);
    options.record_histories = false;
    const TrajectoryRecord rec = run(options);

    const CheckpointRow& last = rec.checkpoints.back();
    const auto i = static_cast<std::size_t>(rep);
    stats.ratio_dw[i] = static_cast<double>(last.tracked_degree[0]) /
                        static_cast<double>(last.tracked_weight[0]);
    stats.ratio_max[i] =
        static_cast<double>(last.max_degree) / static_cast<double>(last.max_weight);
    stats.v_over_pn[i] = static_cast<double>(last.vertex_count) /
                         (params.p * static_cast<double>(steps));

    for (const CheckpointRow& row : rec.checkpoints) {
      if (row.n != stats.mid_n) continue;
      stats.ratio_dw_mid[i] = static_cast<double>(row.tracked_degree[0]) /
                              static_cast<double>(std::max<std::int64_t>(row.tracked_weight[0], 1));
      stats.ratio_max_mid[i] =
          static_cast<double>(row.max_degree) / static_cast<double>(row.max_weight);
    }

    std::vector<std::pair<std::int64_t, double>> w_series, maxw_series;
    for (const CheckpointRow& row : rec.checkpoints) {
      if (row.n < 1) continue;
      w_series.emplace_back(row.n, static_cast<double>(row.tracked_weight[0]));
      maxw_series.emplace_back(row.n, static_cast<double>(row.max_weight));
    }
    stats.slope_w[i] = estimate_exponent(w_series, window_lo, window_hi).slope;
    stats.slope_maxw[i] = estimate_exponent(maxw_series, window_lo, window_hi).slope;
  });

  for (int rep = 0; rep < replicas; ++rep) {
    const auto i = static_cast<std::size_t>(rep);
    stats.mean_ratio_dw += stats.ratio_dw[i];
    stats.mean_ratio_max += stats.ratio_max[i];
    if (std::fabs(stats.slope_w[i] - coeffs.alpha) <= slope_tol) ++stats.slope_w_within;
    if (std::fabs(stats.slope_maxw[i] - coeffs.alpha) <= slope_tol) ++stats.slope_maxw_within;
    if (std::fabs(stats.v_over_pn[i] - 1.0) <= v_tol) ++stats.v_within;
  }
  stats.mean_ratio_dw /= static_cast<double>(replicas);
  stats.mean_ratio_max /= static_cast<double>(replicas);
  return stats;
}

InvariantSweepResult invariant_sweep(const ModelParams& params, std::int64_t steps,
                                     std::uint64_t seed) {
  GraphState state(params);
  state.reserve_for_steps(steps);
  RngStream rng(seed, 0);
  std::vector<std::int64_t> deep = geometric_checkpoints(steps, 2.0);
  std::size_t next_deep = 1;  // skip 0
  InvariantSweepResult res;
  res.steps = steps;

  const int n = params.N;
  StepOutcome out;
  for (std::int64_t t = 1; t <= steps; ++t) {
    step_into(state, rng, out);
    state.check_invariants(false);

    const bool is_new =
        out.branch == Branch::NewPref || out.branch == Branch::NewUniform;
    if (is_new != out.born_label.has_value()) {
      throw std::logic_error("invariant violated: born label does not match branch");
    }
    if (out.branch == Branch::OldPref && out.new_edges != 0) {
      throw std::logic_error("invariant violated: preferential N-clique created edges");
    }
    if (out.branch == Branch::NewPref && out.new_edges != n - 1) {
      throw std::logic_error("invariant violated: preferential newborn edges != N-1");
    }
    if (out.new_edges < 0 || out.new_edges > n * (n - 1) / 2) {
      throw std::logic_error("invariant violated: edge count out of range");
    }
    for (const VertexLabel label : out.vertex_set) {
      const VertexRecord& v = state.vertex(label);
      if (v.degree != static_cast<std::int64_t>(state.neighbors(label).size())) {
        throw std::logic_error("invariant violated: degree != adjacency size");
      }
      if (v.degree < n - 1 || v.degree > (n - 1) * v.weight) {
        throw std::logic_error("invariant violated: degree outside [N-1, (N-1)W]");
      }
    }
    if (next_deep < deep.size() && deep[next_deep] == t) {
      state.check_invariants(true);
      ++res.deep_checks;
      ++next_deep;
    }
  }
  state.check_invariants(true);
  ++res.deep_checks;
  return res;
}

bool determinism_check(const ModelParams& params, std::int64_t steps, std::uint64_t seed) {
  RunOptions options;
  options.params = params;
  options.steps = steps;
  options.tracked_labels = {0, 1};
  options.seed = seed;
  const TrajectoryRecord a = run(options);
  const TrajectoryRecord b = run(options);
  return identical_data(a, b);
}

PerfResult measure_performance(const ModelParams& params, std::int64_t steps_small,
                               std::int64_t steps_large, std::uint64_t seed) {
  auto timed = [&](std::int64_t steps) {
    GraphState state(params);
    state.reserve_for_steps(steps);
    RngStream rng(seed, 0);
    StepOutcome out;
    const double t0 = now_seconds();
    for (std::int64_t t = 0; t < steps; ++t) step_into(state, rng, out);
    const double elapsed = now_seconds() - t0;
    if (state.weight_sum() != static_cast<std::int64_t>(params.N) * (steps + 1)) {
      throw std::logic_error("invariant violated during timing run");
    }
    return elapsed;
  };
  PerfResult res;
  res.steps_small = steps_small;
  res.steps_large = steps_large;
  res.seconds_small = timed(steps_small);
  res.seconds_large = timed(steps_large);
  return res;
}

double weighted_sampler_gof_p(std::uint64_t seed, std::int64_t draws) {
  WeightedIndex index(2);
  std::uint64_t total = 0;
  std::vector<std::uint64_t> weights{1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const VertexLabel key[2] = {static_cast<VertexLabel>(i), static_cast<VertexLabel>(i + 100)};
    index.increment(key, weights[i]);
    total += weights[i];
  }
  RngStream rng(seed, 0);
  std::vector<std::int64_t> counts(weights.size(), 0);
  for (std::int64_t d = 0; d < draws; ++d) {
    ++counts[static_cast<std::size_t>(index.find_slot(rng.uniform_below(total)))];
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double expected = static_cast<double>(draws) * static_cast<double>(weights[i]) /
                            static_cast<double>(total);
    const double diff = static_cast<double>(counts[i]) - expected;
    chi2 += diff * diff / expected;
  }
  return chi_square_survival(chi2, static_cast<int>(weights.size()) - 1);
}

double uniform_subset_gof_p(std::uint64_t seed, std::int64_t draws) {
  const std::int64_t v = 6;
  const int m = 3;
  RngStream rng(seed, 0);
  std::map<std::vector<std::int64_t>, std::int64_t> counts;
  for (std::int64_t d = 0; d < draws; ++d) ++counts[uniform_subset(v, m, rng)];
  const double cells = binom(v, m);
  const double expected = static_cast<double>(draws) / cells;
  double chi2 = 0.0;
  for (const auto& [subset, count] : counts) {
    const double diff = static_cast<double>(count) - expected;
    chi2 += diff * diff / expected;
  }
  // unseen subsets (possible at tiny draw counts) contribute their expectation
  chi2 += (cells - static_cast<double>(counts.size())) * expected;
  return chi_square_survival(chi2, static_cast<int>(cells) - 1);
}

double branch_frequency_gof_p(const ModelParams& params, std::int64_t steps,
                              std::uint64_t seed) {
  GraphState state(params);
  state.reserve_for_steps(steps);
  RngStream rng(seed, 0);
  std::array<std::int64_t, 4> counts{};
  StepOutcome out;
  for (std::int64_t t = 0; t < steps; ++t) {
    step_into(state, rng, out);
    ++counts[static_cast<std::size_t>(out.branch)];
  }
  const std::array<double, 4> expected_prob{
      params.p * params.r, params.p * (1.0 - params.r), (1.0 - params.p) * params.q,
      (1.0 - params.p) * (1.0 - params.q)};
  double chi2 = 0.0;
  int df = -1;
  for (std::size_t i = 0; i < 4; ++i) {
    const double expected = expected_prob[i] * static_cast<double>(steps);
    if (expected == 0.0) continue;
    ++df;
    const double diff = static_cast<double>(counts[i]) - expected;
    chi2 += diff * diff / expected;
  }
  return df <= 0 ? 1.0 : chi_square_survival(chi2, df);
}

std::vector<CheckResult> run_battery(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  auto enabled = [&](const std::string& name) {
    if (options.only.empty()) return true;
    return std::any_of(options.only.begin(), options.only.end(),
                       [&](const std::string& f) { return name.find(f) != std::string::npos; });
  };
  auto add = [&](CheckResult r) { results.push_back(std::move(r)); };

  const Coefficients coeffs = derive_coefficients(options.params);

  if (enabled("oracle.mass") || enabled("oracle.participation") ||
      enabled("oracle.degree") || enabled("oracle.rising") || enabled("remainder.states")) {
    const OracleSuiteResult suite = oracle_suite({3, 4}, {0.3, 0.5, 0.8}, options.oracle_states,
                                                 options.oracle_v_cap, options.seed);
    if (enabled("oracle.mass")) {
      add({"oracle.mass", true, suite.max_mass_error <= 1e-12, suite.max_mass_error, 1e-12,
           std::numeric_limits<double>::quiet_NaN(),
           "max |total transition mass - 1| over " + std::to_string(suite.states) + " states"});
    }
    if (enabled("oracle.participation")) {
      add({"oracle.participation", true, suite.max_participation_error <= 1e-12,
           suite.max_participation_error, 1e-12, std::numeric_limits<double>::quiet_NaN(),
           "max |enumerated marginal - closed participation probability|"});
    }
    if (enabled("oracle.degree")) {
      add({"oracle.degree", true, suite.max_degree_gap <= 1e-10, suite.max_degree_gap, 1e-10,
           std::numeric_limits<double>::quiet_NaN(),
           "max |closed-form E[D'] - enumeration E[D']|"});
    }
    if (enabled("oracle.rising")) {
      add({"oracle.rising", true, suite.max_rising_gap <= 1e-12, suite.max_rising_gap, 1e-12,
           std::numeric_limits<double>::quiet_NaN(),
           "max gap between the two rising-binomial expectation routes"});
    }
    if (enabled("remainder.states")) {
      const double violation =
          std::max({-suite.min_remainder, suite.max_remainder_minus_bound,
                    suite.max_r1_v_excess, suite.max_r2_v_excess,
                    suite.max_decomposition_gap});
      add({"remainder.states", true, violation <= 1e-12, violation, 1e-12,
           std::numeric_limits<double>::quiet_NaN(),
           "remainder bounds 0 <= R <= (N-1)p beta/V, R1 V <= N-1, R2 V <= N-1, decomposition"});
    }
  }

  if (enabled("remainder.trajectory")) {
    const RemainderTrajectoryResult rem =
        remainder_along_trajectory(options.params, options.audit_steps, options.seed);
    const double violation = std::max(-rem.min_remainder, rem.max_remainder_minus_bound);
    add({"remainder.trajectory", true, violation <= 1e-12, violation, 1e-12,
         std::numeric_limits<double>::quiet_NaN(),
         "remainder bounds along " + std::to_string(rem.steps) + " steps"});
  }
  if (enabled("remainder.beta_zero")) {
    const ModelParams beta0{options.params.N, 1.0, options.params.q, 1.0};
    const RemainderTrajectoryResult rem =
        remainder_along_trajectory(beta0, options.audit_steps, options.seed);
    add({"remainder.beta_zero", true, rem.max_abs_remainder <= 1e-12, rem.max_abs_remainder,
         1e-12, std::numeric_limits<double>::quiet_NaN(),
         "R identically 0 when beta = 0 (p = 1, r = 1)"});
  }

  if (enabled("martingale.residual") || enabled("martingale.negative_control") ||
      enabled("supermartingale.slack")) {
    const AuditBundle bundle =
        audit_trajectory(options.params, options.audit_steps, options.ks, {0, 1}, options.seed,
                         true);
    if (enabled("martingale.residual")) {
      // in corrupt mode the battery reports the corrupted residual, which must fail
      const double residual = options.corrupt_b_table ? bundle.corrupted_max_residual
                                                      : bundle.max_relative_residual;
      add({"martingale.residual", true, residual <= 1e-8, residual, 1e-8,
           std::numeric_limits<double>::quiet_NaN(),
           std::string("max relative one-step defect of the compensated rising-binomial, ") +
               std::to_string(bundle.martingale_rows) + " audited steps" +
               (options.corrupt_b_table ? " [b-table corrupted]" : "")});
    }
    if (enabled("martingale.negative_control")) {
      add({"martingale.negative_control", true, bundle.corrupted_max_residual > 1e-8,
           bundle.corrupted_max_residual, 1e-8, std::numeric_limits<double>::quiet_NaN(),
           "corrupted b table must break the martingale identity"});
    }
    if (enabled("supermartingale.slack")) {
      add({"supermartingale.slack", true, bundle.max_slack <= 1e-12, bundle.max_slack, 1e-12,
           std::numeric_limits<double>::quiet_NaN(),
           std::to_string(bundle.supermartingale_rows) + " audited steps, " +
               std::to_string(bundle.skipped_weight1) + " skipped at W = 1"});
    }
  }

  if (enabled("sequence.asymptotics")) {
    const SequenceAsymptoticsResult seq =
        sequence_asymptotics({0.2, 5.0 / 12.0, 0.8}, options.ks, options.asym_n);
    const double gap = std::max(seq.max_b_gap, seq.max_e_gap);
    add({"sequence.asymptotics", true, gap <= 1e-3, gap, 1e-3,
         std::numeric_limits<double>::quiet_NaN(),
         "b and e scaled limits at n = " + std::to_string(options.asym_n)});
  }

  if (enabled("invariants.sweep")) {
    CheckResult r{"invariants.sweep", true, false, 0.0, 0.0,
                  std::numeric_limits<double>::quiet_NaN(), ""};
    try {
      const InvariantSweepResult sweep =
          invariant_sweep(options.params, options.stat_steps, options.seed);
      r.pass = true;
      r.note = std::to_string(sweep.steps) + " steps, " + std::to_string(sweep.deep_checks) +
               " deep recomputations";
    } catch (const std::logic_error& err) {
      r.pass = false;
      r.statistic = 1.0;
      r.note = err.what();
    }
    add(std::move(r));
  }
  if (enabled("invariants.determinism")) {
    const bool same = determinism_check(options.params, std::min<std::int64_t>(options.stat_steps, 100000),
                                        options.seed);
    add({"invariants.determinism", true, same, same ? 0.0 : 1.0, 0.0,
         std::numeric_limits<double>::quiet_NaN(), "bit-identical replay of a full record"});
  }

  if (enabled("analysis.exponent_synthetic")) {
    std::vector<std::pair<std::int64_t, double>> series;
    for (std::int64_t n = 1; n <= 1000000; n = std::max(n + 1, n * 11 / 10)) {
      series.emplace_back(n, 3.0 * std::pow(static_cast<double>(n), 0.4));
    }
    const ExponentFit fit = estimate_exponent(series, 1, 1000000);
    const double gap = std::fabs(fit.slope - 0.4);
    add({"analysis.exponent_synthetic", true, gap <= 1e-12, gap, 1e-12,
         std::numeric_limits<double>::quiet_NaN(), "pure power law recovered exactly"});
  }

  if (enabled("analysis.s_estimator")) {
    const SEstimate s0 = s_estimator(options.params, 1, 200, 0, 8, options.seed, options.jobs);
    const double excess = s0.estimate - 200.0;  // n - m + 1
    add({"analysis.s_estimator", true, excess <= 1e-12, excess, 1e-12,
         std::numeric_limits<double>::quiet_NaN(),
         "k = 0 estimate is the expected existing-label count, at most n - m + 1"});
  }

  if (enabled("stat.branch_frequencies")) {
    const double p = branch_frequency_gof_p(options.params, options.stat_steps, options.seed);
    add({"stat.branch_frequencies", false, p >= 1e-3, p, 1e-3, p,
         "chi-square fit of the four branch frequencies"});
  }
  if (enabled("stat.weighted_sampler")) {
    const double p = weighted_sampler_gof_p(options.seed, options.gof_draws);
    add({"stat.weighted_sampler", false, p >= 1e-3, p, 1e-3, p,
         "chi-square fit of weight-proportional draws"});
  }
  if (enabled("stat.uniform_subset")) {
    const double p = uniform_subset_gof_p(options.seed, options.gof_draws);
    add({"stat.uniform_subset", false, p >= 1e-3, p, 1e-3, p,
         "chi-square fit of uniform 3-subsets of 6"});
  }

  if (enabled("stat.ratio_limit") || enabled("stat.growth_exponents") ||
      enabled("stat.vertex_growth")) {
    const EnsembleStats stats =
        ensemble_stats(options.params, options.stat_steps, options.replicas, options.seed,
                       options.jobs, std::max<std::int64_t>(options.stat_steps / 100, 10),
                       options.stat_steps, 0.1, 0.01);
    if (enabled("stat.ratio_limit")) {
      // D/W approaches alpha2/alpha only like log(n)/n^alpha (the uniform
      // branches keep adding ~beta p/V degree per step), so at desk scale the
      // meaningful statistical statement is that the excess shrinks over a
      // decade of n on most replicas.
      const double limit = coeffs.alpha > 0 ? coeffs.alpha2 / coeffs.alpha : 0.0;
      int improved = 0;
      for (int rep = 0; rep < stats.replicas; ++rep) {
        const auto i = static_cast<std::size_t>(rep);
        if (std::fabs(stats.ratio_dw[i] - limit) < std::fabs(stats.ratio_dw_mid[i] - limit)) {
          ++improved;
        }
      }
      double p_tail = 0.0;
      for (int i = 0; i <= improved; ++i) {
        p_tail += binom(stats.replicas, i) * std::pow(0.85, i) *
                  std::pow(0.15, stats.replicas - i);
      }
      const double excess = std::fabs(stats.mean_ratio_dw - limit);
      const bool pass = p_tail >= 1e-3 && excess < 0.15;
      add({"stat.ratio_limit", false, pass, stats.mean_ratio_dw, limit, p_tail,
           "mean D/W for vertex 0 " + std::to_string(stats.mean_ratio_dw) + " vs limit " +
               std::to_string(limit) + "; excess shrank from n=" + std::to_string(stats.mid_n) +
               " to n=" + std::to_string(stats.steps) + " on " + std::to_string(improved) + "/" +
               std::to_string(stats.replicas) + " replicas"});
    }
    if (enabled("stat.growth_exponents")) {
      // binomial tail: each replica lands within alpha +- 0.1 w.p. >= 0.9
      const int within = std::min(stats.slope_w_within, stats.slope_maxw_within);
      double p_tail = 0.0;
      for (int i = 0; i <= within; ++i) {
        p_tail += binom(stats.replicas, i) * std::pow(0.9, i) *
                  std::pow(0.1, stats.replicas - i);
      }
      add({"stat.growth_exponents", false, p_tail >= 1e-3,
           static_cast<double>(within) / static_cast<double>(stats.replicas), 0.9, p_tail,
           "replicas with log-log slopes of W[n,0] and maxW inside alpha +- 0.1"});
    }
    if (enabled("stat.vertex_growth")) {
      double z_sum = 0.0;
      for (double v : stats.v_over_pn) {
        const double vn = v * options.params.p * static_cast<double>(options.stat_steps);
        const double mean =
            options.params.N + options.params.p * static_cast<double>(options.stat_steps);
        const double sd = std::sqrt(static_cast<double>(options.stat_steps) * options.params.p *
                                    (1.0 - options.params.p));
        z_sum += (vn - mean) / std::max(sd, 1e-9);
      }
      const double z = z_sum / std::sqrt(static_cast<double>(stats.replicas));
      const double p = normal_two_sided_p(z);
      add({"stat.vertex_growth", false, p >= 1e-3, z, 0.0, p,
           "combined z of V_n against p n across replicas"});
    }
  }

  return results;
}

bool battery_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

}  // namespace ncsim
