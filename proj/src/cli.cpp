#include "ncsim/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "ncsim/errors.hpp"
#include "ncsim/json_io.hpp"
#include "ncsim/parallel.hpp"
#include "ncsim/verify.hpp"
#include "ncsim/version.hpp"

namespace ncsim {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt17(double x) {
  if (std::isnan(x)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json make_header(const ModelParams& params, json config_echo) {
  config_echo["params"] = to_json(params);
  return json{{"version", kVersion},
              {"generator", kGeneratorId},
              {"coefficients", to_json(derive_coefficients(params))},
              {"config", std::move(config_echo)}};
}

void warn_if_alpha_zero(const ModelParams& params) {
  if (auto warning = require_positive_alpha(derive_coefficients(params))) {
    std::cerr << "warning: " << *warning << "\n";
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file " + path);
  return out;
}

// Model parameters from flags and/or a JSON config object; explicit flags win.
struct ParamOptions {
  ModelParams value{};
  std::string config_path;
  CLI::Option* opt_n = nullptr;
  CLI::Option* opt_p = nullptr;
  CLI::Option* opt_q = nullptr;
  CLI::Option* opt_r = nullptr;

  void attach(CLI::App& cmd) {
    cmd.add_option("--config", config_path,
                   "JSON config file with keys {\"N\",\"p\",\"q\",\"r\"}");
    opt_n = cmd.add_option("--N", value.N, "vertices per interaction (>= 3)");
    opt_p = cmd.add_option("--p", value.p, "new-vertex probability (0 < p <= 1)");
    opt_q = cmd.add_option("--q", value.q, "preferential N-clique probability, old branch");
    opt_r = cmd.add_option("--r", value.r, "preferential (N-1)-clique probability, new branch");
  }

  ModelParams resolve() const {
    ModelParams out;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw IoError("cannot read config file " + config_path);
      json j;
      try {
        f >> j;
      } catch (const json::parse_error& err) {
        throw InvalidParams("config file " + config_path + ": " + err.what());
      }
      out = params_from_json(j);
    }
    if (opt_n->count() > 0) out.N = value.N;
    if (opt_p->count() > 0) out.p = value.p;
    if (opt_q->count() > 0) out.q = value.q;
    if (opt_r->count() > 0) out.r = value.r;
    validate(out);
    return out;
  }
};

json asymptotics_json(const TrajectoryRecord& rec) {
  json out;
  const RatioReport ratios = ratio_report(rec);
  const GammaMuReport gammas = gamma_mu_estimates(rec);
  if (!std::isnan(ratios.limit)) out["ratio_limit"] = ratios.limit;
  out["degenerate"] = ratios.degenerate;
  if (!ratios.max_ratio.empty()) out["ratio_maxD_maxW"] = ratios.max_ratio.back();
  if (!gammas.mu_hat.empty() && !std::isnan(gammas.mu_hat.back())) {
    out["mu_hat"] = gammas.mu_hat.back();
    if (!std::isnan(gammas.mu_drift)) out["mu_drift_decade"] = gammas.mu_drift;
  }
  json per_label = json::object();
  for (std::size_t i = 0; i < rec.tracked_labels.size(); ++i) {
    json entry;
    if (!ratios.tracked_ratio[i].empty() && !std::isnan(ratios.tracked_ratio[i].back())) {
      entry["ratio_DW"] = ratios.tracked_ratio[i].back();
    }
    if (!gammas.gamma_hat[i].empty() && !std::isnan(gammas.gamma_hat[i].back())) {
      entry["gamma_hat"] = gammas.gamma_hat[i].back();
    }
    std::vector<std::pair<std::int64_t, double>> series;
    for (const CheckpointRow& row : rec.checkpoints) {
      if (row.n >= 1 && row.tracked_weight[i] > 0) {
        series.emplace_back(row.n, static_cast<double>(row.tracked_weight[i]));
      }
    }
    try {
      const ExponentFit fit = estimate_exponent(series, std::max<std::int64_t>(rec.steps / 100, 1),
                                                rec.steps);
      entry["slope_W"] = fit.slope;
      entry["slope_W_stderr"] = fit.stderr_;
    } catch (const InsufficientData&) {
    }
    per_label[std::to_string(rec.tracked_labels[i])] = std::move(entry);
  }
  out["tracked"] = std::move(per_label);
  return out;
}

void write_gnuplot_stub(const std::string& stub_path, const std::string& data_path) {
  auto out = open_output(stub_path);
  // the shell command below is emitted inside a gnuplot double-quoted string,
  // so every literal double quote is escaped as \"
  const std::string extract =
      "< awk -F'[,{}:\\\"]+' '{n=w=d=\\\"\\\"; for(i=1;i<NF;i++){if($i==\\\"n\\\")n=$(i+1); "
      "if($i==\\\"maxW\\\")w=$(i+1); if($i==\\\"maxD\\\")d=$(i+1)} "
      "if(n!=\\\"\\\" && w!=\\\"\\\")print n,w,d}' " +
      data_path;
  out << "# log-log growth of the maximal weight and degree from an ncsim JSONL series\n"
      << "# usage: gnuplot -persist " << stub_path << "\n"
      << "set logscale xy\n"
      << "set xlabel 'n'\n"
      << "set ylabel 'maximum over vertices'\n"
      << "plot \"" << extract << "\" using ($1+1):2 with lines title 'max weight', \\\n"
      << "     \"" << extract << "\" using ($1+1):3 with lines title 'max degree'\n";
  if (!out.good()) throw IoError("write failed on " + stub_path);
}

int cmd_simulate(const ModelParams& params, std::int64_t steps, std::uint64_t seed,
                 int replicas, const std::vector<VertexLabel>& tracked, double ratio,
                 const std::string& out_path, const std::string& gnuplot_path, int jobs) {
  if (steps < 0) throw InvalidParams("--steps must be nonnegative");
  if (replicas < 1) throw InvalidParams("--replicas must be at least 1");
  warn_if_alpha_zero(params);
  const double t0 = now_seconds();

  std::vector<TrajectoryRecord> records(static_cast<std::size_t>(replicas));
  parallel_for(replicas, jobs, [&](std::int64_t rep) {
    RunOptions options;
    options.params = params;
    options.steps = steps;
    options.tracked_labels = tracked;
    options.checkpoints = geometric_checkpoints(steps, ratio);
    options.seed = seed;
    options.stream = static_cast<std::uint64_t>(rep);
    options.record_histories = false;
    records[static_cast<std::size_t>(rep)] = run(options);
  });

  auto out = open_output(out_path);
  json config{{"subcommand", "simulate"}, {"steps", steps},          {"seed", seed},
              {"replicas", replicas},     {"tracked", tracked},      {"checkpoint_ratio", ratio},
              {"out", out_path}};
  out << json{{"header", make_header(params, std::move(config))}}.dump() << "\n";
  for (int rep = 0; rep < replicas; ++rep) {
    const TrajectoryRecord& rec = records[static_cast<std::size_t>(rep)];
    for (const CheckpointRow& row : rec.checkpoints) {
      json line = checkpoint_to_json(rec, row);
      line["replica"] = rep;
      out << line.dump() << "\n";
    }
  }

  json replica_summaries = json::array();
  for (int rep = 0; rep < replicas; ++rep) {
    const TrajectoryRecord& rec = records[static_cast<std::size_t>(rep)];
    const CheckpointRow& last = rec.checkpoints.back();
    replica_summaries.push_back(
        {{"replica", rep},
         {"branch_counts",
          {{"new_pref", rec.branch_counts[0]},
           {"new_uniform", rec.branch_counts[1]},
           {"old_pref", rec.branch_counts[2]},
           {"old_uniform", rec.branch_counts[3]}}},
         {"final", checkpoint_to_json(rec, last)},
         {"asymptotics", asymptotics_json(rec)}});
  }
  out << json{{"summary", {{"steps", steps}, {"replicas", std::move(replica_summaries)}}}}.dump()
      << "\n";
  out << json{{"timing", {{"runtime_seconds", now_seconds() - t0}}}}.dump() << "\n";
  if (!out.good()) throw IoError("write failed on " + out_path);
  if (!gnuplot_path.empty()) write_gnuplot_stub(gnuplot_path, out_path);
  return 0;
}

int cmd_verify(const VerifyOptions& options, const ModelParams& params,
               const std::string& out_path) {
  VerifyOptions opts = options;
  opts.params = params;
  const double t0 = now_seconds();
  const std::vector<CheckResult> results = run_battery(opts);

  json checks = json::array();
  for (const CheckResult& r : results) {
    json c{{"name", r.name},       {"pass", r.pass},           {"hard", r.hard},
           {"statistic", r.statistic}, {"tolerance", r.tolerance}, {"note", r.note}};
    c["p_value"] = std::isnan(r.p_value) ? json(nullptr) : json(r.p_value);
    checks.push_back(std::move(c));
  }
  json config{{"subcommand", "verify"},
              {"seed", opts.seed},
              {"audit_steps", opts.audit_steps},
              {"stat_steps", opts.stat_steps},
              {"replicas", opts.replicas},
              {"oracle_states", opts.oracle_states},
              {"ks", opts.ks},
              {"only", opts.only},
              {"corrupt_b_table", opts.corrupt_b_table}};
  const bool passed = battery_passed(results);
  json report{{"header", make_header(params, std::move(config))},
              {"checks", std::move(checks)},
              {"passed", passed},
              {"runtime_seconds", now_seconds() - t0}};

  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    auto out = open_output(out_path);
    out << report.dump(2) << "\n";
    if (!out.good()) throw IoError("write failed on " + out_path);
  }
  for (const CheckResult& r : results) {
    std::cerr << (r.pass ? "[pass] " : "[FAIL] ") << r.name << "  statistic=" << r.statistic
              << " tolerance=" << r.tolerance << "\n";
  }
  return passed ? 0 : 1;
}

int cmd_oracle_check(const ModelParams& params, int states, std::int64_t v_cap,
                     std::int64_t max_steps, std::uint64_t seed, const std::string& out_path) {
  warn_if_alpha_zero(params);
  const Coefficients coeffs = derive_coefficients(params);
  RngStream rng(seed, 0);
  json rows = json::array();
  bool ok = true;
  for (int i = 0; i < states; ++i) {
    const GraphState state = random_reachable_state(params, v_cap, max_steps, rng);
    const TransitionDistribution dist = transition_distribution(state, v_cap);
    const double mass_error = std::fabs(dist.total_mass() - 1.0);
    double max_tpi = 0.0, max_degree_gap = 0.0;
    double min_r = std::numeric_limits<double>::infinity();
    double max_r_excess = -std::numeric_limits<double>::infinity();
    for (const VertexRecord& v : state.vertices()) {
      max_tpi = std::max(max_tpi, std::fabs(marginal_participation(dist, v.label) -
                                            participation_probability(state, v.label, coeffs)));
      max_degree_gap =
          std::max(max_degree_gap, std::fabs(expected_degree_next_closed(state, v.label, coeffs) -
                                             expected_degree_next_enum(state, v.label, v_cap)));
      const Remainder rem = remainder_R(state, v.label, coeffs);
      min_r = std::min(min_r, rem.value);
      max_r_excess = std::max(max_r_excess, rem.value - rem.bound);
    }
    const bool state_ok =
        mass_error <= 1e-12 && max_tpi <= 1e-12 && max_degree_gap <= 1e-10 &&
        min_r >= -1e-12 && max_r_excess <= 1e-12;
    ok = ok && state_ok;
    rows.push_back({{"state", i},
                    {"n", state.step()},
                    {"V", state.vertex_count()},
                    {"outcomes", dist.outcomes.size()},
                    {"mass_error", mass_error},
                    {"max_participation_error", max_tpi},
                    {"max_degree_gap", max_degree_gap},
                    {"min_R", min_r},
                    {"max_R_minus_bound", max_r_excess},
                    {"ok", state_ok}});
  }
  json config{{"subcommand", "oracle-check"}, {"states", states}, {"v_cap", v_cap},
              {"max_steps", max_steps},       {"seed", seed}};
  json report{{"header", make_header(params, std::move(config))},
              {"states", std::move(rows)},
              {"passed", ok}};
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    auto out = open_output(out_path);
    out << report.dump(2) << "\n";
    if (!out.good()) throw IoError("write failed on " + out_path);
  }
  return ok ? 0 : 1;
}

int cmd_sweep(const std::vector<int>& n_grid, const std::vector<double>& p_grid,
              const std::vector<double>& q_grid, const std::vector<double>& r_grid,
              std::int64_t steps, int replicas, std::uint64_t seed, int jobs,
              std::int64_t max_cells, const std::string& out_path) {
  if (steps < 100) throw InvalidParams("--steps must be at least 100 for a sweep");
  if (replicas < 1) throw InvalidParams("--replicas must be at least 1");
  const std::int64_t cells = static_cast<std::int64_t>(n_grid.size()) *
                             static_cast<std::int64_t>(p_grid.size()) *
                             static_cast<std::int64_t>(q_grid.size()) *
                             static_cast<std::int64_t>(r_grid.size());
  if (cells == 0) throw InvalidParams("sweep grid is empty");
  if (cells > max_cells) {
    throw InvalidParams("sweep grid has " + std::to_string(cells) + " cells, cap is " +
                        std::to_string(max_cells) + " (raise --max-cells)");
  }

  std::vector<ModelParams> grid;
  for (int n : n_grid) {
    for (double p : p_grid) {
      for (double q : q_grid) {
        for (double r : r_grid) {
          ModelParams cell{n, p, q, r};
          validate(cell);
          grid.push_back(cell);
        }
      }
    }
  }

  auto out = open_output(out_path);
  json config{{"subcommand", "sweep"}, {"steps", steps},   {"replicas", replicas},
              {"seed", seed},          {"cells", cells},   {"out", out_path}};
  out << "# " << make_header(grid.front(), std::move(config)).dump() << "\n";
  out << "N,p,q,r,alpha,alpha2_over_alpha,slope_W,slope_D,ratio_DW,V_over_pn\n";

  const std::int64_t window_lo = std::max<std::int64_t>(steps / 100, 10);
  for (const ModelParams& cell : grid) {
    const Coefficients coeffs = derive_coefficients(cell);
    std::vector<double> slope_w(static_cast<std::size_t>(replicas));
    std::vector<double> slope_d(static_cast<std::size_t>(replicas));
    std::vector<double> ratio(static_cast<std::size_t>(replicas));
    std::vector<double> v_over_pn(static_cast<std::size_t>(replicas));
    parallel_for(replicas, jobs, [&](std::int64_t rep) {
      RunOptions options;
      options.params = cell;
      options.steps = steps;
      options.tracked_labels = {0};
      options.seed = seed;
      options.stream = static_cast<std::uint64_t>(rep);
      options.record_histories = false;
      const TrajectoryRecord rec = run(options);
      std::vector<std::pair<std::int64_t, double>> w_series, d_series;
      for (const CheckpointRow& row : rec.checkpoints) {
        if (row.n < 1) continue;
        w_series.emplace_back(row.n, static_cast<double>(row.tracked_weight[0]));
        d_series.emplace_back(row.n, static_cast<double>(row.tracked_degree[0]));
      }
      const auto i = static_cast<std::size_t>(rep);
      slope_w[i] = estimate_exponent(w_series, window_lo, steps).slope;
      slope_d[i] = estimate_exponent(d_series, window_lo, steps).slope;
      const CheckpointRow& last = rec.checkpoints.back();
      ratio[i] = static_cast<double>(last.tracked_degree[0]) /
                 static_cast<double>(last.tracked_weight[0]);
      v_over_pn[i] =
          static_cast<double>(last.vertex_count) / (cell.p * static_cast<double>(steps));
    });
    auto mean = [&](const std::vector<double>& xs) {
      double s = 0.0;
      for (double x : xs) s += x;
      return s / static_cast<double>(xs.size());
    };
    const bool asymptotics = coeffs.alpha > 0.0;
    out << cell.N << ',' << fmt17(cell.p) << ',' << fmt17(cell.q) << ',' << fmt17(cell.r) << ','
        << fmt17(coeffs.alpha) << ','
        << (asymptotics ? fmt17(coeffs.alpha2 / coeffs.alpha) : "NA") << ','
        << (asymptotics ? fmt17(mean(slope_w)) : "NA") << ','
        << (asymptotics ? fmt17(mean(slope_d)) : "NA") << ','
        << (asymptotics ? fmt17(mean(ratio)) : "NA") << ',' << fmt17(mean(v_over_pn)) << "\n";
  }
  if (!out.good()) throw IoError("write failed on " + out_path);
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"N-interactions random graph simulator and verification harness"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  int exit_code = 0;

  // simulate
  auto* sim = app.add_subcommand("simulate", "run replica trajectories, write JSONL series");
  ParamOptions sim_params;
  sim_params.attach(*sim);
  std::int64_t sim_steps = 10000;
  std::uint64_t sim_seed = 42;
  int sim_replicas = 1;
  int sim_jobs = default_jobs();
  double sim_ratio = 1.1;
  std::vector<VertexLabel> sim_track{0, 1};
  std::string sim_out;
  std::string sim_gnuplot;
  sim->add_option("--steps", sim_steps, "evolution steps per replica");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--replicas", sim_replicas, "independent trajectories (streams 0..k-1)");
  sim->add_option("--replica", sim_replicas, "alias of --replicas")->excludes("--replicas");
  sim->add_option("--track", sim_track, "vertex labels to track")->delimiter(',');
  sim->add_option("--checkpoint-ratio", sim_ratio, "geometric checkpoint spacing");
  sim->add_option("--jobs", sim_jobs, "worker threads (default NCSIM_JOBS or cores)");
  sim->add_option("--out", sim_out, "output JSONL path")->required();
  sim->add_option("--gnuplot-stub", sim_gnuplot, "also write a gnuplot script for the series");
  sim->callback([&] {
    exit_code = cmd_simulate(sim_params.resolve(), sim_steps, sim_seed, sim_replicas, sim_track,
                             sim_ratio, sim_out, sim_gnuplot, sim_jobs);
  });

  // verify
  auto* ver = app.add_subcommand("verify", "run the audit battery, emit a JSON report");
  ParamOptions ver_params;
  ver_params.attach(*ver);
  VerifyOptions ver_opts;
  ver_opts.jobs = default_jobs();
  bool fresh_seed = false;
  std::string corrupt_target;
  std::string ver_out;
  ver->add_option("--steps", ver_opts.audit_steps, "audit trajectory length");
  ver->add_option("--stat-steps", ver_opts.stat_steps, "statistical-check trajectory length");
  ver->add_option("--asym-n", ver_opts.asym_n, "sequence asymptotics horizon");
  ver->add_option("--oracle-states", ver_opts.oracle_states, "random small states to enumerate");
  ver->add_option("--v-cap", ver_opts.oracle_v_cap, "vertex cap for enumeration");
  ver->add_option("--replicas", ver_opts.replicas, "ensemble size for statistical checks");
  ver->add_option("--gof-draws", ver_opts.gof_draws, "draws for sampler goodness-of-fit");
  ver->add_option("--k", ver_opts.ks, "rising-binomial orders to audit")->delimiter(',');
  ver->add_option("--seed", ver_opts.seed, "RNG seed (fixed so CI is deterministic)");
  ver->add_flag("--fresh-seed", fresh_seed, "draw the seed from the OS instead");
  ver->add_option("--jobs", ver_opts.jobs, "worker threads");
  ver->add_option("--only", ver_opts.only, "substring filters on check names")->delimiter(',');
  ver->add_option("--corrupt", corrupt_target, "fault injection: 'b-table' (negative control)");
  ver->add_option("--out", ver_out, "report path (default stdout)");
  ver->callback([&] {
    if (!corrupt_target.empty()) {
      if (corrupt_target != "b-table") {
        throw InvalidParams("unknown --corrupt target '" + corrupt_target +
                            "' (supported: b-table)");
      }
      ver_opts.corrupt_b_table = true;
    }
    if (fresh_seed) ver_opts.seed = std::random_device{}();
    exit_code = cmd_verify(ver_opts, ver_params.resolve(), ver_out);
  });

  // oracle-check
  auto* ora = app.add_subcommand("oracle-check", "per-state enumeration residuals as JSON");
  ParamOptions ora_params;
  ora_params.attach(*ora);
  int ora_states = 50;
  std::int64_t ora_v_cap = kDefaultEnumerationCap;
  std::int64_t ora_max_steps = 40;
  std::uint64_t ora_seed = 42;
  std::string ora_out;
  ora->add_option("--states", ora_states, "random reachable states to audit");
  ora->add_option("--v-cap", ora_v_cap, "enumeration vertex cap");
  ora->add_option("--max-steps", ora_max_steps, "max evolution steps per state");
  ora->add_option("--seed", ora_seed, "RNG seed");
  ora->add_option("--out", ora_out, "report path (default stdout)");
  ora->callback([&] {
    exit_code = cmd_oracle_check(ora_params.resolve(), ora_states, ora_v_cap, ora_max_steps,
                                 ora_seed, ora_out);
  });

  // sweep
  auto* swp = app.add_subcommand("sweep", "parameter-grid summary CSV");
  std::vector<int> swp_n{3};
  std::vector<double> swp_p{0.5}, swp_q{0.3, 0.5, 0.8}, swp_r{0.3, 0.5, 0.8};
  std::int64_t swp_steps = 20000;
  int swp_replicas = 4;
  std::uint64_t swp_seed = 42;
  int swp_jobs = default_jobs();
  std::int64_t swp_max_cells = 200;
  std::string swp_out;
  swp->add_option("--N-grid", swp_n, "clique sizes")->delimiter(',');
  swp->add_option("--p-grid", swp_p, "p values")->delimiter(',');
  swp->add_option("--q-grid", swp_q, "q values")->delimiter(',');
  swp->add_option("--r-grid", swp_r, "r values")->delimiter(',');
  swp->add_option("--steps", swp_steps, "steps per trajectory");
  swp->add_option("--replicas", swp_replicas, "trajectories per cell");
  swp->add_option("--seed", swp_seed, "RNG seed");
  swp->add_option("--jobs", swp_jobs, "worker threads");
  swp->add_option("--max-cells", swp_max_cells, "grid size cap");
  swp->add_option("--out", swp_out, "output CSV path")->required();
  swp->callback([&] {
    exit_code = cmd_sweep(swp_n, swp_p, swp_q, swp_r, swp_steps, swp_replicas, swp_seed, swp_jobs,
                          swp_max_cells, swp_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const InvalidParams& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}

}  // namespace ncsim
