#include "ncsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ncsim/errors.hpp"
#include "ncsim/math_util.hpp"
#include "ncsim/parallel.hpp"

namespace ncsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_histories(const TrajectoryRecord& t) {
  if (!t.has_histories) throw MissingHistory("trajectory recorded no per-step histories");
}

void require_step_in_range(const TrajectoryRecord& t, std::int64_t n) {
  if (n < 0 || n > t.steps) {
    throw MissingHistory("step " + std::to_string(n) + " outside recorded range [0, " +
                         std::to_string(t.steps) + "]");
  }
}

double two_point_participation(const TrajectoryRecord& t, std::int64_t n, std::int64_t w) {
  return t.coeffs.alpha * static_cast<double>(w) / (static_cast<double>(n) + 1.0) +
         t.params.p * t.coeffs.beta / static_cast<double>(t.v_history[static_cast<std::size_t>(n)]);
}

}  // namespace

double gamma_fn(double x) { return std::tgamma(x); }

double b_value(std::int64_t n, int k, double alpha) {
  if (n < 0 || k < 1 || !(alpha >= 0.0)) {
    throw InvalidParams("b[n,k] needs n >= 0, k >= 1, alpha >= 0");
  }
  KahanSum log_sum;
  const double ak = alpha * k;
  for (std::int64_t i = 1; i <= n; ++i) log_sum.add(std::log1p(ak / static_cast<double>(i)));
  return std::exp(-log_sum.value());
}

double e_value(std::int64_t n, double alpha) {
  if (!(alpha >= 0.0) || alpha >= 1.0) {
    throw DegenerateSequence("e_n needs 0 <= alpha < 1 (got " + std::to_string(alpha) + ")");
  }
  if (n < 0) throw InvalidParams("e_n needs n >= 0");
  KahanSum log_sum;
  for (std::int64_t i = 1; i <= n; ++i) log_sum.add(std::log1p(-alpha / static_cast<double>(i)));
  return std::exp(-log_sum.value());
}

SequenceCache::SequenceCache(double alpha, std::vector<int> ks, std::int64_t n_max)
    : alpha_(alpha), n_max_(n_max), ks_(std::move(ks)) {
  if (!(alpha_ >= 0.0)) throw InvalidParams("SequenceCache needs alpha >= 0");
  if (n_max_ < 0) throw InvalidParams("SequenceCache needs n_max >= 0");
  b_.reserve(ks_.size());
  for (const int k : ks_) {
    if (k < 1) throw InvalidParams("SequenceCache k values must be >= 1");
    std::vector<double> table(static_cast<std::size_t>(n_max_) + 1);
    table[0] = 1.0;
    KahanSum log_sum;
    const double ak = alpha_ * k;
    for (std::int64_t i = 1; i <= n_max_; ++i) {
      log_sum.add(std::log1p(ak / static_cast<double>(i)));
      table[static_cast<std::size_t>(i)] = std::exp(-log_sum.value());
    }
    b_.push_back(std::move(table));
  }
  e_valid_ = alpha_ < 1.0;
  if (e_valid_) {
    e_.resize(static_cast<std::size_t>(n_max_) + 1);
    e_[0] = 1.0;
    KahanSum log_sum;
    for (std::int64_t i = 1; i <= n_max_; ++i) {
      log_sum.add(std::log1p(-alpha_ / static_cast<double>(i)));
      e_[static_cast<std::size_t>(i)] = std::exp(-log_sum.value());
    }
  }
}

std::size_t SequenceCache::k_slot(int k) const {
  for (std::size_t i = 0; i < ks_.size(); ++i) {
    if (ks_[i] == k) return i;
  }
  throw InvalidParams("k = " + std::to_string(k) + " not cached");
}

double SequenceCache::b(std::int64_t n, int k) const {
  if (n < 0 || n > n_max_) throw InvalidParams("b cache index out of range");
  return b_[k_slot(k)][static_cast<std::size_t>(n)];
}

double SequenceCache::e(std::int64_t n) const {
  if (!e_valid_) throw DegenerateSequence("e_n undefined for alpha >= 1");
  if (n < 0 || n > n_max_) throw InvalidParams("e cache index out of range");
  return e_[static_cast<std::size_t>(n)];
}

void SequenceCache::corrupt_b(double rel_step, std::int64_t from_n) {
  for (auto& table : b_) {
    double factor = 1.0;
    for (std::int64_t n = std::max<std::int64_t>(from_n, 0); n <= n_max_; ++n) {
      factor *= 1.0 + rel_step;
      table[static_cast<std::size_t>(n)] *= factor;
    }
  }
}

std::vector<double> d_series(const TrajectoryRecord& t, int k, VertexLabel j,
                             const SequenceCache& cache) {
  require_histories(t);
  if (cache.n_max() < t.steps) throw InvalidParams("sequence cache shorter than trajectory");
  const auto& w = t.w_history[t.tracked_slot(j)];
  const double beta_p = t.coeffs.beta * t.params.p;

  std::vector<double> out(static_cast<std::size_t>(t.steps) + 1, 0.0);
  KahanSum sum;
  // d[n] - d[n-1] = -b[n,k] * beta*p/V_{n-1} * C(W[n-1,j]+k-1, k-1)
  for (std::int64_t n = 2; n <= t.steps; ++n) {
    const std::int64_t i = n - 1;
    sum.add(-cache.b(n, k) * beta_p / static_cast<double>(t.v_history[static_cast<std::size_t>(i)]) *
            binom(w[static_cast<std::size_t>(i)] + k - 1, k - 1));
    out[static_cast<std::size_t>(n)] = sum.value();
  }
  return out;
}

double d_value(const TrajectoryRecord& t, std::int64_t n, int k, VertexLabel j) {
  require_step_in_range(t, n);
  const SequenceCache cache(t.coeffs.alpha, {k}, t.steps);
  return d_series(t, k, j, cache)[static_cast<std::size_t>(n)];
}

double z_value(const TrajectoryRecord& t, std::int64_t n, int k, VertexLabel j, std::int64_t l) {
  require_step_in_range(t, n);
  if (t.birth_of(j) > l) return 0.0;  // I[l,j] = 0
  const SequenceCache cache(t.coeffs.alpha, {k}, t.steps);
  const auto& w = t.w_history[t.tracked_slot(j)];
  const auto d = d_series(t, k, j, cache);
  return cache.b(n, k) * binom(w[static_cast<std::size_t>(n)] + k - 1, k) +
         d[static_cast<std::size_t>(n)];
}

MartingaleAudit audit_martingale(const TrajectoryRecord& t, int k, VertexLabel j,
                                 const SequenceCache& cache, bool keep_rows) {
  require_histories(t);
  MartingaleAudit audit;
  audit.k = k;
  audit.j = j;
  audit.birth = t.birth_of(j);

  const auto& w = t.w_history[t.tracked_slot(j)];
  const auto d = d_series(t, k, j, cache);

  // the compensator sum starts at i = 1, so the 0 -> 1 step of an initial
  // vertex has no compensating term; the martingale property starts at
  // max(birth, 1)
  for (std::int64_t n = std::max<std::int64_t>(audit.birth, 1); n < t.steps; ++n) {
    const std::int64_t wn = w[static_cast<std::size_t>(n)];
    const double pi = two_point_participation(t, n, wn);
    const double rising = (1.0 - pi) * binom(wn + k - 1, k) + pi * binom(wn + k, k);
    const double z = cache.b(n, k) * binom(wn + k - 1, k) + d[static_cast<std::size_t>(n)];
    const double expected_next = cache.b(n + 1, k) * rising + d[static_cast<std::size_t>(n) + 1];
    const double residual = expected_next - z;
    const double rel = std::fabs(residual) / (std::fabs(z) + 1.0);
    ++audit.audited;
    audit.max_relative_residual = std::max(audit.max_relative_residual, rel);
    if (keep_rows) audit.rows.push_back({n, z, expected_next, residual, rel});
  }
  return audit;
}

double martingale_residual(const TrajectoryRecord& t, std::int64_t n, int k, VertexLabel j) {
  require_step_in_range(t, n);
  if (n >= t.steps) throw MissingHistory("one-step residual needs step n+1 on record");
  const SequenceCache cache(t.coeffs.alpha, {k}, t.steps);
  const auto audit = audit_martingale(t, k, j, cache, true);
  for (const auto& row : audit.rows) {
    if (row.n == n) return row.residual;
  }
  throw MissingHistory("no martingale step at n = " + std::to_string(n) +
                       " (the property starts at max(birth, 1))");
}

SupermartingaleAudit audit_supermartingale(const TrajectoryRecord& t, VertexLabel j,
                                           const SequenceCache& cache, bool keep_rows) {
  require_histories(t);
  if (cache.n_max() < t.steps) throw InvalidParams("sequence cache shorter than trajectory");
  SupermartingaleAudit audit;
  audit.j = j;
  audit.birth = t.birth_of(j);
  audit.max_slack = -std::numeric_limits<double>::infinity();

  const auto& w = t.w_history[t.tracked_slot(j)];
  for (std::int64_t n = audit.birth; n < t.steps; ++n) {
    const std::int64_t wn = w[static_cast<std::size_t>(n)];
    if (wn <= 1) {
      ++audit.skipped_weight1;  // Y undefined at W = 1; flagged, not audited
      continue;
    }
    const double pi = two_point_participation(t, n, wn);
    const double y = cache.e(n) / static_cast<double>(wn - 1);
    const double expected_next =
        cache.e(n + 1) *
        (pi / static_cast<double>(wn) + (1.0 - pi) / static_cast<double>(wn - 1));
    const double slack = expected_next - y;
    ++audit.audited;
    audit.max_slack = std::max(audit.max_slack, slack);
    if (keep_rows) audit.rows.push_back({n, y, expected_next, slack});
  }
  if (audit.audited == 0) audit.max_slack = 0.0;
  return audit;
}

double supermartingale_slack(const TrajectoryRecord& t, std::int64_t n, VertexLabel j) {
  require_step_in_range(t, n);
  if (n >= t.steps) throw MissingHistory("one-step slack needs step n+1 on record");
  const auto& w = t.w_history[t.tracked_slot(j)];
  if (w[static_cast<std::size_t>(n)] <= 1) {
    throw DegenerateWeight("supermartingale undefined at W[n,j] <= 1");
  }
  const SequenceCache cache(t.coeffs.alpha, {1}, t.steps);
  const auto audit = audit_supermartingale(t, j, cache, true);
  for (const auto& row : audit.rows) {
    if (row.n == n) return row.slack;
  }
  throw MissingHistory("no audited step at n = " + std::to_string(n));
}

ExponentFit estimate_exponent(const std::vector<std::pair<std::int64_t, double>>& series,
                              std::int64_t n_lo, std::int64_t n_hi) {
  std::vector<double> xs, ys;
  for (const auto& [n, value] : series) {
    if (n < n_lo || n > n_hi) continue;
    if (!(value > 0.0)) {
      throw InsufficientData("nonpositive value at n = " + std::to_string(n) +
                             " inside the fit window");
    }
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(value));
  }
  const auto m = static_cast<std::int64_t>(xs.size());
  if (m < 10) {
    throw InsufficientData("need at least 10 checkpoints in the window, have " +
                           std::to_string(m));
  }
  double x_mean = 0.0, y_mean = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    x_mean += xs[static_cast<std::size_t>(i)];
    y_mean += ys[static_cast<std::size_t>(i)];
  }
  x_mean /= static_cast<double>(m);
  y_mean /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const double dx = xs[static_cast<std::size_t>(i)] - x_mean;
    sxx += dx * dx;
    sxy += dx * (ys[static_cast<std::size_t>(i)] - y_mean);
  }
  ExponentFit fit;
  fit.points = m;
  fit.slope = sxy / sxx;
  double ss_res = 0.0;
  const double intercept = y_mean - fit.slope * x_mean;
  for (std::int64_t i = 0; i < m; ++i) {
    const double e = ys[static_cast<std::size_t>(i)] - intercept -
                     fit.slope * xs[static_cast<std::size_t>(i)];
    ss_res += e * e;
  }
  fit.stderr_ = std::sqrt(ss_res / static_cast<double>(m - 2) / sxx);
  return fit;
}

RatioReport ratio_report(const TrajectoryRecord& t) {
  RatioReport report;
  report.limit = t.coeffs.alpha > 0.0 ? t.coeffs.alpha2 / t.coeffs.alpha : kNaN;
  report.degenerate = t.coeffs.alpha2 == 0.0;
  report.tracked_ratio.assign(t.tracked_labels.size(), {});
  for (const auto& row : t.checkpoints) {
    report.ns.push_back(row.n);
    report.max_ratio.push_back(static_cast<double>(row.max_degree) /
                               static_cast<double>(row.max_weight));
    for (std::size_t i = 0; i < t.tracked_labels.size(); ++i) {
      const std::int64_t w = row.tracked_weight[i];
      report.tracked_ratio[i].push_back(
          w > 0 ? static_cast<double>(row.tracked_degree[i]) / static_cast<double>(w) : kNaN);
    }
  }
  return report;
}

GammaMuReport gamma_mu_estimates(const TrajectoryRecord& t) {
  GammaMuReport report;
  const double alpha = t.coeffs.alpha;
  const double scale = alpha > 0.0 ? gamma_fn(1.0 + alpha) : kNaN;
  report.gamma_hat.assign(t.tracked_labels.size(), {});
  for (const auto& row : t.checkpoints) {
    if (row.n < 1) continue;
    const double na = std::pow(static_cast<double>(row.n), alpha);
    report.ns.push_back(row.n);
    report.mu_hat.push_back(scale * static_cast<double>(row.max_weight) / na);
    for (std::size_t i = 0; i < t.tracked_labels.size(); ++i) {
      report.gamma_hat[i].push_back(scale * static_cast<double>(row.tracked_weight[i]) / na);
    }
  }
  report.gamma_drift.assign(t.tracked_labels.size(), kNaN);
  report.mu_drift = kNaN;
  if (!report.ns.empty()) {
    const std::int64_t n_last = report.ns.back();
    std::size_t ref = report.ns.size();
    for (std::size_t i = 0; i < report.ns.size(); ++i) {
      if (10 * report.ns[i] >= n_last) {
        ref = i;
        break;
      }
    }
    if (ref < report.ns.size() - 1) {
      const auto drift = [&](const std::vector<double>& series) {
        return series[ref] > 0.0 ? series.back() / series[ref] : kNaN;
      };
      report.mu_drift = drift(report.mu_hat);
      for (std::size_t i = 0; i < report.gamma_hat.size(); ++i) {
        report.gamma_drift[i] = drift(report.gamma_hat[i]);
      }
    }
  }
  return report;
}

SEstimate s_estimator(const ModelParams& params, std::int64_t m, std::int64_t n, int k,
                      int replicas, std::uint64_t seed, int jobs) {
  if (m < 1 || m > n) throw InvalidParams("s_estimator needs 1 <= m <= n");
  if (replicas < 2) throw InvalidParams("s_estimator needs at least 2 replicas");
  if (k < 0) throw InvalidParams("s_estimator needs k >= 0");
  const Coefficients coeffs = derive_coefficients(params);
  if (k >= 1 && !(coeffs.alpha > 0.0)) {
    throw InvalidParams("s_estimator needs alpha > 0 for k >= 1");
  }
  const double b_n = k == 0 ? 1.0 : b_value(n, k, coeffs.alpha);

  std::vector<double> values(static_cast<std::size_t>(replicas), 0.0);
  parallel_for(replicas, jobs, [&](std::int64_t rep) {
    GraphState state(params);
    state.reserve_for_steps(n);
    RngStream rng(seed, static_cast<std::uint64_t>(rep));
    StepOutcome out;
    for (std::int64_t i = 0; i < n; ++i) step_into(state, rng, out);
    KahanSum inner;
    const std::int64_t j_hi = std::min<std::int64_t>(n, state.born_count());
    for (std::int64_t j = m; j <= j_hi; ++j) {
      const std::int64_t w = state.vertex(j).weight;
      inner.add(k == 0 ? 1.0 : b_n * binom(w + k - 1, k));
    }
    values[static_cast<std::size_t>(rep)] = inner.value();
  });

  SEstimate out;
  out.replicas = replicas;
  KahanSum mean_sum;
  for (double v : values) mean_sum.add(v);
  out.estimate = mean_sum.value() / static_cast<double>(replicas);
  KahanSum var_sum;
  for (double v : values) var_sum.add((v - out.estimate) * (v - out.estimate));
  out.stderr_ = std::sqrt(var_sum.value() / static_cast<double>(replicas - 1) /
                          static_cast<double>(replicas));
  KahanSum series;
  for (std::int64_t j = m; j <= n; ++j) {
    series.add(std::pow(static_cast<double>(j), -coeffs.alpha * k));
  }
  out.series_sum = series.value();
  out.ratio = out.estimate / out.series_sum;
  return out;
}

}  // namespace ncsim
