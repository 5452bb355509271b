#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ncsim/evolution.hpp"

namespace ncsim {

double gamma_fn(double x);

// b[n,k] = prod_{i=1..n} (1 + alpha*k/i)^-1, accumulated in log space;
// b[0,k] = 1 and b[n,k]*n^{k*alpha} -> Gamma(1+k*alpha).
double b_value(std::int64_t n, int k, double alpha);

// e_n = prod_{i=1..n} (1 - alpha/i)^-1; needs alpha < 1 (the i=1 factor
// blows up at alpha = 1). e_n * n^-alpha -> Gamma(1-alpha).
double e_value(std::int64_t n, double alpha);

// Precomputed b (for a fixed set of k) and e tables over 0..n_max.
class SequenceCache {
 public:
  SequenceCache(double alpha, std::vector<int> ks, std::int64_t n_max);

  double alpha() const { return alpha_; }
  std::int64_t n_max() const { return n_max_; }
  double b(std::int64_t n, int k) const;
  double e(std::int64_t n) const;  // throws DegenerateSequence when alpha >= 1

  // Negative-control fault injection: multiplies b[n,k] by (1+rel_step)^(n-from_n+1)
  // for n >= from_n, so every later one-step ratio is wrong.
  void corrupt_b(double rel_step, std::int64_t from_n);

 private:
  std::size_t k_slot(int k) const;

  double alpha_;
  std::int64_t n_max_;
  std::vector<int> ks_;
  std::vector<std::vector<double>> b_;
  std::vector<double> e_;
  bool e_valid_ = false;
};

// d[n,k,j] = -sum_{i=1..n-1} b[i+1,k] * (beta*p/V_i) * C(W[i,j]+k-1, k-1)
// for every n in 0..steps, built from the recorded V and W histories.
// Before the vertex exists W[i,j] = 0 and the binomial is read literally
// (C(k-1,k-1) = 1); the pre-birth convention cancels out of every audited
// difference.
std::vector<double> d_series(const TrajectoryRecord& trajectory, int k, VertexLabel j,
                             const SequenceCache& cache);

double d_value(const TrajectoryRecord& trajectory, std::int64_t n, int k, VertexLabel j);

// Z[n,k,j] = (b[n,k] C(W[n,j]+k-1, k) + d[n,k,j]) * I[l,j].
double z_value(const TrajectoryRecord& trajectory, std::int64_t n, int k, VertexLabel j,
               std::int64_t l);

// E[Z[n+1,k,j] | step n] - Z[n,k,j], the one-step martingale defect; zero in
// exact arithmetic for n >= max(birth, 1). The compensator sum starts at
// i = 1, so the 0 -> 1 step of an initial vertex carries an uncompensated
// b[1,k]*p*beta/V_0 term and sits outside the martingale's domain.
double martingale_residual(const TrajectoryRecord& trajectory, std::int64_t n, int k,
                           VertexLabel j);

// E[e_{n+1}/(W[n+1,j]-1) | step n] - e_n/(W[n,j]-1); nonpositive in exact
// arithmetic. Throws DegenerateWeight when W[n,j] <= 1.
double supermartingale_slack(const TrajectoryRecord& trajectory, std::int64_t n,
                             VertexLabel j);

struct MartingaleAuditRow {
  std::int64_t n = 0;
  double z = 0.0;
  double expected_next = 0.0;
  double residual = 0.0;
  double relative_residual = 0.0;  // |residual| / (|z| + 1)
};

struct MartingaleAudit {
  int k = 0;
  VertexLabel j = 0;
  std::int64_t birth = 0;
  std::int64_t audited = 0;
  double max_relative_residual = 0.0;
  std::vector<MartingaleAuditRow> rows;  // filled when keep_rows
};

MartingaleAudit audit_martingale(const TrajectoryRecord& trajectory, int k, VertexLabel j,
                                 const SequenceCache& cache, bool keep_rows = false);

struct SupermartingaleAuditRow {
  std::int64_t n = 0;
  double y = 0.0;
  double expected_next = 0.0;
  double slack = 0.0;
};

struct SupermartingaleAudit {
  VertexLabel j = 0;
  std::int64_t birth = 0;
  std::int64_t audited = 0;
  std::int64_t skipped_weight1 = 0;  // steps with W[n,j] = 1, where Y is undefined
  double max_slack = 0.0;
  std::vector<SupermartingaleAuditRow> rows;
};

SupermartingaleAudit audit_supermartingale(const TrajectoryRecord& trajectory, VertexLabel j,
                                           const SequenceCache& cache, bool keep_rows = false);

struct ExponentFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  std::int64_t points = 0;
};

// Least-squares slope of log(value) on log(n) over n in [n_lo, n_hi].
// Throws InsufficientData when fewer than 10 points fall in the window or any
// windowed value is nonpositive.
ExponentFit estimate_exponent(const std::vector<std::pair<std::int64_t, double>>& series,
                              std::int64_t n_lo, std::int64_t n_hi);

struct RatioReport {
  std::vector<std::int64_t> ns;
  std::vector<std::vector<double>> tracked_ratio;  // D/W per tracked label (NaN before birth)
  std::vector<double> max_ratio;                   // maxD/maxW
  double limit = 0.0;                              // alpha2/alpha, NaN when alpha = 0
  bool degenerate = false;                         // alpha2 = 0: degrees freeze
};

RatioReport ratio_report(const TrajectoryRecord& trajectory);

struct GammaMuReport {
  std::vector<std::int64_t> ns;                 // checkpoints with n >= 1
  std::vector<std::vector<double>> gamma_hat;   // Gamma(1+a) W[n,j] / n^a per tracked label
  std::vector<double> mu_hat;                   // Gamma(1+a) maxW / n^a
  std::vector<double> gamma_drift;              // last value / value a decade earlier
  double mu_drift = 0.0;
};

GammaMuReport gamma_mu_estimates(const TrajectoryRecord& trajectory);

struct SEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double series_sum = 0.0;  // sum_{j=m..n} j^{-alpha k}
  double ratio = 0.0;       // estimate / series_sum
  int replicas = 0;
};

// Monte Carlo estimate of sum_{j=m..n} E(b[n,k] C(W[n,j]+k-1,k) I[n,j]) over
// independent replicas; k = 0 degenerates to counting existing labels in
// [m, n]. No pass/fail bound is attached -- the comparison constant is not
// pinned down -- so callers get the estimate, its standard error, and the
// ratio to the reference series.
SEstimate s_estimator(const ModelParams& params, std::int64_t m, std::int64_t n, int k,
                      int replicas, std::uint64_t seed, int jobs = 1);

}  // namespace ncsim
