#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ncsim/graph_state.hpp"

namespace ncsim {

// One evolution step. A single uniform draw against the cumulative thresholds
// (pr, p, p+(1-p)q, 1) picks the branch, so replays stay simple:
//   p*r         preferential (N-1)-clique joined by a newborn
//   p*(1-r)     uniform (N-1)-subset of old vertices joined by a newborn
//   (1-p)*q     preferential N-clique re-interaction
//   (1-p)(1-q)  uniform N-subset interaction
StepOutcome step(GraphState& state, RngStream& rng);

// Buffer-reusing variant; long loops pass the same outcome back in.
void step_into(GraphState& state, RngStream& rng, StepOutcome& outcome);

// Exact conditional probability that vertex j takes part in the next
// interaction: alpha*W[n,j]/(n+1) + p*beta/V_n.
double participation_probability(const GraphState& state, VertexLabel j,
                                 const Coefficients& coeffs);

struct CheckpointRow {
  std::int64_t n = 0;
  std::int64_t vertex_count = 0;
  std::int64_t max_weight = 0;
  std::int64_t max_degree = 0;
  std::vector<std::int64_t> tracked_weight;  // aligned with tracked_labels
  std::vector<std::int64_t> tracked_degree;
};

// A recorded trajectory: sampled series at the checkpoints plus, when
// requested, the full per-step V and per-tracked-vertex W/D histories the
// compensator sums need. history index i = state after i steps.
struct TrajectoryRecord {
  ModelParams params;
  Coefficients coeffs;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::int64_t steps = 0;
  std::vector<VertexLabel> tracked_labels;
  std::vector<CheckpointRow> checkpoints;
  std::vector<std::int64_t> v_history;
  std::vector<std::vector<std::int64_t>> w_history;  // per tracked label
  std::vector<std::vector<std::int64_t>> d_history;
  std::array<std::int64_t, 4> branch_counts{};
  bool has_histories = false;

  std::size_t tracked_slot(VertexLabel j) const;     // throws MissingHistory
  // First i with W[i,j] > 0, or steps+1 when j was never born.
  std::int64_t birth_of(VertexLabel j) const;
};

// Geometric checkpoint grid ceil(ratio^k), deduplicated, always containing
// 0 and steps; log-log fits want log-uniform samples.
std::vector<std::int64_t> geometric_checkpoints(std::int64_t steps, double ratio = 1.1);

struct RunOptions {
  ModelParams params;
  std::int64_t steps = 0;
  std::vector<VertexLabel> tracked_labels = {0, 1};
  std::vector<std::int64_t> checkpoints;  // empty -> geometric grid
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool record_histories = true;
};

TrajectoryRecord run(const RunOptions& options);

// Data-section equality (everything except wall-clock side effects).
bool identical_data(const TrajectoryRecord& a, const TrajectoryRecord& b);

}  // namespace ncsim
