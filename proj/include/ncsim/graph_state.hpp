#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ncsim/params.hpp"
#include "ncsim/sampler.hpp"

namespace ncsim {

// One vertex of the evolving graph. The initial complete graph carries labels
// 0, -1, ..., -(N-1); later vertices are labelled 1, 2, ... in birth order.
// weight counts the interactions the vertex has taken part in.
struct VertexRecord {
  VertexLabel label = 0;
  std::int64_t weight = 0;
  std::int64_t degree = 0;
  std::int64_t birth_step = 0;
};

enum class Branch : int { NewPref = 0, NewUniform = 1, OldPref = 2, OldUniform = 3 };

const char* branch_name(Branch b);

struct StepOutcome {
  Branch branch = Branch::OldUniform;
  std::vector<VertexLabel> vertex_set;  // sorted, size N
  std::optional<VertexLabel> born_label;
  std::int64_t new_edges = 0;
  std::vector<int> degree_delta;  // aligned with vertex_set
};

// Positive-weight cliques of one fixed size. A clique absent from the
// registry has weight 0 and can never be drawn preferentially; weight means
// interaction count, not subgraph existence.
class CliqueRegistry {
 public:
  explicit CliqueRegistry(int clique_size) : index_(clique_size) {}

  int clique_size() const { return index_.key_size(); }
  std::uint64_t total_weight() const { return index_.total(); }
  std::size_t entry_count() const { return index_.entry_count(); }

  void increment(std::span<const VertexLabel> key, std::uint64_t delta = 1) {
    index_.increment(key, delta);
  }
  void reserve(std::size_t expected_entries) { index_.reserve(expected_entries); }
  std::uint64_t weight_of(std::span<const VertexLabel> key) const {
    return index_.weight_of(key);
  }
  std::span<const VertexLabel> key_at(std::size_t slot) const { return index_.key_at(slot); }
  std::uint64_t weight_at(std::size_t slot) const { return index_.weight_at(slot); }
  std::span<const VertexLabel> sample(RngStream& rng) const { return index_.sample(rng); }
  const WeightedIndex& index() const { return index_; }

 private:
  WeightedIndex index_;
};

// The evolving graph after n steps: vertex weights/degrees, adjacency, and
// the positive-weight clique registries for sizes N-1 and N. Only those two
// sizes are ever sampled by the dynamics, so no other clique size is tracked.
// Mutated by exactly one evolution thread; no internal locking.
class GraphState {
 public:
  enum class MaxField { Weight, Degree };

  // The initial complete graph: N vertices of weight 1 and degree N-1, its
  // full clique at weight 1 and each of its N sub-cliques at weight 1.
  explicit GraphState(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  int N() const { return params_.N; }
  std::int64_t step() const { return step_; }
  std::int64_t vertex_count() const { return static_cast<std::int64_t>(vertices_.size()); }
  std::int64_t born_count() const { return vertex_count() - params_.N; }
  std::int64_t max_weight() const { return max_weight_; }
  std::int64_t max_degree() const { return max_degree_; }
  std::int64_t weight_sum() const { return weight_sum_; }

  bool exists(VertexLabel label) const;
  const VertexRecord& vertex(VertexLabel label) const;  // throws UnknownVertex
  const std::vector<VertexRecord>& vertices() const { return vertices_; }
  VertexLabel label_at(std::int64_t dense_index) const;
  std::int64_t index_of(VertexLabel label) const;  // throws UnknownVertex
  std::span<const VertexLabel> neighbors(VertexLabel label) const;
  bool adjacent(VertexLabel a, VertexLabel b) const;

  const CliqueRegistry& full_registry() const { return full_; }  // size N
  const CliqueRegistry& sub_registry() const { return sub_; }    // size N-1

  // Capacity hint for a run of the given length: pre-sizes vertex storage and
  // both registries so a long trajectory never rehashes or reallocates.
  void reserve_for_steps(std::int64_t steps);

  // Next newborn enters with weight 0 and degree 0; its birth interaction
  // (applied in the same step) brings it to weight 1, degree N-1.
  VertexLabel create_vertex();

  // Draws all missing edges inside vertex_set, bumps every member's weight,
  // bumps the full clique and its N sub-cliques, advances the step counter.
  StepOutcome apply_interaction(std::span<const VertexLabel> vertex_set,
                                std::optional<VertexLabel> born_label = std::nullopt,
                                std::optional<Branch> branch = std::nullopt);

  // Same, but the caller pre-fills outcome.branch, outcome.born_label and
  // outcome.vertex_set and the buffers are reused; the hot path allocates
  // nothing.
  void apply_interaction_inplace(StepOutcome& outcome);

  // Max of the chosen field over existing vertices with label in
  // [label_lo, label_hi]; 0 when the range holds none.
  std::int64_t windowed_max(VertexLabel label_lo, VertexLabel label_hi, MaxField which) const;

  // Throws std::logic_error naming the first violated invariant. deep=true
  // additionally recomputes every sum, the per-vertex clique-membership
  // identities, adjacency symmetry, and connectivity.
  void check_invariants(bool deep = false) const;

 private:
  friend GraphState snapshot_restore(const ModelParams&, std::int64_t step,
                                     std::vector<VertexRecord>,
                                     const std::vector<std::array<VertexLabel, 2>>&,
                                     const std::vector<std::pair<std::vector<VertexLabel>, std::uint64_t>>&,
                                     const std::vector<std::pair<std::vector<VertexLabel>, std::uint64_t>>&);

  bool adjacent_idx(std::size_t a, std::size_t b) const;

  ModelParams params_;
  std::int64_t step_ = 0;
  std::vector<VertexRecord> vertices_;            // dense order: initials, then newborns
  std::vector<std::vector<VertexLabel>> adjacency_;
  CliqueRegistry full_;
  CliqueRegistry sub_;
  std::int64_t weight_sum_ = 0;
  std::int64_t max_weight_ = 0;
  std::int64_t max_degree_ = 0;
  std::vector<VertexLabel> key_scratch_;
};

// Rebuilds a state from snapshot pieces (used by the JSON import).
GraphState snapshot_restore(
    const ModelParams& params, std::int64_t step, std::vector<VertexRecord> vertices,
    const std::vector<std::array<VertexLabel, 2>>& edges,
    const std::vector<std::pair<std::vector<VertexLabel>, std::uint64_t>>& cliques_full,
    const std::vector<std::pair<std::vector<VertexLabel>, std::uint64_t>>& cliques_sub);

}  // namespace ncsim
