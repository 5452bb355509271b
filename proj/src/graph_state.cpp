#include "ncsim/graph_state.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "ncsim/errors.hpp"

namespace ncsim {

namespace {

// Dense storage order: index i < N holds initial label -i, index N-1+j holds
// newborn label j.
std::int64_t dense_index(VertexLabel label, int n) {
  return label <= 0 ? -label : n - 1 + label;
}

[[noreturn]] void fail(const std::string& what) { throw std::logic_error("invariant violated: " + what); }

}  // namespace

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::NewPref: return "new_pref";
    case Branch::NewUniform: return "new_uniform";
    case Branch::OldPref: return "old_pref";
    case Branch::OldUniform: return "old_uniform";
  }
  return "?";
}

GraphState::GraphState(const ModelParams& params)
    : params_(params), full_(params.N), sub_(params.N - 1) {
  validate_for_dynamics(params_);
  const int n = params_.N;
  vertices_.reserve(static_cast<std::size_t>(n));
  adjacency_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    vertices_.push_back({-static_cast<VertexLabel>(i), 1, n - 1, 0});
    auto& adj = adjacency_[static_cast<std::size_t>(i)];
    adj.reserve(static_cast<std::size_t>(n - 1));
    for (int j = 0; j < n; ++j) {
      if (j != i) adj.push_back(-static_cast<VertexLabel>(j));
    }
  }
  // ascending label order: -(N-1), ..., -1, 0
  std::vector<VertexLabel> key(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) key[static_cast<std::size_t>(i)] = -static_cast<VertexLabel>(n - 1 - i);
  full_.increment(key);
  std::vector<VertexLabel> sub_key(static_cast<std::size_t>(n - 1));
  for (int drop = 0; drop < n; ++drop) {
    int w = 0;
    for (int i = 0; i < n; ++i) {
      if (i != drop) sub_key[static_cast<std::size_t>(w++)] = key[static_cast<std::size_t>(i)];
    }
    sub_.increment(sub_key);
  }
  weight_sum_ = n;
  max_weight_ = 1;
  max_degree_ = n - 1;
}

bool GraphState::exists(VertexLabel label) const {
  if (label <= 0) return -label < params_.N;
  return label <= born_count();
}

std::int64_t GraphState::index_of(VertexLabel label) const {
  if (!exists(label)) {
    throw UnknownVertex("vertex " + std::to_string(label) + " does not exist");
  }
  return dense_index(label, params_.N);
}

VertexLabel GraphState::label_at(std::int64_t dense) const {
  if (dense < 0 || dense >= vertex_count()) {
    throw UnknownVertex("dense index " + std::to_string(dense) + " out of range");
  }
  return dense < params_.N ? -dense : dense - (params_.N - 1);
}

const VertexRecord& GraphState::vertex(VertexLabel label) const {
  return vertices_[static_cast<std::size_t>(index_of(label))];
}

std::span<const VertexLabel> GraphState::neighbors(VertexLabel label) const {
  return adjacency_[static_cast<std::size_t>(index_of(label))];
}

bool GraphState::adjacent_idx(std::size_t a, std::size_t b) const {
  const auto& list_a = adjacency_[a];
  const auto& list_b = adjacency_[b];
  const auto& shorter = list_a.size() <= list_b.size() ? list_a : list_b;
  const VertexLabel target =
      list_a.size() <= list_b.size() ? vertices_[b].label : vertices_[a].label;
  return std::find(shorter.begin(), shorter.end(), target) != shorter.end();
}

bool GraphState::adjacent(VertexLabel a, VertexLabel b) const {
  return adjacent_idx(static_cast<std::size_t>(index_of(a)), static_cast<std::size_t>(index_of(b)));
}

VertexLabel GraphState::create_vertex() {
  const VertexLabel label = born_count() + 1;
  vertices_.push_back({label, 0, 0, step_ + 1});
  adjacency_.emplace_back();
  return label;
}

StepOutcome GraphState::apply_interaction(std::span<const VertexLabel> vertex_set,
                                          std::optional<VertexLabel> born_label,
                                          std::optional<Branch> branch) {
  StepOutcome out;
  out.branch = branch.value_or(born_label ? Branch::NewUniform : Branch::OldUniform);
  out.born_label = born_label;
  out.vertex_set.assign(vertex_set.begin(), vertex_set.end());
  apply_interaction_inplace(out);
  return out;
}

void GraphState::apply_interaction_inplace(StepOutcome& out) {
  const int n = params_.N;
  if (static_cast<int>(out.vertex_set.size()) != n) {
    throw UnknownVertex("interaction set must contain exactly N=" + std::to_string(n) +
                        " labels, got " + std::to_string(out.vertex_set.size()));
  }
  out.new_edges = 0;
  std::sort(out.vertex_set.begin(), out.vertex_set.end());
  out.degree_delta.assign(static_cast<std::size_t>(n), 0);

  std::array<std::size_t, kMaxCliqueSize> idx{};
  bool born_seen = false;
  for (int i = 0; i < n; ++i) {
    const VertexLabel label = out.vertex_set[static_cast<std::size_t>(i)];
    if (i > 0 && label == out.vertex_set[static_cast<std::size_t>(i - 1)]) {
      throw UnknownVertex("duplicate label " + std::to_string(label) + " in interaction set");
    }
    idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(index_of(label));
    born_seen |= out.born_label && label == *out.born_label;
  }
  if (out.born_label && !born_seen) {
    throw UnknownVertex("born label " + std::to_string(*out.born_label) +
                        " not in interaction set");
  }

  // all registry keys are known now; issue their bucket loads before the
  // edge work so the table lines arrive by increment time
  const auto stride = static_cast<std::size_t>(n - 1);
  key_scratch_.resize(static_cast<std::size_t>(n) * stride);
  for (int drop = 0; drop < n; ++drop) {
    int w = 0;
    for (int i = 0; i < n; ++i) {
      if (i != drop) {
        key_scratch_[static_cast<std::size_t>(drop) * stride + static_cast<std::size_t>(w++)] =
            out.vertex_set[static_cast<std::size_t>(i)];
      }
    }
    sub_.index().prefetch(
        std::span<const VertexLabel>(key_scratch_.data() + static_cast<std::size_t>(drop) * stride, stride));
  }
  full_.index().prefetch(out.vertex_set);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::size_t a = idx[static_cast<std::size_t>(i)];
      const std::size_t b = idx[static_cast<std::size_t>(j)];
      if (!adjacent_idx(a, b)) {
        adjacency_[a].push_back(vertices_[b].label);
        adjacency_[b].push_back(vertices_[a].label);
        ++out.degree_delta[static_cast<std::size_t>(i)];
        ++out.degree_delta[static_cast<std::size_t>(j)];
        ++out.new_edges;
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    VertexRecord& v = vertices_[idx[static_cast<std::size_t>(i)]];
    v.weight += 1;
    v.degree += out.degree_delta[static_cast<std::size_t>(i)];
    max_weight_ = std::max(max_weight_, v.weight);
    max_degree_ = std::max(max_degree_, v.degree);
  }
  weight_sum_ += n;

  full_.increment(out.vertex_set);
  for (int drop = 0; drop < n; ++drop) {
    sub_.increment(
        std::span<const VertexLabel>(key_scratch_.data() + static_cast<std::size_t>(drop) * stride, stride));
  }

  ++step_;
}

void GraphState::reserve_for_steps(std::int64_t steps) {
  if (steps <= 0) return;
  const auto expected_vertices = static_cast<std::size_t>(params_.N) + static_cast<std::size_t>(steps);
  vertices_.reserve(expected_vertices);
  adjacency_.reserve(expected_vertices);
  full_.reserve(static_cast<std::size_t>(steps) + 1);
  sub_.reserve(static_cast<std::size_t>(params_.N) * (static_cast<std::size_t>(steps) + 1));
}

std::int64_t GraphState::windowed_max(VertexLabel label_lo, VertexLabel label_hi,
                                      MaxField which) const {
  const VertexLabel lo = std::max<VertexLabel>(label_lo, -(params_.N - 1));
  const VertexLabel hi = std::min<VertexLabel>(label_hi, born_count());
  std::int64_t best = 0;
  for (VertexLabel l = lo; l <= hi; ++l) {
    const auto& v = vertices_[static_cast<std::size_t>(dense_index(l, params_.N))];
    best = std::max(best, which == MaxField::Weight ? v.weight : v.degree);
  }
  return best;
}

void GraphState::check_invariants(bool deep) const {
  const int n = params_.N;
  const std::int64_t steps1 = step_ + 1;
  if (weight_sum_ != static_cast<std::int64_t>(n) * steps1) fail("sum of vertex weights != N(n+1)");
  if (full_.total_weight() != static_cast<std::uint64_t>(steps1)) fail("N-registry total != n+1");
  if (sub_.total_weight() != static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(steps1)) {
    fail("(N-1)-registry total != N(n+1)");
  }
  if (!deep) return;

  std::int64_t recomputed_sum = 0;
  std::int64_t w_max = 0, d_max = 0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const VertexRecord& v = vertices_[i];
    if (v.weight < 1) fail("existing vertex with weight < 1");
    if (v.degree != static_cast<std::int64_t>(adjacency_[i].size())) fail("degree != adjacency size");
    if (v.degree < n - 1) fail("degree < N-1");
    if (v.degree > (n - 1) * v.weight) fail("degree > (N-1)*weight");
    recomputed_sum += v.weight;
    w_max = std::max(w_max, v.weight);
    d_max = std::max(d_max, v.degree);
    for (VertexLabel nb : adjacency_[i]) {
      if (nb == v.label) fail("self-loop");
      const auto& back = adjacency_[static_cast<std::size_t>(dense_index(nb, n))];
      if (std::count(back.begin(), back.end(), v.label) != 1) fail("asymmetric or duplicated edge");
    }
    if (std::count(adjacency_[i].begin(), adjacency_[i].end(), v.label) != 0) fail("self adjacency");
  }
  if (recomputed_sum != weight_sum_) fail("maintained weight sum drifted");
  if (w_max != max_weight_) fail("maintained max weight drifted");
  if (d_max != max_degree_) fail("maintained max degree drifted");

  // per-vertex membership identities: cliques containing j weigh W[j] (size N)
  // and (N-1)W[j] (size N-1)
  std::unordered_map<VertexLabel, std::uint64_t> full_member, sub_member;
  std::uint64_t full_total = 0, sub_total = 0;
  for (std::size_t s = 0; s < full_.entry_count(); ++s) {
    for (VertexLabel l : full_.key_at(s)) full_member[l] += full_.weight_at(s);
    full_total += full_.weight_at(s);
  }
  for (std::size_t s = 0; s < sub_.entry_count(); ++s) {
    for (VertexLabel l : sub_.key_at(s)) sub_member[l] += sub_.weight_at(s);
    sub_total += sub_.weight_at(s);
  }
  if (full_total != full_.total_weight()) fail("N-registry entries drifted from total");
  if (sub_total != sub_.total_weight()) fail("(N-1)-registry entries drifted from total");
  for (const VertexRecord& v : vertices_) {
    const auto w = static_cast<std::uint64_t>(v.weight);
    if (full_member[v.label] != w) fail("N-clique membership weight != W[j]");
    if (sub_member[v.label] != static_cast<std::uint64_t>(n - 1) * w) {
      fail("(N-1)-clique membership weight != (N-1)W[j]");
    }
  }

  // connectivity
  std::vector<char> seen(vertices_.size(), 0);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t visited = 1;
  while (!frontier.empty()) {
    const std::size_t at = frontier.front();
    frontier.pop();
    for (VertexLabel nb : adjacency_[at]) {
      const auto bi = static_cast<std::size_t>(dense_index(nb, n));
      if (!seen[bi]) {
        seen[bi] = 1;
        ++visited;
        frontier.push(bi);
      }
    }
  }
  if (visited != vertices_.size()) fail("graph disconnected");
}

GraphState snapshot_restore(
    const ModelParams& params, std::int64_t step, std::vector<VertexRecord> vertices,
    const std::vector<std::array<VertexLabel, 2>>& edges,
    const std::vector<std::pair<std::vector<VertexLabel>, std::uint64_t>>& cliques_full,
    const std::vector<std::pair<std::vector<VertexLabel>, std::uint64_t>>& cliques_sub) {
  GraphState state(params);
  state.step_ = step;
  state.vertices_ = std::move(vertices);
  state.adjacency_.assign(state.vertices_.size(), {});
  state.weight_sum_ = 0;
  state.max_weight_ = 0;
  state.max_degree_ = 0;
  for (std::size_t i = 0; i < state.vertices_.size(); ++i) {
    const VertexRecord& v = state.vertices_[i];
    if (static_cast<std::size_t>(dense_index(v.label, params.N)) != i) {
      throw InvalidParams("snapshot vertices out of dense label order");
    }
    state.weight_sum_ += v.weight;
    state.max_weight_ = std::max(state.max_weight_, v.weight);
    state.max_degree_ = std::max(state.max_degree_, v.degree);
  }
  for (const auto& e : edges) {
    state.adjacency_[static_cast<std::size_t>(state.index_of(e[0]))].push_back(e[1]);
    state.adjacency_[static_cast<std::size_t>(state.index_of(e[1]))].push_back(e[0]);
  }
  state.full_ = CliqueRegistry(params.N);
  state.sub_ = CliqueRegistry(params.N - 1);
  for (const auto& [key, weight] : cliques_full) state.full_.increment(key, weight);
  for (const auto& [key, weight] : cliques_sub) state.sub_.increment(key, weight);
  state.check_invariants(true);
  return state;
}

}  // namespace ncsim
