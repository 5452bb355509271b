#include "ncsim/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncsim/errors.hpp"

namespace ncsim {

void step_into(GraphState& state, RngStream& rng, StepOutcome& out) {
  const ModelParams& P = state.params();
  const int n = P.N;
  const double u = rng.next_double();

  if (u < P.p * P.r) {
    out.branch = Branch::NewPref;
  } else if (u < P.p) {
    out.branch = Branch::NewUniform;
  } else if (u < P.p + (1.0 - P.p) * P.q) {
    out.branch = Branch::OldPref;
  } else {
    out.branch = Branch::OldUniform;
  }

  out.vertex_set.clear();
  out.born_label.reset();
  thread_local std::vector<std::int64_t> subset;

  switch (out.branch) {
    case Branch::NewPref: {
      auto key = state.sub_registry().sample(rng);
      out.vertex_set.assign(key.begin(), key.end());
      out.born_label = state.create_vertex();
      out.vertex_set.push_back(*out.born_label);
      break;
    }
    case Branch::NewUniform: {
      uniform_subset_into(state.vertex_count(), n - 1, rng, subset);
      for (std::int64_t i : subset) out.vertex_set.push_back(state.label_at(i));
      out.born_label = state.create_vertex();
      out.vertex_set.push_back(*out.born_label);
      break;
    }
    case Branch::OldPref: {
      auto key = state.full_registry().sample(rng);
      out.vertex_set.assign(key.begin(), key.end());
      break;
    }
    case Branch::OldUniform: {
      uniform_subset_into(state.vertex_count(), n, rng, subset);
      for (std::int64_t i : subset) out.vertex_set.push_back(state.label_at(i));
      break;
    }
  }
  state.apply_interaction_inplace(out);
}

StepOutcome step(GraphState& state, RngStream& rng) {
  StepOutcome out;
  step_into(state, rng, out);
  return out;
}

double participation_probability(const GraphState& state, VertexLabel j,
                                 const Coefficients& coeffs) {
  const VertexRecord& v = state.vertex(j);  // throws UnknownVertex
  const double n1 = static_cast<double>(state.step()) + 1.0;
  return coeffs.alpha * static_cast<double>(v.weight) / n1 +
         state.params().p * coeffs.beta / static_cast<double>(state.vertex_count());
}

std::size_t TrajectoryRecord::tracked_slot(VertexLabel j) const {
  for (std::size_t i = 0; i < tracked_labels.size(); ++i) {
    if (tracked_labels[i] == j) return i;
  }
  throw MissingHistory("label " + std::to_string(j) + " was not tracked");
}

std::int64_t TrajectoryRecord::birth_of(VertexLabel j) const {
  if (!has_histories) throw MissingHistory("trajectory recorded no histories");
  const auto& w = w_history[tracked_slot(j)];
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0) return static_cast<std::int64_t>(i);
  }
  return steps + 1;
}

std::vector<std::int64_t> geometric_checkpoints(std::int64_t steps, double ratio) {
  std::vector<std::int64_t> out{0};
  for (double x = 1.0; ; x *= ratio) {
    const auto n = static_cast<std::int64_t>(std::ceil(x));
    if (n >= steps) break;
    if (n > out.back()) out.push_back(n);
  }
  if (steps > 0) out.push_back(steps);
  return out;
}

TrajectoryRecord run(const RunOptions& options) {
  GraphState state(options.params);
  state.reserve_for_steps(options.steps);
  RngStream rng(options.seed, options.stream);

  TrajectoryRecord rec;
  rec.params = options.params;
  rec.coeffs = derive_coefficients(options.params);
  rec.seed = options.seed;
  rec.stream = options.stream;
  rec.steps = options.steps;
  rec.tracked_labels = options.tracked_labels;
  rec.has_histories = options.record_histories;

  std::vector<std::int64_t> cps = options.checkpoints.empty()
                                      ? geometric_checkpoints(options.steps)
                                      : options.checkpoints;
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

  const std::size_t n_tracked = rec.tracked_labels.size();
  if (rec.has_histories) {
    rec.v_history.reserve(static_cast<std::size_t>(options.steps) + 1);
    rec.w_history.assign(n_tracked, {});
    rec.d_history.assign(n_tracked, {});
    for (auto& h : rec.w_history) h.reserve(static_cast<std::size_t>(options.steps) + 1);
    for (auto& h : rec.d_history) h.reserve(static_cast<std::size_t>(options.steps) + 1);
  }

  auto record_history = [&] {
    if (!rec.has_histories) return;
    rec.v_history.push_back(state.vertex_count());
    for (std::size_t t = 0; t < n_tracked; ++t) {
      const VertexLabel j = rec.tracked_labels[t];
      if (state.exists(j)) {
        const VertexRecord& v = state.vertex(j);
        rec.w_history[t].push_back(v.weight);
        rec.d_history[t].push_back(v.degree);
      } else {
        rec.w_history[t].push_back(0);
        rec.d_history[t].push_back(0);
      }
    }
  };

  auto record_checkpoint = [&] {
    CheckpointRow row;
    row.n = state.step();
    row.vertex_count = state.vertex_count();
    row.max_weight = state.max_weight();
    row.max_degree = state.max_degree();
    row.tracked_weight.reserve(n_tracked);
    row.tracked_degree.reserve(n_tracked);
    for (const VertexLabel j : rec.tracked_labels) {
      if (state.exists(j)) {
        const VertexRecord& v = state.vertex(j);
        row.tracked_weight.push_back(v.weight);
        row.tracked_degree.push_back(v.degree);
      } else {
        row.tracked_weight.push_back(0);
        row.tracked_degree.push_back(0);
      }
    }
    rec.checkpoints.push_back(std::move(row));
  };

  std::size_t next_cp = 0;
  record_history();
  if (next_cp < cps.size() && cps[next_cp] == 0) {
    record_checkpoint();
    ++next_cp;
  }
  StepOutcome out;
  for (std::int64_t t = 1; t <= options.steps; ++t) {
    step_into(state, rng, out);
    ++rec.branch_counts[static_cast<std::size_t>(out.branch)];
    record_history();
    if (next_cp < cps.size() && cps[next_cp] == t) {
      record_checkpoint();
      ++next_cp;
    }
  }
  return rec;
}

bool identical_data(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  auto rows_equal = [](const CheckpointRow& x, const CheckpointRow& y) {
    return x.n == y.n && x.vertex_count == y.vertex_count && x.max_weight == y.max_weight &&
           x.max_degree == y.max_degree && x.tracked_weight == y.tracked_weight &&
           x.tracked_degree == y.tracked_degree;
  };
  if (a.steps != b.steps || a.seed != b.seed || a.stream != b.stream ||
      a.branch_counts != b.branch_counts || a.tracked_labels != b.tracked_labels ||
      a.v_history != b.v_history || a.w_history != b.w_history || a.d_history != b.d_history ||
      a.checkpoints.size() != b.checkpoints.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
    if (!rows_equal(a.checkpoints[i], b.checkpoints[i])) return false;
  }
  return true;
}

}  // namespace ncsim
