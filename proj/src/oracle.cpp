#include "ncsim/oracle.hpp"

#include <algorithm>
#include <string>

#include "ncsim/errors.hpp"
#include "ncsim/math_util.hpp"

namespace ncsim {

double TransitionDistribution::total_mass() const {
  KahanSum sum;
  for (const auto& o : outcomes) sum.add(o.probability);
  return sum.value();
}

TransitionDistribution transition_distribution(const GraphState& state, std::int64_t cap) {
  const std::int64_t v = state.vertex_count();
  if (v > cap) {
    throw TooLargeToEnumerate("state has " + std::to_string(v) +
                              " vertices, enumeration cap is " + std::to_string(cap));
  }
  const ModelParams& P = state.params();
  const int n = P.N;
  const VertexLabel born = state.born_count() + 1;

  const double w_new_pref = P.p * P.r;
  const double w_new_unif = P.p * (1.0 - P.r);
  const double w_old_pref = (1.0 - P.p) * P.q;
  const double w_old_unif = (1.0 - P.p) * (1.0 - P.q);

  TransitionDistribution dist;

  if (w_new_pref > 0.0) {
    const auto& reg = state.sub_registry();
    const auto total = static_cast<double>(reg.total_weight());
    for (std::size_t s = 0; s < reg.entry_count(); ++s) {
      auto key = reg.key_at(s);
      OutcomeDescriptor o;
      o.branch = Branch::NewPref;
      o.vertex_set.assign(key.begin(), key.end());
      o.vertex_set.push_back(born);
      o.born_label = born;
      o.probability = w_new_pref * static_cast<double>(reg.weight_at(s)) / total;
      dist.outcomes.push_back(std::move(o));
    }
  }

  auto for_each_subset = [&](int m, auto&& emit) {
    std::vector<std::int64_t> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
    do {
      std::vector<VertexLabel> labels;
      labels.reserve(static_cast<std::size_t>(m));
      for (std::int64_t i : idx) labels.push_back(state.label_at(i));
      std::sort(labels.begin(), labels.end());
      emit(std::move(labels));
    } while (next_combination(idx, v));
  };

  if (w_new_unif > 0.0) {
    const double each = w_new_unif / binom(v, n - 1);
    for_each_subset(n - 1, [&](std::vector<VertexLabel> labels) {
      OutcomeDescriptor o;
      o.branch = Branch::NewUniform;
      o.vertex_set = std::move(labels);
      o.vertex_set.push_back(born);
      o.born_label = born;
      o.probability = each;
      dist.outcomes.push_back(std::move(o));
    });
  }

  if (w_old_pref > 0.0) {
    const auto& reg = state.full_registry();
    const auto total = static_cast<double>(reg.total_weight());
    for (std::size_t s = 0; s < reg.entry_count(); ++s) {
      auto key = reg.key_at(s);
      OutcomeDescriptor o;
      o.branch = Branch::OldPref;
      o.vertex_set.assign(key.begin(), key.end());
      o.probability = w_old_pref * static_cast<double>(reg.weight_at(s)) / total;
      dist.outcomes.push_back(std::move(o));
    }
  }

  if (w_old_unif > 0.0) {
    const double each = w_old_unif / binom(v, n);
    for_each_subset(n, [&](std::vector<VertexLabel> labels) {
      OutcomeDescriptor o;
      o.branch = Branch::OldUniform;
      o.vertex_set = std::move(labels);
      o.probability = each;
      dist.outcomes.push_back(std::move(o));
    });
  }
  return dist;
}

std::int64_t outcome_degree_after(const GraphState& state, const OutcomeDescriptor& outcome,
                                  VertexLabel j) {
  std::int64_t degree = state.vertex(j).degree;
  if (std::find(outcome.vertex_set.begin(), outcome.vertex_set.end(), j) ==
      outcome.vertex_set.end()) {
    return degree;
  }
  for (const VertexLabel other : outcome.vertex_set) {
    if (other == j) continue;
    const bool is_born = outcome.born_label && other == *outcome.born_label;
    if (is_born || !state.adjacent(j, other)) ++degree;
  }
  return degree;
}

double marginal_participation(const TransitionDistribution& dist, VertexLabel j) {
  KahanSum sum;
  for (const auto& o : dist.outcomes) {
    if (std::find(o.vertex_set.begin(), o.vertex_set.end(), j) != o.vertex_set.end()) {
      sum.add(o.probability);
    }
  }
  return sum.value();
}

double expected_degree_next_enum(const GraphState& state, VertexLabel j, std::int64_t cap) {
  const TransitionDistribution dist = transition_distribution(state, cap);
  KahanSum sum;
  for (const auto& o : dist.outcomes) {
    sum.add(o.probability * static_cast<double>(outcome_degree_after(state, o, j)));
  }
  return sum.value();
}

double DegreeIncrementLaw::mass() const {
  KahanSum s;
  for (double p : prob) s.add(p);
  return s.value();
}

double DegreeIncrementLaw::mean() const {
  KahanSum s;
  for (std::size_t m = 1; m < prob.size(); ++m) s.add(static_cast<double>(m) * prob[m]);
  return s.value();
}

DegreeIncrementLaw degree_increment_law(const ModelParams& params, const Coefficients& coeffs,
                                        std::int64_t w, std::int64_t d, std::int64_t v,
                                        std::int64_t n) {
  const int N = params.N;
  const double n1 = static_cast<double>(n) + 1.0;
  const double pi = coeffs.alpha * static_cast<double>(w) / n1 +
                    params.p * coeffs.beta / static_cast<double>(v);

  DegreeIncrementLaw law;
  law.prob.assign(static_cast<std::size_t>(N), 0.0);
  // no change: not participating, or an old-branch interaction confined to
  // current neighbors
  law.prob[0] = 1.0 - pi +
                (1.0 - params.p) *
                    (params.q * static_cast<double>(w) / n1 +
                     (1.0 - params.q) * hyper_ratio(d, N - 1, v - d - 1, 0, v, N));
  for (int m = 1; m <= N - 1; ++m) {
    double t = params.p * (1.0 - params.r) * hyper_ratio(d, N - m - 1, v - d - 1, m - 1, v, N - 1) +
               (1.0 - params.p) * (1.0 - params.q) * hyper_ratio(d, N - m - 1, v - d - 1, m, v, N);
    if (m == 1) {
      t += params.p * params.r * (N - 1.0) * static_cast<double>(w) / (N * n1);
    }
    law.prob[static_cast<std::size_t>(m)] = t;
  }
  return law;
}

double expected_degree_next_closed(const ModelParams& params, const Coefficients& coeffs,
                                   std::int64_t w, std::int64_t d, std::int64_t v,
                                   std::int64_t n) {
  const DegreeIncrementLaw law = degree_increment_law(params, coeffs, w, d, v, n);
  KahanSum sum;
  for (std::size_t m = 0; m < law.prob.size(); ++m) {
    sum.add(static_cast<double>(d + static_cast<std::int64_t>(m)) * law.prob[m]);
  }
  return sum.value();
}

double expected_degree_next_closed(const GraphState& state, VertexLabel j,
                                   const Coefficients& coeffs) {
  const VertexRecord& rec = state.vertex(j);
  return expected_degree_next_closed(state.params(), coeffs, rec.weight, rec.degree,
                                     state.vertex_count(), state.step());
}

Remainder remainder_R(const ModelParams& params, const Coefficients& coeffs, std::int64_t w,
                      std::int64_t d, std::int64_t v, std::int64_t n) {
  const int N = params.N;
  const double dv = static_cast<double>(d) / static_cast<double>(v);

  KahanSum r1;
  r1.add(-dv);
  for (int m = 1; m <= N - 1; ++m) {
    r1.add(static_cast<double>(d + m) / (N - 1.0) *
           hyper_ratio(d, N - m - 1, v - d - 1, m - 1, v, N - 1));
  }
  KahanSum r2;
  r2.add(-dv);
  for (int m = 0; m <= N - 1; ++m) {
    r2.add(static_cast<double>(d + m) / static_cast<double>(N) *
           hyper_ratio(d, N - m - 1, v - d - 1, m, v, N));
  }

  Remainder out;
  out.r1 = r1.value();
  out.r2 = r2.value();
  out.component_new_uniform = coeffs.beta1 * params.p * out.r1;
  out.component_old_uniform = coeffs.beta2 * params.p * out.r2;
  const double expected = expected_degree_next_closed(params, coeffs, w, d, v, n);
  out.value = expected - static_cast<double>(d) -
              coeffs.alpha2 * static_cast<double>(w) / (static_cast<double>(n) + 1.0);
  out.bound = (N - 1.0) * params.p * coeffs.beta / static_cast<double>(v);
  return out;
}

Remainder remainder_R(const GraphState& state, VertexLabel j, const Coefficients& coeffs) {
  const VertexRecord& rec = state.vertex(j);
  return remainder_R(state.params(), coeffs, rec.weight, rec.degree, state.vertex_count(),
                     state.step());
}

double expected_rising_binomial_next(const GraphState& state, VertexLabel j, int k,
                                     const Coefficients& coeffs) {
  if (k < 1) throw InvalidParams("rising-binomial order k must be >= 1");
  const std::int64_t w = state.vertex(j).weight;
  const double pi = participation_probability(state, j, coeffs);
  return (1.0 - pi) * binom(w + k - 1, k) + pi * binom(w + k, k);
}

double expected_rising_binomial_proof_form(const GraphState& state, VertexLabel j, int k,
                                           const Coefficients& coeffs) {
  if (k < 1) throw InvalidParams("rising-binomial order k must be >= 1");
  const std::int64_t w = state.vertex(j).weight;
  const double n1 = static_cast<double>(state.step()) + 1.0;
  return state.params().p * coeffs.beta / static_cast<double>(state.vertex_count()) *
             binom(w + k - 1, k - 1) +
         (1.0 + coeffs.alpha * static_cast<double>(k) / n1) * binom(w + k - 1, k);
}

}  // namespace ncsim
