#pragma once

#include <cstdint>
#include <vector>

#include "ncsim/evolution.hpp"
#include "ncsim/graph_state.hpp"

namespace ncsim {

// Exhaustive one-step transition law of a small graph. Outcomes are
// canonical (branch, sorted vertex set) pairs; a preferential and a uniform
// branch producing the same set stay distinct so branch-conditional checks
// remain possible.
struct OutcomeDescriptor {
  Branch branch = Branch::OldUniform;
  std::vector<VertexLabel> vertex_set;
  std::optional<VertexLabel> born_label;
  double probability = 0.0;
};

struct TransitionDistribution {
  std::vector<OutcomeDescriptor> outcomes;
  double total_mass() const;
};

inline constexpr std::int64_t kDefaultEnumerationCap = 15;

// Throws TooLargeToEnumerate when the state holds more than `cap` vertices.
// Branches whose probability factor is zero are omitted.
TransitionDistribution transition_distribution(const GraphState& state,
                                               std::int64_t cap = kDefaultEnumerationCap);

// Degree of vertex j after `outcome` fires (no mutation).
std::int64_t outcome_degree_after(const GraphState& state, const OutcomeDescriptor& outcome,
                                  VertexLabel j);

// Probability that j is in the next interaction, summed from the enumeration.
double marginal_participation(const TransitionDistribution& dist, VertexLabel j);

// E[D[n+1,j] | state] by summing the enumeration.
double expected_degree_next_enum(const GraphState& state, VertexLabel j,
                                 std::int64_t cap = kDefaultEnumerationCap);

// Distribution of the one-step degree increment of a vertex with weight w and
// degree d when the graph has v vertices after n steps. prob[m] is the chance
// the degree grows by m; the m >= 1 masses are hypergeometric counts of how
// many non-neighbors land in the chosen set, plus the preferential newborn
// term at m = 1.
struct DegreeIncrementLaw {
  std::vector<double> prob;  // size N
  double mass() const;
  double mean() const;
};

DegreeIncrementLaw degree_increment_law(const ModelParams& params, const Coefficients& coeffs,
                                        std::int64_t w, std::int64_t d, std::int64_t v,
                                        std::int64_t n);

// Closed-form E[D[n+1,j] | state]; must match expected_degree_next_enum on
// every enumerable state.
double expected_degree_next_closed(const GraphState& state, VertexLabel j,
                                   const Coefficients& coeffs);
double expected_degree_next_closed(const ModelParams& params, const Coefficients& coeffs,
                                   std::int64_t w, std::int64_t d, std::int64_t v,
                                   std::int64_t n);

// R_n = E[D[n+1,j]|state] - D[n,j] - alpha2*W[n,j]/(n+1), with its
// uniform-branch decomposition beta1*p*R1 + beta2*p*R2 and the a-priori
// bound (N-1)*p*beta/V. 0 <= R <= bound always; R1*V and R2*V are both
// at most N-1.
struct Remainder {
  double value = 0.0;
  double component_new_uniform = 0.0;  // beta1*p*R1
  double component_old_uniform = 0.0;  // beta2*p*R2
  double r1 = 0.0;
  double r2 = 0.0;
  double bound = 0.0;
};

Remainder remainder_R(const GraphState& state, VertexLabel j, const Coefficients& coeffs);
Remainder remainder_R(const ModelParams& params, const Coefficients& coeffs, std::int64_t w,
                      std::int64_t d, std::int64_t v, std::int64_t n);

// E[C(W[n+1,j]+k-1, k) | state] through the two-point law of W[n+1,j].
double expected_rising_binomial_next(const GraphState& state, VertexLabel j, int k,
                                     const Coefficients& coeffs);
// The same expectation through the compensator algebra
// (p*beta/V)C(W+k-1,k-1) + (1+alpha*k/(n+1))C(W+k-1,k); agrees to roundoff.
double expected_rising_binomial_proof_form(const GraphState& state, VertexLabel j, int k,
                                           const Coefficients& coeffs);

}  // namespace ncsim
