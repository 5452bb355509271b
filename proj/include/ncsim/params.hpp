#pragma once

#include <optional>
#include <string>

namespace ncsim {

// Model inputs. Every step either adds a new vertex (probability p) that
// interacts with N-1 old ones, or lets N old vertices interact. The old
// vertices come from a weight-proportional clique choice (probability q in
// the old branch, r in the new branch) or a uniform subset otherwise.
struct ModelParams {
  int N = 3;       // vertices per interaction
  double p = 0.5;  // new-vertex probability
  double q = 0.5;  // preferential N-clique choice in the old branch
  double r = 0.5;  // preferential (N-1)-clique choice in the new branch
};

// Derived growth exponents and uniform-branch drift coefficients:
//   alpha1 = (1-p)q          beta1 = (N-1)(1-r)
//   alpha2 = ((N-1)/N)p r    beta2 = N(1-p)(1-q)/p
//   alpha  = alpha1+alpha2   beta  = beta1+beta2
struct Coefficients {
  double alpha1 = 0, alpha2 = 0, alpha = 0;
  double beta1 = 0, beta2 = 0, beta = 0;
};

// Subset enumeration in degree updates grows ~N^2 per step; cap N so a typo
// cannot wedge a run.
inline constexpr int kMaxCliqueSize = 64;

// Throws InvalidParams naming the violated bound.
void validate(const ModelParams& params, int max_clique_size = kMaxCliqueSize);

// Structural bounds only: admits p = 0, under which the evolution itself is
// still well-defined (no vertex is ever added) even though the coefficient
// beta2 is not. Used by the dynamics; everything coefficient-facing goes
// through validate().
void validate_for_dynamics(const ModelParams& params, int max_clique_size = kMaxCliqueSize);

// Validates, then computes all six coefficients. Pure.
Coefficients derive_coefficients(const ModelParams& params);

// alpha = 0 leaves the dynamics well-defined but every asymptotic law
// inapplicable; that is a warning, not an error.
std::optional<std::string> require_positive_alpha(const Coefficients& coeffs);

}  // namespace ncsim
