#include "ncsim/params.hpp"

#include <cmath>
#include <string>

#include "ncsim/errors.hpp"

namespace ncsim {

void validate_for_dynamics(const ModelParams& params, int max_clique_size) {
  if (params.N < 3) {
    throw InvalidParams("N must be at least 3 (got " + std::to_string(params.N) + ")");
  }
  if (params.N > max_clique_size) {
    throw InvalidParams("N must be at most " + std::to_string(max_clique_size) +
                        " (got " + std::to_string(params.N) + ")");
  }
  if (!(params.p >= 0.0) || params.p > 1.0 || !std::isfinite(params.p)) {
    throw InvalidParams("p must satisfy 0 <= p <= 1 (got " + std::to_string(params.p) + ")");
  }
  if (!(params.q >= 0.0) || params.q > 1.0 || !std::isfinite(params.q)) {
    throw InvalidParams("q must satisfy 0 <= q <= 1 (got " + std::to_string(params.q) + ")");
  }
  if (!(params.r >= 0.0) || params.r > 1.0 || !std::isfinite(params.r)) {
    throw InvalidParams("r must satisfy 0 <= r <= 1 (got " + std::to_string(params.r) + ")");
  }
}

void validate(const ModelParams& params, int max_clique_size) {
  validate_for_dynamics(params, max_clique_size);
  if (params.p == 0.0) {
    throw InvalidParams("p must satisfy 0 < p <= 1 (got 0; beta2 divides by p)");
  }
}

Coefficients derive_coefficients(const ModelParams& params) {
  validate(params);
  const double n = params.N;
  Coefficients c;
  c.alpha1 = (1.0 - params.p) * params.q;
  c.alpha2 = (n - 1.0) / n * params.p * params.r;
  c.alpha = c.alpha1 + c.alpha2;
  c.beta1 = (n - 1.0) * (1.0 - params.r);
  c.beta2 = n * (1.0 - params.p) * (1.0 - params.q) / params.p;
  c.beta = c.beta1 + c.beta2;
  return c;
}

std::optional<std::string> require_positive_alpha(const Coefficients& coeffs) {
  if (coeffs.alpha > 0.0) return std::nullopt;
  return "alpha = 0: the evolution is well-defined but the asymptotic laws "
         "(power-law growth of weights and degrees) do not apply";
}

}  // namespace ncsim
