#include "ncsim/math_util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncsim {

namespace {

long double binom_ld(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0.0L;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  }
  return r;
}

}  // namespace

double binom(std::int64_t n, std::int64_t k) {
  return static_cast<double>(binom_ld(n, k));
}

double hyper_ratio(std::int64_t a, std::int64_t x, std::int64_t b,
                   std::int64_t y, std::int64_t v, std::int64_t c) {
  long double num = binom_ld(a, x) * binom_ld(b, y);
  if (num == 0.0L) return 0.0;
  long double den = binom_ld(v, c);
  return static_cast<double>(num / den);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("regularized_gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) {
    // lower series, Q = 1 - P
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 2000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    return std::clamp(1.0 - p, 0.0, 1.0);
  }
  // Lentz continued fraction for Q
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 2000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  return std::clamp(q, 0.0, 1.0);
}

double chi_square_survival(double x, int df) {
  if (df <= 0) throw std::domain_error("chi_square_survival: df must be positive");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double normal_two_sided_p(double z) {
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

bool next_combination(std::vector<std::int64_t>& idx, std::int64_t v) {
  const auto m = static_cast<std::int64_t>(idx.size());
  std::int64_t i = m - 1;
  while (i >= 0 && idx[static_cast<std::size_t>(i)] == v - m + i) --i;
  if (i < 0) return false;
  ++idx[static_cast<std::size_t>(i)];
  for (std::int64_t j = i + 1; j < m; ++j) {
    idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

}  // namespace ncsim
