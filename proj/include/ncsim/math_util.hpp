#pragma once

#include <cstdint>
#include <vector>

namespace ncsim {

// C(n, k) as a falling product in extended precision. Zero when k < 0 or
// k > n. The model only ever needs small k against possibly large n, so the
// product never overflows long double range.
double binom(std::int64_t n, std::int64_t k);

// C(a, x) * C(b, y) / C(v, c): the multivariate-hypergeometric building block
// of the degree-increment law. Evaluated factor by factor in long double so
// large V never overflows a plain double binomial.
double hyper_ratio(std::int64_t a, std::int64_t x, std::int64_t b,
                   std::int64_t y, std::int64_t v, std::int64_t c);

// Compensated (Kahan) accumulator for long sums.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

// Survival function of the chi-square distribution with df degrees of freedom.
double chi_square_survival(double x, int df);

// Two-sided normal p-value for a z statistic.
double normal_two_sided_p(double z);

// Advances a strictly increasing index tuple over {0,...,v-1}; returns false
// after the last combination.
bool next_combination(std::vector<std::int64_t>& idx, std::int64_t v);

}  // namespace ncsim
