#include <doctest.h>

#include "ncsim/errors.hpp"
#include "ncsim/params.hpp"
#include "ncsim/rng.hpp"

using namespace ncsim;

TEST_SUITE("params") {

TEST_CASE("coefficients by direct substitution") {
  SUBCASE("p = 1 kills alpha1 and both betas") {
    const Coefficients c = derive_coefficients({3, 1.0, 0.7, 1.0});
    CHECK(c.alpha1 == 0.0);
    CHECK(c.alpha2 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(c.alpha == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(c.beta1 == 0.0);
    CHECK(c.beta2 == 0.0);
    CHECK(c.beta == 0.0);
  }
  SUBCASE("N = 4 midpoint") {
    const Coefficients c = derive_coefficients({4, 0.5, 0.5, 0.5});
    CHECK(c.alpha1 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(c.alpha2 == doctest::Approx(0.1875).epsilon(1e-15));
    CHECK(c.alpha == doctest::Approx(0.4375).epsilon(1e-15));
    CHECK(c.beta1 == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(c.beta2 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c.beta == doctest::Approx(3.5).epsilon(1e-15));
  }
}

TEST_CASE("invalid inputs are rejected with the violated bound named") {
  CHECK_THROWS_AS(derive_coefficients({3, 0.0, 0.5, 0.5}), InvalidParams);
  CHECK_THROWS_AS(derive_coefficients({3, 1.2, 0.5, 0.5}), InvalidParams);
  CHECK_THROWS_AS(derive_coefficients({3, 0.5, -0.1, 0.5}), InvalidParams);
  CHECK_THROWS_AS(derive_coefficients({3, 0.5, 0.5, 1.0001}), InvalidParams);
  CHECK_THROWS_AS(derive_coefficients({2, 0.5, 0.5, 0.5}), InvalidParams);
  CHECK_THROWS_AS(derive_coefficients({65, 0.5, 0.5, 0.5}), InvalidParams);
  CHECK_THROWS_WITH_AS(derive_coefficients({3, 0.0, 0.5, 0.5}),
                       doctest::Contains("p must satisfy"), InvalidParams);
  // the dynamics-only validation admits p = 0 but nothing else extra
  CHECK_NOTHROW(validate_for_dynamics({3, 0.0, 0.5, 0.5}));
  CHECK_THROWS_AS(validate_for_dynamics({2, 0.5, 0.5, 0.5}), InvalidParams);
}

TEST_CASE("alpha = 0 warns instead of failing") {
  CHECK(!require_positive_alpha(derive_coefficients({4, 0.5, 0.5, 0.5})).has_value());
  CHECK(!require_positive_alpha(derive_coefficients({3, 1.0, 0.7, 1.0})).has_value());
  // p = 1 removes the old branch, r = 0 removes the preferential newborn
  CHECK(require_positive_alpha(derive_coefficients({3, 1.0, 0.3, 0.0})).has_value());
}

TEST_CASE("stored sums equal recomputed sums and alpha is monotone in q and r") {
  RngStream rng(5, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelParams params{3 + static_cast<int>(rng.uniform_below(6)),
                             0.05 + 0.95 * rng.next_double(), rng.next_double(),
                             rng.next_double()};
    const Coefficients c = derive_coefficients(params);
    CHECK(c.alpha == c.alpha1 + c.alpha2);
    CHECK(c.beta == c.beta1 + c.beta2);
    CHECK(c.alpha >= 0.0);
    CHECK(c.alpha <= 1.0);

    ModelParams more_q = params;
    more_q.q = std::min(1.0, params.q + 0.25);
    CHECK(derive_coefficients(more_q).alpha >= c.alpha);
    ModelParams more_r = params;
    more_r.r = std::min(1.0, params.r + 0.25);
    CHECK(derive_coefficients(more_r).alpha >= c.alpha);
  }
}

}  // TEST_SUITE
