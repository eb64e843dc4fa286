#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rydberg/bounds.hpp"

using namespace rydberg;

TEST_SUITE("bounds") {
  TEST_CASE("kappa is the maximum of t^(a-t)") {
    for (double a : {0.5, 1.0, 2.0, 7.5, 40.0, 1e4}) {
      CAPTURE(a);
      const KappaValue k = kappa(a);
      CHECK(k.residual < 1e-10);
      // Brute-force maximum of (a - t) ln t on a fine grid around tau.
      double best = -std::numeric_limits<double>::infinity();
      for (int i = 1; i <= 20000; ++i) {
        const double t = k.tau * (0.5 + i / 20000.0);
        best = std::max(best, (a - t) * std::log(t));
      }
      CHECK(k.log_kappa >= best - 1e-9);
      CHECK(k.log_kappa == doctest::Approx(best).epsilon(1e-6));
      CHECK(k.omega + std::log(k.omega) == doctest::Approx(1 + std::log(a)));
      CHECK(omega(a) == doctest::Approx(k.omega));
    }
    CHECK(kappa(1).log_kappa == doctest::Approx(0).epsilon(1e-14));
    CHECK_THROWS_AS(kappa(0), std::invalid_argument);
  }

  TEST_CASE("kappa_n is dominated by n! / (omega_1 ... omega_n)") {
    CHECK(log_factorial_over_omega_product(1) == doctest::Approx(0).epsilon(1e-14));
    for (int n = 2; n <= 60; ++n) CHECK(kappa(n).log_kappa < log_factorial_over_omega_product(n));
  }

  TEST_CASE("coefficient bounds") {
    // density j = 1, lambda = 1: 2 * 6 * kappa(2) / 2
    CHECK(log_coefficient_bound(1, 1, 1, BoundClass::kDensity) == doctest::Approx(std::log(6.0) + kappa(2).log_kappa));
    // word j = 1, ell = 2, lambda = 1: 12 kappa(1)
    CHECK(log_coefficient_bound(1, 1, 2, BoundClass::kWord) == doctest::Approx(std::log(12.0)));
    for (int j = 1; j < 40; ++j) {
      for (auto cls : {BoundClass::kDensity, BoundClass::kWord}) {
        const double t = 0.3;
        const int p = cls == BoundClass::kDensity ? 2 : 1;
        const double actual = std::exp(log_coefficient_bound(j + 1, 1, 2, cls) - log_coefficient_bound(j, 1, 2, cls)) *
                              std::pow(t, p);
        CHECK(actual <= tail_ratio_bound(j, 1, 2, cls, t) * (1 + 1e-12));
        CHECK(tail_ratio_bound(j + 1, 1, 2, cls, t) <= tail_ratio_bound(j, 1, 2, cls, t) * (1 + 1e-12));
      }
    }
  }

  TEST_CASE("envelopes") {
    const EnvelopeSpec spec{BoundClass::kDensity, 18, 1, 1, 0};
    CHECK(first_uncertified_order(spec) == 18);
    CHECK(first_uncertified_order({BoundClass::kWord, 10, 1, 2, 0}) == 5);
    double prev = 0;
    for (double t : {0.05, 0.1, 0.2, 0.3}) {
      const EnvelopeValue e = error_envelope(spec, t);
      CHECK(e.value > prev);
      CHECK(std::log(e.value) == doctest::Approx(e.log_value));
      prev = e.value;
    }
    // Leading term dominates deep inside the convergence region.
    const double lead = std::log(2.0) + log_coefficient_bound(18, 1, 1, BoundClass::kDensity) + 36 * std::log(0.05);
    const double log_e = error_envelope(spec, 0.05).log_value;
    CHECK(log_e > lead);
    CHECK(log_e < lead + 0.01);
    CHECK(error_envelope({BoundClass::kDensity, 20, 1, 1, 0}, 0.3).value < error_envelope(spec, 0.3).value);
    const EnvelopeValue big = error_envelope(spec, 1.5);
    CHECK(std::isinf(big.value));
    CHECK(std::isfinite(big.log_value));
    const EnvelopeValue huge = error_envelope(spec, 5.0);
    CHECK(std::isinf(huge.value));
    CHECK(std::isinf(huge.log_value));
    CHECK(error_envelope(spec, 0).value == 0);
  }

  TEST_CASE("omega-product envelope ratio") {
    for (int L = 5; L <= 15; ++L) {
      const double ratio = omega_density_envelope(L, 0.5).log_value - omega_density_envelope(L - 1, 0.5).log_value;
      CHECK(ratio <= std::log(omega_envelope_ratio_bound(L, 0.5)) + 1e-12);
    }
  }

  TEST_CASE("convergence ratios") {
    CHECK(convergence_ratio(20, 1, 2, 0.1) == doctest::Approx(1.2 / std::log(10.0)));
    CHECK(rigorous_convergence_ratio(20, 1, 2, 0.1) == doctest::Approx(1.2 / omega(10.0)));
    CHECK_THROWS(convergence_ratio(2, 1, 1, 0.1));
  }
}
