#include <doctest.h>

#include <cmath>

#include "dense_oracle.hpp"
#include "rydberg/series.hpp"

using namespace rydberg;

namespace {

// Density coefficients from full-space moments of the total number operator.
std::vector<Rational> dense_density(bool ring, int sites, int lambda, int jmax) {
  OperatorSum total;
  for (int k = 1; k <= sites; ++k) total += OperatorSum(Word{{k, Letter::kNumber}});
  const auto m = oracle::dense_moments(oracle::hamiltonian_dense(ring, sites, lambda),
                                       oracle::sum_dense(total, sites), 2 * jmax);
  std::vector<Rational> out;
  Rational fact = 1;
  for (int j = 1; j <= jmax; ++j) {
    fact *= (2 * j - 1) * (2 * j);
    out.push_back((j % 2 ? -1 : 1) * m[2 * j] / fact / sites);
  }
  return out;
}

}  // namespace

TEST_SUITE("series-engine") {
  TEST_CASE("finite-lattice density matches the brute-force oracle") {
    struct Case { bool ring; int sites; int lambda; };
    for (const Case& c : {Case{true, 5, 1}, Case{true, 7, 1}, Case{false, 6, 1}, Case{true, 7, 2}, Case{false, 7, 2}}) {
      CAPTURE(c.sites);
      CAPTURE(c.lambda);
      const ModelSpec model = c.ring ? ModelSpec::ring(c.sites, c.lambda) : ModelSpec::line(c.sites, c.lambda);
      const auto coeffs = density_coefficients(model, 5);
      CHECK(coeffs.values() == dense_density(c.ring, c.sites, c.lambda, 5));
    }
  }

  TEST_CASE("infinite-line density is the large-ring limit") {
    const auto inf = density_coefficients(ModelSpec::infinite_line(1), 4);
    CHECK(inf.values() == dense_density(true, 9, 1, 4));
    CHECK_FALSE(inf.universal_up_to.has_value());
    CHECK(inf.at(1) == 1);
    CHECK(inf.at(2) == -1);
  }

  TEST_CASE("Ring(2) density follows sin^2(sqrt2 t)/2") {
    const auto c = density_coefficients(ModelSpec::ring(2), 4);
    // (1 - cos(2 sqrt2 t)) / 4 = sum_j (-1)^(j+1) 8^j t^(2j) / (4 (2j)!)
    Rational fact = 1;
    Rational pow8 = 1;
    for (int j = 1; j <= 4; ++j) {
      fact *= (2 * j - 1) * (2 * j);
      pow8 *= 8;
      CHECK(c.at(j) == (j % 2 ? 1 : -1) * pow8 / fact / 4);
    }
  }

  TEST_CASE("universality threshold and flags") {
    CHECK(universality_threshold(ModelSpec::ring(18), ObservableSpec::density()) == 17);
    CHECK(universality_threshold(ModelSpec::line(18), ObservableSpec::density()) == 0);
    const auto ring = density_coefficients(ModelSpec::ring(4), 5);
    const auto inf = density_coefficients(ModelSpec::infinite_line(), 5);
    for (int j = 1; j <= 5; ++j) {
      CAPTURE(j);
      CHECK(ring.is_universal(j) == (j <= 3));
      if (j <= 3) CHECK(ring.at(j) == inf.at(j));
    }
    CHECK(ring.at(4) != inf.at(4));
  }

  TEST_CASE("open-line deficits") {
    const auto q = boundary_deficit_q(3, 12);
    REQUIRE(q.size() == 3);
    CHECK(*q[0] == 0);
    CHECK(*q[1] == Rational(2, 3));
    CHECK(*q[2] == Rational(38, 27));
    const auto inf = density_coefficients(ModelSpec::infinite_line(), 3);
    const auto line = density_coefficients(ModelSpec::line(15), 3);
    for (int j = 1; j <= 3; ++j) CHECK(line.at(j) == inf.at(j) * (1 - *q[j - 1] / 15));
    CHECK_THROWS_AS(boundary_deficit_q_between(3, 12, 12), std::invalid_argument);
  }

  TEST_CASE("word series carries the imaginary unit on odd orders") {
    const Word w = parse_word("1:r");
    const auto c = word_coefficients(ModelSpec::infinite_line(), w, 3);
    CHECK(c.layout == SeriesLayout::kAllPowers);
    REQUIRE(c.terms.size() == 4);
    // <r_1(t)> = -i t + O(t^2), since <0| r_1 H |0> = 1
    CHECK(c.terms[1].imaginary);
    CHECK(c.at(1) == -1);
    CHECK(c.at(0) == 0);
    CHECK_THROWS_AS(eval_series(c, 0.1, 3), std::invalid_argument);
  }

  TEST_CASE("coefficients from moments reproduce the symbolic path") {
    const ModelSpec model = ModelSpec::ring(6);
    const auto symbolic = correlation_coefficients(model, 2, 3);
    OperatorSum pair(Word{{1, Letter::kNumber}, {3, Letter::kNumber}});
    const auto m = oracle::dense_moments(oracle::hamiltonian_dense(true, 6, 1), oracle::sum_dense(pair, 6), 6);
    const auto rebuilt = coefficients_from_moments(model, ObservableSpec::correlation(2), m, 3);
    CHECK(rebuilt.values() == symbolic.values());
  }

  TEST_CASE("series evaluation") {
    const auto c = density_coefficients(ModelSpec::ring(2), 6);
    for (double t : {0.0, 0.1, 0.3}) CHECK(eval_series(c, t, 6) == doctest::Approx(std::pow(std::sin(std::sqrt(2.0) * t), 2) / 2).epsilon(1e-12));
    CHECK_THROWS_AS(eval_series(c, 0.1, 7), std::invalid_argument);
    CHECK(to_double(Rational(1, 3)) == doctest::Approx(1.0 / 3));
  }

  TEST_CASE("invalid inputs") {
    CHECK_THROWS(density_coefficients(ModelSpec::ring(1), 2));
    CHECK_THROWS(correlation_coefficients(ModelSpec::ring(6), 1, 2));
  }
}
