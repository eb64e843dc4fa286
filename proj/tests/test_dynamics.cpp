#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "rydberg/dynamics.hpp"

using namespace rydberg;

TEST_SUITE("dynamics") {
  TEST_CASE("two-site ring has a closed form") {
    const std::vector<double> times = time_grid(0, 3, 31);
    const EvolutionResult r = evolve(ModelSpec::ring(2), ObservableSpec::density(), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double s = std::sin(std::sqrt(2.0) * times[i]);
      CHECK(r.values[i] == doctest::Approx(s * s / 2).epsilon(1e-12));
    }
  }

  TEST_CASE("single site is a Rabi oscillation") {
    const EvolutionResult r = evolve(ModelSpec::line(1), ObservableSpec::density(), std::vector<double>{0.7});
    CHECK(r.values[0] == doctest::Approx(std::pow(std::sin(0.7), 2)).epsilon(1e-12));
  }

  TEST_CASE("evolver keeps the state normalized and matches the series at short times") {
    const Evolver ev(ModelSpec::ring(10));
    CHECK(ev.basis().dimension() == 123);
    CHECK(ev.energies().size() == 123);
    for (double t : {0.0, 0.5, 2.0}) CHECK(ev.state(t).norm() == doctest::Approx(1).epsilon(1e-12));
    const auto series = density_coefficients(ModelSpec::ring(10), 8);
    const auto values = ev.evolve(ObservableSpec::density(), std::vector<double>{0.2}).values;
    CHECK(values[0] == doctest::Approx(eval_series(series, 0.2, 8)).epsilon(1e-12));
  }

  TEST_CASE("oracle moments agree with the symbolic engine") {
    for (const auto& model : {ModelSpec::ring(7), ModelSpec::line(7), ModelSpec::ring(8, 2)}) {
      CAPTURE(model.describe());
      const auto oracle = taylor_oracle(model, ObservableSpec::density(), 6);
      CHECK(oracle.coefficients.values() == density_coefficients(model, 6).values());
      CHECK(oracle.moments.size() >= 13);
    }
    const auto word = taylor_oracle(ModelSpec::ring(6), ObservableSpec::general_word(parse_word("1:r 2:m")), 5);
    const auto sym = word_coefficients(ModelSpec::ring(6), parse_word("1:r 2:m"), 5);
    CHECK(word.coefficients.values() == sym.values());
  }

  TEST_CASE("universal coefficients via the oracle") {
    const auto via = universal_coefficients_via_oracle(ObservableSpec::density(), 1, 8);
    CHECK(via.values() == density_coefficients(ModelSpec::infinite_line(), 8).values());
    CHECK_FALSE(via.universal_up_to.has_value());
    CHECK(via.model.topology == Topology::kInfiniteLine);
  }

  TEST_CASE("g2 correlation ratio") {
    const std::vector<double> times{0.3, 1.0};
    const G2Result r = g2(ModelSpec::ring(10), 2, times);
    CHECK(r.undefined.empty());
    const auto pair = evolve(ModelSpec::ring(10), ObservableSpec::correlation(2), times).values;
    const auto n = evolve(ModelSpec::ring(10), ObservableSpec::density(), times).values;
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(r.ratio.values[i] == doctest::Approx(pair[i] / (n[i] * n[i])));
    CHECK_THROWS_AS(g2(ModelSpec::ring(10), 2, std::vector<double>{0.0}), std::invalid_argument);
  }

  TEST_CASE("spectral checks") {
    for (const auto& model : {ModelSpec::ring(9), ModelSpec::line(8, 2)}) {
      const SpectralReport s = spectral_checks(model);
      CHECK(s.symmetry_defect < 1e-10);
      CHECK(s.parity_anticommutes);
      CHECK(s.evenness_defect < 1e-12);
      CHECK(s.norm_defect < 1e-12);
      CHECK(s.degenerate_defect < 1e-10);
      if (s.zero_mode_required) CHECK(s.zero_mode_found);
    }
  }

  TEST_CASE("window helpers") {
    CHECK(time_grid(0, 1, 3) == std::vector<double>{0, 0.5, 1});
    CHECK_THROWS(time_grid(0, 1, 0));
    EvolutionResult r;
    r.times = {0, 1, 2, 3};
    r.values = {1, 2, 3, 100};
    const WindowStatistics w = window_statistics(r, 0.5, 2.5);
    CHECK(w.samples == 2);
    CHECK(w.mean == doctest::Approx(2.5));
    CHECK(w.variance == doctest::Approx(0.25));
    const auto grid = time_grid(0, 4, 401);
    const auto t10 = universal_window(ModelSpec::ring(8), ModelSpec::ring(10), ObservableSpec::density(), 1e-3, grid);
    const auto t12 = universal_window(ModelSpec::ring(10), ModelSpec::ring(12), ObservableSpec::density(), 1e-3, grid);
    REQUIRE(t10.has_value());
    REQUIRE(t12.has_value());
    CHECK(*t10 < *t12);
    CHECK_FALSE(universal_window(ModelSpec::ring(8), ModelSpec::ring(10), ObservableSpec::density(), 1.0, grid));
  }

  TEST_CASE("dimension budget") {
    CHECK_THROWS_AS(Evolver(ModelSpec::ring(12), 100), std::length_error);
  }
}
