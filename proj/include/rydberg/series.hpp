#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rydberg/model.hpp"
#include "rydberg/word_algebra.hpp"

namespace rydberg {

struct ObservableSpec {
  enum class Kind { kDensityPerSite, kLocalNumber, kCorrelation, kGeneralWord };

  Kind kind = Kind::kDensityPerSite;
  int site = 0;      // kLocalNumber
  int distance = 0;  // kCorrelation
  Word word;         // kGeneralWord

  static ObservableSpec density() { return {}; }
  static ObservableSpec local_number(int site) { return {Kind::kLocalNumber, site, 0, {}}; }
  static ObservableSpec correlation(int distance) { return {Kind::kCorrelation, 0, distance, {}}; }
  static ObservableSpec general_word(Word w) { return {Kind::kGeneralWord, 0, 0, std::move(w)}; }

  std::string describe() const;
};

// kEvenPowers: order j multiplies t^(2j), orders 1..jmax.
// kAllPowers:  order j multiplies t^j,     orders 0..jmax.
enum class SeriesLayout { kEvenPowers, kAllPowers };

// value * t^power is the contribution to the expectation value, times i when
// `imaginary` is set (odd orders of words with an odd number of r/rd letters).
struct SeriesTerm {
  int order = 0;
  Rational value;
  bool imaginary = false;
};

struct SeriesCoefficients {
  ObservableSpec observable;
  ModelSpec model;
  SeriesLayout layout = SeriesLayout::kEvenPowers;
  std::vector<SeriesTerm> terms;
  // Largest order proven equal to the infinite-line value. Empty on the
  // infinite line itself, where every order is universal.
  std::optional<int> universal_up_to;

  int power(int order) const { return layout == SeriesLayout::kEvenPowers ? 2 * order : order; }
  int max_order() const { return terms.empty() ? -1 : terms.back().order; }
  const Rational& at(int order) const;
  bool is_universal(int order) const { return !universal_up_to || order <= *universal_up_to; }
  std::vector<Rational> values() const;
};

// rho(t) = (1/L) <n(t)>, coefficients of t^(2j) for j = 1..jmax.
SeriesCoefficients density_coefficients(const ModelSpec& model, int jmax, const AdBudget& budget = {});

// <n_k(t) n_{k+d}(t)>, coefficients of t^(2j). On the open line the value is
// averaged over the L - d admissible pairs.
SeriesCoefficients correlation_coefficients(const ModelSpec& model, int distance, int jmax,
                                            const AdBudget& budget = {});

// <n_k(t)> for one site, coefficients of t^(2j).
SeriesCoefficients local_number_coefficients(const ModelSpec& model, int site, int jmax,
                                             const AdBudget& budget = {});

// <A(t)> = sum_j i^j/j! <ad^j(A)> t^j for j = 0..jmax.
SeriesCoefficients word_coefficients(const ModelSpec& model, const Word& word, int jmax,
                                     const AdBudget& budget = {});

// Dispatches on the observable kind.
SeriesCoefficients observable_coefficients(const ModelSpec& model, const ObservableSpec& observable,
                                           int jmax, const AdBudget& budget = {});

// Builds the series from exact vacuum moments <ad^k(A)>, k = 0..K, of the
// (normalized) observable. The layout follows the observable kind; jmax is
// limited by K (K >= 2 jmax for even layouts, K >= jmax for words).
SeriesCoefficients coefficients_from_moments(const ModelSpec& model, const ObservableSpec& observable,
                                             std::span<const Rational> moments, int jmax);

// Largest order certified universal on a ring (0 on the open line, where no
// order beyond the trivial one is universal). Orders are in the layout the
// observable uses: c-index for density and correlations, t-power for words.
int universality_threshold(const ModelSpec& model, const ObservableSpec& observable);

// Open-line deficits q_j with c_j^(L) = c_j (1 - q_j / L), j = 1..jmax.
// q_j is extracted at two lattice sizes and must agree exactly; a mismatch
// throws std::runtime_error (the probe size is too small). Orders with
// c_j = 0 have no defined deficit and are returned empty.
std::vector<std::optional<Rational>> boundary_deficit_q_between(int jmax, int probe_sites, int second_probe_sites,
                                                                int blockade_range = 1);
// Probes at probe_sites and probe_sites + 1.
std::vector<std::optional<Rational>> boundary_deficit_q(int jmax, int probe_sites, int blockade_range = 1);

// Partial sum over orders <= truncation, evaluated by Horner's rule. Throws
// std::invalid_argument if a nonzero imaginary term would be included or if
// truncation exceeds the available orders.
double eval_series(const SeriesCoefficients& coeffs, double t, int truncation);

// Rational converted through a 256-bit float, then rounded to double.
double to_double(const Rational& q);

}  // namespace rydberg
