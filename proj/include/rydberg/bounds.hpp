#pragma once

// Rigorous coefficient bounds and truncation envelopes. Everything is kept in
// natural-log space: b_j overflows a double well before j = 100.

#include <vector>

namespace rydberg {

struct KappaValue {
  double a = 0;
  double tau = 0;        // argmax of t^(a-t), root of a/t - 1 - ln t
  double log_kappa = 0;  // (a - tau) ln tau
  double omega = 0;      // a / tau, root of w + ln w = 1 + ln a
  double residual = 0;   // |a/tau - 1 - ln tau|
};

// Throws std::invalid_argument for a <= 0.
KappaValue kappa(double a);
double omega(double a);

enum class BoundClass { kDensity, kWord };

// ln b_j, j >= 1.
//   density: b_j = 2 (6 lambda)^(2j-1) kappa(2j + 1/lambda - 1) / (2j)!   multiplies t^(2j)
//   word:    b_j = (12 lambda)^j kappa(j + ell/(2 lambda) - 1) / j!       multiplies t^j
double log_coefficient_bound(int j, int blockade_range, int word_length, BoundClass bound_class);

// Upper bound on the ratio of consecutive tail terms b_{j+1}|t|^p / b_j
// (p = 2 for density, 1 for words). Non-increasing in j.
double tail_ratio_bound(int j, int blockade_range, int word_length, BoundClass bound_class, double t);

struct EnvelopeSpec {
  BoundClass bound_class = BoundClass::kDensity;
  int sites = 0;
  int blockade_range = 1;
  int word_length = 1;
  // First order of the tail; 0 means the first order past the ring
  // universality threshold ((L-1)/lambda + 1 for density, the first
  // j > (L - ell) / (2 lambda) for words).
  int first_order = 0;
};

int first_uncertified_order(const EnvelopeSpec& spec);

struct EnvelopeValue {
  double value = 0;      // +inf when beyond the double range
  double log_value = 0;  // -inf when value == 0
  int terms = 0;         // explicitly summed terms
  double remainder = 0;  // geometric bound on the unsummed tail
};

// E(t) = 2 sum_{j >= first} b_j |t|^p. Terms are summed until they fall
// below 1e-18 of the running sum and the tail ratio bound is < 1; the rest is
// covered by a geometric remainder. If the tail is still not certified
// after 10^6 terms, returns +inf for both value and log_value when the
// partial sum already exceeds the double range, and throws
// std::overflow_error otherwise.
EnvelopeValue error_envelope(const EnvelopeSpec& spec, double t);

// Nearest-neighbour density envelope with kappa_n / n! replaced by
// 1 / (omega_1 ... omega_n):
//   (2/3) sum_{j >= L} 36^j t^(2j) / (omega_1 ... omega_{2j}).
EnvelopeValue omega_density_envelope(int sites, double t);

// 36 t^2 / (omega_{2L-1} omega_{2L}), bounds omega_density_envelope(L) /
// omega_density_envelope(L-1).
double omega_envelope_ratio_bound(int sites, double t);

// Asymptotic rate of consecutive envelopes: 12 lambda |t| / ln(L / (2 lambda)).
// Requires L - ell + 2 lambda > 0 and L > 2 lambda.
double convergence_ratio(int sites, int blockade_range, int word_length, double t);

// Non-asymptotic form 12 lambda max{1, L/(L - ell + 2 lambda)} |t| / omega(L / (2 lambda)).
double rigorous_convergence_ratio(int sites, int blockade_range, int word_length, double t);

// ln(n! / (omega_1 ... omega_n))
double log_factorial_over_omega_product(int n);

}  // namespace rydberg
