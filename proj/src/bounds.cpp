#include "rydberg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace rydberg {

namespace {

constexpr double kResidualTolerance = 1e-13;
constexpr double kRelativeCutoff = 1e-18;
constexpr int kMaxTerms = 1'000'000;

double log_add(double x, double y) {
  if (x == -INFINITY) return y;
  if (y == -INFINITY) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// Sums exp(log_term(j)) for j >= first, then closes the tail geometrically
// with ratio(j), which must bound term(j+1)/term(j) and be non-increasing.
EnvelopeValue sum_tail(int first, const std::function<double(int)>& log_term,
                       const std::function<double(int)>& ratio) {
  EnvelopeValue out;
  double log_sum = -INFINITY;
  for (int j = first;; ++j) {
    if (out.terms >= kMaxTerms) {
      // The partial sum alone is past the double range: the envelope is
      // infinite for every practical purpose, but its log is unknown.
      if (log_sum > std::log(std::numeric_limits<double>::max())) {
        out.value = INFINITY;
        out.log_value = INFINITY;
        return out;
      }
      throw std::overflow_error("envelope tail not certified after " + std::to_string(kMaxTerms) + " terms");
    }
    const double lt = log_term(j);
    log_sum = log_add(log_sum, lt);
    ++out.terms;
    const double r = ratio(j);
    if (r < 1 && lt < log_sum + std::log(kRelativeCutoff)) {
      const double log_rest = lt + std::log(r) - std::log1p(-r);
      out.remainder = std::exp(log_rest);
      log_sum = log_add(log_sum, log_rest);
      break;
    }
  }
  out.log_value = log_sum;
  out.value = log_sum > std::log(std::numeric_limits<double>::max()) ? INFINITY : std::exp(log_sum);
  return out;
}

void require_positive(int value, const char* what) {
  if (value < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

}  // namespace

KappaValue kappa(double a) {
  if (!(a > 0) || !std::isfinite(a)) throw std::invalid_argument("kappa needs a > 0");
  KappaValue k;
  k.a = a;
  // g(u) = a e^{-u} - 1 - u with u = ln t is decreasing and convex, so
  // Newton from the left end of the bracket climbs monotonically to the root.
  double lo = std::log(std::min(1.0, a));
  double hi = std::log(std::max(1.0, a));
  auto g = [a](double u) { return a * std::exp(-u) - 1 - u; };
  double u = lo;
  for (int iter = 0; iter < 200; ++iter) {
    const double gu = g(u);
    if (std::abs(gu) < kResidualTolerance * 0.01) break;
    if (gu > 0) {
      lo = u;
    } else {
      hi = u;
    }
    const double step = gu / (a * std::exp(-u) + 1);
    double next = u + step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == u) break;
    u = next;
  }
  k.tau = std::exp(u);
  k.residual = std::abs(a / k.tau - 1 - std::log(k.tau));
  if (k.residual >= kResidualTolerance) {
    throw std::runtime_error("kappa solver did not converge for a = " + std::to_string(a));
  }
  k.log_kappa = (a - k.tau) * std::log(k.tau);
  k.omega = a / k.tau;
  return k;
}

double omega(double a) { return kappa(a).omega; }

double log_coefficient_bound(int j, int blockade_range, int word_length, BoundClass bound_class) {
  require_positive(j, "order j");
  require_positive(blockade_range, "blockade range");
  const double lambda = blockade_range;
  if (bound_class == BoundClass::kDensity) {
    return std::log(2.0) + (2 * j - 1) * std::log(6 * lambda) + kappa(2 * j + 1 / lambda - 1).log_kappa -
           std::lgamma(2 * j + 1.0);
  }
  require_positive(word_length, "word length");
  return j * std::log(12 * lambda) + kappa(j + word_length / (2 * lambda) - 1).log_kappa - std::lgamma(j + 1.0);
}

double tail_ratio_bound(int j, int blockade_range, int word_length, BoundClass bound_class, double t) {
  const double lambda = blockade_range;
  if (bound_class == BoundClass::kDensity) {
    // kappa(b)/kappa(b-1) < b/omega(b), and (a+2)(a+1) <= (2j+2)(2j+1).
    const double a = 2 * j + 1 / lambda - 1;
    return 36 * lambda * lambda * t * t / (omega(a + 1) * omega(a + 2));
  }
  const double c = word_length / (2 * lambda);
  return 12 * lambda * std::abs(t) * std::max(1.0, (j + c) / (j + 1)) / omega(j + c);
}

int first_uncertified_order(const EnvelopeSpec& spec) {
  if (spec.first_order > 0) return spec.first_order;
  require_positive(spec.sites, "L");
  require_positive(spec.blockade_range, "blockade range");
  if (spec.bound_class == BoundClass::kDensity) return (spec.sites - 1) / spec.blockade_range + 1;
  const int excess = spec.sites - spec.word_length;
  if (excess < 0) return 1;
  return excess / (2 * spec.blockade_range) + 1;
}

EnvelopeValue error_envelope(const EnvelopeSpec& spec, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("envelope time must be finite");
  const int first = first_uncertified_order(spec);
  if (t == 0) return {0, -INFINITY, 0, 0};
  const int power = spec.bound_class == BoundClass::kDensity ? 2 : 1;
  const double log_t = std::log(std::abs(t));
  return sum_tail(
      first,
      [&](int j) {
        return std::log(2.0) + log_coefficient_bound(j, spec.blockade_range, spec.word_length, spec.bound_class) +
               power * j * log_t;
      },
      [&](int j) { return tail_ratio_bound(j, spec.blockade_range, spec.word_length, spec.bound_class, t); });
}

EnvelopeValue omega_density_envelope(int sites, double t) {
  require_positive(sites, "L");
  if (!std::isfinite(t)) throw std::invalid_argument("envelope time must be finite");
  if (t == 0) return {0, -INFINITY, 0, 0};
  const double log_t = std::log(std::abs(t));
  // Running ln(omega_1 ... omega_{2j}), extended as j advances.
  std::vector<double> log_omega_product{0.0};
  auto log_prod = [&](int n) {
    while (static_cast<int>(log_omega_product.size()) <= n) {
      const int k = static_cast<int>(log_omega_product.size());
      log_omega_product.push_back(log_omega_product.back() + std::log(omega(k)));
    }
    return log_omega_product[n];
  };
  return sum_tail(
      sites,
      [&](int j) { return std::log(2.0 / 3.0) + j * std::log(36.0) + 2 * j * log_t - log_prod(2 * j); },
      [&](int j) { return 36 * t * t / (omega(2 * j + 1) * omega(2 * j + 2)); });
}

double omega_envelope_ratio_bound(int sites, double t) {
  require_positive(sites, "L");
  return 36 * t * t / (omega(2 * sites - 1) * omega(2 * sites));
}

double convergence_ratio(int sites, int blockade_range, int word_length, double t) {
  require_positive(blockade_range, "blockade range");
  if (sites - word_length + 2 * blockade_range <= 0 || sites <= 2 * blockade_range) {
    throw std::invalid_argument("convergence ratio needs L > 2 lambda and L - ell + 2 lambda > 0");
  }
  return 12.0 * blockade_range * std::abs(t) / std::log(sites / (2.0 * blockade_range));
}

double rigorous_convergence_ratio(int sites, int blockade_range, int word_length, double t) {
  require_positive(blockade_range, "blockade range");
  const int shifted = sites - word_length + 2 * blockade_range;
  if (shifted <= 0) throw std::invalid_argument("convergence ratio needs L - ell + 2 lambda > 0");
  const double lead = std::max(1.0, static_cast<double>(sites) / shifted);
  return 12.0 * blockade_range * lead * std::abs(t) / omega(sites / (2.0 * blockade_range));
}

double log_factorial_over_omega_product(int n) {
  require_positive(n, "n");
  double acc = std::lgamma(n + 1.0);
  for (int k = 1; k <= n; ++k) acc -= std::log(omega(k));
  return acc;
}

}  // namespace rydberg
