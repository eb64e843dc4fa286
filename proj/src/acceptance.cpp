#include "rydberg/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include "rydberg/blockade_space.hpp"
#include "rydberg/bounds.hpp"
#include "rydberg/dynamics.hpp"
#include "rydberg/series.hpp"
#include "rydberg/word_algebra.hpp"

namespace rydberg {

namespace {

std::vector<Rational> rationals(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) {
    Rational q(t);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

std::string join(const std::vector<Rational>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + "]";
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

class Checker {
 public:
  explicit Checker(CriterionResult& r) : r_(r) {}
  bool expect(bool ok, const std::string& what) {
    ++r_.checks;
    if (!ok) r_.failures.push_back(what);
    return ok;
  }
  // A sub-check the criterion asks for that cannot hold mathematically.
  void unattainable(bool ok, const std::string& what, const std::string& reason) {
    ++r_.checks;
    if (!ok) r_.unattainable.push_back(what + "; " + reason);
  }
  void summary(const std::string& text) { r_.summary = text; }
  void equal(const std::vector<Rational>& got, const std::vector<Rational>& want, const std::string& what) {
    expect(got == want, what + ": got " + join(got) + ", expected " + join(want));
  }

 private:
  CriterionResult& r_;
};

// Shared expensive objects: the Ring(18) factorization and oracle are used by
// criteria 5 and 7.
struct Context {
  AcceptanceOptions options;
  std::unique_ptr<Evolver> ring18;
  std::optional<TaylorOracleResult> ring18_oracle;
  std::vector<double> ring18_times;
  std::vector<double> ring18_exact;

  const TaylorOracleResult& oracle18() {
    if (!ring18_oracle) ring18_oracle = taylor_oracle(ModelSpec::ring(18, 1), ObservableSpec::density(), 17);
    return *ring18_oracle;
  }
  void evolve18() {
    if (ring18) return;
    ring18 = std::make_unique<Evolver>(ModelSpec::ring(18, 1));
    ring18_times = time_grid(0.0, 2.0, 201);
    ring18_exact = ring18->evolve(ObservableSpec::density(), ring18_times).values;
  }
};

// ---------------------------------------------------------------------------

const std::vector<Rational>& reference_density(int lambda) {
  static const std::array<std::vector<Rational>, 3> v = {
      rationals({"1", "-1", "3/5", "-81/280", "3023/25200"}),
      rationals({"1", "-5/3", "77/45", "-713/504"}),
      rationals({"1", "-7/3", "152/45"}),
  };
  return v.at(static_cast<std::size_t>(lambda - 1));
}

const std::vector<Rational>& reference_correlation(int d) {
  static const std::vector<Rational> c2 = rationals({"0", "1", "-3/2", "283/240", "-739/1120"});
  static const std::vector<Rational> c3 = rationals({"0", "1", "-2", "61/30", "-2393/1680"});
  return d == 2 ? c2 : c3;
}

void criterion_reference(Checker& c, Context&) {
  for (int lambda = 1; lambda <= 3; ++lambda) {
    const auto& want = reference_density(lambda);
    const auto got = density_coefficients(ModelSpec::infinite_line(lambda), static_cast<int>(want.size())).values();
    c.equal(got, want, "density lambda_b=" + std::to_string(lambda));
  }
  for (int d : {2, 3}) {
    const auto got = correlation_coefficients(ModelSpec::infinite_line(1), d, 5).values();
    c.equal(got, reference_correlation(d), "correlation d=" + std::to_string(d));
  }
  const auto q = boundary_deficit_q(5, 22);
  std::vector<Rational> got;
  for (const auto& v : q) got.push_back(v.value_or(Rational(-999)));
  c.equal(got, rationals({"0", "2/3", "38/27", "518/243", "76016/27207"}), "line deficits q_j");
}

// ---------------------------------------------------------------------------

OperatorSum op(int site, Letter l) { return OperatorSum(Word{{site, l}}); }
OperatorSum m(int k) { return op(k, Letter::kProjector); }
OperatorSum n(int k) { return op(k, Letter::kNumber); }
OperatorSum r(int k) { return op(k, Letter::kLower); }
OperatorSum rd(int k) { return op(k, Letter::kRaise); }
OperatorSum delta(int k) { return n(k) - m(k); }
OperatorSum antisym(int k) { return r(k) - rd(k); }

// Letters as 2x2 integer matrices on {|g>, |r>}.
using Mat2 = std::array<int, 4>;
Mat2 letter_matrix(Letter l) {
  switch (l) {
    case Letter::kLower:
      return {0, 1, 0, 0};
    case Letter::kRaise:
      return {0, 0, 1, 0};
    case Letter::kNumber:
      return {0, 0, 0, 1};
    case Letter::kProjector:
      return {1, 0, 0, 0};
  }
  return {};
}
Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

void criterion_worked_examples(Checker& c, Context&) {
  constexpr std::array<Letter, 4> kLetters = {Letter::kLower, Letter::kRaise, Letter::kNumber, Letter::kProjector};
  for (Letter a : kLetters) {
    for (Letter b : kLetters) {
      const Mat2 want = mul(letter_matrix(a), letter_matrix(b));
      const auto got = letter_mul(a, b);
      const Mat2 got_m = got ? letter_matrix(*got) : Mat2{};
      c.expect(got_m == want, "letter table " + std::string(letter_name(a)) + "*" + std::string(letter_name(b)));
    }
  }

  const ModelSpec line = ModelSpec::infinite_line(1);
  const auto moments = vacuum_moments(OperatorSum(Word{{0, Letter::kNumber}}), line, 4);
  c.expect(moments[2] == -2, "<ad^2(n_k)> = -2, got " + moments[2].get_str());
  c.expect(moments[4] == -24, "<ad^4(n_k)> = -24, got " + moments[4].get_str());

  const int k = 0;
  const OperatorSum nk = n(k);
  const OperatorSum ad1 = m(k - 1) * antisym(k) * m(k + 1);
  auto a1 = [](int s) { return m(s - 1) * delta(s) * m(s + 1); };
  auto a2 = [](int s) { return m(s - 2) * (r(s - 1) * rd(s) + rd(s - 1) * r(s)) * m(s + 1); };
  const OperatorSum ad2 = Rational(2) * a1(k) + a2(k) + a2(k + 1);
  auto b1 = [](int s) { return m(s - 1) * antisym(s) * m(s + 1); };
  auto b2 = [](int s) { return m(s - 2) * m(s - 1) * antisym(s) * m(s + 1); };
  auto b3 = [](int s) { return m(s - 2) * antisym(s - 1) * m(s) * m(s + 1); };
  auto b4 = [](int s) {
    return m(s - 3) * (rd(s - 2) * r(s - 1) * rd(s) - r(s - 2) * rd(s - 1) * r(s)) * m(s + 1);
  };
  const OperatorSum ad3 = Rational(4) * b1(k) + b2(k) + Rational(3) * b2(k + 1) + Rational(3) * b3(k) + b3(k + 1) +
                          b4(k) + Rational(2) * b4(k + 1) + b4(k + 2);
  c.expect(ad_power(nk, line, 1) == ad1, "ad^1(n_k) operator fixture");
  c.expect(ad_power(nk, line, 2) == ad2, "ad^2(n_k) operator fixture");
  c.expect(ad_power(nk, line, 3) == ad3, "ad^3(n_k) operator fixture");

  const ModelSpec ring2 = ModelSpec::ring(2, 1);
  const OperatorSum n1 = n(1);
  const OperatorSum hop = r(1) * rd(2) + rd(1) * r(2);
  c.expect(ad_power(n1, ring2, 1) == antisym(1) * m(2), "Ring(2) ad^1(n_1)");
  c.expect(ad_power(n1, ring2, 2) == Rational(2) * delta(1) * m(2) + hop, "Ring(2) ad^2(n_1)");
  c.expect(ad_power(n1, ring2, 3) == Rational(5) * antisym(1) * m(2) + Rational(3) * m(1) * antisym(2),
           "Ring(2) ad^3(n_1)");
  // The printed ad^4 carries 4 (r_1 rd_2 + rd_1 r_2); commuting H with the
  // printed ad^3 gives 8, and only the projector terms enter <ad^4> = -16.
  const OperatorSum printed_ad3 = Rational(5) * antisym(1) * m(2) + Rational(3) * m(1) * antisym(2);
  const OperatorSum ad4 = Rational(10) * delta(1) * m(2) + Rational(6) * m(1) * delta(2) + Rational(8) * hop;
  c.expect(commutator_H(printed_ad3, ring2) == ad4, "Ring(2) [H, printed ad^3] = ad^4");
  c.expect(ad_power(n1, ring2, 4) == ad4, "Ring(2) ad^4(n_1)");
  c.expect(vacuum_expectation(ad_power(n1, ring2, 4)) == -16, "Ring(2) <ad^4(n_1)> = -16");
  c.equal(density_coefficients(ring2, 2).values(), rationals({"1", "-2/3"}), "Ring(2) c_1, c_2");
}

// ---------------------------------------------------------------------------

void criterion_oracle(Checker& c, Context& ctx) {
  const int jmax = ctx.options.oracle_jmax;
  for (int lambda = 1; lambda <= 2; ++lambda) {
    for (int L = 3; L <= 10; ++L) {
      const ModelSpec model = ModelSpec::ring(L, lambda);
      if (lambda >= L) continue;
      const std::string tag = model.describe();
      c.equal(density_coefficients(model, jmax).values(),
              taylor_oracle(model, ObservableSpec::density(), jmax).coefficients.values(), tag + " density");
      const int d = lambda + 1;
      if (L - d > lambda) {
        c.equal(correlation_coefficients(model, d, jmax).values(),
                taylor_oracle(model, ObservableSpec::correlation(d), jmax).coefficients.values(),
                tag + " correlation d=" + std::to_string(d));
      }
    }
  }
}

// ---------------------------------------------------------------------------

void criterion_thresholds(Checker& c, Context&) {
  struct Case {
    int lambda, lo, hi;
  };
  for (const Case& cs : {Case{1, 3, 9}, Case{2, 5, 9}}) {
    const int jmax = (cs.hi - 1) / cs.lambda;
    const auto bulk = density_coefficients(ModelSpec::infinite_line(cs.lambda), jmax).values();
    for (int L = cs.lo; L <= cs.hi; ++L) {
      const ModelSpec model = ModelSpec::ring(L, cs.lambda);
      const int threshold = (L - 1) / cs.lambda;
      const auto ring = density_coefficients(model, threshold).values();
      c.equal(ring, std::vector<Rational>(bulk.begin(), bulk.begin() + threshold),
              model.describe() + " density j <= " + std::to_string(threshold));
      c.expect(universality_threshold(model, ObservableSpec::density()) == threshold,
               model.describe() + " reported density threshold");
    }
  }
  for (auto [L, d] : {std::pair{7, 2}, std::pair{8, 3}}) {
    const ModelSpec model = ModelSpec::ring(L, 1);
    const int threshold = L - d;
    const auto ring = correlation_coefficients(model, d, threshold).values();
    const auto bulk = correlation_coefficients(ModelSpec::infinite_line(1), d, threshold).values();
    c.equal(ring, bulk, model.describe() + " correlation d=" + std::to_string(d) + " j <= " + std::to_string(threshold));
    c.expect(universality_threshold(model, ObservableSpec::correlation(d)) == threshold,
             model.describe() + " reported correlation threshold");
  }
}

// ---------------------------------------------------------------------------

void criterion_high_order(Checker& c, Context& ctx) {
  const TaylorOracleResult& oracle = ctx.oracle18();
  const SeriesCoefficients& coeffs = oracle.coefficients;
  c.expect(coeffs.terms.size() == 17, "Ring(18) oracle yields 17 coefficients");
  std::vector<Rational> first(coeffs.terms.size() >= 5 ? 5 : 0);
  for (std::size_t i = 0; i < first.size(); ++i) first[i] = coeffs.terms[i].value;
  c.equal(first, reference_density(1), "Ring(18) oracle c_1..c_5");
  c.expect(coeffs.universal_up_to == 17, "Ring(18) coefficients flagged universal through j = 17");

  ctx.evolve18();
  double worst = 0;
  double worst_t = 0;
  double agree_until = 0;  // last grid time before the first 1e-3 violation
  bool agreeing = true;
  for (std::size_t i = 0; i < ctx.ring18_times.size(); ++i) {
    const double t = ctx.ring18_times[i];
    const double diff = std::abs(ctx.ring18_exact[i] - eval_series(coeffs, t, 17));
    if (diff > worst) {
      worst = diff;
      worst_t = t;
    }
    if (diff >= 1e-3) agreeing = false;
    if (agreeing) agree_until = t;
  }
  c.summary("|Delta rho| < 1e-3 holds for t <= " + fmt(agree_until) + ", max " + fmt(worst) + " at t = " +
            fmt(worst_t));
  c.unattainable(worst < 1e-3,
                 "|rho_18(t) - sum_{j<=17} c_j t^2j| < 1e-3 on t in [0,2]",
                 "the omitted orders j >= 18 dominate past t ~ 1.5; the 17-term polynomial alone reaches " +
                     fmt(eval_series(coeffs, 2.0, 17)) + " at t = 2 while 0 <= rho <= 1/2");
}

// ---------------------------------------------------------------------------

void criterion_spectral(Checker& c, Context&) {
  for (Topology topology : {Topology::kRing, Topology::kLine}) {
    for (int L = 4; L <= 12; ++L) {
      for (int lambda = 1; lambda <= 2; ++lambda) {
        const ModelSpec model{topology, L, lambda};
        const SpectralReport s = spectral_checks(model);
        const std::string tag = model.describe();
        c.expect(s.symmetry_defect < 1e-10, tag + " +-E symmetry defect " + fmt(s.symmetry_defect));
        c.expect(s.parity_anticommutes, tag + " PH + HP = 0");
        c.expect(s.parity_weight_defect < 1e-8, tag + " even-parity weight defect " + fmt(s.parity_weight_defect));
        c.expect(s.evenness_defect < 1e-12, tag + " rho(t) - rho(-t) = " + fmt(s.evenness_defect));
        c.expect(s.norm_defect < 1e-12, tag + " norm defect " + fmt(s.norm_defect));
        c.expect(!s.zero_mode_required || s.zero_mode_found, tag + " zero mode in odd dimension");
      }
    }
  }
}

// ---------------------------------------------------------------------------

bool within_bound(const Rational& value, double log_bound) {
  if (sgn(value) == 0) return true;
  return std::log(std::abs(to_double(value))) <= log_bound;
}

void check_density_bounds(Checker& c, const std::vector<Rational>& values, int lambda, const std::string& tag) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int j = static_cast<int>(i) + 1;
    c.expect(within_bound(values[i], log_coefficient_bound(j, lambda, 1, BoundClass::kDensity)),
             tag + " |c_" + std::to_string(j) + "| <= b_j");
  }
}

// Correlation c_{d,j} multiplies t^(2j): word bound at order 2j, length d + 1.
void check_correlation_bounds(Checker& c, const std::vector<Rational>& values, int lambda, int d,
                              const std::string& tag) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int j = static_cast<int>(i) + 1;
    c.expect(within_bound(values[i], log_coefficient_bound(2 * j, lambda, d + 1, BoundClass::kWord)),
             tag + " |c_{d," + std::to_string(j) + "}| <= b_2j");
  }
}

void criterion_bounds(Checker& c, Context& ctx) {
  const KappaValue k1 = kappa(1.0);
  c.expect(std::abs(k1.log_kappa) < 1e-13 && std::abs(k1.tau - 1) < 1e-13 && std::abs(k1.omega - 1) < 1e-13,
           "kappa(1) = tau(1) = omega(1) = 1");
  // n = 1 is an identity (kappa_1 = 1 = 1!/omega_1); the inequality is strict from n = 2.
  c.expect(std::abs(kappa(1).log_kappa - log_factorial_over_omega_product(1)) < 1e-13, "kappa_1 = 1!/omega_1");
  for (int n = 2; n <= 100; ++n) {
    c.expect(kappa(n).log_kappa < log_factorial_over_omega_product(n),
             "kappa_" + std::to_string(n) + " < n!/(omega_1...omega_n)");
  }

  // Coefficients from criteria 1-5.
  for (int lambda = 1; lambda <= 3; ++lambda) {
    check_density_bounds(c, reference_density(lambda), lambda, "reference lambda_b=" + std::to_string(lambda));
  }
  for (int d : {2, 3}) check_correlation_bounds(c, reference_correlation(d), 1, d, "reference d=" + std::to_string(d));
  check_density_bounds(c, density_coefficients(ModelSpec::ring(2, 1), 2).values(), 1, "Ring(2)");
  for (int lambda = 1; lambda <= 2; ++lambda) {
    for (int L = lambda + 1; L <= 10; ++L) {
      const ModelSpec model = ModelSpec::ring(L, lambda);
      check_density_bounds(c, density_coefficients(model, ctx.options.oracle_jmax).values(), lambda,
                           model.describe());
      const int d = lambda + 1;
      if (L - d > lambda) {
        check_correlation_bounds(c, correlation_coefficients(model, d, ctx.options.oracle_jmax).values(), lambda, d,
                                 model.describe());
      }
    }
  }
  check_density_bounds(c, ctx.oracle18().coefficients.values(), 1, "Ring(18)");

  // Measured deviation of Ring(18) from the truncated universal series. The
  // envelope grows with t, so the scan stops once it reaches 1. The measured
  // side carries the rounding floor of dense evolution at this dimension.
  constexpr double kEvolutionRounding = 1e-13;
  ctx.evolve18();
  const EnvelopeSpec spec{BoundClass::kDensity, 18, 1, 1, 0};
  int certified = 0;
  for (std::size_t i = 0; i < ctx.ring18_times.size(); ++i) {
    const double t = ctx.ring18_times[i];
    const EnvelopeValue e = error_envelope(spec, t);
    if (!(e.value < 1)) break;
    ++certified;
    const double diff = std::abs(ctx.ring18_exact[i] - eval_series(ctx.oracle18().coefficients, t, 17));
    c.expect(diff <= e.value + kEvolutionRounding,
             "Ring(18) deviation " + fmt(diff) + " <= envelope " + fmt(e.value) + " at t = " + fmt(t));
  }
  c.expect(certified > 1, "envelope below 1 on part of the Ring(18) grid");
  if (certified > 0) {
    c.summary("envelope < 1 on " + std::to_string(certified) + " grid points (t <= " +
              fmt(ctx.ring18_times[static_cast<std::size_t>(certified - 1)]) + ")");
  }

  for (int L = 5; L <= 20; ++L) {
    const double log_ratio = omega_density_envelope(L, 1.0).log_value - omega_density_envelope(L - 1, 1.0).log_value;
    c.expect(log_ratio < std::log(omega_envelope_ratio_bound(L, 1.0)),
             "E^(" + std::to_string(L) + ")/E^(" + std::to_string(L - 1) + ") < 36/(omega_2L-1 omega_2L) at t = 1");
  }
}

// ---------------------------------------------------------------------------

void criterion_fibonacci(Checker& c, Context&) {
  const double golden = (1 + std::sqrt(5.0)) / 2;
  for (int L = 1; L <= 20; ++L) {
    std::uint64_t brute = 0;
    for (Occupation s = 0; s < (Occupation{1} << L); ++s) {
      if ((s & (s >> 1)) == 0) ++brute;
    }
    const std::uint64_t binet = static_cast<std::uint64_t>(
        std::llround((std::pow(golden, L + 2) - std::pow(-1 / golden, L + 2)) / std::sqrt(5.0)));
    const std::size_t basis = build_basis(ModelSpec::line(L, 1)).dimension();
    c.expect(line_dimension(L) == brute && basis == brute && binet == brute,
             "Line(" + std::to_string(L) + ") dimension " + std::to_string(brute));
  }
  for (int L = 1; L <= 16; ++L) {
    const BlockadeBasis basis = build_basis(ModelSpec::line(L, 1));
    c.expect(line_hamiltonian_recursive(L) == hamiltonian_matrix(basis),
             "Line(" + std::to_string(L) + ") recursive H equals bit-flip H");
    c.expect(line_number_recursive(L) == observable_matrix(basis, ObservableSpec::density()),
             "Line(" + std::to_string(L) + ") recursive N equals occupation count");
  }
  c.expect(line_number_recursive(2) == SparseIntMatrix::diagonal(std::vector<std::int64_t>{0, 1, 1}),
           "N^(2) = diag(0,1,1)");
  c.expect(line_hamiltonian_recursive(1) == SparseIntMatrix(2, {{0, 1, 1}, {1, 0, 1}}), "H^(1) printed matrix");
  c.expect(line_hamiltonian_recursive(2) == SparseIntMatrix(3, {{0, 1, 1}, {0, 2, 1}, {1, 0, 1}, {2, 0, 1}}),
           "H^(2) printed matrix");
  const auto b2 = build_basis(ModelSpec::line(2, 1)).states();
  c.expect(std::vector<Occupation>(b2.begin(), b2.end()) == std::vector<Occupation>{0b00, 0b01, 0b10},
           "B^(2) = {|00>, |10>, |01>}");
}

struct Criterion {
  int id;
  const char* name;
  void (*run)(Checker&, Context&);
};

constexpr Criterion kCriteria[] = {
    {1, "reference infinite-line coefficients", criterion_reference},
    {2, "worked examples and operator fixtures", criterion_worked_examples},
    {3, "symbolic series equals matrix oracle", criterion_oracle},
    {4, "universality thresholds", criterion_thresholds},
    {5, "Ring(18) high-order reproduction", criterion_high_order},
    {6, "spectral and parity properties", criterion_spectral},
    {7, "coefficient bounds and envelopes", criterion_bounds},
    {8, "Fibonacci basis and matrix recursions", criterion_fibonacci},
};

}  // namespace

std::string format_result(const CriterionResult& result) {
  std::ostringstream os;
  os << (result.passed ? "PASS" : "FAIL") << " [" << result.id << "] " << result.name << " (" << result.checks
     << " checks, " << fmt(result.seconds) << " s)";
  if (!result.summary.empty()) os << ": " << result.summary;
  for (const auto& f : result.failures) os << "\n    failed: " << f;
  for (const auto& f : result.unattainable) os << "\n    unattainable: " << f;
  return os.str();
}

bool only_unattainable_failures(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.failures.empty() && r.checks > 0; });
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* log) {
  Context ctx;
  ctx.options = options;
  std::vector<CriterionResult> results;
  for (const Criterion& cr : kCriteria) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), cr.id) == options.only.end()) {
      continue;
    }
    CriterionResult r;
    r.id = cr.id;
    r.name = cr.name;
    Checker checker(r);
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(checker, ctx);
    } catch (const std::exception& e) {
      r.failures.push_back(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = r.failures.empty() && r.unattainable.empty() && r.checks > 0;
    if (log) *log << format_result(r) << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace rydberg
