#include "rydberg/dynamics.hpp"

#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rydberg {

namespace {

constexpr double kImaginaryTolerance = 1e-10;
constexpr double kZeroEnergy = 1e-8;

std::size_t vacuum_index(const BlockadeBasis& basis) {
  auto i = basis.index_of(0);
  if (!i) throw std::logic_error("basis has no vacuum state");
  return *i;
}

mpz_class binomial(int n, int k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return b;
}

// v^T O w over the sparse entries of O.
mpz_class bilinear(const std::vector<mpz_class>& v, const SparseIntMatrix& op, const std::vector<mpz_class>& w) {
  mpz_class acc = 0;
  for (const auto& e : op.entries()) {
    if (sgn(v[e.row]) == 0 || sgn(w[e.col]) == 0) continue;
    acc += v[e.row] * w[e.col] * static_cast<long>(e.value);
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Evolver

Evolver::Evolver(const ModelSpec& model, std::size_t max_dimension) : Evolver(build_basis(model), max_dimension) {}

Evolver::Evolver(BlockadeBasis basis, std::size_t max_dimension) : basis_(std::move(basis)) {
  factorize(max_dimension);
}

void Evolver::factorize(std::size_t max_dimension) {
  const std::size_t n = basis_.dimension();
  if (n > max_dimension) {
    throw std::length_error("blockade dimension " + std::to_string(n) + " exceeds the dense eigensolver budget of " +
                            std::to_string(max_dimension));
  }
  hamiltonian_ = hamiltonian_matrix(basis_);
  vectors_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& e : hamiltonian_.entries()) {
    vectors_(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = static_cast<double>(e.value);
  }
  energies_.resize(static_cast<Eigen::Index>(n));
  const lapack_int dim = static_cast<lapack_int>(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', dim, vectors_.data(), dim, energies_.data());
  if (info != 0) throw std::runtime_error("dsyevd failed with info = " + std::to_string(info));
  vacuum_weights_ = vectors_.row(static_cast<Eigen::Index>(vacuum_index(basis_))).transpose();
}

Eigen::VectorXcd Evolver::state(double t) const {
  const Eigen::ArrayXd phase = energies_.array() * t;
  const Eigen::VectorXd re = vectors_ * (phase.cos() * vacuum_weights_.array()).matrix();
  const Eigen::VectorXd im = vectors_ * (-phase.sin() * vacuum_weights_.array()).matrix();
  Eigen::VectorXcd psi(re.size());
  psi.real() = re;
  psi.imag() = im;
  return psi;
}

double Evolver::expectation(const SparseIntMatrix& op, double normalization, double t) const {
  if (op.dimension() != basis_.dimension()) throw std::invalid_argument("operator dimension mismatch");
  const Eigen::VectorXcd psi = state(t);
  std::complex<double> acc = 0;
  for (const auto& e : op.entries()) {
    acc += std::conj(psi[static_cast<Eigen::Index>(e.row)]) * static_cast<double>(e.value) *
           psi[static_cast<Eigen::Index>(e.col)];
  }
  if (std::abs(acc.imag()) > kImaginaryTolerance * std::max(1.0, std::abs(acc.real()))) {
    throw std::runtime_error("expectation value has imaginary part " + std::to_string(acc.imag()) +
                             "; observable is not self-adjoint");
  }
  return acc.real() / normalization;
}

EvolutionResult Evolver::evolve(const ObservableSpec& observable, std::span<const double> times) const {
  const SparseIntMatrix op = observable_matrix(basis_, observable);
  const double norm = static_cast<double>(observable_normalization(basis_.model(), observable));
  EvolutionResult out;
  out.model = basis_.model();
  out.observable = observable;
  out.times.assign(times.begin(), times.end());
  for (double t : times) out.values.push_back(expectation(op, norm, t));
  return out;
}

EvolutionResult evolve(const ModelSpec& model, const ObservableSpec& observable, std::span<const double> times) {
  return Evolver(model).evolve(observable, times);
}

// ---------------------------------------------------------------------------
// Taylor oracle

TaylorOracleResult taylor_oracle(const ModelSpec& model, const ObservableSpec& observable, int jmax) {
  const BlockadeBasis basis = build_basis(model);
  const int max_k = observable.kind == ObservableSpec::Kind::kGeneralWord ? jmax : 2 * jmax;
  if (max_k < 0) throw std::invalid_argument("jmax must be non-negative");
  const SparseIntMatrix h = hamiltonian_matrix(basis);
  const SparseIntMatrix op = observable_matrix(basis, observable);
  const Rational norm(observable_normalization(model, observable));

  std::vector<std::vector<mpz_class>> v;
  v.emplace_back(basis.dimension(), mpz_class(0));
  v[0][vacuum_index(basis)] = 1;
  for (int m = 1; m <= max_k; ++m) v.push_back(h.apply(v.back()));

  TaylorOracleResult out;
  for (int k = 0; k <= max_k; ++k) {
    mpz_class acc = 0;
    for (int m = 0; m <= k; ++m) {
      mpz_class term = binomial(k, m) * bilinear(v[k - m], op, v[m]);
      if (m % 2 == 1) {
        acc -= term;
      } else {
        acc += term;
      }
    }
    out.moments.push_back(Rational(acc) / norm);
  }
  out.coefficients = coefficients_from_moments(model, observable, out.moments, jmax);
  return out;
}

SeriesCoefficients universal_coefficients_via_oracle(const ObservableSpec& observable, int blockade_range,
                                                     int jmax) {
  if (observable.kind != ObservableSpec::Kind::kDensityPerSite &&
      observable.kind != ObservableSpec::Kind::kCorrelation) {
    throw std::invalid_argument("oracle universal coefficients need a density or correlation observable");
  }
  if (jmax < 1) throw std::invalid_argument("jmax must be >= 1");
  for (int L = blockade_range + 1;; ++L) {
    const ModelSpec ring = ModelSpec::ring(L, blockade_range);
    if (observable.kind == ObservableSpec::Kind::kCorrelation) {
      const int d = observable.distance;
      if (d <= blockade_range || d >= L || L - d <= blockade_range) continue;
    }
    if (universality_threshold(ring, observable) < jmax) continue;
    SeriesCoefficients out = taylor_oracle(ring, observable, jmax).coefficients;
    out.model = ModelSpec::infinite_line(blockade_range);
    out.universal_up_to.reset();
    return out;
  }
}

// ---------------------------------------------------------------------------
// g2

G2Result g2(const ModelSpec& model, int distance, std::span<const double> times, int site) {
  if (!model.is_finite()) throw std::invalid_argument("g2 needs a finite lattice");
  if (distance < 1 || distance >= model.sites) throw std::invalid_argument("g2 distance must be in [1, L)");
  const int far = model.topology == Topology::kRing ? model.wrap(site + distance) : site + distance;
  if (site < 1 || far > model.sites) throw std::invalid_argument("g2 sites outside the lattice");
  for (double t : times) {
    if (!(t > 0)) throw std::invalid_argument("g2 is undefined at t <= 0 (numerator and denominator vanish)");
  }
  const Evolver evolver(model);
  const BlockadeBasis& basis = evolver.basis();
  const SparseIntMatrix pair = word_matrix(basis, Word{{site, Letter::kNumber}, {far, Letter::kNumber}});
  const SparseIntMatrix near_n = word_matrix(basis, Word{{site, Letter::kNumber}});
  const SparseIntMatrix far_n = word_matrix(basis, Word{{far, Letter::kNumber}});

  G2Result out;
  out.ratio.model = model;
  out.ratio.observable = ObservableSpec::correlation(distance);
  out.ratio.times.assign(times.begin(), times.end());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const double num = evolver.expectation(pair, 1.0, t);
    const double den = evolver.expectation(near_n, 1.0, t) * evolver.expectation(far_n, 1.0, t);
    if (std::abs(den) < 1e-14) {
      out.undefined.push_back(i);
      out.ratio.values.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      out.ratio.values.push_back(num / den);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral diagnostics

SpectralReport spectral_checks(const ModelSpec& model, std::span<const double> sample_times) {
  static constexpr double kDefaultTimes[] = {0.3, 1.1, 2.7};
  if (sample_times.empty()) sample_times = kDefaultTimes;

  const Evolver evolver(model);
  const BlockadeBasis& basis = evolver.basis();
  const Eigen::VectorXd& e = evolver.energies();
  const Eigen::MatrixXd& v = evolver.eigenvectors();
  const Eigen::Index n = e.size();

  SpectralReport r;
  r.dimension = static_cast<std::size_t>(n);
  for (Eigen::Index i = 0; i < n; ++i) r.symmetry_defect = std::max(r.symmetry_defect, std::abs(e[i] + e[n - 1 - i]));

  const SparseIntMatrix p = parity_matrix(basis);
  const SparseIntMatrix& h = evolver.hamiltonian();
  r.parity_anticommutes = (p * h + h * p).entries().empty();

  Eigen::VectorXd even_mask(n);
  for (Eigen::Index i = 0; i < n; ++i) even_mask[i] = std::popcount(basis.state(static_cast<std::size_t>(i))) % 2 ? 0 : 1;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(e[k]) <= kZeroEnergy) {
      r.zero_mode_found = true;
      continue;
    }
    const double weight = (v.col(k).array().square() * even_mask.array()).sum();
    r.parity_weight_defect = std::max(r.parity_weight_defect, std::abs(weight - 0.5));
  }
  r.zero_mode_required = n % 2 == 1;

  const ObservableSpec density = ObservableSpec::density();
  const SparseIntMatrix number = observable_matrix(basis, density);
  const double norm = static_cast<double>(observable_normalization(model, density));

  // Same spectrum, eigenvectors from an independent factorization whose
  // degenerate subspaces are generally rotated.
  std::vector<Occupation> reversed(basis.states().rbegin(), basis.states().rend());
  const Evolver mirrored(BlockadeBasis(model, std::move(reversed)));
  const SparseIntMatrix mirrored_number = observable_matrix(mirrored.basis(), density);

  for (double t : sample_times) {
    r.evenness_defect =
        std::max(r.evenness_defect, std::abs(evolver.expectation(number, norm, t) - evolver.expectation(number, norm, -t)));
    r.norm_defect = std::max(r.norm_defect, std::abs(evolver.state(t).norm() - 1.0));
    r.degenerate_defect = std::max(r.degenerate_defect, std::abs(evolver.expectation(number, norm, t) -
                                                                 mirrored.expectation(mirrored_number, norm, t)));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Windows

std::optional<double> universal_window(const ModelSpec& a, const ModelSpec& b, const ObservableSpec& observable,
                                       double epsilon, std::span<const double> times) {
  const EvolutionResult ra = evolve(a, observable, times);
  const EvolutionResult rb = evolve(b, observable, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(ra.values[i] - rb.values[i]) > epsilon) return times[i];
  }
  return std::nullopt;
}

WindowStatistics window_statistics(const EvolutionResult& result, double t_start, double t_stop) {
  WindowStatistics s;
  double sum = 0;
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    if (result.times[i] < t_start || result.times[i] > t_stop) continue;
    sum += result.values[i];
    ++s.samples;
  }
  if (s.samples == 0) throw std::invalid_argument("no samples in the statistics window");
  s.mean = sum / static_cast<double>(s.samples);
  double sq = 0;
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    if (result.times[i] < t_start || result.times[i] > t_stop) continue;
    sq += (result.values[i] - s.mean) * (result.values[i] - s.mean);
  }
  s.variance = sq / static_cast<double>(s.samples);
  return s;
}

std::vector<double> time_grid(double start, double stop, int points) {
  if (points < 1) throw std::invalid_argument("time grid needs at least one point");
  if (points == 1) return {start};
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out.push_back(start + (stop - start) * i / (points - 1));
  return out;
}

}  // namespace rydberg
