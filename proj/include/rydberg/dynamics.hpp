#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydberg/blockade_space.hpp"
#include "rydberg/series.hpp"

namespace rydberg {

// Dense eigendecomposition is refused above this dimension.
inline constexpr std::size_t kMaxDenseDimension = 8000;

struct EvolutionResult {
  ModelSpec model;
  ObservableSpec observable;
  std::vector<double> times;
  std::vector<double> values;
  std::string method = "eigendecomposition";
};

// Eigendecomposition H = V diag(E) V^T of the blockade Hamiltonian, computed
// once. Evolution starts from the vacuum, wherever it sits in the basis.
class Evolver {
 public:
  explicit Evolver(const ModelSpec& model, std::size_t max_dimension = kMaxDenseDimension);
  explicit Evolver(BlockadeBasis basis, std::size_t max_dimension = kMaxDenseDimension);

  const BlockadeBasis& basis() const { return basis_; }
  const SparseIntMatrix& hamiltonian() const { return hamiltonian_; }
  // Ascending.
  const Eigen::VectorXd& energies() const { return energies_; }
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

  // e^{-iHt}|0>
  Eigen::VectorXcd state(double t) const;

  // <psi(t)| op |psi(t)> / normalization. Throws std::runtime_error if the
  // imaginary part exceeds 1e-10 (op not self-adjoint).
  double expectation(const SparseIntMatrix& op, double normalization, double t) const;

  EvolutionResult evolve(const ObservableSpec& observable, std::span<const double> times) const;

 private:
  void factorize(std::size_t max_dimension);

  BlockadeBasis basis_;
  SparseIntMatrix hamiltonian_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd vacuum_weights_;  // V^T e_0
};

EvolutionResult evolve(const ModelSpec& model, const ObservableSpec& observable, std::span<const double> times);

struct TaylorOracleResult {
  // <ad^k(O)> / normalization for k = 0..moments.size()-1.
  std::vector<Rational> moments;
  SeriesCoefficients coefficients;
};

// Exact moments from integer vectors v_m = H^m|0>:
//   <ad^k(O)> = sum_m (-1)^m binom(k, m) v_{k-m}^T O v_m.
// jmax is in the observable's layout (t^(2j) or t^j).
TaylorOracleResult taylor_oracle(const ModelSpec& model, const ObservableSpec& observable, int jmax);

// Infinite-line coefficients through jmax from the oracle on the smallest
// ring whose universality threshold reaches jmax. Density and correlations
// only. The result is labelled with the infinite-line model.
SeriesCoefficients universal_coefficients_via_oracle(const ObservableSpec& observable, int blockade_range, int jmax);

struct G2Result {
  EvolutionResult ratio;             // NaN where undefined
  std::vector<std::size_t> undefined;  // indices with denominator < 1e-14
};

// <n_k n_{k+d}> / (<n_k><n_{k+d}>) at strictly positive times.
G2Result g2(const ModelSpec& model, int distance, std::span<const double> times, int site = 1);

struct SpectralReport {
  std::size_t dimension = 0;
  double symmetry_defect = 0;      // max |E_i + E_{dim+1-i}|
  bool parity_anticommutes = false;  // P H + H P == 0, exact integers
  double parity_weight_defect = 0;   // max | ||Psi_even||^2 - 1/2 | over |E| > 1e-8
  double evenness_defect = 0;        // max |rho(t) - rho(-t)|
  double norm_defect = 0;            // max | ||psi(t)|| - 1 |
  bool zero_mode_required = false;   // odd dimension
  bool zero_mode_found = false;
  double degenerate_defect = 0;      // density difference against a reversed basis ordering
};

SpectralReport spectral_checks(const ModelSpec& model, std::span<const double> sample_times = {});

// First grid time where |<O>_a - <O>_b| > epsilon, or empty if none.
std::optional<double> universal_window(const ModelSpec& a, const ModelSpec& b, const ObservableSpec& observable,
                                       double epsilon, std::span<const double> times);

struct WindowStatistics {
  double mean = 0;
  double variance = 0;
  std::size_t samples = 0;
};

// Population mean and variance of values with t_start <= t <= t_stop.
WindowStatistics window_statistics(const EvolutionResult& result, double t_start, double t_stop);

// n evenly spaced points from start to stop inclusive.
std::vector<double> time_grid(double start, double stop, int points);

}  // namespace rydberg
