#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "rydberg/model.hpp"
#include "rydberg/series.hpp"
#include "rydberg/word_algebra.hpp"

namespace rydberg {

// Bit k-1 set means site k holds a Rydberg excitation.
using Occupation = std::uint64_t;

// Integer matrix in coordinate form, entries sorted by (row, col) with
// zero entries dropped. Both triangles of symmetric matrices are stored.
class SparseIntMatrix {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    std::int64_t value;
    auto operator<=>(const Entry&) const = default;
  };

  SparseIntMatrix() = default;
  SparseIntMatrix(std::size_t dimension, std::vector<Entry> entries);
  static SparseIntMatrix diagonal(std::span<const std::int64_t> values);

  std::size_t dimension() const { return dimension_; }
  std::span<const Entry> entries() const { return entries_; }
  std::span<const Entry> row(std::size_t r) const;
  std::int64_t at(std::size_t r, std::size_t c) const;

  bool is_symmetric() const;
  bool is_diagonal() const;
  SparseIntMatrix transposed() const;

  friend SparseIntMatrix operator+(const SparseIntMatrix& a, const SparseIntMatrix& b);
  friend SparseIntMatrix operator*(const SparseIntMatrix& a, const SparseIntMatrix& b);
  friend bool operator==(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    return a.dimension_ == b.dimension_ && a.entries_ == b.entries_;
  }

  std::vector<mpz_class> apply(std::span<const mpz_class> v) const;
  std::vector<double> apply(std::span<const double> v) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_start_;
};

// 1-based "row col value" lines, sorted.
std::string to_coordinate_text(const SparseIntMatrix& m);

class BlockadeBasis {
 public:
  BlockadeBasis(ModelSpec model, std::vector<Occupation> states);

  const ModelSpec& model() const { return model_; }
  std::span<const Occupation> states() const { return states_; }
  std::size_t dimension() const { return states_.size(); }
  Occupation state(std::size_t i) const { return states_[i]; }
  std::optional<std::size_t> index_of(Occupation s) const;

 private:
  ModelSpec model_;
  std::vector<Occupation> states_;
  std::unordered_map<Occupation, std::size_t> index_;
};

// No two excitations within the blockade range (cyclic distance on a ring).
bool is_admissible(const ModelSpec& model, Occupation s);

// Line with lambda_b = 1 follows B(L) = B(L-1)|0> u B(L-2)|01>; every other
// case lists admissible occupations in ascending integer order. The vacuum
// is always index 0.
BlockadeBasis build_basis(const ModelSpec& model);

// Dimension d(L) of the nearest-neighbour line, d(1) = 2, d(2) = 3.
std::uint64_t line_dimension(int sites);

// Bit-flip construction: <s'|H|s> = 1 iff s' = s xor e_k and both states
// are admissible.
SparseIntMatrix hamiltonian_matrix(const BlockadeBasis& basis);

// Block recursions for the nearest-neighbour line in the recursive basis
// ordering: H(L) = [[H(L-1), K], [K^T, H(L-2)]] with K = [I; 0], and
// N(L) = diag(N(L-1), N(L-2) + I).
SparseIntMatrix line_hamiltonian_recursive(int sites);
SparseIntMatrix line_number_recursive(int sites);

// Representation of a word restricted to the blockade subspace; images
// outside the subspace are dropped.
SparseIntMatrix word_matrix(const BlockadeBasis& basis, const Word& word);

// Integer matrix whose expectation, divided by observable_normalization,
// is the observable: total number for the density, n_1 n_{1+d} on a ring
// and the pair sum on a line for correlations.
SparseIntMatrix observable_matrix(const BlockadeBasis& basis, const ObservableSpec& observable);
std::int64_t observable_normalization(const ModelSpec& model, const ObservableSpec& observable);

// diag((-1)^popcount)
SparseIntMatrix parity_matrix(const BlockadeBasis& basis);

// Cyclic shift k -> k+1 of a ring occupation.
Occupation translate(const ModelSpec& model, Occupation s);

}  // namespace rydberg
