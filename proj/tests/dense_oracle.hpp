#pragma once

// Brute-force reference objects on the full 2^L Hilbert space, built
// directly from bit manipulations and independent of the library's
// symbolic engine and blockade basis.

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "rydberg/word_algebra.hpp"

namespace oracle {

using rydberg::Letter;
using rydberg::Rational;

struct DenseQ {
  int n = 0;
  std::vector<Rational> a;  // row-major

  explicit DenseQ(int dim = 0) : n(dim), a(static_cast<std::size_t>(dim) * dim) {}
  Rational& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const Rational& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  friend DenseQ operator*(const DenseQ& x, const DenseQ& y) {
    DenseQ z(x.n);
    for (int i = 0; i < x.n; ++i)
      for (int k = 0; k < x.n; ++k) {
        if (x(i, k) == 0) continue;
        for (int j = 0; j < x.n; ++j) z(i, j) += x(i, k) * y(k, j);
      }
    return z;
  }
  friend DenseQ operator-(const DenseQ& x, const DenseQ& y) {
    DenseQ z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
    return z;
  }
  friend bool operator==(const DenseQ& x, const DenseQ& y) { return x.n == y.n && x.a == y.a; }
};

// Image of basis state s under one letter at bit b; false if annihilated.
inline bool apply_letter(Letter l, int bit, std::uint64_t& s) {
  const bool up = (s >> bit) & 1U;
  switch (l) {
    case Letter::kLower:
      if (!up) return false;
      s &= ~(std::uint64_t{1} << bit);
      return true;
    case Letter::kRaise:
      if (up) return false;
      s |= std::uint64_t{1} << bit;
      return true;
    case Letter::kNumber:
      return up;
    case Letter::kProjector:
      return !up;
  }
  return false;
}

// Word on sites 1..L (site k is bit k-1).
inline DenseQ word_dense(const rydberg::Word& w, int sites) {
  const int dim = 1 << sites;
  DenseQ m(dim);
  for (int s = 0; s < dim; ++s) {
    std::uint64_t t = static_cast<std::uint64_t>(s);
    bool alive = true;
    // Rightmost factor acts first, but letters on distinct sites commute.
    for (const auto& e : w.entries()) alive = alive && apply_letter(e.letter, e.site - 1, t);
    if (alive) m(static_cast<int>(t), s) = 1;
  }
  return m;
}

inline DenseQ sum_dense(const rydberg::OperatorSum& op, int sites) {
  DenseQ m(1 << sites);
  for (const auto& [w, c] : op.terms()) {
    const DenseQ wm = word_dense(w, sites);
    for (std::size_t i = 0; i < m.a.size(); ++i)
      if (wm.a[i] != 0) m.a[i] += c * wm.a[i];
  }
  return m;
}

inline int site_distance(bool ring, int sites, int a, int b) {
  const int d = std::abs(a - b);
  return ring ? std::min(d, sites - d) : d;
}

// H = sum_k sigma^x_k prod_{0 < dist(j,k) <= lambda} (1 - n_j).
inline DenseQ hamiltonian_dense(bool ring, int sites, int lambda) {
  const int dim = 1 << sites;
  DenseQ h(dim);
  for (int s = 0; s < dim; ++s) {
    for (int k = 0; k < sites; ++k) {
      bool free = true;
      for (int j = 0; j < sites; ++j) {
        if (j == k) continue;
        const int d = site_distance(ring, sites, j, k);
        if (d <= lambda && ((s >> j) & 1)) free = false;
      }
      if (free) h(s ^ (1 << k), s) += 1;
    }
  }
  return h;
}

// <0| ad_H^k(O) |0> for k = 0..kmax from v_m = H^m |0>.
inline std::vector<Rational> dense_moments(const DenseQ& h, const DenseQ& o, int kmax) {
  std::vector<std::vector<Rational>> v(1, std::vector<Rational>(h.n));
  v[0][0] = 1;
  for (int m = 1; m <= kmax; ++m) {
    std::vector<Rational> next(h.n);
    for (int i = 0; i < h.n; ++i)
      for (int j = 0; j < h.n; ++j)
        if (h(i, j) != 0 && v[m - 1][j] != 0) next[i] += h(i, j) * v[m - 1][j];
    v.push_back(std::move(next));
  }
  std::vector<Rational> out;
  for (int k = 0; k <= kmax; ++k) {
    Rational acc = 0;
    Rational binom = 1;
    for (int m = 0; m <= k; ++m) {
      // v_{k-m}^T O v_m
      Rational inner = 0;
      for (int i = 0; i < h.n; ++i) {
        if (v[k - m][i] == 0) continue;
        for (int j = 0; j < h.n; ++j)
          if (o(i, j) != 0 && v[m][j] != 0) inner += v[k - m][i] * o(i, j) * v[m][j];
      }
      acc += (m % 2 ? -binom : binom) * inner;
      binom = binom * (k - m) / (m + 1);
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace oracle
