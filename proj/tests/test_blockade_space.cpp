#include <doctest.h>

#include <stdexcept>

#include <bit>

#include "rydberg/blockade_space.hpp"

using namespace rydberg;

namespace {

std::size_t brute_count(bool ring, int sites, int lambda) {
  std::size_t count = 0;
  for (Occupation s = 0; s < (Occupation{1} << sites); ++s) {
    bool ok = true;
    for (int a = 0; a < sites && ok; ++a)
      for (int b = a + 1; b < sites && ok; ++b) {
        if (!((s >> a) & 1) || !((s >> b) & 1)) continue;
        const int d = ring ? std::min(b - a, sites - b + a) : b - a;
        ok = d > lambda;
      }
    count += ok;
  }
  return count;
}

}  // namespace

TEST_SUITE("blockade-space") {
  TEST_CASE("dimensions match brute-force enumeration") {
    for (int lambda : {1, 2, 3}) {
      for (int L = 2; L <= 14; ++L) {
        CAPTURE(L);
        CAPTURE(lambda);
        CHECK(build_basis(ModelSpec::line(L, lambda)).dimension() == brute_count(false, L, lambda));
        if (lambda < L) CHECK(build_basis(ModelSpec::ring(L, lambda)).dimension() == brute_count(true, L, lambda));
      }
    }
    // Lucas numbers on the nearest-neighbour ring, Fibonacci on the line.
    CHECK(build_basis(ModelSpec::ring(10)).dimension() == 123);
    CHECK(line_dimension(10) == 144);
    CHECK(line_dimension(1) == 2);
    CHECK_THROWS(build_basis(ModelSpec::ring(3, 3)));
  }

  TEST_CASE("basis bookkeeping") {
    const BlockadeBasis b = build_basis(ModelSpec::ring(8, 2));
    CHECK(b.state(0) == 0);
    for (std::size_t i = 0; i < b.dimension(); ++i) {
      CHECK(is_admissible(b.model(), b.state(i)));
      CHECK(*b.index_of(b.state(i)) == i);
    }
    CHECK_FALSE(b.index_of(0b11).has_value());
    CHECK_FALSE(is_admissible(ModelSpec::ring(5), 0b10001));
    CHECK(is_admissible(ModelSpec::line(5), 0b10001));
  }

  TEST_CASE("Hamiltonian structure") {
    const BlockadeBasis b = build_basis(ModelSpec::ring(9));
    const SparseIntMatrix h = hamiltonian_matrix(b);
    CHECK(h.is_symmetric());
    CHECK(h.transposed() == h);
    const SparseIntMatrix p = parity_matrix(b);
    CHECK(p.is_diagonal());
    const SparseIntMatrix anti = p * h + h * p;
    CHECK(anti.entries().empty());
    // Every nonzero entry connects states differing in one excitation.
    for (const auto& e : h.entries()) {
      CHECK(e.value == 1);
      CHECK(std::popcount(b.state(e.row) ^ b.state(e.col)) == 1);
    }
    // The vacuum couples to every single excitation.
    CHECK(h.row(0).size() == 9);
  }

  TEST_CASE("line recursions reproduce the bit-flip construction") {
    for (int L = 1; L <= 12; ++L) {
      CAPTURE(L);
      const BlockadeBasis b = build_basis(ModelSpec::line(L));
      CHECK(line_hamiltonian_recursive(L) == hamiltonian_matrix(b));
      CHECK(line_number_recursive(L) == observable_matrix(b, ObservableSpec::density()));
    }
  }

  TEST_CASE("sparse matrix arithmetic") {
    const SparseIntMatrix a(2, {{0, 1, 2}, {1, 0, 3}});
    const SparseIntMatrix d = SparseIntMatrix::diagonal(std::vector<std::int64_t>{1, -1});
    const SparseIntMatrix prod = a * d;
    CHECK(prod.at(0, 1) == -2);
    CHECK(prod.at(1, 0) == 3);
    CHECK((a + d).at(0, 0) == 1);
    CHECK((d + d * SparseIntMatrix::diagonal(std::vector<std::int64_t>{-1, -1})).entries().empty());
    const std::vector<double> v{1.0, 2.0};
    CHECK(a.apply(std::span<const double>(v)) == std::vector<double>{4.0, 3.0});
    const std::vector<mpz_class> z{1, 2};
    CHECK(a.apply(std::span<const mpz_class>(z)) == std::vector<mpz_class>{4, 3});
    CHECK(to_coordinate_text(a) == "1 2 2\n2 1 3\n");
  }

  TEST_CASE("observables and words") {
    const BlockadeBasis b = build_basis(ModelSpec::ring(6));
    const SparseIntMatrix n1 = word_matrix(b, parse_word("1:n"));
    CHECK(n1.is_diagonal());
    const SparseIntMatrix flip = word_matrix(b, parse_word("1:rd 2:m 6:m"));
    CHECK(flip.at(*b.index_of(0b1), 0) == 1);
    // Moves an excitation from site 2 to site 1.
    const SparseIntMatrix hop = word_matrix(b, parse_word("1:rd 2:r"));
    CHECK(hop.at(*b.index_of(0b1), *b.index_of(0b10)) == 1);
    CHECK(observable_normalization(ModelSpec::ring(6), ObservableSpec::density()) == 6);
    CHECK(observable_normalization(ModelSpec::line(6), ObservableSpec::correlation(2)) == 4);
    CHECK(translate(ModelSpec::ring(6), 0b100000) == 0b1);
  }
}
