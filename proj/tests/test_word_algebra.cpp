#include <doctest.h>

#include <array>

#include "dense_oracle.hpp"
#include "rydberg/word_algebra.hpp"

using namespace rydberg;

TEST_SUITE("word-algebra") {
  TEST_CASE("letter product table agrees with 2x2 matrices") {
    // Basis (|0>, |1>), entry [row][col].
    using M = std::array<std::array<int, 2>, 2>;
    auto mat = [](Letter l) -> M {
      switch (l) {
        case Letter::kLower: return {{{0, 1}, {0, 0}}};
        case Letter::kRaise: return {{{0, 0}, {1, 0}}};
        case Letter::kNumber: return {{{0, 0}, {0, 1}}};
        case Letter::kProjector: return {{{1, 0}, {0, 0}}};
      }
      return {};
    };
    auto mul = [](const M& a, const M& b) {
      M c{};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
      return c;
    };
    const std::array letters{Letter::kLower, Letter::kRaise, Letter::kNumber, Letter::kProjector};
    for (Letter a : letters) {
      for (Letter b : letters) {
        const M want = mul(mat(a), mat(b));
        const auto got = letter_mul(a, b);
        if (want == M{}) {
          CHECK_FALSE(got.has_value());
        } else {
          REQUIRE(got.has_value());
          CHECK(mat(*got) == want);
        }
      }
      M adj{};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) adj[i][j] = mat(a)[j][i];
      CHECK(mat(adjoint(a)) == adj);
    }
  }

  TEST_CASE("words are canonical and reject repeated sites") {
    const Word w = Word::from_entries({{3, Letter::kNumber}, {1, Letter::kLower}});
    CHECK(w.min_site() == 1);
    CHECK(w.length() == 3);
    CHECK(w.single_count() == 1);
    CHECK_FALSE(w.projectors_only());
    CHECK(w.adjoint() == Word::from_entries({{1, Letter::kRaise}, {3, Letter::kNumber}}));
    CHECK(w.shifted(2).min_site() == 3);
    CHECK_THROWS_AS(Word::from_entries({{1, Letter::kLower}, {1, Letter::kRaise}}), std::invalid_argument);
    CHECK(Word().length() == 0);
  }

  TEST_CASE("text round trip") {
    const Word w = parse_word("1:r 2:m 4:rd");
    CHECK(parse_word(to_text(w)) == w);
    OperatorSum op = OperatorSum(w, Rational(3, 7)) + OperatorSum(parse_word("2:n"), Rational(-5));
    CHECK(parse_operator_sum(to_text(op)) == op);
    CHECK_THROWS(parse_word("1:x"));
  }

  TEST_CASE("operator products match dense matrices") {
    const OperatorSum a = OperatorSum(parse_word("1:r 2:m"), 2) + OperatorSum(parse_word("2:rd 3:n"), Rational(1, 3));
    const OperatorSum b = OperatorSum(parse_word("1:rd"), -1) + OperatorSum(parse_word("2:r 3:m"), 5);
    CHECK(oracle::sum_dense(a * b, 3) == oracle::sum_dense(a, 3) * oracle::sum_dense(b, 3));
    CHECK(oracle::sum_dense(adjoint(a), 3).a.size() == 64);
    CHECK((a - a).empty());
  }

  TEST_CASE("commutator with H matches the dense commutator") {
    struct Case { bool ring; int sites; int lambda; const char* word; };
    for (const Case& c : {Case{true, 5, 1, "1:n"}, Case{true, 5, 1, "2:r 3:m"}, Case{false, 5, 1, "1:rd"},
                          Case{false, 6, 2, "3:n 5:r"}, Case{true, 6, 2, "1:m 2:rd"}}) {
      CAPTURE(c.word);
      const ModelSpec model = c.ring ? ModelSpec::ring(c.sites, c.lambda) : ModelSpec::line(c.sites, c.lambda);
      const oracle::DenseQ h = oracle::hamiltonian_dense(c.ring, c.sites, c.lambda);
      OperatorSum op(parse_word(c.word));
      oracle::DenseQ dense = oracle::sum_dense(op, c.sites);
      for (int k = 1; k <= 3; ++k) {
        op = commutator_H(op, model);
        dense = h * dense - dense * h;
        CHECK(oracle::sum_dense(op, c.sites) == dense);
      }
    }
  }

  TEST_CASE("vacuum moments agree with full ad powers and the dense oracle") {
    const ModelSpec model = ModelSpec::ring(6, 1);
    const OperatorSum n1(parse_word("1:n"));
    const auto moments = vacuum_moments(n1, model, 8);
    const auto dense = oracle::dense_moments(oracle::hamiltonian_dense(true, 6, 1), oracle::sum_dense(n1, 6), 8);
    for (int k = 0; k <= 8; ++k) {
      CAPTURE(k);
      CHECK(moments[k] == dense[k]);
      if (k <= 6) CHECK(vacuum_expectation(ad_power(n1, model, k)) == moments[k]);
    }
    CHECK(moments[2] == -2);
    CHECK(moments[4] == -24);  // same as the infinite chain at this order
  }

  TEST_CASE("budget exhaustion reports the completed order") {
    AdBudget tight;
    tight.max_terms = 50;
    try {
      ad_power(OperatorSum(parse_word("1:n")), ModelSpec::infinite_line(), 10, tight);
      FAIL("expected BudgetExhausted");
    } catch (const BudgetExhausted& e) {
      CHECK(e.reached_order() >= 1);
      CHECK(e.reached_order() < 10);
    }
  }

  TEST_CASE("hamiltonian terms carry the blockade neighborhood") {
    const auto terms = hamiltonian_terms(ModelSpec::ring(4, 1));
    REQUIRE(terms.size() == 4);
    CHECK(terms[0].coefficient(parse_word("1:r 2:m 4:m")) == 1);
    CHECK(terms[0].coefficient(parse_word("1:rd 2:m 4:m")) == 1);
    CHECK(terms[0].size() == 2);
    CHECK(hamiltonian_term(ModelSpec::line(4, 1), 1).coefficient(parse_word("1:r 2:m")) == 1);
  }
}
