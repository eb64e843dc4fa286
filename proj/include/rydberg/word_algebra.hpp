#pragma once

// Exact symbolic algebra of site-local two-level operators.
//
// Every operator is a sum of words: products of single-site letters
//   r  (lowering),  rd (raising),  n = rd r,  m = 1 - n
// at strictly increasing sites, with arbitrary-precision rational
// coefficients. The identity at a site is the absence of a letter.
//
// The full single-site product table follows from r^2 = 0 and {r, rd} = 1:
//
//          r     rd    n     m
//     r    0     m     r     0
//     rd   n     0     0     rd
//     n    0     rd    n     0
//     m    r     0     0     m
//
// so the product of two letters is always a single letter or zero, and the
// product of two words is a word or zero.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rydberg/model.hpp"

namespace rydberg {

using Rational = mpq_class;

enum class Letter : std::uint8_t { kLower = 0, kRaise = 1, kNumber = 2, kProjector = 3 };

std::optional<Letter> letter_mul(Letter a, Letter b);
Letter adjoint(Letter a);
bool is_single(Letter a);
std::string_view letter_name(Letter a);
Letter parse_letter(std::string_view name);

class Word {
 public:
  struct Entry {
    std::int32_t site;
    Letter letter;
    auto operator<=>(const Entry&) const = default;
  };

  Word() = default;
  Word(std::initializer_list<Entry> entries);
  // Sorts by site; throws std::invalid_argument on a repeated site.
  static Word from_entries(std::vector<Entry> entries);

  std::span<const Entry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // max site - min site + 1; zero for the identity.
  int length() const;
  // Number of r / rd letters.
  int single_count() const;
  bool projectors_only() const;
  std::optional<Letter> letter_at(int site) const;
  int min_site() const { return entries_.front().site; }
  int max_site() const { return entries_.back().site; }

  Word adjoint() const;
  Word shifted(int offset) const;

  std::size_t hash() const;

  auto operator<=>(const Word&) const = default;

 private:
  std::vector<Entry> entries_;
  friend std::optional<Word> word_mul(const Word&, const Word&);
};

struct WordHash {
  std::size_t operator()(const Word& w) const { return w.hash(); }
};

// Site-wise letter product; nullopt if any site multiplies to zero.
std::optional<Word> word_mul(const Word& x, const Word& y);

// Canonical sum of words: terms sorted by word, no zero coefficients.
class OperatorSum {
 public:
  using Term = std::pair<Word, Rational>;

  OperatorSum() = default;
  explicit OperatorSum(Word w, Rational c = 1);
  static OperatorSum from_terms(std::vector<Term> terms);
  // Terms must already be sorted by word, unique and nonzero.
  static OperatorSum from_canonical(std::vector<Term> terms);

  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  Rational coefficient(const Word& w) const;

  OperatorSum& operator+=(const OperatorSum& other);
  OperatorSum& operator-=(const OperatorSum& other);
  OperatorSum& operator*=(const Rational& scalar);

  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
  friend OperatorSum operator*(OperatorSum a, const Rational& s) { return a *= s; }
  friend OperatorSum operator*(const Rational& s, OperatorSum a) { return a *= s; }
  friend OperatorSum operator*(const OperatorSum& a, const OperatorSum& b);
  friend bool operator==(const OperatorSum& a, const OperatorSum& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<Term> terms_;
};

OperatorSum adjoint(const OperatorSum& op);

// H_k for one site: Delta_k dressed by projectors on the blockade
// neighborhood. Valid for every topology.
OperatorSum hamiltonian_term(const ModelSpec& model, int site);

// All H_k of a finite lattice, k = 1..L.
std::vector<OperatorSum> hamiltonian_terms(const ModelSpec& model);

// [H, op], summing only the H_k whose support meets the support of op.
OperatorSum commutator_H(const OperatorSum& op, const ModelSpec& model);

struct AdBudget {
  int max_order = 24;
  std::size_t max_terms = 8'000'000;
};

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(const std::string& what, int reached_order)
      : std::runtime_error(what), reached_order_(reached_order) {}
  // Highest order that was completed before the budget ran out.
  int reached_order() const { return reached_order_; }

 private:
  int reached_order_;
};

OperatorSum ad_power(const OperatorSum& a, const ModelSpec& model, int order,
                     const AdBudget& budget = {});

// <0| op |0> in the all-ground product state.
Rational vacuum_expectation(const OperatorSum& op);

// <0| ad_H^j(a) |0> for j = 0..max_order. Words whose single-letter count
// exceeds the remaining number of commutator steps can never reach a
// projector-only word and are dropped along the way, so this is far cheaper
// than calling ad_power for every order.
std::vector<Rational> vacuum_moments(const OperatorSum& a, const ModelSpec& model, int max_order,
                                     const AdBudget& budget = {});

// Line-oriented text form: "<num>/<den> <site>:<letter> ..." per term.
std::string to_text(const OperatorSum& op);
OperatorSum parse_operator_sum(std::string_view text);
// "1:r 3:m" -> r_1 m_3
Word parse_word(std::string_view text);
std::string to_text(const Word& w);

}  // namespace rydberg
