#include "rydberg/word_algebra.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>
#include <unordered_map>

namespace rydberg {

namespace {

constexpr std::optional<Letter> kZero = std::nullopt;

// kProductTable[a][b] = a * b, indexed by the Letter enum values.
const std::array<std::array<std::optional<Letter>, 4>, 4> kProductTable = {{
    // r * {r, rd, n, m}
    {kZero, Letter::kProjector, Letter::kLower, kZero},
    // rd * {r, rd, n, m}
    {Letter::kNumber, kZero, kZero, Letter::kRaise},
    // n * {r, rd, n, m}
    {kZero, Letter::kRaise, Letter::kNumber, kZero},
    // m * {r, rd, n, m}
    {Letter::kLower, kZero, kZero, Letter::kProjector},
}};

using Accumulator = std::unordered_map<Word, Rational, WordHash>;

void accumulate(Accumulator& acc, Word w, const Rational& c) {
  auto [it, inserted] = acc.try_emplace(std::move(w), c);
  if (!inserted) it->second += c;
}

std::vector<OperatorSum::Term> drain(Accumulator& acc) {
  std::vector<OperatorSum::Term> out;
  out.reserve(acc.size());
  for (auto& [w, c] : acc) {
    if (sgn(c) != 0) out.emplace_back(w, std::move(c));
  }
  acc.clear();
  std::sort(out.begin(), out.end(),
            [](const OperatorSum::Term& a, const OperatorSum::Term& b) { return a.first < b.first; });
  return out;
}

Word flip_word(const ModelSpec& model, int site, Letter letter) {
  std::vector<Word::Entry> entries;
  for (int j : model.neighborhood(site)) entries.push_back({j, Letter::kProjector});
  entries.push_back({model.wrap(site), letter});
  return Word::from_entries(std::move(entries));
}

// The two words (r_k and rd_k, each dressed by neighborhood projectors) of
// every H_k. Finite lattices are tabulated; the infinite line translates a
// template anchored at site 0.
class HamiltonianTable {
 public:
  explicit HamiltonianTable(const ModelSpec& model) : model_(model) {
    if (model.is_finite()) {
      for (int k = 1; k <= model.sites; ++k) {
        table_.push_back({flip_word(model, k, Letter::kLower), flip_word(model, k, Letter::kRaise)});
      }
    } else {
      template_ = {flip_word(model, 0, Letter::kLower), flip_word(model, 0, Letter::kRaise)};
    }
  }

  std::array<Word, 2> words(int site) const {
    if (model_.is_finite()) return table_[site - 1];
    return {template_[0].shifted(site), template_[1].shifted(site)};
  }

  // Sites k whose H_k overlaps the support of w.
  std::vector<int> touching(const Word& w) const {
    std::vector<int> ks;
    const int range = model_.blockade_range;
    for (const auto& e : w.entries()) {
      for (int k = e.site - range; k <= e.site + range; ++k) {
        if (model_.topology == Topology::kLine && (k < 1 || k > model_.sites)) continue;
        ks.push_back(model_.wrap(k));
      }
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
  }

 private:
  const ModelSpec& model_;
  std::vector<std::array<Word, 2>> table_;
  std::array<Word, 2> template_;
};

// acc += c * [H, x], optionally skipping products with too many single letters.
void add_commutator(Accumulator& acc, const HamiltonianTable& table, const Word& x,
                    const Rational& c, int max_singles) {
  const Rational minus_c = -c;
  for (int k : table.touching(x)) {
    for (const Word& h : table.words(k)) {
      if (auto hx = word_mul(h, x); hx && hx->single_count() <= max_singles) {
        accumulate(acc, std::move(*hx), c);
      }
      if (auto xh = word_mul(x, h); xh && xh->single_count() <= max_singles) {
        accumulate(acc, std::move(*xh), minus_c);
      }
    }
  }
}

}  // namespace

std::optional<Letter> letter_mul(Letter a, Letter b) {
  return kProductTable[static_cast<int>(a)][static_cast<int>(b)];
}

Letter adjoint(Letter a) {
  switch (a) {
    case Letter::kLower:
      return Letter::kRaise;
    case Letter::kRaise:
      return Letter::kLower;
    default:
      return a;
  }
}

bool is_single(Letter a) { return a == Letter::kLower || a == Letter::kRaise; }

std::string_view letter_name(Letter a) {
  switch (a) {
    case Letter::kLower:
      return "r";
    case Letter::kRaise:
      return "rd";
    case Letter::kNumber:
      return "n";
    case Letter::kProjector:
      return "m";
  }
  return "?";
}

Letter parse_letter(std::string_view name) {
  if (name == "r") return Letter::kLower;
  if (name == "rd") return Letter::kRaise;
  if (name == "n") return Letter::kNumber;
  if (name == "m") return Letter::kProjector;
  throw std::invalid_argument("unknown letter '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Word

Word::Word(std::initializer_list<Entry> entries) : Word(from_entries(std::vector<Entry>(entries))) {}

Word Word::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].site == entries[i - 1].site) {
      throw std::invalid_argument("word has two letters on site " + std::to_string(entries[i].site));
    }
  }
  Word w;
  w.entries_ = std::move(entries);
  return w;
}

int Word::length() const { return empty() ? 0 : max_site() - min_site() + 1; }

int Word::single_count() const {
  return static_cast<int>(std::count_if(entries_.begin(), entries_.end(),
                                        [](const Entry& e) { return is_single(e.letter); }));
}

bool Word::projectors_only() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Entry& e) { return e.letter == Letter::kProjector; });
}

std::optional<Letter> Word::letter_at(int site) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), site,
                             [](const Entry& e, int s) { return e.site < s; });
  if (it == entries_.end() || it->site != site) return std::nullopt;
  return it->letter;
}

Word Word::adjoint() const {
  Word w = *this;
  for (auto& e : w.entries_) e.letter = rydberg::adjoint(e.letter);
  return w;
}

Word Word::shifted(int offset) const {
  Word w = *this;
  for (auto& e : w.entries_) e.site += offset;
  return w;
}

std::size_t Word::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& e : entries_) {
    std::uint64_t v = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.site)) << 2) |
                      static_cast<std::uint64_t>(e.letter);
    h ^= v;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

std::optional<Word> word_mul(const Word& x, const Word& y) {
  Word out;
  out.entries_.reserve(x.size() + y.size());
  auto a = x.entries_.begin();
  auto b = y.entries_.begin();
  while (a != x.entries_.end() && b != y.entries_.end()) {
    if (a->site < b->site) {
      out.entries_.push_back(*a++);
    } else if (b->site < a->site) {
      out.entries_.push_back(*b++);
    } else {
      auto p = letter_mul(a->letter, b->letter);
      if (!p) return std::nullopt;
      out.entries_.push_back({a->site, *p});
      ++a;
      ++b;
    }
  }
  out.entries_.insert(out.entries_.end(), a, x.entries_.end());
  out.entries_.insert(out.entries_.end(), b, y.entries_.end());
  return out;
}

// ---------------------------------------------------------------------------
// OperatorSum

OperatorSum::OperatorSum(Word w, Rational c) {
  if (sgn(c) != 0) terms_.emplace_back(std::move(w), std::move(c));
}

OperatorSum OperatorSum::from_terms(std::vector<Term> terms) {
  Accumulator acc;
  for (auto& [w, c] : terms) accumulate(acc, std::move(w), c);
  OperatorSum out;
  out.terms_ = drain(acc);
  return out;
}

OperatorSum OperatorSum::from_canonical(std::vector<Term> terms) {
  OperatorSum out;
  out.terms_ = std::move(terms);
  return out;
}

Rational OperatorSum::coefficient(const Word& w) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), w,
                             [](const Term& t, const Word& key) { return t.first < key; });
  if (it == terms_.end() || it->first != w) return 0;
  return it->second;
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      Rational c = a->second + b->second;
      if (sgn(c) != 0) merged.emplace_back(std::move(a->first), std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

OperatorSum& OperatorSum::operator-=(const OperatorSum& other) { return *this += other * Rational(-1); }

OperatorSum& OperatorSum::operator*=(const Rational& scalar) {
  if (sgn(scalar) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= scalar;
  return *this;
}

OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
  Accumulator acc;
  for (const auto& [x, cx] : a.terms_) {
    for (const auto& [y, cy] : b.terms_) {
      if (auto p = word_mul(x, y)) accumulate(acc, std::move(*p), cx * cy);
    }
  }
  OperatorSum out;
  out.terms_ = drain(acc);
  return out;
}

OperatorSum adjoint(const OperatorSum& op) {
  std::vector<OperatorSum::Term> terms;
  terms.reserve(op.size());
  for (const auto& [w, c] : op.terms()) terms.emplace_back(w.adjoint(), c);
  return OperatorSum::from_terms(std::move(terms));
}

// ---------------------------------------------------------------------------
// Hamiltonian and commutators

OperatorSum hamiltonian_term(const ModelSpec& model, int site) {
  model.validate();
  return OperatorSum(flip_word(model, site, Letter::kLower)) +
         OperatorSum(flip_word(model, site, Letter::kRaise));
}

std::vector<OperatorSum> hamiltonian_terms(const ModelSpec& model) {
  model.validate();
  if (!model.is_finite()) {
    throw std::invalid_argument("hamiltonian_terms needs a finite lattice");
  }
  std::vector<OperatorSum> out;
  out.reserve(model.sites);
  for (int k = 1; k <= model.sites; ++k) out.push_back(hamiltonian_term(model, k));
  return out;
}

OperatorSum commutator_H(const OperatorSum& op, const ModelSpec& model) {
  model.validate();
  HamiltonianTable table(model);
  Accumulator acc;
  for (const auto& [w, c] : op.terms()) add_commutator(acc, table, w, c, 1 << 30);
  return OperatorSum::from_canonical(drain(acc));
}

OperatorSum ad_power(const OperatorSum& a, const ModelSpec& model, int order, const AdBudget& budget) {
  if (order < 0) throw std::invalid_argument("ad order must be >= 0");
  if (order > budget.max_order) {
    throw BudgetExhausted("ad order " + std::to_string(order) + " exceeds budget " +
                              std::to_string(budget.max_order),
                          0);
  }
  model.validate();
  HamiltonianTable table(model);
  OperatorSum current = a;
  for (int j = 1; j <= order; ++j) {
    Accumulator acc;
    for (const auto& [w, c] : current.terms()) add_commutator(acc, table, w, c, 1 << 30);
    current = OperatorSum::from_canonical(drain(acc));
    if (current.size() > budget.max_terms) {
      throw BudgetExhausted("term budget exceeded at ad order " + std::to_string(j), j - 1);
    }
  }
  return current;
}

Rational vacuum_expectation(const OperatorSum& op) {
  Rational sum = 0;
  for (const auto& [w, c] : op.terms()) {
    if (w.projectors_only()) sum += c;
  }
  return sum;
}

std::vector<Rational> vacuum_moments(const OperatorSum& a, const ModelSpec& model, int max_order,
                                     const AdBudget& budget) {
  if (max_order < 0) throw std::invalid_argument("moment order must be >= 0");
  if (max_order > budget.max_order) {
    throw BudgetExhausted("moment order " + std::to_string(max_order) + " exceeds budget " +
                              std::to_string(budget.max_order),
                          0);
  }
  model.validate();
  HamiltonianTable table(model);

  std::vector<Rational> moments;
  moments.reserve(max_order + 1);
  moments.push_back(vacuum_expectation(a));

  std::vector<OperatorSum::Term> current;
  for (const auto& t : a.terms()) {
    if (t.first.single_count() <= max_order) current.push_back(t);
  }
  Accumulator acc;
  for (int j = 1; j <= max_order; ++j) {
    const int remaining = max_order - j;
    for (const auto& [w, c] : current) add_commutator(acc, table, w, c, remaining);
    current = drain(acc);
    if (current.size() > budget.max_terms) {
      throw BudgetExhausted("term budget exceeded at moment order " + std::to_string(j), j - 1);
    }
    Rational m = 0;
    for (const auto& [w, c] : current) {
      if (w.projectors_only()) m += c;
    }
    moments.push_back(std::move(m));
  }
  return moments;
}

// ---------------------------------------------------------------------------
// Text form

std::string to_text(const Word& w) {
  std::string out;
  for (const auto& e : w.entries()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(e.site);
    out += ':';
    out += letter_name(e.letter);
  }
  return out;
}

std::string to_text(const OperatorSum& op) {
  std::ostringstream os;
  for (const auto& [w, c] : op.terms()) {
    os << c.get_num().get_str() << '/' << c.get_den().get_str();
    if (!w.empty()) os << ' ' << to_text(w);
    os << '\n';
  }
  return os.str();
}

Word parse_word(std::string_view text) {
  std::vector<Word::Entry> entries;
  std::istringstream is{std::string(text)};
  std::string token;
  while (is >> token) {
    auto colon = token.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("expected <site>:<letter>, got '" + token + "'");
    }
    int site = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + colon, site);
    if (ec != std::errc() || ptr != token.data() + colon) {
      throw std::invalid_argument("bad site in '" + token + "'");
    }
    entries.push_back({site, parse_letter(std::string_view(token).substr(colon + 1))});
  }
  return Word::from_entries(std::move(entries));
}

OperatorSum parse_operator_sum(std::string_view text) {
  std::vector<OperatorSum::Term> terms;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto space = line.find(' ', first);
    std::string coeff = line.substr(first, space == std::string::npos ? std::string::npos : space - first);
    Rational c;
    if (c.set_str(coeff, 10) != 0) throw std::invalid_argument("bad coefficient '" + coeff + "'");
    if (c.get_den() == 0) throw std::invalid_argument("zero denominator in '" + coeff + "'");
    c.canonicalize();
    Word w = space == std::string::npos ? Word{} : parse_word(std::string_view(line).substr(space));
    terms.emplace_back(std::move(w), std::move(c));
  }
  return OperatorSum::from_terms(std::move(terms));
}

}  // namespace rydberg
