#include "rydberg/blockade_space.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace rydberg {

namespace {

Occupation site_bit(int site) { return Occupation{1} << (site - 1); }

Occupation mask(int sites) { return sites >= 64 ? ~Occupation{0} : (Occupation{1} << sites) - 1; }

Occupation rotate_left(Occupation s, int by, int sites) {
  by %= sites;
  if (by == 0) return s;
  return ((s << by) | (s >> (sites - by))) & mask(sites);
}

void enumerate_line(int sites, int range, int site, Occupation current, std::vector<Occupation>& out) {
  if (site > sites) {
    out.push_back(current);
    return;
  }
  enumerate_line(sites, range, site + 1, current, out);
  // The last `range` sites must be empty before placing an excitation.
  Occupation recent = current >> std::max(0, site - 1 - range);
  if (recent == 0) enumerate_line(sites, range, site + 1, current | site_bit(site), out);
}

std::vector<Occupation> recursive_line_states(int sites) {
  std::vector<Occupation> prev2{0, 1};          // B(1)
  std::vector<Occupation> prev1{0, 1, 2};       // B(2)
  if (sites == 1) return prev2;
  if (sites == 2) return prev1;
  for (int L = 3; L <= sites; ++L) {
    std::vector<Occupation> next = prev1;
    for (Occupation s : prev2) next.push_back(s | site_bit(L));
    prev2 = std::move(prev1);
    prev1 = std::move(next);
  }
  return prev1;
}

void append_shifted(std::vector<SparseIntMatrix::Entry>& out, const SparseIntMatrix& m, std::size_t offset) {
  for (const auto& e : m.entries()) out.push_back({e.row + offset, e.col + offset, e.value});
}

}  // namespace

// ---------------------------------------------------------------------------
// SparseIntMatrix

SparseIntMatrix::SparseIntMatrix(std::size_t dimension, std::vector<Entry> entries) : dimension_(dimension) {
  std::sort(entries.begin(), entries.end());
  for (const auto& e : entries) {
    if (e.row >= dimension || e.col >= dimension) throw std::out_of_range("matrix entry outside dimension");
    if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
      entries_.back().value += e.value;
    } else {
      entries_.push_back(e);
    }
  }
  std::erase_if(entries_, [](const Entry& e) { return e.value == 0; });
  row_start_.assign(dimension_ + 1, 0);
  for (const auto& e : entries_) ++row_start_[e.row + 1];
  for (std::size_t r = 0; r < dimension_; ++r) row_start_[r + 1] += row_start_[r];
}

SparseIntMatrix SparseIntMatrix::diagonal(std::span<const std::int64_t> values) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < values.size(); ++i) entries.push_back({i, i, values[i]});
  return SparseIntMatrix(values.size(), std::move(entries));
}

std::span<const SparseIntMatrix::Entry> SparseIntMatrix::row(std::size_t r) const {
  return std::span<const Entry>(entries_).subspan(row_start_[r], row_start_[r + 1] - row_start_[r]);
}

std::int64_t SparseIntMatrix::at(std::size_t r, std::size_t c) const {
  for (const auto& e : row(r)) {
    if (e.col == c) return e.value;
  }
  return 0;
}

bool SparseIntMatrix::is_symmetric() const { return transposed() == *this; }

bool SparseIntMatrix::is_diagonal() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.row == e.col; });
}

SparseIntMatrix SparseIntMatrix::transposed() const {
  std::vector<Entry> t;
  t.reserve(entries_.size());
  for (const auto& e : entries_) t.push_back({e.col, e.row, e.value});
  return SparseIntMatrix(dimension_, std::move(t));
}

SparseIntMatrix operator+(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.dimension_ != b.dimension_) throw std::invalid_argument("matrix dimensions differ");
  std::vector<SparseIntMatrix::Entry> all(a.entries_.begin(), a.entries_.end());
  all.insert(all.end(), b.entries_.begin(), b.entries_.end());
  return SparseIntMatrix(a.dimension_, std::move(all));
}

SparseIntMatrix operator*(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.dimension_ != b.dimension_) throw std::invalid_argument("matrix dimensions differ");
  std::vector<SparseIntMatrix::Entry> out;
  for (const auto& ea : a.entries_) {
    for (const auto& eb : b.row(ea.col)) out.push_back({ea.row, eb.col, ea.value * eb.value});
  }
  return SparseIntMatrix(a.dimension_, std::move(out));
}

std::vector<mpz_class> SparseIntMatrix::apply(std::span<const mpz_class> v) const {
  if (v.size() != dimension_) throw std::invalid_argument("vector size does not match matrix");
  std::vector<mpz_class> out(dimension_);
  for (std::size_t r = 0; r < dimension_; ++r) {
    mpz_class& acc = out[r];
    for (const auto& e : row(r)) {
      if (e.value == 1) {
        acc += v[e.col];
      } else {
        acc += v[e.col] * static_cast<long>(e.value);
      }
    }
  }
  return out;
}

std::vector<double> SparseIntMatrix::apply(std::span<const double> v) const {
  if (v.size() != dimension_) throw std::invalid_argument("vector size does not match matrix");
  std::vector<double> out(dimension_, 0.0);
  for (std::size_t r = 0; r < dimension_; ++r) {
    for (const auto& e : row(r)) out[r] += static_cast<double>(e.value) * v[e.col];
  }
  return out;
}

std::string to_coordinate_text(const SparseIntMatrix& m) {
  std::ostringstream os;
  for (const auto& e : m.entries()) os << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Basis

BlockadeBasis::BlockadeBasis(ModelSpec model, std::vector<Occupation> states)
    : model_(model), states_(std::move(states)) {
  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!index_.emplace(states_[i], i).second) throw std::invalid_argument("duplicate basis state");
  }
}

std::optional<std::size_t> BlockadeBasis::index_of(Occupation s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool is_admissible(const ModelSpec& model, Occupation s) {
  if (!model.is_finite()) throw std::invalid_argument("occupations need a finite lattice");
  if ((s & ~mask(model.sites)) != 0) return false;
  for (int i = 1; i <= model.blockade_range; ++i) {
    if (model.topology == Topology::kRing) {
      if (i >= model.sites) break;
      if ((s & rotate_left(s, i, model.sites)) != 0) return false;
    } else if ((s & (s << i)) != 0) {
      return false;
    }
  }
  return true;
}

BlockadeBasis build_basis(const ModelSpec& model) {
  model.validate();
  if (!model.is_finite()) throw std::invalid_argument("blockade basis needs a finite lattice");
  if (model.topology == Topology::kRing && model.blockade_range >= model.sites) {
    throw std::invalid_argument("ring blockade range " + std::to_string(model.blockade_range) +
                                " >= L=" + std::to_string(model.sites) + " leaves only trivial states");
  }
  if (model.topology == Topology::kLine && model.blockade_range == 1) {
    return BlockadeBasis(model, recursive_line_states(model.sites));
  }
  std::vector<Occupation> states;
  enumerate_line(model.sites, model.blockade_range, 1, 0, states);
  std::erase_if(states, [&](Occupation s) { return !is_admissible(model, s); });
  std::sort(states.begin(), states.end());
  return BlockadeBasis(model, std::move(states));
}

std::uint64_t line_dimension(int sites) {
  if (sites < 0) throw std::invalid_argument("negative lattice size");
  std::uint64_t a = 1, b = 2;  // d(0), d(1)
  if (sites == 0) return a;
  for (int L = 2; L <= sites; ++L) {
    std::uint64_t c = a + b;
    a = b;
    b = c;
  }
  return b;
}

SparseIntMatrix hamiltonian_matrix(const BlockadeBasis& basis) {
  const ModelSpec& model = basis.model();
  std::vector<SparseIntMatrix::Entry> entries;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const Occupation s = basis.state(i);
    for (int k = 1; k <= model.sites; ++k) {
      if (auto j = basis.index_of(s ^ site_bit(k))) entries.push_back({*j, i, 1});
    }
  }
  return SparseIntMatrix(basis.dimension(), std::move(entries));
}

SparseIntMatrix line_hamiltonian_recursive(int sites) {
  if (sites < 1) throw std::invalid_argument("line needs at least 1 site");
  SparseIntMatrix h1(2, {{0, 1, 1}, {1, 0, 1}});
  SparseIntMatrix h2(3, {{0, 1, 1}, {0, 2, 1}, {1, 0, 1}, {2, 0, 1}});
  if (sites == 1) return h1;
  SparseIntMatrix older = h1, newer = h2;
  for (int L = 3; L <= sites; ++L) {
    const std::size_t top = newer.dimension();   // d(L-1)
    const std::size_t low = older.dimension();   // d(L-2)
    std::vector<SparseIntMatrix::Entry> entries;
    append_shifted(entries, newer, 0);
    append_shifted(entries, older, top);
    // K = [I_{d(L-2)}; 0] couples B(L-2)|00> to B(L-2)|01>.
    for (std::size_t i = 0; i < low; ++i) {
      entries.push_back({i, top + i, 1});
      entries.push_back({top + i, i, 1});
    }
    SparseIntMatrix next(top + low, std::move(entries));
    older = std::move(newer);
    newer = std::move(next);
  }
  return newer;
}

SparseIntMatrix line_number_recursive(int sites) {
  if (sites < 1) throw std::invalid_argument("line needs at least 1 site");
  std::vector<std::int64_t> older{0, 1};
  std::vector<std::int64_t> newer{0, 1, 1};
  if (sites == 1) return SparseIntMatrix::diagonal(older);
  for (int L = 3; L <= sites; ++L) {
    std::vector<std::int64_t> next = newer;
    for (auto v : older) next.push_back(v + 1);
    older = std::move(newer);
    newer = std::move(next);
  }
  return SparseIntMatrix::diagonal(newer);
}

SparseIntMatrix word_matrix(const BlockadeBasis& basis, const Word& word) {
  const ModelSpec& model = basis.model();
  for (const auto& e : word.entries()) {
    if (e.site < 1 || e.site > model.sites) throw std::invalid_argument("word site outside the lattice");
  }
  std::vector<SparseIntMatrix::Entry> entries;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    Occupation s = basis.state(i);
    bool alive = true;
    // Letters act on distinct sites, so their order does not matter.
    for (const auto& e : word.entries()) {
      const Occupation bit = site_bit(e.site);
      const bool up = (s & bit) != 0;
      switch (e.letter) {
        case Letter::kLower:
          alive = up;
          s &= ~bit;
          break;
        case Letter::kRaise:
          alive = !up;
          s |= bit;
          break;
        case Letter::kNumber:
          alive = up;
          break;
        case Letter::kProjector:
          alive = !up;
          break;
      }
      if (!alive) break;
    }
    if (!alive) continue;
    if (auto j = basis.index_of(s)) entries.push_back({*j, i, 1});
  }
  return SparseIntMatrix(basis.dimension(), std::move(entries));
}

SparseIntMatrix observable_matrix(const BlockadeBasis& basis, const ObservableSpec& observable) {
  const ModelSpec& model = basis.model();
  std::vector<std::int64_t> diag(basis.dimension(), 0);
  switch (observable.kind) {
    case ObservableSpec::Kind::kDensityPerSite:
      for (std::size_t i = 0; i < basis.dimension(); ++i) diag[i] = std::popcount(basis.state(i));
      return SparseIntMatrix::diagonal(diag);
    case ObservableSpec::Kind::kLocalNumber:
      return word_matrix(basis, Word{{model.wrap(observable.site), Letter::kNumber}});
    case ObservableSpec::Kind::kCorrelation: {
      const int d = observable.distance;
      if (d < 1 || d >= model.sites) throw std::invalid_argument("correlation distance does not fit");
      const int last = model.topology == Topology::kRing ? 1 : model.sites - d;
      for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const Occupation s = basis.state(i);
        for (int k = 1; k <= last; ++k) {
          if ((s & site_bit(k)) && (s & site_bit(model.wrap(k + d)))) ++diag[i];
        }
      }
      return SparseIntMatrix::diagonal(diag);
    }
    case ObservableSpec::Kind::kGeneralWord:
      return word_matrix(basis, observable.word);
  }
  throw std::logic_error("unhandled observable kind");
}

std::int64_t observable_normalization(const ModelSpec& model, const ObservableSpec& observable) {
  switch (observable.kind) {
    case ObservableSpec::Kind::kDensityPerSite:
      return model.sites;
    case ObservableSpec::Kind::kCorrelation:
      return model.topology == Topology::kRing ? 1 : model.sites - observable.distance;
    default:
      return 1;
  }
}

SparseIntMatrix parity_matrix(const BlockadeBasis& basis) {
  std::vector<std::int64_t> diag(basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i) diag[i] = std::popcount(basis.state(i)) % 2 ? -1 : 1;
  return SparseIntMatrix::diagonal(diag);
}

Occupation translate(const ModelSpec& model, Occupation s) {
  if (model.topology != Topology::kRing) throw std::invalid_argument("translation needs a ring");
  return rotate_left(s, 1, model.sites);
}

}  // namespace rydberg
