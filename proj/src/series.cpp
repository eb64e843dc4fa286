#include "rydberg/series.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rydberg {

namespace {

mpz_class factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

// (-1)^j / (2j)! * moment
Rational even_coefficient(int j, const Rational& moment) {
  Rational c = moment / Rational(factorial(2 * j));
  if (j % 2 == 1) c = -c;
  return c;
}

Word reflect(const Word& w) {
  std::vector<Word::Entry> entries;
  const int hi = w.empty() ? 0 : w.max_site();
  const int lo = w.empty() ? 0 : w.min_site();
  for (const auto& e : w.entries()) entries.push_back({hi + lo - e.site, e.letter});
  return Word::from_entries(std::move(entries));
}

Word wrap_word(const ModelSpec& model, const Word& w) {
  std::vector<Word::Entry> entries;
  for (const auto& e : w.entries()) entries.push_back({model.wrap(e.site), e.letter});
  return Word::from_entries(std::move(entries));
}

// Vacuum moments of ad^j(pattern) for j = 0..max_order, averaged over every
// placement of the pattern on the lattice. `pattern` is anchored at site 0.
// On the open line, placements farther than (max_order + 1) * lambda_b sites
// from both ends never see the boundary and reuse the infinite-line moments;
// the rest are cached by their (left, right) boundary gaps.
std::vector<Rational> averaged_moments(const ModelSpec& model, const Word& pattern, int max_order,
                                       const AdBudget& budget) {
  const int span = pattern.empty() ? 0 : pattern.max_site();
  switch (model.topology) {
    case Topology::kInfiniteLine:
      return vacuum_moments(OperatorSum(pattern), model, max_order, budget);
    case Topology::kRing:
      return vacuum_moments(OperatorSum(wrap_word(model, pattern.shifted(1))), model, max_order, budget);
    case Topology::kLine:
      break;
  }
  const int placements = model.sites - span;
  if (placements < 1) throw std::invalid_argument("observable does not fit on the lattice");

  const bool symmetric = reflect(pattern) == pattern;
  const int reach = (max_order + 1) * model.blockade_range;
  std::optional<std::vector<Rational>> bulk;
  std::map<std::pair<int, int>, std::vector<Rational>> edge;

  std::vector<Rational> sum(max_order + 1, Rational(0));
  for (int anchor = 1; anchor <= placements; ++anchor) {
    const int left = anchor - 1;
    const int right = model.sites - (anchor + span);
    const std::vector<Rational>* moments = nullptr;
    if (left >= reach && right >= reach) {
      if (!bulk) {
        bulk = vacuum_moments(OperatorSum(pattern), ModelSpec::infinite_line(model.blockade_range), max_order,
                              budget);
      }
      moments = &*bulk;
    } else {
      std::pair<int, int> key = symmetric ? std::pair<int, int>(std::minmax(left, right)) : std::pair<int, int>(left, right);
      auto it = edge.find(key);
      if (it == edge.end()) {
        const int at = key.first + 1;
        it = edge.emplace(key, vacuum_moments(OperatorSum(pattern.shifted(at)), model, max_order, budget)).first;
      }
      moments = &it->second;
    }
    for (int j = 0; j <= max_order; ++j) sum[j] += (*moments)[j];
  }
  for (auto& s : sum) s /= placements;
  return sum;
}

SeriesCoefficients even_series(const ModelSpec& model, const ObservableSpec& observable, const Word& pattern,
                               int jmax, const AdBudget& budget, bool average) {
  if (jmax < 1) throw std::invalid_argument("jmax must be >= 1");
  std::vector<Rational> moments =
      average ? averaged_moments(model, pattern, 2 * jmax, budget)
              : vacuum_moments(OperatorSum(pattern), model, 2 * jmax, budget);
  return coefficients_from_moments(model, observable, moments, jmax);
}

void check_word_fits(const ModelSpec& model, const Word& word) {
  if (!model.is_finite()) return;
  for (const auto& e : word.entries()) {
    if (e.site < 1 || e.site > model.sites) {
      throw std::invalid_argument("word site " + std::to_string(e.site) + " outside [1, " +
                                  std::to_string(model.sites) + "]");
    }
  }
}

}  // namespace

std::string ObservableSpec::describe() const {
  switch (kind) {
    case Kind::kDensityPerSite:
      return "density";
    case Kind::kLocalNumber:
      return "n_" + std::to_string(site);
    case Kind::kCorrelation:
      return "correlation(d=" + std::to_string(distance) + ")";
    case Kind::kGeneralWord:
      return "word(" + to_text(word) + ")";
  }
  return "?";
}

const Rational& SeriesCoefficients::at(int order) const {
  for (const auto& t : terms) {
    if (t.order == order) return t.value;
  }
  throw std::out_of_range("order " + std::to_string(order) + " not in series");
}

std::vector<Rational> SeriesCoefficients::values() const {
  std::vector<Rational> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.value);
  return out;
}

SeriesCoefficients density_coefficients(const ModelSpec& model, int jmax, const AdBudget& budget) {
  model.validate();
  return even_series(model, ObservableSpec::density(), Word{{0, Letter::kNumber}}, jmax, budget, true);
}

SeriesCoefficients correlation_coefficients(const ModelSpec& model, int distance, int jmax,
                                            const AdBudget& budget) {
  model.validate();
  if (distance <= model.blockade_range) {
    throw std::invalid_argument("correlation distance must exceed the blockade range");
  }
  if (model.topology == Topology::kRing) {
    if (distance >= model.sites || model.sites - distance <= model.blockade_range) {
      throw std::invalid_argument("correlation distance is blockaded around the ring");
    }
  }
  if (model.topology == Topology::kLine && distance >= model.sites) {
    throw std::invalid_argument("correlation distance does not fit on the line");
  }
  Word pattern{{0, Letter::kNumber}, {distance, Letter::kNumber}};
  return even_series(model, ObservableSpec::correlation(distance), pattern, jmax, budget, true);
}

SeriesCoefficients local_number_coefficients(const ModelSpec& model, int site, int jmax, const AdBudget& budget) {
  model.validate();
  Word pattern{{model.wrap(site), Letter::kNumber}};
  check_word_fits(model, pattern);
  return even_series(model, ObservableSpec::local_number(site), pattern, jmax, budget, false);
}

SeriesCoefficients word_coefficients(const ModelSpec& model, const Word& word, int jmax, const AdBudget& budget) {
  model.validate();
  if (jmax < 0) throw std::invalid_argument("jmax must be >= 0");
  check_word_fits(model, word);
  std::vector<Rational> moments = vacuum_moments(OperatorSum(word), model, jmax, budget);
  return coefficients_from_moments(model, ObservableSpec::general_word(word), moments, jmax);
}

SeriesCoefficients coefficients_from_moments(const ModelSpec& model, const ObservableSpec& observable,
                                             std::span<const Rational> moments, int jmax) {
  SeriesCoefficients out;
  out.observable = observable;
  out.model = model;
  if (observable.kind == ObservableSpec::Kind::kGeneralWord) {
    if (jmax < 0 || static_cast<int>(moments.size()) <= jmax) throw std::invalid_argument("not enough moments");
    out.layout = SeriesLayout::kAllPowers;
    mpz_class fact = 1;
    for (int j = 0; j <= jmax; ++j) {
      if (j > 0) fact *= j;
      // i^j = (-1)^(j/2) for even j and i (-1)^((j-1)/2) for odd j.
      Rational value = moments[j] / Rational(fact);
      if ((j / 2) % 2 == 1) value = -value;
      out.terms.push_back({j, value, j % 2 == 1});
    }
  } else {
    if (jmax < 1 || static_cast<int>(moments.size()) <= 2 * jmax) throw std::invalid_argument("not enough moments");
    out.layout = SeriesLayout::kEvenPowers;
    for (int j = 1; j <= jmax; ++j) out.terms.push_back({j, even_coefficient(j, moments[2 * j]), false});
  }
  if (model.topology != Topology::kInfiniteLine) out.universal_up_to = universality_threshold(model, observable);
  return out;
}

SeriesCoefficients observable_coefficients(const ModelSpec& model, const ObservableSpec& observable, int jmax,
                                           const AdBudget& budget) {
  switch (observable.kind) {
    case ObservableSpec::Kind::kDensityPerSite:
      return density_coefficients(model, jmax, budget);
    case ObservableSpec::Kind::kLocalNumber:
      return local_number_coefficients(model, observable.site, jmax, budget);
    case ObservableSpec::Kind::kCorrelation:
      return correlation_coefficients(model, observable.distance, jmax, budget);
    case ObservableSpec::Kind::kGeneralWord:
      return word_coefficients(model, observable.word, jmax, budget);
  }
  throw std::logic_error("unhandled observable kind");
}

int universality_threshold(const ModelSpec& model, const ObservableSpec& observable) {
  model.validate();
  switch (model.topology) {
    case Topology::kInfiniteLine:
      throw std::invalid_argument("universality threshold is defined for finite lattices");
    case Topology::kLine:
      return 0;
    case Topology::kRing:
      break;
  }
  const int L = model.sites;
  const int lambda = model.blockade_range;
  switch (observable.kind) {
    case ObservableSpec::Kind::kDensityPerSite:
    case ObservableSpec::Kind::kLocalNumber:
      return (L - 1) / lambda;
    case ObservableSpec::Kind::kCorrelation: {
      const int d = observable.distance;
      if (lambda == 1) return std::max(0, L - d);
      // Only the generic word bound (in t-powers) is available here; the
      // correlation series is indexed by t^(2j).
      const int word_order = std::max(0, (L - (d + 1)) / (2 * lambda));
      return word_order / 2;
    }
    case ObservableSpec::Kind::kGeneralWord:
      return std::max(0, (L - observable.word.length()) / (2 * lambda));
  }
  throw std::logic_error("unhandled observable kind");
}

std::vector<std::optional<Rational>> boundary_deficit_q_between(int jmax, int probe_sites, int second_probe_sites,
                                                                int blockade_range) {
  if (probe_sites == second_probe_sites) throw std::invalid_argument("deficit probes must differ in size");
  const SeriesCoefficients bulk = density_coefficients(ModelSpec::infinite_line(blockade_range), jmax);
  auto extract = [&](int L) {
    const SeriesCoefficients line = density_coefficients(ModelSpec::line(L, blockade_range), jmax);
    std::vector<std::optional<Rational>> q;
    for (int j = 1; j <= jmax; ++j) {
      const Rational& c = bulk.at(j);
      if (sgn(c) == 0) {
        q.emplace_back();
      } else {
        q.emplace_back(Rational(L) * (Rational(1) - line.at(j) / c));
      }
    }
    return q;
  };
  auto first = extract(probe_sites);
  auto second = extract(second_probe_sites);
  for (int j = 1; j <= jmax; ++j) {
    if (first[j - 1] != second[j - 1]) {
      std::ostringstream os;
      os << "q_" << j << " differs between L=" << probe_sites << " and L=" << second_probe_sites
         << "; probe size too small";
      throw std::runtime_error(os.str());
    }
  }
  return first;
}

std::vector<std::optional<Rational>> boundary_deficit_q(int jmax, int probe_sites, int blockade_range) {
  return boundary_deficit_q_between(jmax, probe_sites, probe_sites + 1, blockade_range);
}

double to_double(const Rational& q) {
  mpf_class f(q, 256);
  return f.get_d();
}

double eval_series(const SeriesCoefficients& coeffs, double t, int truncation) {
  if (truncation > coeffs.max_order()) {
    throw std::invalid_argument("truncation order " + std::to_string(truncation) + " exceeds available order " +
                                std::to_string(coeffs.max_order()));
  }
  const double x = coeffs.layout == SeriesLayout::kEvenPowers ? t * t : t;
  double acc = 0.0;
  for (auto it = coeffs.terms.rbegin(); it != coeffs.terms.rend(); ++it) {
    if (it->order > truncation) continue;
    if (it->imaginary && sgn(it->value) != 0) {
      throw std::invalid_argument("series has imaginary terms; evaluate real and imaginary parts separately");
    }
    acc = acc * x + (it->imaginary ? 0.0 : to_double(it->value));
  }
  // Horner over consecutive orders starting at the lowest one present.
  const int lowest = coeffs.terms.empty() ? 0 : coeffs.terms.front().order;
  for (int k = 0; k < lowest; ++k) acc *= x;
  return acc;
}

}  // namespace rydberg
