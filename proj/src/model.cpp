#include "rydberg/model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rydberg {

ModelSpec ModelSpec::ring(int sites, int blockade_range) {
  ModelSpec m{Topology::kRing, sites, blockade_range};
  m.validate();
  return m;
}

ModelSpec ModelSpec::line(int sites, int blockade_range) {
  ModelSpec m{Topology::kLine, sites, blockade_range};
  m.validate();
  return m;
}

ModelSpec ModelSpec::infinite_line(int blockade_range) {
  ModelSpec m{Topology::kInfiniteLine, 0, blockade_range};
  m.validate();
  return m;
}

void ModelSpec::validate() const {
  if (blockade_range < 1) {
    throw std::invalid_argument("blockade range must be >= 1");
  }
  switch (topology) {
    case Topology::kRing:
      if (sites < 2) throw std::invalid_argument("ring needs at least 2 sites");
      break;
    case Topology::kLine:
      if (sites < 1) throw std::invalid_argument("line needs at least 1 site");
      break;
    case Topology::kInfiniteLine:
      break;
  }
  if (sites > 62 && topology != Topology::kInfiniteLine) {
    throw std::invalid_argument("at most 62 sites are supported");
  }
}

int ModelSpec::wrap(int site) const {
  if (topology != Topology::kRing) return site;
  int r = (site - 1) % sites;
  if (r < 0) r += sites;
  return r + 1;
}

std::vector<int> ModelSpec::neighborhood(int site) const {
  std::vector<int> out;
  for (int offset = -blockade_range; offset <= blockade_range; ++offset) {
    if (offset == 0) continue;
    int j = site + offset;
    if (topology == Topology::kLine && (j < 1 || j > sites)) continue;
    j = wrap(j);
    if (j == wrap(site)) continue;
    out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string ModelSpec::describe() const {
  std::ostringstream os;
  os << to_string(topology);
  if (is_finite()) os << "(" << sites << ")";
  os << " lambda_b=" << blockade_range;
  return os.str();
}

std::string to_string(Topology topology) {
  switch (topology) {
    case Topology::kRing:
      return "ring";
    case Topology::kLine:
      return "line";
    case Topology::kInfiniteLine:
      return "infinite";
  }
  return "?";
}

Topology parse_topology(const std::string& name) {
  if (name == "ring") return Topology::kRing;
  if (name == "line") return Topology::kLine;
  if (name == "infinite" || name == "infinite-line") return Topology::kInfiniteLine;
  throw std::invalid_argument("unknown topology '" + name + "'");
}

}  // namespace rydberg
