#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace rydberg {

enum class Topology { kRing, kLine, kInfiniteLine };

// Lattice geometry plus blockade range. The Rabi frequency is fixed to 1;
// rescaling t -> Omega t is left to the caller.
struct ModelSpec {
  Topology topology = Topology::kInfiniteLine;
  int sites = 0;  // ignored for kInfiniteLine
  int blockade_range = 1;

  static ModelSpec ring(int sites, int blockade_range = 1);
  static ModelSpec line(int sites, int blockade_range = 1);
  static ModelSpec infinite_line(int blockade_range = 1);

  bool is_finite() const { return topology != Topology::kInfiniteLine; }

  // Canonical site label: residue in [1, L] on a ring, identity otherwise.
  int wrap(int site) const;

  // Distinct sites of the blockade neighborhood of `site`, excluding the site
  // itself, sorted ascending. Line neighborhoods are truncated to [1, L].
  std::vector<int> neighborhood(int site) const;

  // Throws std::invalid_argument if the topology parameters are unusable.
  void validate() const;

  std::string describe() const;

  auto operator<=>(const ModelSpec&) const = default;
};

std::string to_string(Topology topology);
Topology parse_topology(const std::string& name);

}  // namespace rydberg
