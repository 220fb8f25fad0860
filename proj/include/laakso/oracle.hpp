#pragma once

// Level-m graph discretization of Laakso space. Vertices are the grid heights
// k/3^m crossed with all depth-m addresses; vertical edges have weight 3^-m,
// wormhole identifications have weight 0. Shortest paths give an oracle for
// the metric that shares no code with the interval construction.

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "laakso/core.hpp"
#include "laakso/serialize.hpp"

namespace laakso {

/// Hausdorff-type dimension of Laakso space, 1 + ln 2 / ln 3.
double laakso_dimension();

class LevelGraph {
 public:
  /// Throws std::invalid_argument unless 1 <= m <= 8.
  explicit LevelGraph(unsigned m);

  unsigned resolution() const { return m_; }
  std::size_t height_count() const { return heights_; }     // 3^m + 1
  std::size_t address_count() const { return addresses_; }  // 2^m
  std::size_t vertex_count() const { return heights_ * addresses_; }
  std::size_t zero_edge_count() const { return zero_edges_; }

  /// Vertex of grid height k/3^m and address word `address` (bit i-1 holds level i).
  std::size_t vertex(std::size_t k, std::uint32_t address) const { return k * addresses_ + address; }
  std::size_t height_index(std::size_t v) const { return v / addresses_; }
  std::uint32_t address_word(std::size_t v) const { return static_cast<std::uint32_t>(v % addresses_); }

  /// Throws std::invalid_argument if the point is not on the grid.
  std::size_t vertex_of(const LaaksoPoint& p) const;
  LaaksoPoint point_of(std::size_t v) const;

  /// Single-source shortest paths, in units of 3^-m.
  std::vector<std::int64_t> distances_from(std::size_t source) const;

  struct Edge {
    std::uint32_t to;
    std::uint8_t weight;  // 0 or 1 unit
  };
  std::span<const Edge> neighbors(std::size_t v) const;

  /// Debug export: [{"u":..,"v":..,"w":"p/q"}] with u < v.
  Json edge_list_json() const;

 private:
  unsigned m_;
  std::size_t heights_;
  std::size_t addresses_;
  std::size_t zero_edges_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Edge> edges_;
};

LevelGraph build_level_graph(unsigned m);

/// Exact shortest-path distance between grid points.
Rational graph_distance(const LevelGraph& g, const LaaksoPoint& x, const LaaksoPoint& y);

struct MeasureEstimate {
  LaaksoPoint center;
  Rational radius;
  unsigned m = 0;
  Rational mass;
  double ratio = 0;  // mass / radius^Q, reporting only
};

/// Mass of the closed ball around `center`: each level-m cell
/// [k/3^m, (k+1)/3^m) x K_a carries 3^-m * 2^-m and belongs to the ball when
/// its lower-left corner does. Requires 3^-m <= r <= 2.
MeasureEstimate ball_measure(const LevelGraph& g, const LaaksoPoint& center, const Rational& r);

/// Total mass of the level-m cell decomposition (always 1).
Rational total_cell_mass(unsigned m);

struct RegularityTable {
  std::vector<MeasureEstimate> rows;  // sorted by center, then radius
  double min_ratio = 0;
  double max_ratio = 0;
  double spread() const { return min_ratio > 0 ? max_ratio / min_ratio : 0; }
};

/// `sample` seeded random grid centers (cell corners), every radius each.
RegularityTable regularity_scan(const LevelGraph& g, unsigned sample, const std::vector<Rational>& radii,
                                std::uint64_t seed);

/// CSV with columns center_h,center_bits,r,mass,ratio,m.
void write_regularity_csv(std::ostream& out, const RegularityTable& table);

}  // namespace laakso
