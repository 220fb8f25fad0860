#pragma once

// Exact distance on Laakso space via minimal height intervals, geodesic
// synthesis, and the ending direction of geodesics.
//
// For points x, y with heights lo <= hi, a path must toggle every address bit
// in which the canonical addresses differ ("required levels"), and a level-i
// toggle is only available at heights in J_i. A minimal height interval is a
// shortest [a, b] containing lo, hi and one height from each required J_i;
// then d(x, y) = 2b - 2a - |h(x) - h(y)|.

#include <set>
#include <variant>
#include <vector>

#include "laakso/core.hpp"
#include "laakso/serialize.hpp"

namespace laakso {

/// Bit positions at which the canonical addresses differ (zero-padded).
std::vector<unsigned> required_levels(const LaaksoPoint& x, const LaaksoPoint& y);

/// All minimal height intervals, sorted by lower endpoint. Never empty.
std::vector<HeightInterval> minimal_height_intervals(const LaaksoPoint& x, const LaaksoPoint& y);

Rational distance(const LaaksoPoint& x, const LaaksoPoint& y);

struct GeodesicSegment {
  Rational start;
  Rational end;
  CantorAddress address;
  Direction direction = Direction::up;
};

/// Zero-length move through a wormhole: flips address bit `level`.
struct GeodesicJump {
  unsigned level = 0;
  Rational height;
};

using GeodesicStep = std::variant<GeodesicSegment, GeodesicJump>;

struct GeodesicPath {
  LaaksoPoint from;
  LaaksoPoint to;
  std::vector<GeodesicStep> steps;

  Rational length() const;
  std::vector<GeodesicJump> jumps() const;
  /// Direction of the final segment; empty for the trivial path.
  std::optional<Direction> ending() const;
};

/// Walks x -> a -> b -> y (from the lower endpoint; mirrored otherwise) and
/// resolves each required level at the first height of J_i met on the way.
/// Throws std::invalid_argument if `interval` is not a minimal height interval.
GeodesicPath synthesize_geodesic(const LaaksoPoint& x, const LaaksoPoint& y, const HeightInterval& interval);

/// Checks the structural invariants of a path: continuity of heights,
/// jumps only at heights of their own level, and arrival at `to`.
bool is_valid_path(const GeodesicPath& path);

/// Directions in which geodesics from p can arrive at q. Throws when p == q.
std::set<Direction> geodesic_endings(const LaaksoPoint& p, const LaaksoPoint& q);

Json to_json(const GeodesicPath& path);

}  // namespace laakso
