#pragma once

// Exact piecewise-linear profiles of t -> d_p([t, z]) along vertical lines and
// the closed-form classification of their kinks.
//
// Lines are named by the wormhole levels needed to reach them from p:
//   V_0       the line(s) through p itself,
//   V_N       one jump at level N,
//   V_Delta   one jump at each listed level.
// When p is a wormhole of order W every family has a second line through the
// other representative of p; W itself is never a line level.

#include <ostream>
#include <string>
#include <vector>

#include "laakso/core.hpp"
#include "laakso/serialize.hpp"

namespace laakso {

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class LineKind { v0, vn, vdelta };

struct VerticalLine {
  CantorAddress address;
  LineKind kind = LineKind::v0;
  std::vector<unsigned> levels;  // increasing; empty for V_0
  bool alternate = false;        // reached through the flipped representative of p

  /// "v0", "vN:3", "vD:1,2", with a trailing "'" for alternate lines.
  std::string label() const;
};

/// The one or two lines reached from p by jumping once at every level in
/// `levels`. Throws std::invalid_argument if a level equals p's wormhole order.
std::vector<VerticalLine> lines_from(const LaaksoPoint& p, std::vector<unsigned> levels);

struct ProfilePiece {
  Rational lo;
  Rational hi;
  int slope = 1;  // +1 or -1
  Rational offset;  // value = slope * t + offset on [lo, hi]
};

struct Kink {
  Rational height;
  int left_slope = 0;
  int right_slope = 0;

  bool is_valley() const { return left_slope < 0 && right_slope > 0; }
  bool is_ridge() const { return left_slope > 0 && right_slope < 0; }
};

struct KinkProfile {
  VerticalLine line;
  std::vector<ProfilePiece> pieces;  // tile [0, 1], maximal
  std::vector<Kink> kinks;           // interior heights where the slope changes
  std::size_t extra_breakpoints = 0; // breakpoints found by subdivision rather than proposed

  Rational value_at(const Rational& t) const;
  std::vector<Rational> kink_heights() const;
};

/// Computes d_p along `line` exactly. Candidate breakpoints come from the
/// one-sided gaps D_i^+/- of the line's levels; every piece is then certified
/// linear with slope +/-1 (|d(b) - d(a)| = b - a, which forces linearity for a
/// 1-Lipschitz function). Throws InternalError when certification fails.
KinkProfile profile_dp_on_line(const LaaksoPoint& p, const VerticalLine& line);

enum class KinkBranch {
  v0,
  vn_both,
  vn_above_only,
  vn_below_only,
  vd_all_finite_a,       // -D_N^- < -D_M^- < D_M^+ < D_N^+
  vd_all_finite_b,       // -D_N^- < -D_M^- < D_N^+ < D_M^+
  vd_all_finite_c,       // -D_M^- < -D_N^- < D_M^+ < D_N^+
  vd_none_below,         // D_N^-, D_M^- infinite
  vd_none_above,         // D_N^+, D_M^+ infinite
  vd_below_missing_far,  // D_N^- infinite, D_M^- finite, D_N^+ > D_M^+
  vd_below_missing_near, // D_N^- infinite, D_M^- finite, D_M^+ > D_N^+
  vd_above_missing_far,
  vd_above_missing_near,
  unclassified,
};

std::string_view to_string(KinkBranch branch);
const std::vector<KinkBranch>& two_level_branches();

struct ExpectedKinks {
  KinkBranch branch = KinkBranch::unclassified;
  std::vector<Rational> heights;  // sorted, interior of [0, 1]
};

/// Closed-form kink heights for V_0, V_N and two-level V_Delta lines.
/// Throws std::invalid_argument for three or more levels.
ExpectedKinks expected_kinks(const LaaksoPoint& p, const VerticalLine& line);

struct ParallelValues {
  Rational value_full;
  Rational value_two_level;
};

/// d_p on [t, p2 + Delta] (all levels) and [t, p2 + Delta'] (first two levels).
ParallelValues parallel_reduction(const LaaksoPoint& p, std::vector<unsigned> levels, const Rational& t);

struct CensusEntry {
  Rational height;
  std::string source_line;
  std::string kink_type;  // "valley", "ridge" or "unconfirmed"
};

/// Kink heights over V_0, every V_N (N <= max_level) and every two-level
/// V_Delta (levels <= max_level), deduplicated and sorted; each entry keeps
/// the first line that produced it.
std::vector<CensusEntry> nondiff_height_census(const LaaksoPoint& p, unsigned max_level);

Json to_json(const KinkProfile& profile);
std::string to_svg(const KinkProfile& profile, const LaaksoPoint& p);
void write_census_csv(std::ostream& out, const std::vector<CensusEntry>& census);

}  // namespace laakso
