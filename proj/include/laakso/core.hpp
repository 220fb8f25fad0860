#pragma once

// Exact arithmetic, Cantor addressing and wormhole combinatorics for Laakso
// space F = (I x K) / ~.

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace laakso {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q" or "p" (optional leading minus). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Lowest-terms "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

Integer pow3(unsigned n);

/// 1 / 3^n
Rational inv_pow3(unsigned n);

Rational abs(const Rational& value);

/// num/den in lowest terms.
Rational ratio(const Integer& num, const Integer& den);

/// Rational extended by a single +infinity. Infinity compares above every
/// finite value; arithmetic on infinity is deliberately not provided.
class ExtRational {
 public:
  ExtRational() = default;  // zero
  ExtRational(Rational value) : value_(std::move(value)) { value_->canonicalize(); }

  static ExtRational infinity() {
    ExtRational r;
    r.value_.reset();
    return r;
  }

  bool is_finite() const { return value_.has_value(); }
  bool is_infinite() const { return !value_.has_value(); }

  /// Throws std::domain_error on infinity.
  const Rational& value() const;

  std::string to_string() const;

  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

 private:
  std::optional<Rational> value_ = Rational(0);
};

ExtRational min(const ExtRational& a, const ExtRational& b);

/// Finite prefix of a Cantor coordinate; bits beyond depth() are zero.
/// Bit i (1-based) selects the right sub-cell K_{a1} at scale 3^-i, so the
/// encoded point of K is sum 2*bit_i / 3^i.
class CantorAddress {
 public:
  CantorAddress() = default;
  /// Accepts a string of '0'/'1'. Throws std::invalid_argument otherwise.
  explicit CantorAddress(std::string_view bits);

  std::size_t depth() const { return bits_.size(); }
  bool bit(std::size_t level) const;
  CantorAddress with_bit(std::size_t level, bool value) const;
  CantorAddress flipped(std::size_t level) const;
  CantorAddress padded(std::size_t depth) const;

  /// Highest level holding a one bit, 0 if none.
  std::size_t significant_depth() const;

  std::string to_string() const;
  Rational coordinate() const;

  /// Equality and ordering after zero-padding to a common depth.
  friend bool operator==(const CantorAddress& a, const CantorAddress& b);
  friend std::strong_ordering operator<=>(const CantorAddress& a, const CantorAddress& b);

 private:
  std::vector<bool> bits_;
};

enum class Direction { up, down };

std::string_view to_string(Direction direction);

/// Closed height window 0 <= a <= b <= 1.
struct HeightInterval {
  Rational a;
  Rational b;

  /// Throws std::invalid_argument unless 0 <= a <= b <= 1.
  static HeightInterval make(Rational a, Rational b);
  static HeightInterval unit() { return {Rational(0), Rational(1)}; }

  Rational length() const { return b - a; }
  bool contains(const Rational& t) const { return a <= t && t <= b; }

  friend bool operator==(const HeightInterval&, const HeightInterval&) = default;
};

/// An order-n wormhole height k / 3^n with k mod 3 != 0.
struct WormholeLevel {
  unsigned order = 0;
  Rational height;
};

/// A point [height, address] of F. Two representatives name the same point
/// exactly when their canonical forms agree.
struct LaaksoPoint {
  Rational height;
  CantorAddress address;

  /// Throws std::invalid_argument unless height lies in [0, 1].
  static LaaksoPoint make(Rational height, CantorAddress address);
};

/// Structural equality of representatives (after zero-padding).
bool operator==(const LaaksoPoint& a, const LaaksoPoint& b);
std::strong_ordering operator<=>(const LaaksoPoint& a, const LaaksoPoint& b);

/// Heights k / 3^n in the window, 0 < k < 3^n, k mod 3 != 0, increasing.
std::vector<Rational> enumerate_wormhole_heights(unsigned n, const HeightInterval& window);

/// The unique n with h in J_n, if any.
std::optional<unsigned> wormhole_order(const Rational& h);

/// D_n^+(t) or D_n^-(t): distance to the nearest element of J_n strictly above
/// (below) t, infinity when there is none. Requires t in (0, 1).
ExtRational nearest_wormhole_gap(const Rational& t, unsigned n, Direction direction);

/// Same as nearest_wormhole_gap but defined on the closed interval [0, 1].
ExtRational gap_above(const Rational& t, unsigned n);
ExtRational gap_below(const Rational& t, unsigned n);

/// Sets the bit at the point's own wormhole order to zero (the representative
/// with the smaller Cantor coordinate).
LaaksoPoint canonicalize(const LaaksoPoint& p);

/// True when both representatives name the same point of F.
bool same_point(const LaaksoPoint& a, const LaaksoPoint& b);

/// Finite-depth probe of t in S_{C,N}: the ratio D_n^+/D_n^- is checked for
/// N <= n <= depth. Consistency is only evidence; a violation is a certificate.
struct SProbeVerdict {
  bool consistent = true;
  unsigned violated_at = 0;  // meaningful when !consistent
  ExtRational gap_up;        // D^+ at the violating level
  ExtRational gap_down;      // D^- at the violating level
};

SProbeVerdict s_membership_probe(const Rational& t, const Rational& C, unsigned N, unsigned depth);

}  // namespace laakso
