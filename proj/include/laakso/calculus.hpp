#pragma once

// Difference quotients along the I direction, directional derivatives (with
// the f_L / f_R split at wormholes), differentiability probes and the
// Lipschitz-constant-as-supremum check.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "laakso/core.hpp"
#include "laakso/serialize.hpp"

namespace laakso {

/// A real function on F with exact rational values. eval must agree on both
/// representatives of a wormhole.
struct PointFunction {
  std::function<Rational(const LaaksoPoint&)> eval;
  std::optional<Rational> lipschitz_bound;

  Rational operator()(const LaaksoPoint& p) const { return eval(p); }
};

PointFunction height_function();
PointFunction distance_function(const LaaksoPoint& p);
PointFunction constant_function(Rational c);

/// True when f agrees on both representatives of every wormhole among `points`.
bool respects_identification(const PointFunction& f, const std::vector<LaaksoPoint>& points);

/// (f[x1 + t, x2] - f[x1, x2]) / t with the address held fixed.
/// Throws std::invalid_argument when t == 0 or x1 + t leaves [0, 1].
Rational difference_quotient(const PointFunction& f, const LaaksoPoint& x, const Rational& t);

/// Steps 3^-k for k = first..last, decreasing.
std::vector<Rational> triadic_schedule(unsigned first, unsigned last);

enum class DerivativeVerdict { exists, split, divergent };

std::string_view to_string(DerivativeVerdict verdict);

struct DerivativeReport {
  LaaksoPoint point;
  bool wormhole = false;
  std::optional<Rational> left_limit;   // from steps t < 0
  std::optional<Rational> right_limit;  // from steps t > 0
  std::optional<Rational> f_l;          // branch through the canonical representative
  std::optional<Rational> f_r;          // branch through the flipped representative
  DerivativeVerdict verdict = DerivativeVerdict::divergent;
  Rational value;  // meaningful for exists
  std::vector<Rational> scales;
};

/// A group of quotients converges to v when all lie within tol of v. The
/// reported value is the finest-scale quotient clamped into the feasible window.
DerivativeReport directional_derivative(const PointFunction& f, const LaaksoPoint& x,
                                        const std::vector<Rational>& schedule, const Rational& tol);

struct ProbeReport {
  Rational sup_ratio;
  LaaksoPoint worst_witness;
};

/// sup over the pool of |f(y) - f(x) - D (h(y) - h(x))| / d(y, x).
/// Throws on an empty pool or a pool containing x.
ProbeReport differentiability_probe(const PointFunction& f, const LaaksoPoint& x, const Rational& candidate,
                                    const std::vector<LaaksoPoint>& pool);

/// Points y != x with d(x, y) <= 3^-radius_exponent, heights on the grid
/// x1 + i 3^-(radius_exponent + refinement), and every variation of the first
/// `depth` address bits.
std::vector<LaaksoPoint> witness_pool(const LaaksoPoint& x, unsigned depth, unsigned radius_exponent,
                                      unsigned refinement = 2);

struct LipschitzReport {
  Rational sup_quotients;
  Rational sup_derivatives;
  bool consistent = true;  // sup_derivatives <= sup_quotients + tol
};

LipschitzReport lipschitz_supremum_check(const PointFunction& f, const std::vector<LaaksoPoint>& points,
                                         const std::vector<std::pair<LaaksoPoint, LaaksoPoint>>& pairs,
                                         const std::vector<Rational>& schedule, const Rational& tol);

Json to_json(const DerivativeReport& report);
Json to_json(const ProbeReport& report);

}  // namespace laakso
