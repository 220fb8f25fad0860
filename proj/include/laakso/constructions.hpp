#pragma once

// Explicit Lipschitz functions witnessing non-differentiability, McShane
// extension, porosity witnesses for S_{C,N} and the membership verdict for M.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "laakso/calculus.hpp"
#include "laakso/core.hpp"
#include "laakso/serialize.hpp"

namespace laakso {

struct SampledFunction {
  std::map<LaaksoPoint, Rational> samples;  // keys are canonical
  Rational lip_bound;
};

struct LipschitzPairReport {
  Rational max_ratio;
  LaaksoPoint worst_a;
  LaaksoPoint worst_b;
  std::size_t pairs = 0;
};

/// Exhaustive max of |f(a) - f(b)| / d(a, b) over sample pairs.
LipschitzPairReport pairwise_lipschitz(const SampledFunction& f);

/// min over samples a of f(a) + L d(z, a). Throws on an empty sample set.
Rational mcshane_extend(const SampledFunction& f, const LaaksoPoint& z);

Json to_json(const SampledFunction& f);

// ------------------------------------------------------------- single jump

struct JumpConstruction {
  LaaksoPoint x;  // canonical
  std::vector<unsigned> levels;
  std::vector<LaaksoPoint> y;  // y_n: x with bit n flipped
  SampledFunction function;
  PointFunction eval;  // 0 on the line through x, samples, McShane elsewhere
};

/// f = 0 on the line through x and f(y_n) = min(D_n^+, D_n^-) for
/// N <= n <= K_max. Throws std::invalid_argument when x1 is 0 or 1, when a
/// level does not exceed x's wormhole order, or when some D_n is infinite.
JumpConstruction build_jump_function(const LaaksoPoint& x, unsigned N, unsigned K_max);

// -------------------------------------------------------------- theta bands

/// Orientation +1 puts the short gaps above x1 (D^- / D^+ large); -1 mirrors
/// the construction in the I direction.
struct ThetaSchedule {
  int orientation = 1;
  std::vector<unsigned> levels;  // n_k, strictly increasing
  std::vector<Rational> theta;   // theta_k in (0, 1)
};

struct ScheduleCheck {
  bool theta_bound = true;   // theta_k <= (1 - (Dn_k + Df_{k+1})/Df_k) / (1 - Df_{k+1}/Df_k)
  bool theta_range = true;   // 0 < theta_k < 1
  bool monotone = true;      // near and far gaps finite and strictly decreasing
  bool thinning = true;      // 2 Df_{k+1}/Df_k < 1/n_k and 2 Dn_k/Df_k < 1/n_k
  bool ok() const { return theta_bound && theta_range && monotone; }
};

/// Near and far gaps of x1 at level n for the given orientation.
ExtRational near_gap(const Rational& x1, unsigned n, int orientation);
ExtRational far_gap(const Rational& x1, unsigned n, int orientation);

/// The largest admissible theta_k; the last band uses Df_{K+1} = 0.
std::vector<Rational> max_theta(const Rational& x1, int orientation, const std::vector<unsigned>& levels);

/// Greedily keeps levels in [first, last] that satisfy both thinning
/// conditions against the previously kept level, with theta = max_theta.
ThetaSchedule greedy_theta_schedule(const Rational& x1, int orientation, unsigned first, unsigned last);

ScheduleCheck check_schedule(const Rational& x1, const ThetaSchedule& schedule);

struct BandConstruction {
  LaaksoPoint x;  // canonical
  ThetaSchedule schedule;
  HeightInterval domain;  // J
  std::vector<LaaksoPoint> y;  // y_{n_k}
  std::vector<LaaksoPoint> u;  // near-side endpoints on the line
  std::vector<LaaksoPoint> d;  // far-side endpoints on the line
  SampledFunction function;
  PointFunction eval;

  /// Integral of phi from x1 to t, t in J.
  Rational line_value(const Rational& t) const;
};

/// Throws std::invalid_argument when the schedule fails check_schedule or when
/// x's wormhole order is at most the largest schedule level.
BandConstruction build_band_function(const LaaksoPoint& x, const ThetaSchedule& schedule);

// ----------------------------------------------------------------- porosity

struct PorosityWitness {
  Rational C;
  unsigned N = 0;
  Rational t0;
  Rational delta;
  unsigned n = 0;
  Rational lambda;
  Rational t;      // hole is (t, t + lambda / 3^n)
  Rational width;  // lambda / 3^n

  Rational left() const { return t; }
  Rational right() const { return t + width; }
};

/// lambda = 1/(C+2); smallest n > N with 2/3^n < delta; t in J_n within 2/3^n of t0.
PorosityWitness porosity_witness_for_S(const Rational& C, unsigned N, const Rational& t0, const Rational& delta);

/// `count` exact rationals inside the hole: evenly spaced points followed by
/// seeded random ones.
std::vector<Rational> hole_samples(const PorosityWitness& w, std::size_t count, std::uint64_t seed);

struct HoleCertificate {
  bool certified = true;
  std::size_t checked = 0;
  Json entries = Json::array();  // per sample: s, D-, D+, both bounds
};

/// Checks D_n^-(s) <= lambda/3^n and D_n^+(s) >= (1-lambda)/3^n at every s.
HoleCertificate certify_hole(const PorosityWitness& w, const std::vector<Rational>& samples, bool record = true);

Json to_json(const PorosityWitness& w);

// --------------------------------------------------------------- membership

/// Sum_{k=1..terms} 2 / 3^(2^k). At these heights the one-sided gaps at level
/// 2^k are wildly unbalanced.
Rational engineered_height(unsigned terms);

/// D_n^+ / D_n^- for n in levels (infinity where D_n^- is zero or a gap is infinite).
std::vector<ExtRational> gap_ratios(const Rational& t, const std::vector<unsigned>& levels);

enum class MembershipVerdict { in_m_consistent, not_in_m };

std::string_view to_string(MembershipVerdict verdict);

struct MembershipReport {
  MembershipVerdict verdict = MembershipVerdict::in_m_consistent;
  unsigned violated_at = 0;
  std::optional<BandConstruction> witness;
  Rational witness_quotient;  // (f(y) - f(x)) / d(y, x) at the first y
};

/// Probes x1 against S_{C,N}; on a violation builds a band construction
/// (orientation from whichever gap is short) as the witness.
MembershipReport m_membership_verdict(const LaaksoPoint& x, const Rational& C, unsigned N, unsigned depth);

Json to_json(const MembershipReport& report);

}  // namespace laakso
