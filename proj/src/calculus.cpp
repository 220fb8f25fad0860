#include "laakso/calculus.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "laakso/metric.hpp"

namespace laakso {

PointFunction height_function() {
  return {[](const LaaksoPoint& p) { return p.height; }, Rational(1)};
}

PointFunction distance_function(const LaaksoPoint& p) {
  return {[p](const LaaksoPoint& y) { return distance(p, y); }, Rational(1)};
}

PointFunction constant_function(Rational c) {
  return {[c](const LaaksoPoint&) { return c; }, Rational(0)};
}

bool respects_identification(const PointFunction& f, const std::vector<LaaksoPoint>& points) {
  for (const LaaksoPoint& p : points) {
    auto order = wormhole_order(p.height);
    if (!order) continue;
    if (f(p) != f({p.height, p.address.flipped(*order)})) return false;
  }
  return true;
}

Rational difference_quotient(const PointFunction& f, const LaaksoPoint& x, const Rational& t) {
  if (t == 0) throw std::invalid_argument("difference quotient needs a nonzero step");
  const Rational moved = x.height + t;
  if (moved < 0 || moved > 1) throw std::invalid_argument("step leaves [0,1]");
  Rational q = (f({moved, x.address}) - f(x)) / t;
  q.canonicalize();
  return q;
}

std::vector<Rational> triadic_schedule(unsigned first, unsigned last) {
  std::vector<Rational> steps;
  for (unsigned k = first; k <= last; ++k) steps.push_back(inv_pow3(k));
  return steps;
}

std::string_view to_string(DerivativeVerdict verdict) {
  switch (verdict) {
    case DerivativeVerdict::exists: return "exists";
    case DerivativeVerdict::split: return "split";
    case DerivativeVerdict::divergent: return "divergent";
  }
  return "divergent";
}

namespace {

struct Quotient {
  Rational step;  // signed
  Rational value;
};

// Common limit of a group of quotients within tol, if any. `finest` is the
// preferred estimate, clamped into [max - tol, min + tol].
std::optional<Rational> common_value(const std::vector<Quotient>& group, const Rational& tol) {
  if (group.empty()) return std::nullopt;
  auto [lo, hi] = std::minmax_element(group.begin(), group.end(),
                                      [](const Quotient& a, const Quotient& b) { return a.value < b.value; });
  if (hi->value - lo->value > 2 * tol) return std::nullopt;
  const Quotient* finest = &group.front();
  for (const Quotient& q : group) {
    const Rational a = abs(q.step), b = abs(finest->step);
    if (a < b || (a == b && q.step > 0 && finest->step < 0)) finest = &q;
  }
  Rational v = finest->value;
  Rational floor_v = hi->value - tol, ceil_v = lo->value + tol;
  if (v < floor_v) v = floor_v;
  if (v > ceil_v) v = ceil_v;
  v.canonicalize();
  return v;
}

}  // namespace

DerivativeReport directional_derivative(const PointFunction& f, const LaaksoPoint& x,
                                        const std::vector<Rational>& schedule, const Rational& tol) {
  if (schedule.empty()) throw std::invalid_argument("derivative schedule must be nonempty");
  if (tol < 0) throw std::invalid_argument("tolerance must be nonnegative");
  const LaaksoPoint base = canonicalize(x);
  DerivativeReport report;
  report.point = base;
  report.scales = schedule;

  std::vector<LaaksoPoint> branches{base};
  if (auto order = wormhole_order(base.height)) {
    report.wormhole = true;
    branches.push_back({base.height, base.address.flipped(*order)});
  }

  std::vector<std::vector<Quotient>> per_branch;
  std::vector<Quotient> all, below, above;
  for (const LaaksoPoint& branch : branches) {
    std::vector<Quotient> group;
    for (const Rational& s : schedule) {
      if (s <= 0) throw std::invalid_argument("schedule steps must be positive");
      for (const Rational& t : {Rational(s), Rational(-s)}) {
        const Rational moved = base.height + t;
        if (moved < 0 || moved > 1) continue;
        Quotient q{t, difference_quotient(f, branch, t)};
        (t > 0 ? above : below).push_back(q);
        group.push_back(q);
        all.push_back(q);
      }
    }
    per_branch.push_back(std::move(group));
  }
  if (all.empty()) throw std::invalid_argument("no admissible step in schedule");

  report.left_limit = common_value(below, tol);
  report.right_limit = common_value(above, tol);
  std::vector<std::optional<Rational>> branch_limits;
  for (const auto& group : per_branch) branch_limits.push_back(common_value(group, tol));
  if (report.wormhole) {
    report.f_l = branch_limits[0];
    report.f_r = branch_limits[1];
  }

  if (auto v = common_value(all, tol)) {
    report.verdict = DerivativeVerdict::exists;
    report.value = *v;
  } else if (std::all_of(branch_limits.begin(), branch_limits.end(), [](const auto& b) { return b.has_value(); })) {
    report.verdict = DerivativeVerdict::split;
  } else {
    report.verdict = DerivativeVerdict::divergent;
  }
  return report;
}

ProbeReport differentiability_probe(const PointFunction& f, const LaaksoPoint& x, const Rational& candidate,
                                    const std::vector<LaaksoPoint>& pool) {
  if (pool.empty()) throw std::invalid_argument("witness pool must be nonempty");
  const Rational fx = f(x);
  std::optional<ProbeReport> best;
  for (const LaaksoPoint& y : pool) {
    const Rational d = distance(x, y);
    if (d == 0) throw std::invalid_argument("witness pool must exclude the base point");
    Rational ratio = abs(f(y) - fx - candidate * (y.height - x.height)) / d;
    ratio.canonicalize();
    if (!best || ratio > best->sup_ratio || (ratio == best->sup_ratio && y < best->worst_witness))
      best = ProbeReport{ratio, y};
  }
  return *best;
}

std::vector<LaaksoPoint> witness_pool(const LaaksoPoint& x, unsigned depth, unsigned radius_exponent,
                                      unsigned refinement) {
  if (depth > 20) throw std::invalid_argument("witness pool depth too large");
  const Rational radius = inv_pow3(radius_exponent);
  const Rational step = inv_pow3(radius_exponent + refinement);
  const long reach = pow3(refinement).get_si();
  std::set<LaaksoPoint> seen;
  std::vector<LaaksoPoint> pool;
  for (long i = -reach; i <= reach; ++i) {
    Rational h = x.height + step * i;
    h.canonicalize();
    if (h < 0 || h > 1) continue;
    for (unsigned long mask = 0; mask < (1ul << depth); ++mask) {
      CantorAddress address = x.address;
      for (unsigned level = 1; level <= depth; ++level) address = address.with_bit(level, (mask >> (level - 1)) & 1u);
      LaaksoPoint y = canonicalize({h, address});
      if (same_point(x, y) || !seen.insert(y).second) continue;
      if (distance(x, y) <= radius) pool.push_back(y);
    }
  }
  return pool;
}

LipschitzReport lipschitz_supremum_check(const PointFunction& f, const std::vector<LaaksoPoint>& points,
                                         const std::vector<std::pair<LaaksoPoint, LaaksoPoint>>& pairs,
                                         const std::vector<Rational>& schedule, const Rational& tol) {
  if (points.empty() || pairs.empty()) throw std::invalid_argument("lipschitz check needs points and pairs");
  LipschitzReport report;
  for (const auto& [a, b] : pairs) {
    const Rational d = distance(a, b);
    if (d == 0) continue;
    Rational q = abs(f(a) - f(b)) / d;
    if (q > report.sup_quotients) report.sup_quotients = q;
  }
  for (const LaaksoPoint& p : points) {
    DerivativeReport r = directional_derivative(f, p, schedule, tol);
    if (r.verdict == DerivativeVerdict::exists && abs(r.value) > report.sup_derivatives)
      report.sup_derivatives = abs(r.value);
  }
  report.sup_quotients.canonicalize();
  report.sup_derivatives.canonicalize();
  report.consistent = report.sup_derivatives <= report.sup_quotients + tol;
  return report;
}

Json to_json(const DerivativeReport& report) {
  auto opt = [](const std::optional<Rational>& v) { return v ? to_json(*v) : Json(nullptr); };
  Json j;
  j["point"] = to_json(report.point);
  j["verdict"] = to_string(report.verdict);
  if (report.verdict == DerivativeVerdict::exists) j["value"] = to_json(report.value);
  j["left_limit"] = opt(report.left_limit);
  j["right_limit"] = opt(report.right_limit);
  if (report.wormhole) {
    j["fL"] = opt(report.f_l);
    j["fR"] = opt(report.f_r);
  }
  Json scales = Json::array();
  for (const Rational& s : report.scales) scales.push_back(to_json(s));
  j["scales"] = std::move(scales);
  return j;
}

Json to_json(const ProbeReport& report) {
  Json j;
  j["sup_ratio"] = to_json(report.sup_ratio);
  j["worst_witness"] = to_json(report.worst_witness);
  return j;
}

}  // namespace laakso
