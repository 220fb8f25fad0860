#include "laakso/constructions.hpp"

#include <memory>
#include <random>
#include <stdexcept>

#include "laakso/metric.hpp"

namespace laakso {

LipschitzPairReport pairwise_lipschitz(const SampledFunction& f) {
  LipschitzPairReport report;
  for (auto a = f.samples.begin(); a != f.samples.end(); ++a) {
    for (auto b = std::next(a); b != f.samples.end(); ++b) {
      const Rational d = distance(a->first, b->first);
      if (d == 0) throw std::invalid_argument("sample set holds two representatives of one point");
      Rational ratio = abs(a->second - b->second) / d;
      ratio.canonicalize();
      if (report.pairs == 0 || ratio > report.max_ratio) {
        report.max_ratio = ratio;
        report.worst_a = a->first;
        report.worst_b = b->first;
      }
      ++report.pairs;
    }
  }
  return report;
}

Rational mcshane_extend(const SampledFunction& f, const LaaksoPoint& z) {
  if (f.samples.empty()) throw std::invalid_argument("mcshane_extend needs samples");
  std::optional<Rational> best;
  for (const auto& [a, value] : f.samples) {
    Rational v = value + f.lip_bound * distance(z, a);
    if (!best || v < *best) best = std::move(v);
  }
  best->canonicalize();
  return *best;
}

Json to_json(const SampledFunction& f) {
  Json samples = Json::array();
  for (const auto& [p, v] : f.samples) samples.push_back({{"point", to_json(p)}, {"value", to_json(v)}});
  return {{"lip_bound", to_json(f.lip_bound)}, {"samples", std::move(samples)}};
}

namespace {

void add_sample(SampledFunction& f, const LaaksoPoint& p, const Rational& value) {
  Rational v = value;
  v.canonicalize();
  f.samples[canonicalize(p)] = v;
}

// The closed form on the line wins; the sample table next; McShane elsewhere.
PointFunction hybrid(std::shared_ptr<const SampledFunction> f, CantorAddress line,
                     std::function<std::optional<Rational>(const Rational&)> on_line) {
  PointFunction out;
  out.lipschitz_bound = f->lip_bound;
  out.eval = [f, line = std::move(line), on_line = std::move(on_line)](const LaaksoPoint& z) -> Rational {
    if (same_point(z, {z.height, line}))
      if (auto v = on_line(z.height)) return *v;
    if (auto it = f->samples.find(canonicalize(z)); it != f->samples.end()) return it->second;
    return mcshane_extend(*f, z);
  };
  return out;
}

void check_unit_interior(const Rational& x1) {
  if (x1 <= 0 || x1 >= 1) throw std::invalid_argument("the two-sided construction needs x1 in (0,1)");
}

}  // namespace

JumpConstruction build_jump_function(const LaaksoPoint& x, unsigned N, unsigned K_max) {
  check_unit_interior(x.height);
  if (N == 0 || K_max < N) throw std::invalid_argument("need 1 <= N <= K_max");
  if (K_max > 60) throw std::invalid_argument("K_max too large");
  JumpConstruction c;
  c.x = canonicalize(x);
  const Rational& x1 = c.x.height;
  if (auto w = wormhole_order(x1); w && N <= *w)
    throw std::invalid_argument("x is a wormhole of level " + std::to_string(*w) + "; N must exceed it");

  SampledFunction f;
  f.lip_bound = 1;
  for (unsigned n = N; n <= K_max; ++n) {
    const ExtRational up = gap_above(x1, n), down = gap_below(x1, n);
    if (up.is_infinite() || down.is_infinite())
      throw std::invalid_argument("D_" + std::to_string(n) + " is infinite at x1; raise N");
    c.levels.push_back(n);
    const LaaksoPoint y{x1, c.x.address.flipped(n)};
    c.y.push_back(canonicalize(y));
    add_sample(f, y, min(up, down).value());
    add_sample(f, {x1 + up.value(), c.x.address}, 0);
    add_sample(f, {x1 - down.value(), c.x.address}, 0);
  }
  add_sample(f, c.x, 0);
  for (const Rational& h : {Rational(0), Rational(1)}) add_sample(f, {h, c.x.address}, 0);
  for (unsigned j = 1; j <= K_max + 2; ++j)
    for (const Rational& h : {Rational(x1 + inv_pow3(j)), Rational(x1 - inv_pow3(j))})
      if (h >= 0 && h <= 1) add_sample(f, {h, c.x.address}, 0);

  auto shared = std::make_shared<const SampledFunction>(f);
  c.function = std::move(f);
  c.eval = hybrid(shared, c.x.address, [](const Rational&) { return std::optional<Rational>(Rational(0)); });
  return c;
}

// ------------------------------------------------------------ theta bands

ExtRational near_gap(const Rational& x1, unsigned n, int orientation) {
  return orientation > 0 ? gap_above(x1, n) : gap_below(x1, n);
}

ExtRational far_gap(const Rational& x1, unsigned n, int orientation) {
  return orientation > 0 ? gap_below(x1, n) : gap_above(x1, n);
}

namespace {

struct Gaps {
  std::vector<Rational> near, far;
};

Gaps finite_gaps(const Rational& x1, int orientation, const std::vector<unsigned>& levels) {
  Gaps g;
  for (unsigned n : levels) {
    const ExtRational dn = near_gap(x1, n, orientation), df = far_gap(x1, n, orientation);
    if (dn.is_infinite() || df.is_infinite())
      throw std::invalid_argument("gap at level " + std::to_string(n) + " is infinite");
    g.near.push_back(dn.value());
    g.far.push_back(df.value());
  }
  return g;
}

Rational theta_bound(const Rational& dn, const Rational& df, const Rational& df_next) {
  Rational b = (1 - (dn + df_next) / df) / (1 - df_next / df);
  b.canonicalize();
  return b;
}

// Integral of phi from x1 to x1 + s (s signed toward the near side).
Rational band_integral(const Gaps& g, const std::vector<Rational>& theta, const Rational& s) {
  if (s >= 0) return s;
  const Rational a = -s;
  Rational total = 0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const Rational hi = g.far[k];
    const Rational lo = k + 1 < theta.size() ? g.far[k + 1] : Rational(0);
    if (a <= lo) continue;
    total += theta[k] * ((a < hi ? a : hi) - lo);
  }
  total = -total;
  total.canonicalize();
  return total;
}

}  // namespace

std::vector<Rational> max_theta(const Rational& x1, int orientation, const std::vector<unsigned>& levels) {
  const Gaps g = finite_gaps(x1, orientation, levels);
  std::vector<Rational> theta;
  for (std::size_t k = 0; k < levels.size(); ++k)
    theta.push_back(theta_bound(g.near[k], g.far[k], k + 1 < levels.size() ? g.far[k + 1] : Rational(0)));
  return theta;
}

ThetaSchedule greedy_theta_schedule(const Rational& x1, int orientation, unsigned first, unsigned last) {
  ThetaSchedule s;
  s.orientation = orientation;
  std::optional<std::pair<Rational, Rational>> prev;  // near, far of the last kept level
  for (unsigned n = std::max(first, 1u); n <= last; ++n) {
    const ExtRational dn = near_gap(x1, n, orientation), df = far_gap(x1, n, orientation);
    if (dn.is_infinite() || df.is_infinite()) continue;
    const Rational &near = dn.value(), &far = df.value();
    if (2 * near * n >= far) continue;
    if (prev && (near >= prev->first || far >= prev->second || 2 * far * s.levels.back() >= prev->second)) continue;
    s.levels.push_back(n);
    prev = {near, far};
  }
  if (!s.levels.empty()) s.theta = max_theta(x1, orientation, s.levels);
  return s;
}

ScheduleCheck check_schedule(const Rational& x1, const ThetaSchedule& schedule) {
  ScheduleCheck c;
  const auto& lv = schedule.levels;
  if (lv.empty() || lv.size() != schedule.theta.size() || (schedule.orientation != 1 && schedule.orientation != -1)) {
    c.monotone = c.theta_bound = c.theta_range = c.thinning = false;
    return c;
  }
  for (std::size_t k = 0; k < lv.size(); ++k) {
    if (k > 0 && lv[k] <= lv[k - 1]) c.monotone = false;
    if (schedule.theta[k] <= 0 || schedule.theta[k] >= 1) c.theta_range = false;
  }
  Gaps g;
  try {
    g = finite_gaps(x1, schedule.orientation, lv);
  } catch (const std::invalid_argument&) {
    c.monotone = c.theta_bound = c.thinning = false;
    return c;
  }
  for (std::size_t k = 0; k + 1 < lv.size(); ++k)
    if (g.near[k + 1] >= g.near[k] || g.far[k + 1] >= g.far[k]) c.monotone = false;
  if (!c.monotone) {
    c.theta_bound = c.thinning = false;
    return c;
  }
  for (std::size_t k = 0; k < lv.size(); ++k) {
    const bool last = k + 1 == lv.size();
    const Rational df_next = last ? Rational(0) : g.far[k + 1];
    if (g.near[k] + df_next >= g.far[k] || schedule.theta[k] > theta_bound(g.near[k], g.far[k], df_next))
      c.theta_bound = false;
    if (2 * g.near[k] * lv[k] >= g.far[k]) c.thinning = false;
    if (!last && 2 * g.far[k + 1] * lv[k] >= g.far[k]) c.thinning = false;
  }
  return c;
}

Rational BandConstruction::line_value(const Rational& t) const {
  if (!domain.contains(t)) throw std::invalid_argument("height outside the construction domain");
  const Gaps g = finite_gaps(x.height, schedule.orientation, schedule.levels);
  return band_integral(g, schedule.theta, schedule.orientation * (t - x.height));
}

BandConstruction build_band_function(const LaaksoPoint& x, const ThetaSchedule& schedule) {
  check_unit_interior(x.height);
  if (!check_schedule(x.height, schedule).ok()) throw std::invalid_argument("theta schedule violates its invariants");
  BandConstruction c;
  c.x = canonicalize(x);
  c.schedule = schedule;
  const Rational& x1 = c.x.height;
  const int sigma = schedule.orientation;
  if (auto w = wormhole_order(x1); w && *w <= schedule.levels.back())
    throw std::invalid_argument("x is a wormhole of level " + std::to_string(*w) + " within the schedule");

  const Gaps g = finite_gaps(x1, sigma, schedule.levels);
  const Rational lo = sigma > 0 ? Rational(x1 - g.far[0]) : Rational(x1 - g.near[0]);
  const Rational hi = sigma > 0 ? Rational(x1 + g.near[0]) : Rational(x1 + g.far[0]);
  c.domain = HeightInterval::make(lo, hi);

  SampledFunction f;
  f.lip_bound = 1;
  auto on_line = [&](const Rational& t) { add_sample(f, {t, c.x.address}, c.line_value(t)); };
  on_line(x1);
  for (std::size_t k = 0; k < schedule.levels.size(); ++k) {
    const unsigned n = schedule.levels[k];
    c.u.push_back(canonicalize({x1 + sigma * g.near[k], c.x.address}));
    c.d.push_back(canonicalize({x1 - sigma * g.far[k], c.x.address}));
    c.y.push_back(canonicalize({x1, c.x.address.flipped(n)}));
    on_line(c.u.back().height);
    on_line(c.d.back().height);
    add_sample(f, c.y.back(), g.near[k]);
  }
  for (unsigned j = 1; j <= schedule.levels.back() + 2; ++j)
    for (const Rational& t : {Rational(x1 + inv_pow3(j)), Rational(x1 - inv_pow3(j))})
      if (c.domain.contains(t)) on_line(t);

  auto shared = std::make_shared<const SampledFunction>(f);
  c.function = std::move(f);
  const Gaps gaps = g;
  const ThetaSchedule sched = schedule;
  const HeightInterval domain = c.domain;
  c.eval = hybrid(shared, c.x.address, [gaps, sched, domain, x1](const Rational& t) -> std::optional<Rational> {
    if (!domain.contains(t)) return std::nullopt;
    return band_integral(gaps, sched.theta, sched.orientation * (t - x1));
  });
  return c;
}

// ----------------------------------------------------------------- porosity

PorosityWitness porosity_witness_for_S(const Rational& C, unsigned N, const Rational& t0, const Rational& delta) {
  if (C <= 1) throw std::invalid_argument("porosity witness needs C > 1");
  if (N == 0) throw std::invalid_argument("porosity witness needs N >= 1");
  if (t0 <= 0 || t0 >= 1) throw std::invalid_argument("porosity witness needs t0 in (0,1)");
  if (delta <= 0) throw std::invalid_argument("porosity witness needs delta > 0");
  PorosityWitness w;
  w.C = C;
  w.N = N;
  w.t0 = t0;
  w.delta = delta;
  w.lambda = 1 / (C + 2);
  w.lambda.canonicalize();
  w.n = N + 1;
  while (2 * inv_pow3(w.n) >= delta) ++w.n;
  const Integer scale = pow3(w.n);
  Integer k0;
  mpz_fdiv_q(k0.get_mpz_t(), Rational(t0 * scale).get_num_mpz_t(), Rational(t0 * scale).get_den_mpz_t());
  std::optional<Rational> best;
  for (const Integer& k : {Integer(k0), Integer(k0 + 1), Integer(k0 - 1)}) {
    if (k <= 0 || k >= scale || k % 3 == 0) continue;
    Rational t(k, scale);
    t.canonicalize();
    if (abs(t - t0) * scale >= 2) continue;
    if (!best || abs(t - t0) < abs(*best - t0)) best = t;
  }
  if (!best) throw std::logic_error("no J_n height near t0");
  w.t = *best;
  w.width = w.lambda * inv_pow3(w.n);
  w.width.canonicalize();
  return w;
}

std::vector<Rational> hole_samples(const PorosityWitness& w, std::size_t count, std::uint64_t seed) {
  std::vector<Rational> out;
  const std::size_t even = count / 2;
  for (std::size_t j = 1; j <= even; ++j) {
    Rational s = w.t + w.width * ratio(static_cast<unsigned long>(j), static_cast<unsigned long>(even + 1));
    s.canonicalize();
    out.push_back(std::move(s));
  }
  std::mt19937_64 rng(seed);
  constexpr unsigned long denom = 1ul << 40;
  while (out.size() < count) {
    const unsigned long num = rng() % (denom - 1) + 1;
    Rational s = w.t + w.width * ratio(num, denom);
    s.canonicalize();
    out.push_back(std::move(s));
  }
  return out;
}

HoleCertificate certify_hole(const PorosityWitness& w, const std::vector<Rational>& samples, bool record) {
  HoleCertificate cert;
  const Rational below_bound = w.lambda * inv_pow3(w.n);
  const Rational above_bound = (1 - w.lambda) * inv_pow3(w.n);
  for (const Rational& s : samples) {
    if (s <= w.left() || s >= w.right()) throw std::invalid_argument("sample " + to_string(s) + " is outside the hole");
    const ExtRational dm = nearest_wormhole_gap(s, w.n, Direction::down);
    const ExtRational dp = nearest_wormhole_gap(s, w.n, Direction::up);
    const bool ok_below = dm.is_finite() && dm.value() <= below_bound;
    const bool ok_above = dp.is_infinite() || dp.value() >= above_bound;
    cert.certified = cert.certified && ok_below && ok_above;
    ++cert.checked;
    if (record)
      cert.entries.push_back({{"s", to_json(s)},
                              {"D_minus", to_json(dm)},
                              {"D_plus", to_json(dp)},
                              {"D_minus_le", to_json(below_bound)},
                              {"D_plus_ge", to_json(above_bound)},
                              {"ok", ok_below && ok_above}});
  }
  return cert;
}

Json to_json(const PorosityWitness& w) {
  return {{"C", to_json(w.C)},          {"N", w.N},
          {"t0", to_json(w.t0)},        {"delta", to_json(w.delta)},
          {"n", w.n},                   {"lambda", to_json(w.lambda)},
          {"hole", Json::array({to_json(w.left()), to_json(w.right())})}};
}

// --------------------------------------------------------------- membership

Rational engineered_height(unsigned terms) {
  if (terms == 0 || terms > 10) throw std::invalid_argument("engineered_height needs 1..10 terms");
  Rational t = 0;
  for (unsigned k = 1; k <= terms; ++k) t += 2 * inv_pow3(1u << k);
  t.canonicalize();
  return t;
}

std::vector<ExtRational> gap_ratios(const Rational& t, const std::vector<unsigned>& levels) {
  std::vector<ExtRational> out;
  for (unsigned n : levels) {
    const ExtRational up = gap_above(t, n), down = gap_below(t, n);
    if (up.is_infinite() || down.is_infinite() || down.value() == 0)
      out.push_back(ExtRational::infinity());
    else
      out.emplace_back(up.value() / down.value());
  }
  return out;
}

std::string_view to_string(MembershipVerdict verdict) {
  return verdict == MembershipVerdict::not_in_m ? "not-in-M" : "in-M-consistent";
}

MembershipReport m_membership_verdict(const LaaksoPoint& x, const Rational& C, unsigned N, unsigned depth) {
  MembershipReport report;
  const SProbeVerdict probe = s_membership_probe(x.height, C, N, depth);
  if (probe.consistent) return report;
  report.verdict = MembershipVerdict::not_in_m;
  report.violated_at = probe.violated_at;

  const Rational& x1 = x.height;
  const int sigma =
      probe.gap_up.is_finite() && (probe.gap_down.is_infinite() || probe.gap_up.value() < probe.gap_down.value()) ? 1
                                                                                                                : -1;
  unsigned last = depth;
  if (auto w = wormhole_order(x1)) last = std::min(last, *w - 1);

  ThetaSchedule schedule = greedy_theta_schedule(x1, sigma, probe.violated_at, last);
  if (schedule.levels.empty()) {
    for (unsigned n = probe.violated_at; n <= last; ++n) {
      const ExtRational dn = near_gap(x1, n, sigma), df = far_gap(x1, n, sigma);
      if (dn.is_finite() && df.is_finite() && dn.value() < df.value()) {
        schedule = {sigma, {n}, max_theta(x1, sigma, {n})};
        break;
      }
    }
  }
  if (schedule.levels.empty()) return report;
  report.witness = build_band_function(x, schedule);
  const BandConstruction& w = *report.witness;
  report.witness_quotient = (w.eval(w.y.front()) - w.eval(w.x)) / distance(w.y.front(), w.x);
  report.witness_quotient.canonicalize();
  return report;
}

Json to_json(const MembershipReport& report) {
  Json j{{"verdict", to_string(report.verdict)}};
  if (report.verdict == MembershipVerdict::not_in_m) j["violated_at"] = report.violated_at;
  if (report.witness) {
    const BandConstruction& w = *report.witness;
    Json levels = Json::array(), theta = Json::array();
    for (unsigned n : w.schedule.levels) levels.push_back(n);
    for (const Rational& t : w.schedule.theta) theta.push_back(to_json(t));
    j["witness"] = {{"orientation", w.schedule.orientation},
                    {"levels", std::move(levels)},
                    {"theta", std::move(theta)},
                    {"quotient", to_json(report.witness_quotient)},
                    {"max_pair_ratio", to_json(pairwise_lipschitz(w.function).max_ratio)}};
  }
  return j;
}

}  // namespace laakso
