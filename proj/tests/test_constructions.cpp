#include <doctest.h>

#include "laakso/constructions.hpp"
#include "laakso/metric.hpp"

using namespace laakso;

namespace {

LaaksoPoint pt(const char* text) { return parse_point(text); }
Rational q(const char* s) { return parse_rational(s); }

Rational quotient(const PointFunction& f, const LaaksoPoint& y, const LaaksoPoint& x) {
  return (f(y) - f(x)) / distance(y, x);
}

}  // namespace

TEST_CASE("McShane extension") {
  SampledFunction f;
  f.lip_bound = 1;
  CHECK_THROWS_AS(mcshane_extend(f, pt("1/2:")), std::invalid_argument);
  f.samples[pt("1/3:0")] = 0;
  f.samples[pt("2/3:1")] = q("1/6");
  f.samples[pt("1/2:01")] = q("1/9");

  for (const auto& [a, v] : f.samples) CHECK(mcshane_extend(f, a) == v);
  const LipschitzPairReport r = pairwise_lipschitz(f);
  CHECK(r.pairs == 3);
  CHECK(r.max_ratio <= 1);

  // The extension is L-Lipschitz against every sample.
  for (const char* z : {"0:", "1/4:1", "1/2:", "5/6:11", "1:01"})
    for (const auto& [a, v] : f.samples) CHECK(abs(mcshane_extend(f, pt(z)) - v) <= distance(pt(z), a));

  // Raising one sample never lowers the extension.
  SampledFunction g = f;
  g.samples[pt("1/3:0")] = q("1/27");
  for (const char* z : {"0:", "1/4:1", "1/2:", "5/6:11"}) CHECK(mcshane_extend(g, pt(z)) >= mcshane_extend(f, pt(z)));
}

TEST_CASE("jump construction at 1/2") {
  const JumpConstruction c = build_jump_function(pt("1/2:"), 1, 6);
  REQUIRE(c.levels == std::vector<unsigned>{1, 2, 3, 4, 5, 6});
  for (std::size_t i = 0; i < c.y.size(); ++i) {
    const Rational gap = q("1/2") * inv_pow3(c.levels[i]);
    CHECK(c.eval(c.y[i]) == gap);
    CHECK(distance(c.y[i], c.x) == 2 * gap);
    CHECK(quotient(c.eval, c.y[i], c.x) == q("1/2"));
  }
  CHECK(format_point(c.y[1]) == "1/2:01");
  CHECK(c.eval(pt("1/4:")) == 0);
  CHECK(pairwise_lipschitz(c.function).max_ratio <= 1);

  CHECK_THROWS_AS(build_jump_function(pt("0:"), 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_jump_function(pt("1/2:"), 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_jump_function(pt("1/2:"), 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_jump_function(pt("1/3:"), 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_jump_function(pt("1/4:"), 1, 3), std::invalid_argument);  // D_1^- is infinite
}

TEST_CASE("engineered height") {
  const Rational t0 = engineered_height(5);
  Rational sum = 0;
  for (unsigned k = 1; k <= 5; ++k) sum += 2 * inv_pow3(1u << k);
  CHECK(t0 == sum);
  CHECK(wormhole_order(t0) == 32u);
  CHECK_THROWS_AS(engineered_height(0), std::invalid_argument);
  CHECK_THROWS_AS(engineered_height(11), std::invalid_argument);

  // The ratio D^+/D^- at level 2^k grows without bound.
  const auto ratios = gap_ratios(t0, {2, 4, 8, 16});
  REQUIRE(ratios.size() == 4);
  for (std::size_t i = 0; i + 1 < ratios.size(); ++i) CHECK(ratios[i + 1] > ratios[i]);
  CHECK(ratios[0] > ExtRational(Rational(3)));
}

TEST_CASE("theta schedules") {
  const Rational t0 = engineered_height(5);
  for (const auto& [x1, sigma] : {std::pair<Rational, int>{1 - t0, 1}, {t0, -1}}) {
    const ThetaSchedule s = greedy_theta_schedule(x1, sigma, 1, 31);
    CHECK(s.levels == std::vector<unsigned>{2, 4, 8, 16});
    CHECK(s.theta == max_theta(x1, sigma, s.levels));
    CHECK(s.theta.back() == q("43046719/43046720"));
    const ScheduleCheck check = check_schedule(x1, s);
    CHECK(check.ok());
    CHECK(check.thinning);
    for (unsigned n : s.levels) CHECK(near_gap(x1, n, sigma) < far_gap(x1, n, sigma));

    ThetaSchedule bad = s;
    bad.theta[0] = 1;
    CHECK_FALSE(check_schedule(x1, bad).ok());
    CHECK_THROWS_AS(build_band_function({x1, CantorAddress("")}, bad), std::invalid_argument);
  }
}

TEST_CASE("band construction at 1 - t0 and t0") {
  const Rational t0 = engineered_height(5);
  for (const auto& [x1, sigma] : {std::pair<Rational, int>{1 - t0, 1}, {t0, -1}}) {
    const ThetaSchedule s = greedy_theta_schedule(x1, sigma, 1, 31);
    const BandConstruction c = build_band_function({x1, CantorAddress("")}, s);
    REQUIRE(c.y.size() == s.levels.size());
    CHECK(c.line_value(x1) == 0);
    for (std::size_t k = 0; k < c.y.size(); ++k) {
      const Rational near = near_gap(x1, s.levels[k], sigma).value();
      CHECK(c.eval(c.y[k]) == near);
      CHECK(c.eval(c.u[k]) == near);
      CHECK(distance(c.y[k], c.x) == 2 * near);
      CHECK(quotient(c.eval, c.y[k], c.x) == q("1/2"));
    }
    // Slope sigma on the near side of x1 along the line.
    const Rational step = near_gap(x1, 16, sigma).value() / 2;
    CHECK(c.line_value(x1 + sigma * step) == step);
    CHECK(pairwise_lipschitz(c.function).max_ratio <= 1);
  }
}

TEST_CASE("porosity witness example") {
  const PorosityWitness w = porosity_witness_for_S(2, 1, q("1/3"), q("1/10"));
  CHECK(w.n == 3);
  CHECK(w.lambda == q("1/4"));
  CHECK(w.t == q("10/27"));
  CHECK(w.right() == q("10/27") + q("1/108"));
  CHECK((1 - w.lambda) / w.lambda > w.C);

  const auto samples = hole_samples(w, 100, 7);
  CHECK(samples.size() == 100);
  for (const Rational& s : samples) {
    CHECK(s > w.left());
    CHECK(s < w.right());
  }
  CHECK(hole_samples(w, 100, 7) == samples);
  const HoleCertificate cert = certify_hole(w, samples);
  CHECK(cert.certified);
  CHECK(cert.checked == 100);
  CHECK(cert.entries.size() == 100);
  CHECK(cert.entries[0]["ok"] == true);

  CHECK_THROWS_AS(certify_hole(w, {w.t - w.width / 2}), std::invalid_argument);
  CHECK(to_json(w)["n"] == 3);
}

TEST_CASE("membership verdicts") {
  for (unsigned depth = 2; depth <= 12; ++depth) {
    const MembershipReport r = m_membership_verdict(pt("1/3:"), 2, 2, depth);
    CHECK(r.verdict == MembershipVerdict::in_m_consistent);
    CHECK_FALSE(r.witness.has_value());
  }

  const Rational t0 = engineered_height(5);
  for (unsigned depth : {2u, 4u, 8u, 12u, 32u}) {
    const MembershipReport r = m_membership_verdict({t0, CantorAddress("")}, 3, 2, depth);
    CHECK(r.verdict == MembershipVerdict::not_in_m);
    CHECK(r.violated_at == 2);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness_quotient == q("1/2"));
  }
  CHECK(to_string(MembershipVerdict::not_in_m) == "not-in-M");
  CHECK(to_json(m_membership_verdict(pt("1/3:"), 2, 2, 4))["verdict"] == "in-M-consistent");
}
