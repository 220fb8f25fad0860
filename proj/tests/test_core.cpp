#include <doctest.h>

#include <random>

#include "brute_force.hpp"
#include "laakso/core.hpp"
#include "laakso/serialize.hpp"

using namespace laakso;

namespace {

Rational q(const char* s) { return parse_rational(s); }

std::vector<Rational> qs(std::initializer_list<const char*> items) {
  std::vector<Rational> out;
  for (const char* s : items) out.push_back(q(s));
  return out;
}

Rational random_unit(std::mt19937_64& rng, unsigned long max_den) {
  const unsigned long den = 2 + rng() % (max_den - 1);
  Rational r(1 + rng() % (den - 1), den);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(q("6/4") == Rational(3, 2));
  CHECK(q("-2/6") == Rational(-1, 3));
  CHECK(to_string(q("4/2")) == "2");
  CHECK(to_string(q("3/9")) == "1/3");
  CHECK_THROWS_AS(q("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(q("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(q(""), std::invalid_argument);
  CHECK_THROWS_AS(q("1/"), std::invalid_argument);
}

TEST_CASE("ExtRational orders infinity above every finite value") {
  const ExtRational inf = ExtRational::infinity();
  CHECK(ExtRational(Rational(1000000)) < inf);
  CHECK(inf == ExtRational::infinity());
  CHECK(min(inf, ExtRational(Rational(1, 3))) == ExtRational(Rational(1, 3)));
  CHECK(inf.to_string() == "inf");
  CHECK_THROWS_AS(inf.value(), std::domain_error);
  CHECK(ExtRational(q("2/4")).value().get_den() == 2);
}

TEST_CASE("Cantor addresses pad with zeros") {
  CHECK(CantorAddress("10") == CantorAddress("1"));
  CHECK(CantorAddress("") == CantorAddress("000"));
  CHECK(CantorAddress("01").coordinate() == Rational(2, 9));
  CHECK(CantorAddress("0100").significant_depth() == 2);
  CHECK(CantorAddress("0").flipped(3).to_string() == "001");
  CHECK_THROWS_AS(CantorAddress("012"), std::invalid_argument);
}

TEST_CASE("enumerate_wormhole_heights") {
  CHECK(enumerate_wormhole_heights(1, HeightInterval::unit()) == qs({"1/3", "2/3"}));
  CHECK(enumerate_wormhole_heights(2, HeightInterval::unit()) == qs({"1/9", "2/9", "4/9", "5/9", "7/9", "8/9"}));
  CHECK(enumerate_wormhole_heights(2, HeightInterval::make(q("1/3"), q("2/3"))) == qs({"4/9", "5/9"}));
  CHECK_THROWS_AS(HeightInterval::make(q("2/3"), q("1/3")), std::invalid_argument);
  for (unsigned n = 1; n <= 7; ++n)
    CHECK(enumerate_wormhole_heights(n, HeightInterval::unit()).size() == 2 * pow3(n - 1).get_ui());
}

TEST_CASE("wormhole_order") {
  CHECK(wormhole_order(q("1/3")) == 1u);
  CHECK(wormhole_order(q("5/9")) == 2u);
  CHECK_FALSE(wormhole_order(q("1/2")).has_value());
  CHECK_FALSE(wormhole_order(q("0")).has_value());
  CHECK_FALSE(wormhole_order(q("1")).has_value());
  for (unsigned n = 1; n <= 5; ++n)
    for (const Rational& h : brute::level_heights(n)) CHECK(wormhole_order(h) == n);
}

TEST_CASE("nearest_wormhole_gap examples") {
  CHECK(nearest_wormhole_gap(q("1/2"), 1, Direction::up) == ExtRational(q("1/6")));
  CHECK(nearest_wormhole_gap(q("1/2"), 2, Direction::down) == ExtRational(q("1/18")));
  CHECK(nearest_wormhole_gap(q("1/4"), 1, Direction::down).is_infinite());
  CHECK_THROWS_AS(nearest_wormhole_gap(q("0"), 1, Direction::up), std::invalid_argument);
  CHECK_THROWS_AS(nearest_wormhole_gap(q("1"), 1, Direction::up), std::invalid_argument);
}

TEST_CASE("gaps agree with direct enumeration") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const Rational t = random_unit(rng, 500);
    for (unsigned n = 1; n <= 5; ++n) {
      for (bool up : {true, false}) {
        const auto expected = brute::gap(t, n, up);
        const ExtRational got = nearest_wormhole_gap(t, n, up ? Direction::up : Direction::down);
        CHECK(got.is_finite() == expected.has_value());
        if (expected && got.is_finite()) CHECK(got.value() == *expected);
      }
    }
  }
}

TEST_CASE("gap invariants on random rationals") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    const Rational t = random_unit(rng, 100000);
    for (unsigned n = 1; n <= 12; ++n) {
      const ExtRational up = gap_above(t, n), down = gap_below(t, n);
      if (up.is_finite() && down.is_finite()) CHECK(up.value() + down.value() >= inv_pow3(n));
      const Rational bound = 2 * inv_pow3(n);
      if (1 - t >= bound) CHECK((up.is_finite() && up.value() <= bound));
      if (t >= bound) CHECK((down.is_finite() && down.value() <= bound));
    }
  }
}

TEST_CASE("canonicalize") {
  CHECK(canonicalize({q("1/3"), CantorAddress("1")}).address == CantorAddress("0"));
  CHECK(canonicalize({q("1/2"), CantorAddress("10")}).address.to_string() == "10");
  CHECK(canonicalize({q("5/9"), CantorAddress("01")}).address == CantorAddress("00"));
  CHECK(same_point({q("1/3"), CantorAddress("1")}, {q("1/3"), CantorAddress("")}));
  CHECK_FALSE(same_point({q("1/2"), CantorAddress("1")}, {q("1/2"), CantorAddress("")}));

  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    std::string bits(rng() % 6, '0');
    for (char& c : bits) c = rng() % 2 ? '1' : '0';
    const LaaksoPoint p{ratio(rng() % 244, 243u), CantorAddress(bits)};
    const LaaksoPoint c = canonicalize(p);
    CHECK(c.height == p.height);
    CHECK(canonicalize(c) == c);
  }
  CHECK_THROWS_AS(LaaksoPoint::make(q("3/2"), CantorAddress("")), std::invalid_argument);
}

TEST_CASE("s_membership_probe") {
  CHECK(s_membership_probe(q("1/3"), 2, 2, 12).consistent);

  // 1/2 sits symmetrically between neighbouring wormholes at every level.
  for (unsigned n = 1; n <= 6; ++n) CHECK(*brute::gap(q("1/2"), n, true) == *brute::gap(q("1/2"), n, false));
  CHECK(s_membership_probe(q("1/2"), 1, 1, 8).consistent);

  Rational t = 0;
  for (unsigned k = 1; k <= 5; ++k) t += 2 * inv_pow3(1u << k);
  const SProbeVerdict v = s_membership_probe(t, 3, 2, 32);
  CHECK_FALSE(v.consistent);
  CHECK(v.violated_at == 2);
  // Violations persist when the probe goes deeper.
  for (unsigned depth = 2; depth <= 32; depth += 5) CHECK_FALSE(s_membership_probe(t, 3, 2, depth).consistent);

  CHECK_THROWS_AS(s_membership_probe(q("0"), 2, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(s_membership_probe(q("1/2"), 2, 4, 3), std::invalid_argument);
}

TEST_CASE("point serialization") {
  const LaaksoPoint p{q("2/6"), CantorAddress("0110")};
  const Json j = to_json(p);
  CHECK(j.dump() == R"({"h":"1/3","bits":"0110"})");
  CHECK(point_from_json(j) == p);
  CHECK(parse_point("1/3:") == LaaksoPoint{q("1/3"), CantorAddress("")});
  CHECK(format_point(parse_point("1/2:01")) == "1/2:01");
  CHECK_THROWS_AS(parse_point("1/2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_point("3/2:0"), std::invalid_argument);
  CHECK(to_json(ExtRational::infinity()).dump() == "\"inf\"");
}
