#include <doctest.h>

#include <random>

#include "brute_force.hpp"
#include "laakso/metric.hpp"

using namespace laakso;

namespace {

LaaksoPoint pt(const char* text) { return parse_point(text); }
Rational q(const char* s) { return parse_rational(s); }

LaaksoPoint random_point(std::mt19937_64& rng, unsigned max_depth) {
  const unsigned long den = 2 + rng() % 80;
  Rational h(1 + rng() % (den - 1), den);
  h.canonicalize();
  std::string bits(rng() % (max_depth + 1), '0');
  for (char& c : bits) c = rng() % 2 ? '1' : '0';
  return canonicalize({h, CantorAddress(bits)});
}

brute::Pt to_brute(const LaaksoPoint& p) {
  brute::Pt b{p.height, {}};
  for (std::size_t i = 1; i <= p.address.depth(); ++i) b.bits.push_back(p.address.bit(i));
  return b;
}

}  // namespace

TEST_CASE("required_levels") {
  CHECK(required_levels(pt("1/2:0"), pt("1/2:1")) == std::vector<unsigned>{1});
  CHECK(required_levels(pt("1/4:00"), pt("1/4:11")) == std::vector<unsigned>{1, 2});
  CHECK(required_levels(pt("1/2:10"), pt("1/2:1")).empty());
}

TEST_CASE("minimal_height_intervals examples") {
  const auto split = minimal_height_intervals(pt("1/2:0"), pt("1/2:1"));
  REQUIRE(split.size() == 2);
  CHECK(split[0] == HeightInterval{q("1/3"), q("1/2")});
  CHECK(split[1] == HeightInterval{q("1/2"), q("2/3")});
  const auto bf = brute::minimal_intervals(to_brute(pt("1/2:0")), to_brute(pt("1/2:1")), 1);
  REQUIRE(bf.size() == 2);
  CHECK((bf[0].a == split[0].a && bf[0].b == split[0].b && bf[1].a == split[1].a && bf[1].b == split[1].b));

  const auto one = minimal_height_intervals(pt("1/2:0"), pt("2/3:1"));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == HeightInterval{q("1/2"), q("2/3")});
  CHECK(brute::minimal_intervals(to_brute(pt("1/2:0")), to_brute(pt("2/3:1")), 1).size() == 1);

  const auto same = minimal_height_intervals(pt("2/5:01"), pt("2/5:01"));
  REQUIRE(same.size() == 1);
  CHECK(same[0] == HeightInterval{q("2/5"), q("2/5")});
}

TEST_CASE("distance examples") {
  CHECK(distance(pt("1/2:0"), pt("1/2:1")) == q("1/3"));
  CHECK(distance(pt("1/2:0"), pt("2/3:1")) == q("1/6"));
  CHECK(distance(pt("1/2:0"), pt("1/2:0")) == 0);
  CHECK(distance(pt("1/3:1"), pt("1/3:0")) == 0);
}

TEST_CASE("intervals and distances agree with brute force") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    const LaaksoPoint x = random_point(rng, 3), y = random_point(rng, 3);
    const auto got = minimal_height_intervals(x, y);
    const auto want = brute::minimal_intervals(to_brute(x), to_brute(y), 3);
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      CHECK(got[k].a == want[k].a);
      CHECK(got[k].b == want[k].b);
    }
    CHECK(distance(x, y) == brute::distance(to_brute(x), to_brute(y), 3));
  }
}

TEST_CASE("metric properties on a random pool") {
  std::mt19937_64 rng(22);
  std::vector<LaaksoPoint> pool;
  for (int i = 0; i < 200; ++i) pool.push_back(random_point(rng, 4));
  const std::size_t n = pool.size();
  std::vector<Rational> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = distance(pool[i], pool[j]);

  std::size_t symmetric_failures = 0, zero_failures = 0, lower_bound_failures = 0, triangle_failures = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i * n + j] != d[j * n + i]) ++symmetric_failures;
      if ((d[i * n + j] == 0) != same_point(pool[i], pool[j])) ++zero_failures;
      if (d[i * n + j] < abs(pool[i].height - pool[j].height)) ++lower_bound_failures;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (d[i * n + k] > d[i * n + j] + d[j * n + k]) ++triangle_failures;
  CHECK(symmetric_failures == 0);
  CHECK(zero_failures == 0);
  CHECK(lower_bound_failures == 0);
  CHECK(triangle_failures == 0);
}

TEST_CASE("distance equals the height gap exactly when levels resolve in between") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const LaaksoPoint x = random_point(rng, 4), y = random_point(rng, 4);
    const Rational lo = std::min(x.height, y.height), hi = std::max(x.height, y.height);
    bool resolvable = true;
    for (unsigned n : required_levels(x, y))
      resolvable = resolvable && !enumerate_wormhole_heights(n, HeightInterval::make(lo, hi)).empty();
    CHECK((distance(x, y) == hi - lo) == resolvable);
  }
}

TEST_CASE("synthesize_geodesic examples") {
  const LaaksoPoint x = pt("1/2:0"), y = pt("1/2:1");
  const GeodesicPath up = synthesize_geodesic(x, y, {q("1/2"), q("2/3")});
  CHECK(to_json(up).dump() ==
        R"([{"seg":["1/2","2/3"],"bits":"0"},{"jump":1,"at":"2/3"},{"seg":["2/3","1/2"],"bits":"1"}])");
  CHECK(up.length() == q("1/3"));
  CHECK(up.ending() == Direction::down);

  const GeodesicPath down = synthesize_geodesic(x, y, {q("1/3"), q("1/2")});
  CHECK(to_json(down).dump() ==
        R"([{"seg":["1/2","1/3"],"bits":"0"},{"jump":1,"at":"1/3"},{"seg":["1/3","1/2"],"bits":"1"}])");
  CHECK(down.ending() == Direction::up);

  const GeodesicPath trivial = synthesize_geodesic(x, x, {q("1/2"), q("1/2")});
  CHECK(trivial.steps.empty());
  CHECK(trivial.length() == 0);

  CHECK_THROWS_AS(synthesize_geodesic(x, y, {q("1/3"), q("2/3")}), std::invalid_argument);
}

TEST_CASE("synthesized geodesics are valid, have the right length and few low jumps") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 400; ++i) {
    const LaaksoPoint x = random_point(rng, 4), y = random_point(rng, 4);
    const Rational d = distance(x, y);
    const auto intervals = minimal_height_intervals(x, y);
    for (const HeightInterval& iv : intervals) {
      CHECK(iv.length() == intervals.front().length());
      const GeodesicPath path = synthesize_geodesic(x, y, iv);
      CHECK(is_valid_path(path));
      CHECK(path.length() == d);
      const auto jumps = path.jumps();
      for (unsigned N = 2; N <= 10; ++N) {
        if (d >= inv_pow3(N - 1)) continue;
        std::size_t low = 0;
        for (const GeodesicJump& j : jumps) low += j.level <= N - 1;
        CHECK(low <= 1);
      }
    }
  }
}

TEST_CASE("geodesic_endings") {
  CHECK(geodesic_endings(pt("1/2:0"), pt("1/2:1")) == std::set<Direction>{Direction::up, Direction::down});
  CHECK(geodesic_endings(pt("1/2:0"), pt("2/3:1")) == std::set<Direction>{Direction::up});
  CHECK(geodesic_endings(pt("1/2:0"), pt("1/3:1")) == std::set<Direction>{Direction::down});
  CHECK(geodesic_endings(pt("1/2:"), pt("3/4:")) == std::set<Direction>{Direction::up});
  CHECK_THROWS_AS(geodesic_endings(pt("1/3:1"), pt("1/3:0")), std::invalid_argument);
}
