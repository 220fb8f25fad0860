#include <doctest.h>

#include <random>
#include <sstream>

#include "brute_force.hpp"
#include "laakso/distance_analysis.hpp"
#include "laakso/metric.hpp"

using namespace laakso;

namespace {

LaaksoPoint pt(const char* text) { return parse_point(text); }
Rational q(const char* s) { return parse_rational(s); }

std::vector<Rational> qs(std::initializer_list<const char*> items) {
  std::vector<Rational> out;
  for (const char* s : items) out.push_back(q(s));
  return out;
}

brute::Pt to_brute(const LaaksoPoint& p, unsigned depth) {
  brute::Pt b{p.height, {}};
  for (unsigned i = 1; i <= depth; ++i) b.bits.push_back(p.address.bit(i));
  return b;
}

VerticalLine only_line(const LaaksoPoint& p, std::vector<unsigned> levels) {
  const auto lines = lines_from(p, std::move(levels));
  REQUIRE(lines.size() == 1);
  return lines.front();
}

LaaksoPoint random_point(std::mt19937_64& rng) {
  const unsigned long den = 2 + rng() % 80;
  std::string bits(rng() % 4, '0');
  for (char& c : bits) c = rng() % 2 ? '1' : '0';
  return canonicalize({ratio(1 + rng() % (den - 1), den), CantorAddress(bits)});
}

}  // namespace

TEST_CASE("line labels and alternates") {
  const auto v0 = lines_from(pt("1/2:0"), {});
  REQUIRE(v0.size() == 1);
  CHECK(v0[0].label() == "v0");
  CHECK(only_line(pt("1/2:0"), {2}).label() == "vN:2");
  CHECK(only_line(pt("1/2:0"), {1, 3}).label() == "vD:1,3");

  const auto w = lines_from(pt("1/3:0"), {2});
  REQUIRE(w.size() == 2);
  CHECK_FALSE(w[0].alternate);
  CHECK(w[1].alternate);
  CHECK(w[1].label() == "vN:2'");
  CHECK_THROWS_AS(lines_from(pt("1/3:0"), {1}), std::invalid_argument);
  CHECK(only_line(pt("1/2:0"), {3, 1}).label() == "vD:1,3");
  CHECK_THROWS_AS(lines_from(pt("1/2:0"), {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(lines_from(pt("1/2:0"), {0}), std::invalid_argument);
}

TEST_CASE("profile examples") {
  const LaaksoPoint p = pt("1/2:0");
  const KinkProfile v0 = profile_dp_on_line(p, only_line(p, {}));
  REQUIRE(v0.kinks.size() == 1);
  CHECK(v0.kinks[0].height == q("1/2"));
  CHECK(v0.kinks[0].is_valley());

  const VerticalLine v1 = only_line(p, {1});
  const KinkProfile k1 = profile_dp_on_line(p, v1);
  CHECK(k1.kink_heights() == qs({"1/3", "1/2", "2/3"}));
  CHECK(k1.kinks[1].is_ridge());
  CHECK(k1.value_at(q("1/2")) == q("1/3"));
  const ExpectedKinks e1 = expected_kinks(p, v1);
  CHECK(e1.branch == KinkBranch::vn_both);
  CHECK(e1.heights == k1.kink_heights());

  CHECK(profile_dp_on_line(p, only_line(p, {2})).kink_heights() == qs({"4/9", "1/2", "5/9"}));

  const VerticalLine d12 = only_line(p, {1, 2});
  CHECK(expected_kinks(p, d12).branch == KinkBranch::vd_all_finite_a);
  CHECK(profile_dp_on_line(p, d12).kink_heights() == qs({"1/3", "1/2", "2/3"}));
}

TEST_CASE("seven-kink two-level line") {
  // At 3/5 the level-2 neighbour below is nearer than the level-1 one, and the
  // level-1 neighbour above is nearer than the level-2 one.
  const LaaksoPoint p = pt("3/5:0");
  const VerticalLine line = only_line(p, {1, 2});
  const ExpectedKinks e = expected_kinks(p, line);
  CHECK(e.branch == KinkBranch::vd_all_finite_b);
  const auto want = qs({"1/3", "2/5", "5/9", "3/5", "2/3", "11/15", "7/9"});
  CHECK(e.heights == want);
  const KinkProfile k = profile_dp_on_line(p, line);
  CHECK(k.kink_heights() == want);
  for (std::size_t i = 0; i < k.kinks.size(); ++i) CHECK(k.kinks[i].is_valley() == (i % 2 == 0));
}

TEST_CASE("wormhole base point has two lines with matching kinks") {
  const LaaksoPoint p = pt("1/3:0");
  for (const VerticalLine& line : lines_from(p, {2})) {
    CHECK(profile_dp_on_line(p, line).kink_heights() == qs({"2/9", "1/3", "4/9"}));
    CHECK(expected_kinks(p, line).branch == KinkBranch::vn_both);
  }
}

TEST_CASE("expected_kinks rejects three levels") {
  const LaaksoPoint p = pt("1/2:0");
  CHECK_THROWS_AS(expected_kinks(p, only_line(p, {1, 2, 3})), std::invalid_argument);
  CHECK(to_string(KinkBranch::vd_all_finite_c) == "vd_all_finite_c");
  CHECK(two_level_branches().size() == 9);
}

TEST_CASE("profiles tile [0,1] and match brute force distances") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 60; ++i) {
    const LaaksoPoint p = random_point(rng);
    const auto w = wormhole_order(p.height);
    std::vector<unsigned> levels;
    for (unsigned n = 1; n <= 3; ++n)
      if (n != w && rng() % 2) levels.push_back(n);
    if (levels.size() > 2) levels.pop_back();
    for (const VerticalLine& line : lines_from(p, levels)) {
      const KinkProfile k = profile_dp_on_line(p, line);
      REQUIRE_FALSE(k.pieces.empty());
      CHECK(k.pieces.front().lo == 0);
      CHECK(k.pieces.back().hi == 1);
      for (std::size_t j = 0; j + 1 < k.pieces.size(); ++j) {
        CHECK(k.pieces[j].hi == k.pieces[j + 1].lo);
        CHECK(k.pieces[j].slope != k.pieces[j + 1].slope);
      }
      CHECK(expected_kinks(p, line).heights == k.kink_heights());
      for (int s = 0; s <= 12; ++s) {
        const Rational t = ratio(s, 12);
        const LaaksoPoint z{t, line.address};
        CHECK(k.value_at(t) == brute::distance(to_brute(p, 4), to_brute(z, 4), 4));
      }
    }
  }
}

TEST_CASE("parallel reduction") {
  const ParallelValues v = parallel_reduction(pt("1/2:0"), {1, 2, 3}, q("1/2"));
  CHECK(v.value_full == v.value_two_level);
  CHECK(v.value_full == distance(pt("1/2:0"), pt("1/2:11")));
  CHECK_THROWS_AS(parallel_reduction(pt("1/2:0"), {1, 2}, q("1/2")), std::invalid_argument);
  CHECK_THROWS_AS(parallel_reduction(pt("1/2:0"), {1, 2, 3}, q("3/2")), std::invalid_argument);
  CHECK_THROWS_AS(parallel_reduction(pt("1/3:0"), {1, 2, 3}, q("1/2")), std::invalid_argument);

  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const LaaksoPoint p = random_point(rng);
    const auto w = wormhole_order(p.height);
    std::vector<unsigned> levels;
    for (unsigned n = 1; n <= 5; ++n)
      if (n != w) levels.push_back(n);
    levels.resize(3);
    const Rational t = ratio(rng() % 82, 81);
    const ParallelValues r = parallel_reduction(p, levels, t);
    CHECK(r.value_full == r.value_two_level);
  }
}

TEST_CASE("census") {
  const auto c1 = nondiff_height_census(pt("1/2:0"), 1);
  REQUIRE(c1.size() == 3);
  CHECK(c1[0].height == q("1/3"));
  CHECK(c1[1].height == q("1/2"));
  CHECK(c1[1].source_line == "v0");
  CHECK(c1[2].height == q("2/3"));
  for (const CensusEntry& e : c1) CHECK(e.kink_type == "valley");

  const auto c2 = nondiff_height_census(pt("1/2:0"), 2);
  CHECK(c2.size() == 5);
  for (std::size_t i = 0; i + 1 < c2.size(); ++i) CHECK(c2[i].height < c2[i + 1].height);

  std::ostringstream csv;
  write_census_csv(csv, c1);
  CHECK(csv.str() == "height,source_line,kink_type\n1/3,\"vN:1\",valley\n1/2,\"v0\",valley\n2/3,\"vN:1\",valley\n");
  CHECK_THROWS_AS(nondiff_height_census(pt("1/2:0"), 0), std::invalid_argument);
  CHECK_THROWS_AS(nondiff_height_census(pt("1/2:0"), 13), std::invalid_argument);
}

TEST_CASE("profile output formats") {
  const LaaksoPoint p = pt("1/2:0");
  const KinkProfile k = profile_dp_on_line(p, only_line(p, {}));
  CHECK(to_json(k).dump() ==
        R"({"line":"v0","bits":"0","pieces":[{"interval":["0","1/2"],"slope":-1,"offset":"1/2"},)"
        R"({"interval":["1/2","1"],"slope":1,"offset":"-1/2"}],"kinks":[{"height":"1/2","left_slope":-1,"right_slope":1}]})");
  const std::string svg = to_svg(k, p);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("class=\"profile\"") != std::string::npos);
  CHECK(svg.find("class=\"kink\"") != std::string::npos);
}
