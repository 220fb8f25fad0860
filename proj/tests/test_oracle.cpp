#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "laakso/metric.hpp"
#include "laakso/oracle.hpp"

using namespace laakso;

namespace {

LaaksoPoint pt(const char* text) { return parse_point(text); }
Rational q(const char* s) { return parse_rational(s); }

}  // namespace

TEST_CASE("level graph sizes") {
  const LevelGraph g1(1), g2(2), g3(3);
  CHECK(g1.vertex_count() == 8);
  CHECK(g2.vertex_count() == 40);
  CHECK(g3.vertex_count() == 224);
  // One zero edge per address pair differing in bit n, at each J_n height.
  CHECK(g1.zero_edge_count() == 2 * 1);
  CHECK(g2.zero_edge_count() == 2 * 2 + 6 * 2);
  CHECK_THROWS_AS(LevelGraph(0), std::invalid_argument);
  CHECK_THROWS_AS(LevelGraph(9), std::invalid_argument);
}

TEST_CASE("zero edges sit only at wormhole heights of their own level") {
  const LevelGraph g(3);
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    for (const LevelGraph::Edge& e : g.neighbors(v)) {
      if (e.weight != 0) continue;
      const LaaksoPoint a = g.point_of(v), b = g.point_of(e.to);
      CHECK(a.height == b.height);
      const auto order = wormhole_order(a.height);
      REQUIRE(order.has_value());
      CHECK(a.address.flipped(*order) == b.address);
    }
}

TEST_CASE("graph_distance examples") {
  CHECK_THROWS_AS(graph_distance(LevelGraph(3), pt("1/2:000"), pt("1/3:000")), std::invalid_argument);
  CHECK(graph_distance(LevelGraph(1), pt("1/3:0"), pt("1/3:1")) == 0);
  const LevelGraph g2(2);
  CHECK(graph_distance(g2, pt("4/9:00"), pt("4/9:11")) == distance(pt("4/9:00"), pt("4/9:11")));
  CHECK(graph_distance(LevelGraph(3), pt("13/27:000"), pt("13/27:100")) == distance(pt("13/27:0"), pt("13/27:1")));
}

TEST_CASE("zero-distance classes are the canonical classes") {
  const LevelGraph g(2);
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    const auto dist = g.distances_from(u);
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
      CHECK((dist[v] == 0) == (canonicalize(g.point_of(u)) == canonicalize(g.point_of(v))));
  }
}

TEST_CASE("cell masses") {
  for (unsigned m = 1; m <= 8; ++m) CHECK(total_cell_mass(m) == 1);
  // (3^-m)^(Q-1) = 2^-m
  for (unsigned m = 1; m <= 8; ++m) CHECK(std::pow(std::pow(3.0, -double(m)), laakso_dimension() - 1) ==
                                         doctest::Approx(std::pow(2.0, -double(m))));
  CHECK(laakso_dimension() == doctest::Approx(1 + std::log(2.0) / std::log(3.0)));
}

TEST_CASE("ball_measure") {
  const LevelGraph g3(3);
  CHECK(ball_measure(g3, pt("1/3:000"), Rational(1)).mass == 1);
  CHECK(ball_measure(g3, pt("1/3:000"), Rational(2)).mass == 1);
  CHECK_THROWS_AS(ball_measure(g3, pt("1/3:000"), q("1/81")), std::invalid_argument);

  // Direct summation over cell corners with the metric module.
  const LevelGraph g4(4);
  const LaaksoPoint center = pt("1/3:0000");
  for (const char* r : {"1/81", "1/27", "1/9", "1/3"}) {
    Rational mass = 0;
    for (std::size_t k = 0; k < g4.height_count() - 1; ++k)
      for (std::uint32_t a = 0; a < g4.address_count(); ++a)
        if (distance(center, g4.point_of(g4.vertex(k, a))) <= q(r)) mass += Rational(1, 81u * 16u);
    CHECK(ball_measure(g4, center, q(r)).mass == mass);
  }

  const LevelGraph g5(5);
  const MeasureEstimate est = ball_measure(g5, pt("1/3:00000"), q("1/9"));
  CHECK(est.ratio > 0.1);
  CHECK(est.ratio < 10);

  Rational previous = 0;
  for (unsigned j = 5; j >= 1; --j) {
    const Rational mass = ball_measure(g5, pt("2/3:01100"), inv_pow3(j)).mass;
    CHECK(mass >= previous);
    previous = mass;
  }
}

TEST_CASE("regularity_scan") {
  const LevelGraph g(4);
  CHECK(regularity_scan(g, 5, {}, 1).rows.empty());
  CHECK_THROWS_AS(regularity_scan(g, 5, {q("1/81")}, 1), std::invalid_argument);
  CHECK_THROWS_AS(regularity_scan(g, 5, {q("1/2")}, 1), std::invalid_argument);

  const RegularityTable a = regularity_scan(g, 6, {q("1/9"), q("1/27")}, 99);
  const RegularityTable b = regularity_scan(g, 6, {q("1/9"), q("1/27")}, 99);
  std::ostringstream sa, sb;
  write_regularity_csv(sa, a);
  write_regularity_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("center_h,center_bits,r,mass,ratio,m\n", 0) == 0);
  CHECK(a.rows.size() == 12);
  CHECK(a.spread() >= 1);

  // Tripling the radius multiplies the mass by a bounded factor.
  for (std::size_t i = 0; i + 1 < a.rows.size(); i += 2) {
    const Rational small = a.rows[i].mass, large = a.rows[i + 1].mass;
    CHECK(large >= small);
    CHECK(large <= small * 100);
  }
}

TEST_CASE("edge list export") {
  const Json j = LevelGraph(1).edge_list_json();
  REQUIRE(j.is_array());
  std::size_t zero = 0;
  for (const Json& e : j) {
    CHECK(e["u"].get<std::size_t>() < e["v"].get<std::size_t>());
    zero += e["w"] == "0";
  }
  CHECK(zero == 2);
}
