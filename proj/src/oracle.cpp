#include "laakso/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>

namespace laakso {

double laakso_dimension() { return 1.0 + std::log(2.0) / std::log(3.0); }

LevelGraph::LevelGraph(unsigned m) : m_(m) {
  if (m < 1 || m > 8) throw std::invalid_argument("level graph resolution must be in [1,8]");
  const std::size_t steps = pow3(m).get_ui();
  heights_ = steps + 1;
  addresses_ = std::size_t{1} << m;

  // Order of each grid height as a wormhole (0 when none).
  std::vector<unsigned> order(heights_, 0);
  for (unsigned n = 1; n <= m; ++n) {
    const std::size_t stride = pow3(m - n).get_ui();
    for (std::size_t k = stride; k < steps; k += stride)
      if ((k / stride) % 3 != 0) order[k] = n;
  }

  std::vector<std::vector<Edge>> adjacency(vertex_count());
  for (std::size_t k = 0; k < heights_; ++k) {
    for (std::uint32_t a = 0; a < addresses_; ++a) {
      const std::size_t v = vertex(k, a);
      if (k + 1 < heights_) {
        const std::size_t w = vertex(k + 1, a);
        adjacency[v].push_back({static_cast<std::uint32_t>(w), 1});
        adjacency[w].push_back({static_cast<std::uint32_t>(v), 1});
      }
      if (order[k] != 0) {
        const std::uint32_t partner = a ^ (std::uint32_t{1} << (order[k] - 1));
        adjacency[v].push_back({static_cast<std::uint32_t>(vertex(k, partner)), 0});
        if (a < partner) ++zero_edges_;
      }
    }
  }
  offsets_.reserve(vertex_count() + 1);
  offsets_.push_back(0);
  for (auto& list : adjacency) {
    edges_.insert(edges_.end(), list.begin(), list.end());
    offsets_.push_back(edges_.size());
  }
}

std::span<const LevelGraph::Edge> LevelGraph::neighbors(std::size_t v) const {
  return {edges_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::size_t LevelGraph::vertex_of(const LaaksoPoint& p) const {
  const Rational scaled = p.height * pow3(m_);
  if (scaled.get_den() != 1 || scaled < 0 || scaled > pow3(m_))
    throw std::invalid_argument("height " + to_string(p.height) + " is not representable at resolution " +
                                std::to_string(m_));
  if (p.address.significant_depth() > m_)
    throw std::invalid_argument("address " + p.address.to_string() + " is deeper than resolution " + std::to_string(m_));
  std::uint32_t word = 0;
  for (unsigned i = 1; i <= m_; ++i)
    if (p.address.bit(i)) word |= std::uint32_t{1} << (i - 1);
  return vertex(scaled.get_num().get_ui(), word);
}

LaaksoPoint LevelGraph::point_of(std::size_t v) const {
  std::string bits(m_, '0');
  const std::uint32_t word = address_word(v);
  for (unsigned i = 1; i <= m_; ++i)
    if (word & (std::uint32_t{1} << (i - 1))) bits[i - 1] = '1';
  Rational h(Integer(static_cast<unsigned long>(height_index(v))), pow3(m_));
  h.canonicalize();
  return {h, CantorAddress(bits)};
}

std::vector<std::int64_t> LevelGraph::distances_from(std::size_t source) const {
  constexpr std::int64_t unreached = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(vertex_count(), unreached);
  using Item = std::pair<std::int64_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0;
  queue.push({0, source});
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d != dist[v]) continue;
    for (std::size_t e = offsets_[v]; e < offsets_[v + 1]; ++e) {
      const Edge& edge = edges_[e];
      const std::int64_t nd = d + edge.weight;
      if (nd < dist[edge.to]) {
        dist[edge.to] = nd;
        queue.push({nd, edge.to});
      }
    }
  }
  return dist;
}

Json LevelGraph::edge_list_json() const {
  Json out = Json::array();
  const Rational unit = inv_pow3(m_);
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    for (std::size_t e = offsets_[v]; e < offsets_[v + 1]; ++e) {
      if (edges_[e].to <= v) continue;
      Json j;
      j["u"] = v;
      j["v"] = edges_[e].to;
      j["w"] = to_string(edges_[e].weight ? unit : Rational(0));
      out.push_back(std::move(j));
    }
  }
  return out;
}

LevelGraph build_level_graph(unsigned m) { return LevelGraph(m); }

Rational graph_distance(const LevelGraph& g, const LaaksoPoint& x, const LaaksoPoint& y) {
  const std::size_t source = g.vertex_of(x), target = g.vertex_of(y);
  const auto dist = g.distances_from(source);
  Rational d(Integer(static_cast<long>(dist[target])), pow3(g.resolution()));
  d.canonicalize();
  return d;
}

Rational total_cell_mass(unsigned m) {
  const Integer cells = pow3(m) * (Integer(1) << m);
  Rational cell(Integer(1), pow3(m) * (Integer(1) << m));
  Rational total = cell * cells;
  total.canonicalize();
  return total;
}

namespace {

Rational cell_mass(unsigned m) { return Rational(Integer(1), pow3(m) * (Integer(1) << m)); }

MeasureEstimate measure_from(const LevelGraph& g, const LaaksoPoint& center, const std::vector<std::int64_t>& dist,
                             const Rational& r) {
  const unsigned m = g.resolution();
  if (r < inv_pow3(m) || r > 2) throw std::invalid_argument("ball radius must lie in [3^-m, 2], got " + to_string(r));
  // Distances are integers in units of 3^-m, so d <= r iff units <= floor(r * 3^m).
  const Rational scaled = r * pow3(m);
  Integer limit;
  mpz_fdiv_q(limit.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  const std::int64_t cap = limit.get_si();
  long count = 0;
  for (std::size_t k = 0; k + 1 < g.height_count(); ++k)
    for (std::uint32_t a = 0; a < g.address_count(); ++a)
      if (dist[g.vertex(k, a)] <= cap) ++count;
  MeasureEstimate est{center, r, m, Rational(count) * cell_mass(m), 0.0};
  est.mass.canonicalize();
  est.ratio = est.mass.get_d() / std::pow(r.get_d(), laakso_dimension());
  return est;
}

}  // namespace

MeasureEstimate ball_measure(const LevelGraph& g, const LaaksoPoint& center, const Rational& r) {
  const auto dist = g.distances_from(g.vertex_of(center));
  return measure_from(g, center, dist, r);
}

RegularityTable regularity_scan(const LevelGraph& g, unsigned sample, const std::vector<Rational>& radii,
                                std::uint64_t seed) {
  RegularityTable table;
  if (radii.empty()) return table;
  for (const Rational& r : radii)
    if (r < inv_pow3(g.resolution() - 1) || r > Rational(1, 3))
      throw std::invalid_argument("scan radii must lie in [3^-(m-1), 1/3], got " + to_string(r));

  std::mt19937_64 rng(seed);
  const std::uint64_t cells = g.height_count() - 1;
  std::vector<LaaksoPoint> centers;
  for (unsigned i = 0; i < sample; ++i) {
    const std::uint64_t k = rng() % cells;
    const std::uint32_t a = static_cast<std::uint32_t>(rng() % g.address_count());
    centers.push_back(g.point_of(g.vertex(k, a)));
  }
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());

  std::vector<Rational> sorted_radii = radii;
  std::sort(sorted_radii.begin(), sorted_radii.end());
  bool first = true;
  for (const LaaksoPoint& c : centers) {
    const auto dist = g.distances_from(g.vertex_of(c));
    for (const Rational& r : sorted_radii) {
      MeasureEstimate est = measure_from(g, c, dist, r);
      if (first || est.ratio < table.min_ratio) table.min_ratio = est.ratio;
      if (first || est.ratio > table.max_ratio) table.max_ratio = est.ratio;
      first = false;
      table.rows.push_back(std::move(est));
    }
  }
  return table;
}

void write_regularity_csv(std::ostream& out, const RegularityTable& table) {
  out << "center_h,center_bits,r,mass,ratio,m\n";
  char ratio[32];
  for (const MeasureEstimate& e : table.rows) {
    std::snprintf(ratio, sizeof ratio, "%.9g", e.ratio);
    out << to_string(e.center.height) << ',' << e.center.address.to_string() << ',' << to_string(e.radius) << ','
        << to_string(e.mass) << ',' << ratio << ',' << e.m << '\n';
  }
}

}  // namespace laakso
