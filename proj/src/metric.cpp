#include "laakso/metric.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace laakso {

namespace {

bool in_level(const Rational& t, unsigned level) {
  auto order = wormhole_order(t);
  return order && *order == level;
}

// Some height of J_level lies in [lo, hi].
bool level_meets(const Rational& lo, const Rational& hi, unsigned level) {
  if (in_level(lo, level)) return true;
  ExtRational up = gap_above(lo, level);
  return up.is_finite() && lo + up.value() <= hi;
}

// First height of J_level met when travelling from u to v (either direction).
std::optional<Rational> first_hit(const Rational& u, const Rational& v, unsigned level) {
  if (in_level(u, level)) return u;
  if (v > u) {
    ExtRational g = gap_above(u, level);
    if (g.is_finite() && u + g.value() <= v) return Rational(u + g.value());
  } else if (v < u) {
    ExtRational g = gap_below(u, level);
    if (g.is_finite() && u - g.value() >= v) return Rational(u - g.value());
  }
  return std::nullopt;
}

struct Bounds {
  Rational lo, hi;
};

Bounds height_bounds(const LaaksoPoint& x, const LaaksoPoint& y) {
  return x.height <= y.height ? Bounds{x.height, y.height} : Bounds{y.height, x.height};
}

}  // namespace

std::vector<unsigned> required_levels(const LaaksoPoint& x, const LaaksoPoint& y) {
  const LaaksoPoint cx = canonicalize(x), cy = canonicalize(y);
  const std::size_t depth = std::max(cx.address.depth(), cy.address.depth());
  std::vector<unsigned> levels;
  for (std::size_t i = 1; i <= depth; ++i)
    if (cx.address.bit(i) != cy.address.bit(i)) levels.push_back(static_cast<unsigned>(i));
  return levels;
}

std::vector<HeightInterval> minimal_height_intervals(const LaaksoPoint& x, const LaaksoPoint& y) {
  const auto [lo, hi] = height_bounds(x, y);

  // Each unresolved level can be met below lo (at down) or above hi (at up).
  struct Option {
    std::optional<Rational> down, up;
  };
  std::vector<Option> options;
  for (unsigned level : required_levels(x, y)) {
    if (level_meets(lo, hi, level)) continue;
    Option o;
    if (ExtRational g = gap_below(lo, level); g.is_finite()) o.down = lo - g.value();
    if (ExtRational g = gap_above(hi, level); g.is_finite()) o.up = hi + g.value();
    options.push_back(std::move(o));
  }

  std::vector<Rational> lower_candidates{lo};
  for (const Option& o : options)
    if (o.down) lower_candidates.push_back(*o.down);
  std::sort(lower_candidates.begin(), lower_candidates.end());
  lower_candidates.erase(std::unique(lower_candidates.begin(), lower_candidates.end()), lower_candidates.end());

  std::vector<HeightInterval> best;
  std::optional<Rational> best_length;
  for (const Rational& a : lower_candidates) {
    Rational b = hi;
    bool feasible = true;
    for (const Option& o : options) {
      if (o.down && *o.down >= a) continue;
      if (!o.up) {
        feasible = false;
        break;
      }
      if (*o.up > b) b = *o.up;
    }
    if (!feasible) continue;
    Rational len = b - a;
    if (!best_length || len < *best_length) {
      best_length = len;
      best.clear();
    }
    if (len == *best_length) best.push_back({a, b});
  }
  if (best.empty()) throw std::logic_error("no feasible height interval");
  return best;
}

Rational distance(const LaaksoPoint& x, const LaaksoPoint& y) {
  const HeightInterval iv = minimal_height_intervals(x, y).front();
  Rational d = 2 * (iv.b - iv.a) - abs(x.height - y.height);
  d.canonicalize();
  return d;
}

// ---------------------------------------------------------------- geodesics

Rational GeodesicPath::length() const {
  Rational total(0);
  for (const GeodesicStep& step : steps)
    if (const auto* seg = std::get_if<GeodesicSegment>(&step)) total += abs(seg->end - seg->start);
  total.canonicalize();
  return total;
}

std::vector<GeodesicJump> GeodesicPath::jumps() const {
  std::vector<GeodesicJump> out;
  for (const GeodesicStep& step : steps)
    if (const auto* j = std::get_if<GeodesicJump>(&step)) out.push_back(*j);
  return out;
}

std::optional<Direction> GeodesicPath::ending() const {
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    if (const auto* seg = std::get_if<GeodesicSegment>(&*it)) return seg->direction;
  return std::nullopt;
}

GeodesicPath synthesize_geodesic(const LaaksoPoint& x, const LaaksoPoint& y, const HeightInterval& interval) {
  const auto minimal = minimal_height_intervals(x, y);
  if (std::find(minimal.begin(), minimal.end(), interval) == minimal.end())
    throw std::invalid_argument("interval [" + to_string(interval.a) + "," + to_string(interval.b) +
                                "] is not a minimal height interval");

  const LaaksoPoint cx = canonicalize(x), cy = canonicalize(y);
  std::vector<Rational> waypoints = x.height <= y.height
                                        ? std::vector<Rational>{x.height, interval.a, interval.b, y.height}
                                        : std::vector<Rational>{x.height, interval.b, interval.a, y.height};

  struct Event {
    std::size_t leg;
    Rational offset;  // distance travelled within the leg
    unsigned level;
  };
  std::vector<Event> events;
  for (unsigned level : required_levels(x, y)) {
    bool placed = false;
    for (std::size_t leg = 0; leg + 1 < waypoints.size() && !placed; ++leg) {
      if (auto hit = first_hit(waypoints[leg], waypoints[leg + 1], level)) {
        events.push_back({leg, abs(*hit - waypoints[leg]), level});
        placed = true;
      }
    }
    if (!placed) throw std::logic_error("required level not reachable inside a minimal interval");
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.leg != b.leg) return a.leg < b.leg;
    if (a.offset != b.offset) return a.offset < b.offset;
    return a.level < b.level;
  });

  GeodesicPath path{x, y, {}};
  CantorAddress address = cx.address;
  auto event = events.begin();
  for (std::size_t leg = 0; leg + 1 < waypoints.size(); ++leg) {
    const Rational& from = waypoints[leg];
    const Rational& to = waypoints[leg + 1];
    const Direction dir = to >= from ? Direction::up : Direction::down;
    Rational here = from;
    auto emit_segment = [&](const Rational& until) {
      if (until != here) path.steps.emplace_back(GeodesicSegment{here, until, address, dir});
      here = until;
    };
    for (; event != events.end() && event->leg == leg; ++event) {
      Rational at = dir == Direction::up ? Rational(from + event->offset) : Rational(from - event->offset);
      at.canonicalize();
      emit_segment(at);
      address = address.flipped(event->level);
      path.steps.emplace_back(GeodesicJump{event->level, at});
    }
    emit_segment(to);
  }
  if (!(address == cy.address)) throw std::logic_error("synthesized path does not reach its endpoint");
  return path;
}

bool is_valid_path(const GeodesicPath& path) {
  Rational height = path.from.height;
  CantorAddress address = canonicalize(path.from).address;
  for (const GeodesicStep& step : path.steps) {
    if (const auto* seg = std::get_if<GeodesicSegment>(&step)) {
      if (seg->start != height || !(seg->address == address)) return false;
      if (seg->start == seg->end) return false;
      if ((seg->direction == Direction::up) != (seg->end > seg->start)) return false;
      if (seg->end < 0 || seg->end > 1) return false;
      height = seg->end;
    } else {
      const auto& jump = std::get<GeodesicJump>(step);
      if (jump.height != height || !in_level(jump.height, jump.level)) return false;
      address = address.flipped(jump.level);
    }
  }
  return height == path.to.height && same_point({height, address}, path.to);
}

std::set<Direction> geodesic_endings(const LaaksoPoint& p, const LaaksoPoint& q) {
  if (same_point(p, q)) throw std::invalid_argument("geodesic_endings requires p != q");
  std::set<Direction> out;
  const Rational& h = q.height;
  for (const HeightInterval& iv : minimal_height_intervals(p, q)) {
    if (h > p.height) {
      out.insert(iv.b > h ? Direction::down : Direction::up);
    } else if (h < p.height) {
      out.insert(iv.a < h ? Direction::up : Direction::down);
    } else {
      if (iv.b > h) out.insert(Direction::down);
      if (iv.a < h) out.insert(Direction::up);
    }
  }
  return out;
}

Json to_json(const GeodesicPath& path) {
  Json steps = Json::array();
  for (const GeodesicStep& step : path.steps) {
    Json j;
    if (const auto* seg = std::get_if<GeodesicSegment>(&step)) {
      j["seg"] = Json::array({to_string(seg->start), to_string(seg->end)});
      j["bits"] = seg->address.to_string();
    } else {
      const auto& jump = std::get<GeodesicJump>(step);
      j["jump"] = jump.level;
      j["at"] = to_string(jump.height);
    }
    steps.push_back(std::move(j));
  }
  return steps;
}

}  // namespace laakso
