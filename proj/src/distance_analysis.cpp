#include "laakso/distance_analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "laakso/metric.hpp"

namespace laakso {

namespace {

constexpr int kMaxSubdivision = 8;

void sort_unique(std::vector<Rational>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Rational> interior(std::vector<Rational> v) {
  std::erase_if(v, [](const Rational& t) { return t <= 0 || t >= 1; });
  sort_unique(v);
  return v;
}

void check_levels(const LaaksoPoint& p, std::vector<unsigned>& levels) {
  std::sort(levels.begin(), levels.end());
  if (std::adjacent_find(levels.begin(), levels.end()) != levels.end())
    throw std::invalid_argument("line levels must be distinct");
  if (!levels.empty() && levels.front() == 0) throw std::invalid_argument("line levels must be positive");
  if (auto w = wormhole_order(p.height); w && std::binary_search(levels.begin(), levels.end(), *w))
    throw std::invalid_argument("p is a wormhole of level " + std::to_string(*w) + "; that level names no line");
}

class LineEvaluator {
 public:
  LineEvaluator(const LaaksoPoint& p, const CantorAddress& z) : p_(p), z_(z) {}
  Rational operator()(const Rational& t) const { return distance(p_, {t, z_}); }

 private:
  const LaaksoPoint& p_;
  const CantorAddress& z_;
};

struct Certifier {
  const LineEvaluator& eval;
  std::vector<ProfilePiece>& out;
  std::size_t& extra;

  static bool linear(const Rational& lo, const Rational& hi, const Rational& dlo, const Rational& dhi) {
    return abs(dhi - dlo) == hi - lo;
  }

  void push(const Rational& lo, const Rational& hi, const Rational& dlo, const Rational& dhi) {
    ProfilePiece piece;
    piece.lo = lo;
    piece.hi = hi;
    piece.slope = dhi > dlo ? 1 : -1;
    piece.offset = dlo - piece.slope * lo;
    piece.offset.canonicalize();
    out.push_back(std::move(piece));
  }

  // Tries a single ridge or valley at the apex implied by unit slopes.
  bool try_apex(const Rational& lo, const Rational& hi, const Rational& dlo, const Rational& dhi) {
    for (const Rational& k : {Rational((dhi - dlo + lo + hi) / 2), Rational((dlo - dhi + lo + hi) / 2)}) {
      Rational apex = k;
      apex.canonicalize();
      if (apex <= lo || apex >= hi) continue;
      const Rational dk = eval(apex);
      if (linear(lo, apex, dlo, dk) && linear(apex, hi, dk, dhi)) {
        push(lo, apex, dlo, dk);
        push(apex, hi, dk, dhi);
        ++extra;
        return true;
      }
    }
    return false;
  }

  void certify(const Rational& lo, const Rational& hi, const Rational& dlo, const Rational& dhi, int depth) {
    if (lo == hi) return;
    if (linear(lo, hi, dlo, dhi)) {
      push(lo, hi, dlo, dhi);
      return;
    }
    if (try_apex(lo, hi, dlo, dhi)) return;
    if (depth >= kMaxSubdivision)
      throw InternalError("profile certification failed on [" + to_string(lo) + "," + to_string(hi) + "]");
    Rational mid = (lo + hi) / 2;
    mid.canonicalize();
    const Rational dmid = eval(mid);
    ++extra;
    certify(lo, mid, dlo, dmid, depth + 1);
    certify(mid, hi, dmid, dhi, depth + 1);
  }
};

std::vector<Rational> candidate_breakpoints(const LaaksoPoint& p, const std::vector<unsigned>& levels) {
  const Rational& p1 = p.height;
  std::vector<Rational> offsets{Rational(0)};
  for (unsigned level : levels) {
    if (ExtRational g = gap_above(p1, level); g.is_finite()) offsets.push_back(g.value());
    if (ExtRational g = gap_below(p1, level); g.is_finite()) offsets.push_back(-g.value());
  }
  sort_unique(offsets);
  std::vector<Rational> out{Rational(0), Rational(1)};
  for (const Rational& a : offsets)
    for (const Rational& b : offsets)
      for (const Rational& c : offsets) {
        Rational t = p1 + a - b + c;
        t.canonicalize();
        if (t >= 0 && t <= 1) out.push_back(std::move(t));
      }
  sort_unique(out);
  return out;
}

}  // namespace

std::string VerticalLine::label() const {
  std::string s;
  switch (kind) {
    case LineKind::v0: s = "v0"; break;
    case LineKind::vn: s = "vN:" + std::to_string(levels.front()); break;
    case LineKind::vdelta:
      s = "vD:";
      for (std::size_t i = 0; i < levels.size(); ++i) s += (i ? "," : "") + std::to_string(levels[i]);
      break;
  }
  if (alternate) s += "'";
  return s;
}

std::vector<VerticalLine> lines_from(const LaaksoPoint& p, std::vector<unsigned> levels) {
  check_levels(p, levels);
  const LaaksoPoint cp = canonicalize(p);
  const LineKind kind = levels.empty() ? LineKind::v0 : levels.size() == 1 ? LineKind::vn : LineKind::vdelta;
  CantorAddress z = cp.address;
  for (unsigned level : levels) z = z.flipped(level);
  std::vector<VerticalLine> lines{{z, kind, levels, false}};
  if (auto w = wormhole_order(cp.height)) lines.push_back({z.flipped(*w), kind, levels, true});
  return lines;
}

Rational KinkProfile::value_at(const Rational& t) const {
  for (const ProfilePiece& piece : pieces)
    if (piece.lo <= t && t <= piece.hi) {
      Rational v = piece.slope * t + piece.offset;
      v.canonicalize();
      return v;
    }
  throw std::invalid_argument("height outside the profile");
}

std::vector<Rational> KinkProfile::kink_heights() const {
  std::vector<Rational> out;
  for (const Kink& k : kinks) out.push_back(k.height);
  return out;
}

KinkProfile profile_dp_on_line(const LaaksoPoint& p, const VerticalLine& line) {
  const LaaksoPoint cp = canonicalize(p);
  const LineEvaluator eval(cp, line.address);
  KinkProfile profile;
  profile.line = line;

  const std::vector<Rational> candidates = candidate_breakpoints(cp, line.levels);
  std::vector<ProfilePiece> raw;
  Certifier certifier{eval, raw, profile.extra_breakpoints};
  Rational prev_t = candidates.front(), prev_d = eval(prev_t);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const Rational d = eval(candidates[i]);
    certifier.certify(prev_t, candidates[i], prev_d, d, 0);
    prev_t = candidates[i];
    prev_d = d;
  }

  for (ProfilePiece& piece : raw) {
    if (!profile.pieces.empty() && profile.pieces.back().slope == piece.slope &&
        profile.pieces.back().offset == piece.offset && profile.pieces.back().hi == piece.lo) {
      profile.pieces.back().hi = piece.hi;
    } else {
      profile.pieces.push_back(std::move(piece));
    }
  }
  for (std::size_t i = 1; i < profile.pieces.size(); ++i) {
    const ProfilePiece& left = profile.pieces[i - 1];
    const ProfilePiece& right = profile.pieces[i];
    if (left.slope * right.lo + left.offset != right.slope * right.lo + right.offset)
      throw InternalError("profile is discontinuous at " + to_string(right.lo));
    if (left.slope != right.slope) profile.kinks.push_back({right.lo, left.slope, right.slope});
  }
  return profile;
}

// ------------------------------------------------------------ closed forms

std::string_view to_string(KinkBranch branch) {
  switch (branch) {
    case KinkBranch::v0: return "v0";
    case KinkBranch::vn_both: return "vn_both";
    case KinkBranch::vn_above_only: return "vn_above_only";
    case KinkBranch::vn_below_only: return "vn_below_only";
    case KinkBranch::vd_all_finite_a: return "vd_all_finite_a";
    case KinkBranch::vd_all_finite_b: return "vd_all_finite_b";
    case KinkBranch::vd_all_finite_c: return "vd_all_finite_c";
    case KinkBranch::vd_none_below: return "vd_none_below";
    case KinkBranch::vd_none_above: return "vd_none_above";
    case KinkBranch::vd_below_missing_far: return "vd_below_missing_far";
    case KinkBranch::vd_below_missing_near: return "vd_below_missing_near";
    case KinkBranch::vd_above_missing_far: return "vd_above_missing_far";
    case KinkBranch::vd_above_missing_near: return "vd_above_missing_near";
    case KinkBranch::unclassified: return "unclassified";
  }
  return "unclassified";
}

const std::vector<KinkBranch>& two_level_branches() {
  static const std::vector<KinkBranch> branches{
      KinkBranch::vd_all_finite_a,       KinkBranch::vd_all_finite_b,      KinkBranch::vd_all_finite_c,
      KinkBranch::vd_none_below,         KinkBranch::vd_none_above,        KinkBranch::vd_below_missing_far,
      KinkBranch::vd_below_missing_near, KinkBranch::vd_above_missing_far, KinkBranch::vd_above_missing_near,
  };
  return branches;
}

namespace {

ExpectedKinks single_level(const Rational& p1, unsigned n) {
  const ExtRational up = gap_above(p1, n), down = gap_below(p1, n);
  if (up.is_finite() && down.is_finite()) {
    const Rational &u = up.value(), &d = down.value();
    return {KinkBranch::vn_both, interior({p1 - d, p1 + u - d, p1 + u})};
  }
  if (up.is_finite()) return {KinkBranch::vn_above_only, interior({p1 + up.value()})};
  return {KinkBranch::vn_below_only, interior({p1 - down.value()})};
}

ExpectedKinks two_level(const Rational& p1, unsigned n, unsigned m) {
  const ExtRational nu = gap_above(p1, n), nd = gap_below(p1, n);
  const ExtRational mu = gap_above(p1, m), md = gap_below(p1, m);

  if (nu.is_finite() && nd.is_finite() && mu.is_finite() && md.is_finite()) {
    const Rational &Nu = nu.value(), &Nd = nd.value(), &Mu = mu.value(), &Md = md.value();
    if (Md < Nd && Mu < Nu) return {KinkBranch::vd_all_finite_a, interior({p1 - Nd, p1 + Nu - Nd, p1 + Nu})};
    // Cases (b) and (c) share one list: (c) mirrors (b) with D^+ and D^- swapped.
    const std::vector<Rational> seven{p1 - Nd, p1 + Nu - Nd, p1 - Md, p1, p1 + Nu, p1 + Mu - Md, p1 + Mu};
    if (Md < Nd && Nu < Mu) return {KinkBranch::vd_all_finite_b, interior(seven)};
    if (Nd < Md && Mu < Nu) return {KinkBranch::vd_all_finite_c, interior(seven)};
    return {KinkBranch::unclassified, {}};
  }
  if (nd.is_infinite() && md.is_infinite())
    return {KinkBranch::vd_none_below, interior({p1 + std::max(nu.value(), mu.value())})};
  if (nu.is_infinite() && mu.is_infinite())
    return {KinkBranch::vd_none_above, interior({p1 - std::max(nd.value(), md.value())})};
  if (nd.is_infinite() && md.is_finite() && nu.is_finite() && mu.is_finite()) {
    const Rational &Nu = nu.value(), &Mu = mu.value(), &Md = md.value();
    if (Nu > Mu) return {KinkBranch::vd_below_missing_far, interior({p1 + Nu})};
    return {KinkBranch::vd_below_missing_near, interior({p1 - Md, p1, p1 + Nu, p1 + Mu - Md, p1 + Mu})};
  }
  if (nu.is_infinite() && mu.is_finite() && nd.is_finite() && md.is_finite()) {
    const Rational &Nd = nd.value(), &Md = md.value(), &Mu = mu.value();
    if (Nd > Md) return {KinkBranch::vd_above_missing_far, interior({p1 - Nd})};
    return {KinkBranch::vd_above_missing_near, interior({p1 + Mu, p1, p1 - Nd, p1 + Mu - Md, p1 - Md})};
  }
  return {KinkBranch::unclassified, {}};
}

}  // namespace

ExpectedKinks expected_kinks(const LaaksoPoint& p, const VerticalLine& line) {
  const Rational& p1 = p.height;
  switch (line.levels.size()) {
    case 0: return {KinkBranch::v0, interior({p1})};
    case 1: return single_level(p1, line.levels[0]);
    case 2: return two_level(p1, line.levels[0], line.levels[1]);
    default: throw std::invalid_argument("expected_kinks handles at most two levels; use parallel_reduction");
  }
}

ParallelValues parallel_reduction(const LaaksoPoint& p, std::vector<unsigned> levels, const Rational& t) {
  check_levels(p, levels);
  if (levels.size() < 3) throw std::invalid_argument("parallel_reduction needs at least three levels");
  if (t < 0 || t > 1) throw std::invalid_argument("height must lie in [0,1]");
  const LaaksoPoint cp = canonicalize(p);
  CantorAddress two = cp.address.flipped(levels[0]).flipped(levels[1]);
  CantorAddress full = two;
  for (std::size_t i = 2; i < levels.size(); ++i) full = full.flipped(levels[i]);
  return {distance(cp, {t, full}), distance(cp, {t, two})};
}

std::vector<CensusEntry> nondiff_height_census(const LaaksoPoint& p, unsigned max_level) {
  if (max_level == 0 || max_level > 12) throw std::invalid_argument("census max_level must be in [1,12]");
  const auto w = wormhole_order(p.height);
  std::vector<std::vector<unsigned>> families{{}};
  for (unsigned n = 1; n <= max_level; ++n)
    if (n != w) families.push_back({n});
  for (unsigned n = 1; n <= max_level; ++n)
    for (unsigned m = n + 1; m <= max_level; ++m)
      if (n != w && m != w) families.push_back({n, m});

  std::vector<CensusEntry> census;
  std::set<Rational> seen;
  for (const auto& levels : families) {
    for (const VerticalLine& line : lines_from(p, levels)) {
      const ExpectedKinks expected = expected_kinks(p, line);
      const KinkProfile profile = profile_dp_on_line(p, line);
      for (const Rational& h : expected.heights) {
        if (!seen.insert(h).second) continue;
        std::string type = "unconfirmed";
        for (const Kink& k : profile.kinks)
          if (k.height == h) type = k.is_valley() ? "valley" : k.is_ridge() ? "ridge" : "unconfirmed";
        census.push_back({h, line.label(), type});
      }
    }
  }
  std::sort(census.begin(), census.end(), [](const CensusEntry& a, const CensusEntry& b) { return a.height < b.height; });
  return census;
}

// ------------------------------------------------------------------ output

Json to_json(const KinkProfile& profile) {
  Json j;
  j["line"] = profile.line.label();
  j["bits"] = profile.line.address.to_string();
  Json pieces = Json::array();
  for (const ProfilePiece& piece : profile.pieces) {
    Json q;
    q["interval"] = Json::array({to_string(piece.lo), to_string(piece.hi)});
    q["slope"] = piece.slope;
    q["offset"] = to_string(piece.offset);
    pieces.push_back(std::move(q));
  }
  j["pieces"] = std::move(pieces);
  Json kinks = Json::array();
  for (const Kink& k : profile.kinks) {
    Json q;
    q["height"] = to_string(k.height);
    q["left_slope"] = k.left_slope;
    q["right_slope"] = k.right_slope;
    kinks.push_back(std::move(q));
  }
  j["kinks"] = std::move(kinks);
  return j;
}

std::string to_svg(const KinkProfile& profile, const LaaksoPoint& p) {
  constexpr double width = 640, height = 360, margin = 40;
  double top = 0;
  for (const ProfilePiece& piece : profile.pieces) {
    top = std::max(top, profile.value_at(piece.lo).get_d());
    top = std::max(top, profile.value_at(piece.hi).get_d());
  }
  if (top <= 0) top = 1;
  auto sx = [&](double t) { return margin + t * (width - 2 * margin); };
  auto sy = [&](double v) { return height - margin - v / top * (height - 2 * margin); };
  char buf[128];
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<title>d_p on " << profile.line.label() << " for p = " << format_point(p) << "</title>\n";
  std::snprintf(buf, sizeof buf, "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#888\"/>\n", sx(0),
                sy(0), sx(1), sy(0));
  svg << buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#888\"/>\n", sx(0),
                sy(0), sx(0), sy(top));
  svg << buf;
  svg << "<polyline class=\"profile\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < profile.pieces.size(); ++i) {
    const ProfilePiece& piece = profile.pieces[i];
    if (i == 0) {
      std::snprintf(buf, sizeof buf, "%.3f,%.3f ", sx(piece.lo.get_d()), sy(profile.value_at(piece.lo).get_d()));
      svg << buf;
    }
    std::snprintf(buf, sizeof buf, "%.3f,%.3f ", sx(piece.hi.get_d()), sy(profile.value_at(piece.hi).get_d()));
    svg << buf;
  }
  svg << "\"/>\n";
  for (const Kink& k : profile.kinks) {
    std::snprintf(buf, sizeof buf, "<circle class=\"kink\" cx=\"%.3f\" cy=\"%.3f\" r=\"3.5\" fill=\"%s\">",
                  sx(k.height.get_d()), sy(profile.value_at(k.height).get_d()), k.is_ridge() ? "#c0392b" : "#27ae60");
    svg << buf << "<title>" << to_string(k.height) << "</title></circle>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_census_csv(std::ostream& out, const std::vector<CensusEntry>& census) {
  out << "height,source_line,kink_type\n";
  for (const CensusEntry& e : census) out << to_string(e.height) << ",\"" << e.source_line << "\"," << e.kink_type << '\n';
}

}  // namespace laakso
