#include "laakso/verify.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "laakso/calculus.hpp"
#include "laakso/constructions.hpp"
#include "laakso/distance_analysis.hpp"
#include "laakso/metric.hpp"
#include "laakso/oracle.hpp"

namespace laakso {

namespace {

using Rng = std::mt19937_64;

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); }

// Heights with denominator at most 81, strictly inside (0, 1).
Rational random_height(Rng& rng) {
  const std::uint64_t den = uniform(rng, 2, 81);
  Rational h(static_cast<unsigned long>(uniform(rng, 1, den - 1)), static_cast<unsigned long>(den));
  h.canonicalize();
  return h;
}

CantorAddress random_address(Rng& rng, unsigned max_depth) {
  std::string bits(uniform(rng, 0, max_depth), '0');
  for (char& c : bits) c = rng() % 2 ? '1' : '0';
  return CantorAddress(bits);
}

LaaksoPoint random_point(Rng& rng, unsigned max_depth) {
  return canonicalize({random_height(rng), random_address(rng, max_depth)});
}

struct Collector {
  explicit Collector(int id) : criterion(id) {}

  int criterion;
  std::vector<CheckResult> rows;

  void add(std::string name, bool passed, std::string detail) {
    rows.push_back({criterion, std::move(name), passed, std::move(detail)});
  }
};

std::string set_string(const std::vector<Rational>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + "}";
}

std::string point_string(const LaaksoPoint& p) { return "[" + format_point(p) + "]"; }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ------------------------------------------------------------------ oracle

std::vector<CheckResult> oracle_equivalence(const VerifyConfig& cfg) {
  Collector out{1};
  const auto start = std::chrono::steady_clock::now();
  const unsigned m = cfg.depth.value_or(2);
  for (unsigned level : {m, m + 1}) {
    const LevelGraph g(level);
    const Rational unit = inv_pow3(level);
    std::size_t pairs = 0, mismatches = 0;
    std::string first_bad;
    auto compare = [&](std::size_t u, std::size_t v, std::int64_t units) {
      ++pairs;
      const Rational expected = distance(canonicalize(g.point_of(u)), canonicalize(g.point_of(v)));
      if (expected != unit * units) {
        if (mismatches++ == 0)
          first_bad = point_string(g.point_of(u)) + "-" + point_string(g.point_of(v)) + " metric=" +
                      to_string(expected) + " graph=" + to_string(Rational(unit * units));
      }
    };
    if (level == m) {
      for (std::size_t u = 0; u < g.vertex_count(); ++u) {
        const auto dist = g.distances_from(u);
        for (std::size_t v = u + 1; v < g.vertex_count(); ++v) compare(u, v, dist[v]);
      }
    } else {
      Rng rng(cfg.seed);
      for (int i = 0; i < 500; ++i) {
        const std::size_t u = rng() % g.vertex_count(), v = rng() % g.vertex_count();
        compare(u, v, g.distances_from(u)[v]);
      }
    }
    const std::string label = level == m ? "all pairs" : "500 random pairs";
    out.add("m=" + std::to_string(level) + " " + label, mismatches == 0,
            "vertices=" + std::to_string(g.vertex_count()) + " pairs=" + std::to_string(pairs) +
                " mismatches=" + std::to_string(mismatches) + (first_bad.empty() ? "" : " first=" + first_bad));
  }
  const double elapsed = seconds_since(start);
  out.add("runtime under 60 s", elapsed < 60, "seconds=" + std::to_string(elapsed));
  return out.rows;
}

// --------------------------------------------------------------- geodesics

struct GeodesicSample {
  LaaksoPoint x, y;
  Rational d;
  std::vector<HeightInterval> intervals;
  std::vector<GeodesicPath> paths;
};

std::vector<GeodesicSample> geodesic_pool(const VerifyConfig& cfg) {
  Rng rng(cfg.seed);
  const unsigned depth = cfg.depth.value_or(4);
  std::vector<GeodesicSample> pool;
  for (int i = 0; i < 1000; ++i) {
    GeodesicSample s;
    s.x = random_point(rng, depth);
    s.y = random_point(rng, depth);
    s.d = distance(s.x, s.y);
    s.intervals = minimal_height_intervals(s.x, s.y);
    for (const HeightInterval& iv : s.intervals) s.paths.push_back(synthesize_geodesic(s.x, s.y, iv));
    pool.push_back(std::move(s));
  }
  return pool;
}

std::vector<CheckResult> minimal_interval_law(const VerifyConfig& cfg) {
  Collector out{2};
  std::size_t unequal = 0, bad_paths = 0, paths = 0, intervals = 0;
  std::string first_bad;
  for (const GeodesicSample& s : geodesic_pool(cfg)) {
    intervals += s.intervals.size();
    for (const HeightInterval& iv : s.intervals)
      if (iv.length() != s.intervals.front().length()) ++unequal;
    for (const GeodesicPath& path : s.paths) {
      ++paths;
      if (!is_valid_path(path) || path.length() != s.d) {
        if (bad_paths++ == 0) first_bad = point_string(s.x) + "-" + point_string(s.y);
      }
    }
  }
  out.add("equal interval lengths", unequal == 0,
          "intervals=" + std::to_string(intervals) + " unequal=" + std::to_string(unequal));
  out.add("geodesic length equals distance", bad_paths == 0,
          "paths=" + std::to_string(paths) + " failures=" + std::to_string(bad_paths) +
              (first_bad.empty() ? "" : " first=" + first_bad));
  return out.rows;
}

std::vector<CheckResult> low_level_jumps(const VerifyConfig& cfg) {
  Collector out{12};
  std::size_t tested = 0, violations = 0;
  std::string first_bad;
  for (const GeodesicSample& s : geodesic_pool(cfg)) {
    for (const GeodesicPath& path : s.paths) {
      const auto jumps = path.jumps();
      for (unsigned N = 2; N <= 12; ++N) {
        if (s.d >= inv_pow3(N - 1)) continue;
        ++tested;
        const auto low = std::count_if(jumps.begin(), jumps.end(), [&](const GeodesicJump& j) { return j.level <= N - 1; });
        if (low > 1 && violations++ == 0)
          first_bad = point_string(s.x) + "-" + point_string(s.y) + " N=" + std::to_string(N);
      }
    }
  }
  out.add("at most one jump of level <= N-1 when d < 3^-(N-1)", violations == 0,
          "path-level tests=" + std::to_string(tested) + " violations=" + std::to_string(violations) +
              (first_bad.empty() ? "" : " first=" + first_bad));
  return out.rows;
}

// ------------------------------------------------------------------- kinks

struct ProfiledLine {
  LaaksoPoint p;
  VerticalLine line;
  ExpectedKinks expected;
  KinkProfile profile;
};

std::vector<ProfiledLine> v0_pool(const VerifyConfig& cfg) {
  Rng rng(cfg.seed + 3);
  std::vector<ProfiledLine> out;
  for (int i = 0; i < 20; ++i) {
    const LaaksoPoint p = random_point(rng, 3);
    for (const VerticalLine& line : lines_from(p, {}))
      out.push_back({p, line, expected_kinks(p, line), profile_dp_on_line(p, line)});
  }
  return out;
}

std::vector<ProfiledLine> vn_pool(const VerifyConfig& cfg) {
  Rng rng(cfg.seed + 4);
  const unsigned max_level = cfg.depth.value_or(4);
  std::vector<ProfiledLine> out;
  for (int i = 0; i < 50; ++i) {
    const LaaksoPoint p = random_point(rng, 3);
    const auto w = wormhole_order(p.height);
    for (unsigned n = 1; n <= max_level; ++n) {
      if (n == w) continue;
      for (const VerticalLine& line : lines_from(p, {n}))
        out.push_back({p, line, expected_kinks(p, line), profile_dp_on_line(p, line)});
    }
  }
  return out;
}

// Two-level lines chosen so that every case branch is reached: random heights
// with denominators up to 81 plus the grid k/486, which includes heights below
// the lowest and above the highest wormhole of small levels.
constexpr std::size_t kPerBranch = 6;

std::vector<ProfiledLine> vd_pool(const VerifyConfig& cfg, std::map<KinkBranch, std::size_t>& hits) {
  Rng rng(cfg.seed + 5);
  const unsigned max_level = cfg.depth.value_or(4);
  std::vector<Rational> heights;
  for (int i = 0; i < 200; ++i) heights.push_back(random_height(rng));
  std::vector<Rational> grid;
  for (unsigned k = 1; k < 486; ++k) grid.push_back(ratio(k, 486u));
  std::shuffle(grid.begin(), grid.end(), rng);
  heights.insert(heights.end(), grid.begin(), grid.end());

  for (KinkBranch b : two_level_branches()) hits[b] = 0;
  std::vector<ProfiledLine> out;
  for (Rational& h : heights) {
    h.canonicalize();
    const LaaksoPoint p = canonicalize({h, random_address(rng, 3)});
    const auto w = wormhole_order(p.height);
    for (unsigned n = 1; n <= max_level; ++n)
      for (unsigned m = n + 1; m <= max_level; ++m) {
        if (n == w || m == w) continue;
        const auto lines = lines_from(p, {n, m});
        const ExpectedKinks expected = expected_kinks(p, lines.front());
        std::size_t& count = hits[expected.branch];
        if (expected.branch != KinkBranch::unclassified && count >= kPerBranch) continue;
        ++count;
        for (const VerticalLine& line : lines) out.push_back({p, line, expected, profile_dp_on_line(p, line)});
      }
  }
  return out;
}

std::vector<CheckResult> v0_classification(const VerifyConfig& cfg) {
  Collector out{3};
  std::size_t bad = 0, lines = 0;
  std::string first_bad;
  for (const ProfiledLine& pl : v0_pool(cfg)) {
    ++lines;
    const auto& k = pl.profile.kinks;
    const bool ok = k.size() == 1 && k[0].height == pl.p.height && k[0].left_slope == -1 && k[0].right_slope == 1;
    if (!ok && bad++ == 0) first_bad = point_string(pl.p) + " kinks=" + set_string(pl.profile.kink_heights());
  }
  out.add("single valley at h(p)", bad == 0,
          "lines=" + std::to_string(lines) + " failures=" + std::to_string(bad) +
              (first_bad.empty() ? "" : " first=" + first_bad));
  return out.rows;
}

std::vector<CheckResult> vn_classification(const VerifyConfig& cfg) {
  Collector out{4};
  std::map<KinkBranch, std::size_t> hits;
  std::size_t bad = 0, lines = 0;
  std::string first_bad;
  for (const ProfiledLine& pl : vn_pool(cfg)) {
    ++lines;
    ++hits[pl.expected.branch];
    if (pl.profile.kink_heights() != pl.expected.heights && bad++ == 0)
      first_bad = point_string(pl.p) + " " + pl.line.label() + " computed=" + set_string(pl.profile.kink_heights()) +
                  " expected=" + set_string(pl.expected.heights);
  }
  std::string counts;
  for (const auto& [b, n] : hits) counts += " " + std::string(to_string(b)) + "=" + std::to_string(n);
  out.add("computed kinks equal closed form", bad == 0,
          "lines=" + std::to_string(lines) + " mismatches=" + std::to_string(bad) + counts +
              (first_bad.empty() ? "" : " first=" + first_bad));
  return out.rows;
}

std::vector<CheckResult> vd_classification(const VerifyConfig& cfg) {
  Collector out{5};
  std::map<KinkBranch, std::size_t> hits;
  const auto pool = vd_pool(cfg, hits);
  std::map<KinkBranch, std::size_t> mismatches;
  std::map<KinkBranch, std::string> first_bad;
  for (const ProfiledLine& pl : pool) {
    if (pl.profile.kink_heights() != pl.expected.heights && mismatches[pl.expected.branch]++ == 0)
      first_bad[pl.expected.branch] = point_string(pl.p) + " " + pl.line.label() + " computed=" +
                                      set_string(pl.profile.kink_heights()) +
                                      " expected=" + set_string(pl.expected.heights);
  }
  for (KinkBranch b : two_level_branches()) {
    const std::size_t n = hits[b], bad = mismatches[b];
    out.add(std::string("branch ") + std::string(to_string(b)), n > 0 && bad == 0,
            "hits=" + std::to_string(n) + " mismatches=" + std::to_string(bad) + (n == 0 ? " unreached" : "") +
                (first_bad.count(b) ? " first=" + first_bad[b] : ""));
  }
  out.add("no unclassified ordering", hits[KinkBranch::unclassified] == 0,
          "hits=" + std::to_string(hits[KinkBranch::unclassified]));
  return out.rows;
}

std::vector<CheckResult> double_geodesic(const VerifyConfig& cfg) {
  Collector out{7};
  std::map<KinkBranch, std::size_t> hits;
  std::vector<ProfiledLine> all = v0_pool(cfg);
  for (auto& pl : vn_pool(cfg)) all.push_back(std::move(pl));
  for (auto& pl : vd_pool(cfg, hits)) all.push_back(std::move(pl));

  std::size_t ridges = 0, valleys = 0, bad_ridges = 0, bad_valleys = 0, other = 0;
  std::string first_bad;
  for (const ProfiledLine& pl : all) {
    const auto& pieces = pl.profile.pieces;
    for (std::size_t i = 1; i < pieces.size(); ++i) {
      const Kink* kink = nullptr;
      for (const Kink& k : pl.profile.kinks)
        if (k.height == pieces[i].lo) kink = &k;
      if (!kink) continue;
      const LaaksoPoint q{kink->height, pl.line.address};
      if (kink->is_ridge()) {
        ++ridges;
        if (geodesic_endings(pl.p, q) != std::set<Direction>{Direction::up, Direction::down} && bad_ridges++ == 0)
          first_bad = "ridge " + point_string(pl.p) + " at " + point_string(q);
      } else if (kink->is_valley()) {
        ++valleys;
        Rational s = std::min(pieces[i - 1].hi - pieces[i - 1].lo, pieces[i].hi - pieces[i].lo) / 2;
        s.canonicalize();
        const Rational dq = distance(pl.p, q);
        const Rational left = (dq - distance(pl.p, {q.height - s, q.address})) / s;
        const Rational right = (distance(pl.p, {q.height + s, q.address}) - dq) / s;
        if ((left != -1 || right != 1) && bad_valleys++ == 0)
          first_bad = "valley " + point_string(pl.p) + " at " + point_string(q);
      } else {
        ++other;
      }
    }
  }
  out.add("ridges end both up and down", bad_ridges == 0 && ridges > 0,
          "ridges=" + std::to_string(ridges) + " failures=" + std::to_string(bad_ridges));
  out.add("valleys have unit one-sided quotients", bad_valleys == 0 && valleys > 0 && other == 0,
          "valleys=" + std::to_string(valleys) + " failures=" + std::to_string(bad_valleys) +
              " unsigned kinks=" + std::to_string(other) + (first_bad.empty() ? "" : " first=" + first_bad));
  return out.rows;
}

std::vector<CheckResult> parallel_values(const VerifyConfig& cfg) {
  Collector out{6};
  Rng rng(cfg.seed + 6);
  const unsigned max_level = std::max(cfg.depth.value_or(6), 4u);
  std::size_t bad = 0;
  std::string first_bad;
  for (int i = 0; i < 1000; ++i) {
    const LaaksoPoint p = random_point(rng, 3);
    const auto w = wormhole_order(p.height);
    std::vector<unsigned> available;
    for (unsigned n = 1; n <= max_level; ++n)
      if (n != w) available.push_back(n);
    std::shuffle(available.begin(), available.end(), rng);
    std::vector<unsigned> levels(available.begin(), available.begin() + uniform(rng, 3, 4));
    std::sort(levels.begin(), levels.end());
    const Rational t = rng() % 8 == 0 ? p.height : random_height(rng);
    const ParallelValues v = parallel_reduction(p, levels, t);
    if (v.value_full != v.value_two_level && bad++ == 0)
      first_bad = point_string(p) + " t=" + to_string(t) + " full=" + to_string(v.value_full) +
                  " two=" + to_string(v.value_two_level);
  }
  out.add("d_p equal on full and two-level lines", bad == 0,
          "triples=1000 mismatches=" + std::to_string(bad) + (first_bad.empty() ? "" : " first=" + first_bad));
  return out.rows;
}

// ----------------------------------------------------------- constructions

std::vector<CheckResult> jump_construction(const VerifyConfig&) {
  Collector out{8};
  const std::vector<LaaksoPoint> centers{
      {Rational(1, 2), CantorAddress("")},
      {Rational(7, 10), CantorAddress("01")},
      {Rational(4, 7), CantorAddress("1")},
      {Rational(5, 11), CantorAddress("110")},
  };
  for (const LaaksoPoint& x : centers) {
    unsigned N = 1;
    while (gap_above(x.height, N).is_infinite() || gap_below(x.height, N).is_infinite()) ++N;
    const JumpConstruction c = build_jump_function(x, N, N + 7);
    const std::string tag = point_string(c.x) + " ";

    const DerivativeReport r = directional_derivative(c.eval, c.x, triadic_schedule(1, N + 9), Rational(0));
    out.add(tag + "f_I(x) = 0", r.verdict == DerivativeVerdict::exists && r.value == 0,
            std::string("verdict=") + std::string(to_string(r.verdict)) + " value=" + to_string(r.value));

    bool quotients = true, distances = true;
    std::string detail;
    for (std::size_t i = 0; i < c.y.size(); ++i) {
      const unsigned n = c.levels[i];
      const Rational d = distance(c.y[i], c.x);
      const Rational want = 2 * min(gap_above(c.x.height, n), gap_below(c.x.height, n)).value();
      if (d != want) distances = false;
      const Rational q = (c.eval(c.y[i]) - c.eval(c.x)) / d;
      if (q != Rational(1, 2)) quotients = false;
      detail += " n=" + std::to_string(n) + ":" + to_string(q);
    }
    out.add(tag + "quotient at every y_n is 1/2", quotients, detail.substr(1));
    out.add(tag + "d(x,y_n) = min(2D+,2D-)", distances, "levels=" + std::to_string(c.levels.size()));
    const ProbeReport probe = differentiability_probe(c.eval, c.x, Rational(0), c.y);
    out.add(tag + "probe sup ratio 1/2", probe.sup_ratio == Rational(1, 2), "sup=" + to_string(probe.sup_ratio));
    const LipschitzPairReport lip = pairwise_lipschitz(c.function);
    out.add(tag + "pairwise ratio <= 1", lip.max_ratio <= 1,
            "pairs=" + std::to_string(lip.pairs) + " max=" + to_string(lip.max_ratio));
  }
  return out.rows;
}

std::vector<CheckResult> band_construction(const VerifyConfig&) {
  Collector out{9};
  const Rational t0 = engineered_height(5);
  const std::vector<std::pair<Rational, int>> cases{{Rational(1 - t0), 1}, {t0, -1}};
  for (const auto& [x1, sigma] : cases) {
    const LaaksoPoint x{x1, CantorAddress("")};
    const unsigned last = *wormhole_order(x1) - 1;
    const ThetaSchedule schedule = greedy_theta_schedule(x1, sigma, 1, last);
    const ScheduleCheck check = check_schedule(x1, schedule);
    std::string lv;
    for (unsigned n : schedule.levels) lv += (lv.empty() ? "" : ",") + std::to_string(n);
    const std::string tag = std::string(sigma > 0 ? "x1=1-t0 " : "x1=t0 (mirrored) ");
    out.add(tag + "theta schedule invariants", check.ok() && check.thinning && schedule.levels.size() >= 2,
            "levels={" + lv + "} bound=" + std::to_string(check.theta_bound) + " range=" +
                std::to_string(check.theta_range) + " monotone=" + std::to_string(check.monotone) +
                " thinning=" + std::to_string(check.thinning));
    if (!check.ok()) continue;
    const BandConstruction c = build_band_function(x, schedule);

    // Near-side quotients are sigma exactly; far-side ones are band averages in [min theta, 1].
    bool near_ok = true, far_ok = true;
    std::size_t probes = 0;
    const Rational theta_min = *std::min_element(schedule.theta.begin(), schedule.theta.end());
    for (unsigned j = 1; j <= schedule.levels.back() + 4; ++j) {
      const Rational s = inv_pow3(j);
      const Rational near_h = x1 + sigma * s, far_h = x1 - sigma * s;
      if (c.domain.contains(near_h)) {
        ++probes;
        if (difference_quotient(c.eval, c.x, Rational(sigma * s)) != sigma) near_ok = false;
      }
      if (c.domain.contains(far_h)) {
        const Rational q = sigma * difference_quotient(c.eval, c.x, Rational(-sigma * s));
        if (q < theta_min || q > 1) far_ok = false;
      }
    }
    out.add(tag + "near-side quotient is exactly " + (sigma > 0 ? "1" : "-1"), near_ok && probes > 0,
            "scales=" + std::to_string(probes));
    out.add(tag + "far-side quotients within theta band", far_ok, "min_theta=" + to_string(theta_min));

    bool half = true, equal_u = true, pair_d = true;
    std::string detail;
    for (std::size_t k = 0; k < c.y.size(); ++k) {
      const Rational near = near_gap(x1, schedule.levels[k], sigma).value();
      const Rational d = distance(c.y[k], c.x);
      const Rational q = (c.eval(c.y[k]) - c.eval(c.x)) / d;
      if (q != Rational(1, 2) || d != 2 * near) half = false;
      if (c.eval(c.u[k]) != near || c.eval(c.y[k]) != near) equal_u = false;
      for (std::size_t l = 0; l < k; ++l)
        if (distance(c.y[l], c.y[k]) != 2 * near_gap(x1, schedule.levels[l], sigma).value()) pair_d = false;
      detail += " n=" + std::to_string(schedule.levels[k]) + ":" + to_string(q);
    }
    out.add(tag + "quotient at every y_nk is 1/2", half, detail.substr(1));
    out.add(tag + "f(u_nk) = D_nk = f(y_nk)", equal_u, "levels=" + std::to_string(c.y.size()));
    out.add(tag + "d(y_nl, y_nk) = 2 D_nl", pair_d, "pairs=" + std::to_string(c.y.size() * (c.y.size() - 1) / 2));
    const LipschitzPairReport lip = pairwise_lipschitz(c.function);
    out.add(tag + "pairwise ratio <= 1", lip.max_ratio <= 1,
            "pairs=" + std::to_string(lip.pairs) + " max=" + to_string(lip.max_ratio));
  }
  return out.rows;
}

std::vector<CheckResult> porosity(const VerifyConfig& cfg) {
  Collector out{10};
  Rng rng(cfg.seed + 10);
  const unsigned max_n = cfg.depth.value_or(5);
  std::size_t holes = 0, samples = 0, failed = 0;
  std::string first_bad;
  for (int i = 0; i < 20; ++i) {
    const Rational C = 1 + ratio(static_cast<unsigned long>(uniform(rng, 1, 90)), 10ul);
    const unsigned N = static_cast<unsigned>(uniform(rng, 1, max_n));
    const std::uint64_t den = uniform(rng, 2, 1000);
    const Rational t0 = ratio(static_cast<unsigned long>(uniform(rng, 1, den - 1)), static_cast<unsigned long>(den));
    const Rational delta(1ul, static_cast<unsigned long>(uniform(rng, 2, 1000)));
    Rational t0c = t0;
    t0c.canonicalize();
    const PorosityWitness w = porosity_witness_for_S(C, N, t0c, delta);
    const HoleCertificate cert = certify_hole(w, hole_samples(w, 1000, rng()), false);
    ++holes;
    samples += cert.checked;
    const bool ok = cert.certified && (1 - w.lambda) / w.lambda > C && w.n > N && 2 * inv_pow3(w.n) < delta &&
                    abs(w.t - t0c) < 2 * inv_pow3(w.n);
    if (!ok && failed++ == 0)
      first_bad = "C=" + to_string(C) + " N=" + std::to_string(N) + " t0=" + to_string(t0c);
  }
  out.add("holes certified at every sample", failed == 0 && samples == 20000,
          "holes=" + std::to_string(holes) + " samples=" + std::to_string(samples) +
              " failed=" + std::to_string(failed) + (first_bad.empty() ? "" : " first=" + first_bad));
  return out.rows;
}

std::vector<CheckResult> regularity(const VerifyConfig& cfg) {
  Collector out{11};
  const unsigned m = cfg.depth.value_or(6);
  const LevelGraph g(m);
  const RegularityTable table =
      regularity_scan(g, 20, {Rational(1, 9), Rational(1, 27), Rational(1, 81)}, cfg.seed);
  std::ostringstream detail;
  detail << "rows=" << table.rows.size() << " min=" << table.min_ratio << " max=" << table.max_ratio
         << " spread=" << table.spread();
  out.add("mass/r^Q spread <= 100", table.spread() > 0 && table.spread() <= 100, detail.str());
  out.add("total cell mass is 1", total_cell_mass(m) == 1, "mass=" + to_string(total_cell_mass(m)));
  return out.rows;
}

std::vector<CheckResult> census(const VerifyConfig& cfg) {
  Collector out{13};
  Rng rng(cfg.seed + 13);
  const unsigned max_level = cfg.depth.value_or(4);
  std::vector<LaaksoPoint> pool{{Rational(1, 2), CantorAddress("0")}};
  for (int i = 0; i < 4; ++i) pool.push_back(random_point(rng, 3));

  for (const LaaksoPoint& p : pool) {
    const auto entries = nondiff_height_census(p, max_level);
    std::set<Rational> heights;
    std::size_t unconfirmed = 0;
    for (const CensusEntry& e : entries) {
      heights.insert(e.height);
      if (e.kink_type == "unconfirmed") ++unconfirmed;
    }
    const std::size_t pairs = max_level * (max_level - 1) / 2;
    const std::size_t bound = 2 * (7 * pairs + 3 * max_level + 1);
    const std::string tag = point_string(p) + " ";
    out.add(tag + "census finite and confirmed", entries.size() <= bound && unconfirmed == 0,
            "size=" + std::to_string(entries.size()) + " bound=" + std::to_string(bound) +
                " unconfirmed=" + std::to_string(unconfirmed));

    // Every profiled kink is in the census; off-census heights have matching one-sided slopes.
    const auto w = wormhole_order(p.height);
    std::vector<std::vector<unsigned>> families{{}};
    for (unsigned n = 1; n <= max_level; ++n)
      if (n != w) families.push_back({n});
    for (unsigned n = 1; n <= max_level; ++n)
      for (unsigned m = n + 1; m <= max_level; ++m)
        if (n != w && m != w) families.push_back({n, m});
    std::size_t lines = 0, stray = 0, probes = 0, slope_breaks = 0;
    for (const auto& levels : families)
      for (const VerticalLine& line : lines_from(p, levels)) {
        ++lines;
        const KinkProfile profile = profile_dp_on_line(p, line);
        for (const Kink& k : profile.kinks)
          if (!heights.count(k.height)) ++stray;
        std::vector<Rational> marks(heights.begin(), heights.end());
        for (const ProfilePiece& piece : profile.pieces) marks.push_back(piece.lo);
        marks.push_back(Rational(0));
        marks.push_back(Rational(1));
        std::sort(marks.begin(), marks.end());
        for (int j = 0; j < 8; ++j) {
          const Rational t = random_height(rng);
          if (heights.count(t)) continue;
          Rational gap = 1;
          for (const Rational& mk : marks)
            if (mk != t) gap = std::min(gap, Rational(abs(mk - t)));
          if (std::binary_search(marks.begin(), marks.end(), t)) continue;
          Rational s = gap / 2;
          s.canonicalize();
          const Rational dt = distance(p, {t, line.address});
          const Rational left = (dt - distance(p, {t - s, line.address})) / s;
          const Rational right = (distance(p, {t + s, line.address}) - dt) / s;
          ++probes;
          if (left != right) ++slope_breaks;
        }
      }
    out.add(tag + "no kinks outside the census", stray == 0 && slope_breaks == 0,
            "lines=" + std::to_string(lines) + " stray=" + std::to_string(stray) + " off-census probes=" +
                std::to_string(probes) + " slope breaks=" + std::to_string(slope_breaks));
  }
  return out.rows;
}

}  // namespace

std::string criterion_title(int id) {
  static const char* titles[] = {
      "oracle equivalence",
      "minimal-interval law",
      "V0 classification",
      "VN classification",
      "VDelta classification",
      "parallel values",
      "double-geodesic test",
      "single-jump construction",
      "theta-band construction",
      "porosity of S",
      "Ahlfors regularity",
      "low-level jump bound",
      "height census",
  };
  if (id < 1 || id > kCriterionCount) throw std::invalid_argument("criterion id out of range");
  return titles[id - 1];
}

std::vector<CheckResult> run_criterion(int id, const VerifyConfig& config) {
  switch (id) {
    case 1: return oracle_equivalence(config);
    case 2: return minimal_interval_law(config);
    case 3: return v0_classification(config);
    case 4: return vn_classification(config);
    case 5: return vd_classification(config);
    case 6: return parallel_values(config);
    case 7: return double_geodesic(config);
    case 8: return jump_construction(config);
    case 9: return band_construction(config);
    case 10: return porosity(config);
    case 11: return regularity(config);
    case 12: return low_level_jumps(config);
    case 13: return census(config);
    default: throw std::invalid_argument("criterion id out of range");
  }
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"oracle",   "geodesics",  "kinks",  "parallel", "constructions",
                                              "porosity", "regularity", "census", "all"};
  return names;
}

std::vector<int> suite_criteria(const std::string& suite) {
  static const std::map<std::string, std::vector<int>> table{
      {"oracle", {1}},          {"geodesics", {2, 12}}, {"kinks", {3, 4, 5, 7}},
      {"parallel", {6}},        {"constructions", {8, 9}}, {"porosity", {10}},
      {"regularity", {11}},     {"census", {13}},
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}},
  };
  auto it = table.find(suite);
  if (it == table.end()) throw std::invalid_argument("unknown suite '" + suite + "'");
  return it->second;
}

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyConfig& config) {
  std::vector<CheckResult> all;
  for (int id : suite_criteria(suite)) {
    auto rows = run_criterion(id, config);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

std::string suite_depth_help() {
  return "--depth meaning per suite: oracle = graph resolution m for the all-pairs check (default 2, random pairs at "
         "m+1); geodesics = address depth (4); kinks = largest line level (4); parallel = largest level (6); "
         "porosity = largest N (5); regularity = graph resolution (6); census = max_level (4); constructions ignores "
         "it";
}

void write_results_csv(std::ostream& out, const std::vector<CheckResult>& results) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  out << "criterion,check,passed,detail\n";
  for (const CheckResult& r : results)
    out << r.criterion << ',' << quote(r.name) << ',' << (r.passed ? "true" : "false") << ',' << quote(r.detail)
        << '\n';
}

}  // namespace laakso
