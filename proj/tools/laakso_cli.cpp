#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "laakso/constructions.hpp"
#include "laakso/distance_analysis.hpp"
#include "laakso/metric.hpp"
#include "laakso/oracle.hpp"
#include "laakso/serialize.hpp"
#include "laakso/verify.hpp"

using namespace laakso;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_cap(const char* what, unsigned value) {
  const char* env = std::getenv("LAAKSO_MAX_DEPTH");
  if (!env || !*env) return;
  const unsigned long cap = std::strtoul(env, nullptr, 10);
  if (value > cap)
    throw UsageError(std::string(what) + " = " + std::to_string(value) + " exceeds LAAKSO_MAX_DEPTH = " + env);
}

std::vector<unsigned> parse_levels(const std::string& text) {
  std::vector<unsigned> levels;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("malformed level list '" + text + "'");
    levels.push_back(static_cast<unsigned>(std::stoul(item)));
  }
  if (levels.empty()) throw UsageError("empty level list");
  return levels;
}

std::vector<Rational> parse_rationals(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
  return out;
}

// v0 | vN:<N> | vD:<N>,<M> | v<k>:<levels>
std::vector<unsigned> parse_line_spec(const std::string& spec) {
  if (spec == "v0") return {};
  const auto colon = spec.find(':');
  if (spec.empty() || spec[0] != 'v' || colon == std::string::npos)
    throw UsageError("line spec must be v0, vN:<N>, vD:<N>,<M> or v<k>:<levels>");
  std::vector<unsigned> levels = parse_levels(spec.substr(colon + 1));
  const std::string tag = spec.substr(1, colon - 1);
  if (tag == "N" && levels.size() != 1) throw UsageError("vN takes exactly one level");
  if (tag != "N" && tag != "D" && tag != std::to_string(levels.size()))
    throw UsageError("line spec tag '" + tag + "' does not match " + std::to_string(levels.size()) + " level(s)");
  return levels;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

Json levels_json(const std::vector<unsigned>& levels) {
  Json j = Json::array();
  for (unsigned n : levels) j.push_back(n);
  return j;
}

Json heights_json(const std::vector<Rational>& heights) {
  Json j = Json::array();
  for (const Rational& h : heights) j.push_back(to_json(h));
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact metric, kink and construction toolkit for Laakso space"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "Write the primary output to this file instead of stdout");

  // distance
  std::string x_text, y_text;
  auto* distance_cmd = app.add_subcommand("distance", "Exact distance, minimal intervals and one geodesic per interval (JSON)");
  distance_cmd->add_option("--x", x_text, "Point h:bits")->required();
  distance_cmd->add_option("--y", y_text, "Point h:bits")->required();

  // profile
  std::string p_text, line_spec, format = "json";
  bool alternate = false;
  auto* profile_cmd = app.add_subcommand("profile", "Profile of d_p along a vertical line, checked against the closed form");
  profile_cmd->add_option("--p", p_text, "Base point h:bits")->required();
  profile_cmd->add_option("--line", line_spec, "v0 | vN:<N> | vD:<N>,<M> (also v<k>:<levels>)")->required();
  profile_cmd->add_option("--format", format, "json or svg")->check(CLI::IsMember({"json", "svg"}));
  profile_cmd->add_flag("--alternate", alternate, "For a wormhole p, plot the line through its other representative");

  // reduce
  std::string reduce_levels, reduce_t;
  auto* reduce_cmd = app.add_subcommand("reduce", "Compare d_p on a line of three or more levels with its two-level reduction (JSON)");
  reduce_cmd->add_option("--p", p_text, "Base point h:bits")->required();
  reduce_cmd->add_option("--levels", reduce_levels, "Increasing levels, at least three, e.g. 1,2,3")->required();
  reduce_cmd->add_option("--t", reduce_t, "Comma-separated heights (default: 0, h(p), 1 and k/27)");

  // census
  unsigned max_level = 4;
  std::string census_format = "csv";
  auto* census_cmd = app.add_subcommand("census", "Kink heights of d_p over V0, V_N and two-level lines. CSV columns: height,source_line,kink_type");
  census_cmd->add_option("--p", p_text, "Base point h:bits")->required();
  census_cmd->add_option("--max-level", max_level, "Largest line level (1..12)");
  census_cmd->add_option("--format", census_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // scan
  unsigned m = 6, sample = 20;
  std::string radii_text = "1/9,1/27,1/81";
  std::uint64_t seed = 20231;
  auto* scan_cmd = app.add_subcommand("scan", "Ball masses on the level-m graph. CSV columns: center_h,center_bits,r,mass,ratio,m");
  scan_cmd->add_option("--m", m, "Graph resolution (1..8)");
  scan_cmd->add_option("--sample", sample, "Number of random centers");
  scan_cmd->add_option("--radii", radii_text, "Comma-separated radii");
  scan_cmd->add_option("--seed", seed, "Seed for the center sample");

  // verify
  std::string suite;
  unsigned depth = 0;
  auto* verify_cmd = app.add_subcommand(
      "verify", "Run an acceptance suite. CSV columns: criterion,check,passed,detail. Exit 0 iff every check passes");
  verify_cmd->add_option("suite", suite, "oracle | geodesics | kinks | parallel | constructions | porosity | regularity | census | all")
      ->required();
  auto* depth_opt = verify_cmd->add_option("--depth", depth, suite_depth_help());
  verify_cmd->add_option("--seed", seed, "Seed for randomized pools");

  // membership
  std::string c_text = "3";
  unsigned level_n = 2, probe_depth = 32;
  auto* membership_cmd = app.add_subcommand("membership", "Finite-depth verdict for membership of x in M, with a witness function (JSON)");
  membership_cmd->add_option("--x", x_text, "Point h:bits")->required();
  membership_cmd->add_option("--C", c_text, "Ratio bound C >= 1");
  membership_cmd->add_option("--N", level_n, "First level checked");
  membership_cmd->add_option("--depth", probe_depth, "Last level checked");

  // porosity
  std::string t0_text, delta_text = "1/10";
  unsigned samples = 1000;
  auto* porosity_cmd = app.add_subcommand("porosity", "Hole in S_{C,N} near t0 with a per-sample certificate (JSON)");
  porosity_cmd->add_option("--C", c_text, "Ratio bound C > 1");
  porosity_cmd->add_option("--N", level_n, "Level threshold N >= 1");
  porosity_cmd->add_option("--t0", t0_text, "Height in (0,1)")->required();
  porosity_cmd->add_option("--delta", delta_text, "Scale bound");
  porosity_cmd->add_option("--samples", samples, "Number of sampled heights in the hole");
  porosity_cmd->add_option("--seed", seed, "Seed for the random samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    Output out(out_path);
    std::ostream& os = out.stream();

    if (*distance_cmd) {
      const LaaksoPoint x = canonicalize(parse_point(x_text)), y = canonicalize(parse_point(y_text));
      Json j{{"x", to_json(x)}, {"y", to_json(y)}, {"distance", to_json(distance(x, y))}};
      Json intervals = Json::array(), geodesics = Json::array();
      for (const HeightInterval& iv : minimal_height_intervals(x, y)) {
        intervals.push_back(to_json(iv));
        geodesics.push_back(to_json(synthesize_geodesic(x, y, iv)));
      }
      j["intervals"] = std::move(intervals);
      j["geodesics"] = std::move(geodesics);
      os << j.dump(2) << '\n';
      return kPass;
    }

    if (*profile_cmd) {
      const LaaksoPoint p = canonicalize(parse_point(p_text));
      const std::vector<unsigned> levels = parse_line_spec(line_spec);
      if (levels.size() >= 3)
        throw UsageError("lines with three or more levels reduce to two levels; use `laakso reduce --p " + p_text +
                         " --levels " + line_spec.substr(line_spec.find(':') + 1) + "`");
      for (unsigned n : levels) require_cap("line level", n);
      const auto lines = lines_from(p, levels);
      if (alternate && lines.size() < 2) throw UsageError("--alternate needs a wormhole base point");
      bool all_pass = true;
      Json j{{"p", to_json(p)}};
      Json arr = Json::array();
      std::vector<KinkProfile> profiles;
      for (const VerticalLine& line : lines) {
        profiles.push_back(profile_dp_on_line(p, line));
        const ExpectedKinks expected = expected_kinks(p, line);
        const bool pass = profiles.back().kink_heights() == expected.heights;
        all_pass = all_pass && pass;
        Json entry = to_json(profiles.back());
        entry["expected"] = {{"branch", to_string(expected.branch)}, {"heights", heights_json(expected.heights)}};
        entry["pass"] = pass;
        arr.push_back(std::move(entry));
      }
      j["lines"] = std::move(arr);
      j["pass"] = all_pass;
      if (format == "svg")
        os << to_svg(profiles[alternate ? 1 : 0], p);
      else
        os << j.dump(2) << '\n';
      return all_pass ? kPass : kCheckFailure;
    }

    if (*reduce_cmd) {
      const LaaksoPoint p = canonicalize(parse_point(p_text));
      const std::vector<unsigned> levels = parse_levels(reduce_levels);
      if (levels.size() < 3) throw UsageError("reduce needs at least three levels; use `laakso profile` for fewer");
      for (unsigned n : levels) require_cap("line level", n);
      std::vector<Rational> ts;
      if (reduce_t.empty()) {
        ts = {Rational(0), p.height, Rational(1)};
        for (unsigned k = 1; k < 27; ++k) ts.push_back(ratio(k, 27u));
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      } else {
        ts = parse_rationals(reduce_t);
      }
      bool all_equal = true;
      Json rows = Json::array();
      for (const Rational& t : ts) {
        const ParallelValues v = parallel_reduction(p, levels, t);
        const bool equal = v.value_full == v.value_two_level;
        all_equal = all_equal && equal;
        rows.push_back({{"t", to_json(t)},
                        {"value_full", to_json(v.value_full)},
                        {"value_two_level", to_json(v.value_two_level)},
                        {"equal", equal}});
      }
      Json j{{"p", to_json(p)}, {"levels", levels_json(levels)}, {"rows", std::move(rows)}, {"pass", all_equal}};
      os << j.dump(2) << '\n';
      return all_equal ? kPass : kCheckFailure;
    }

    if (*census_cmd) {
      const LaaksoPoint p = canonicalize(parse_point(p_text));
      require_cap("--max-level", max_level);
      const auto census = nondiff_height_census(p, max_level);
      bool confirmed = true;
      for (const CensusEntry& e : census) confirmed = confirmed && e.kink_type != "unconfirmed";
      if (census_format == "json") {
        Json arr = Json::array();
        for (const CensusEntry& e : census)
          arr.push_back({{"height", to_json(e.height)}, {"source_line", e.source_line}, {"kink_type", e.kink_type}});
        os << Json{{"p", to_json(p)}, {"max_level", max_level}, {"census", std::move(arr)}}.dump(2) << '\n';
      } else {
        write_census_csv(os, census);
      }
      return confirmed ? kPass : kCheckFailure;
    }

    if (*scan_cmd) {
      require_cap("--m", m);
      const LevelGraph g(m);
      write_regularity_csv(os, regularity_scan(g, sample, parse_rationals(radii_text), seed));
      return kPass;
    }

    if (*verify_cmd) {
      VerifyConfig cfg;
      cfg.seed = seed;
      if (depth_opt->count() > 0) {
        require_cap("--depth", depth);
        cfg.depth = depth;
      }
      std::vector<CheckResult> results;
      try {
        results = run_suite(suite, cfg);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      write_results_csv(os, results);
      for (const CheckResult& r : results)
        if (!r.passed) return kCheckFailure;
      return kPass;
    }

    if (*membership_cmd) {
      const LaaksoPoint x = canonicalize(parse_point(x_text));
      require_cap("--depth", probe_depth);
      const MembershipReport report = m_membership_verdict(x, parse_rational(c_text), level_n, probe_depth);
      Json j = to_json(report);
      j["x"] = to_json(x);
      os << j.dump(2) << '\n';
      return kPass;
    }

    if (*porosity_cmd) {
      const PorosityWitness w =
          porosity_witness_for_S(parse_rational(c_text), level_n, parse_rational(t0_text), parse_rational(delta_text));
      const HoleCertificate cert = certify_hole(w, hole_samples(w, samples, seed));
      Json j{{"witness", to_json(w)}, {"certified", cert.certified}, {"checked", cert.checked}};
      j["entries"] = cert.entries;
      os << j.dump(2) << '\n';
      return cert.certified ? kPass : kCheckFailure;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kCheckFailure;
  }
  return kUsage;
}
