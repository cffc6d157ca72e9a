// Command-line front end: exact Stern-Brocot / height / tower queries and
// the scan and construction campaigns, with reproducible report output.
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fareytower/abc.hpp"
#include "fareytower/construct.hpp"
#include "fareytower/error.hpp"
#include "fareytower/factor.hpp"
#include "fareytower/heights.hpp"
#include "fareytower/lograt.hpp"
#include "fareytower/places.hpp"
#include "fareytower/rat.hpp"
#include "fareytower/report.hpp"
#include "fareytower/scan.hpp"
#include "fareytower/stern_brocot.hpp"
#include "fareytower/tower.hpp"

namespace ft = fareytower;
using ft::Int;
using ft::Rat;
using ordered_json = nlohmann::ordered_json;

namespace {

// Flat "key = value" config files with full-line # comments. The expansion
// happens before CLI11 sees the tokens, so explicit flags always win: a key
// already present on the command line is not appended again.
std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> expand_config(const std::vector<std::string>& tokens) {
  std::string path;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "--config" && i + 1 < tokens.size()) path = tokens[i + 1];
    else if (tokens[i].rfind("--config=", 0) == 0) path = tokens[i].substr(9);
  }
  if (path.empty()) return tokens;

  std::ifstream f(path);
  if (!f) throw ft::input_error("cannot read config file " + path);
  std::vector<std::string> out = tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ft::input_error("config " + path + " line " + std::to_string(lineno) +
                            ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = unquote(trim(t.substr(eq + 1)));
    if (key.empty())
      throw ft::input_error("config " + path + " line " + std::to_string(lineno) +
                            ": empty key");
    std::string flag = "--" + key;
    bool overridden = false;
    for (const std::string& tok : tokens)
      overridden = overridden || tok == flag || tok.rfind(flag + "=", 0) == 0;
    if (overridden) continue;
    if (value == "true") {
      out.push_back(flag);
    } else if (value == "false") {
      continue;
    } else {
      out.push_back(flag);
      out.push_back(value);
    }
  }
  return out;
}

ft::Range parse_range(const std::string& text) {
  auto pos = text.find(':');
  if (pos == std::string::npos) {
    Int v = ft::parse_int(text);
    return {v, v};
  }
  return {ft::parse_int(text.substr(0, pos)), ft::parse_int(text.substr(pos + 1))};
}

std::vector<Rat> parse_rat_list(const std::string& text) {
  std::vector<Rat> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string tok = text.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!tok.empty()) out.push_back(ft::parse_rat(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ft::input_error("expected a comma-separated list of rationals");
  return out;
}

std::string float_str(double x) { return ordered_json(x).dump(); }

void emit(const std::string& s) { std::fwrite(s.data(), 1, s.size(), stdout); }

void emit_report_paths(const ft::ReportFiles& files) {
  for (const std::string& p : files.paths) emit("wrote " + p + "\n");
}

// ---------------------------------------------------------------- farey ----

int run_farey(int level) {
  std::string out;
  for (const ft::Farey& f : ft::level_fractions(level)) out += f.str() + "\n";
  emit(out);
  return 0;
}

// ------------------------------------------------------------------ phi ----

int run_phi(const std::string& alpha_text, int samples) {
  Rat alpha = ft::parse_rat(alpha_text);
  std::vector<ft::FareyInterval> chain = ft::interval_chain(alpha);
  const ft::FareyInterval& last = chain.back();
  Rat lo = last.lo.value(), hi = last.hi.value();

  std::vector<Rat> xs;
  xs.reserve(static_cast<std::size_t>(samples) + 1);
  for (int j = 0; j < samples; ++j)
    xs.push_back(lo + (hi - lo) * Rat(j, samples - 1));
  xs.push_back(alpha);  // the peak row is always present
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::string out = "# x\tphi\tx_float\tphi_float\n";
  for (const Rat& x : xs) {
    Rat y = ft::phi_closed(alpha, x);
    out += ft::rat_str(x) + "\t" + ft::rat_str(y) + "\t" + float_str(ft::rat_to_double(x)) +
           "\t" + float_str(ft::rat_to_double(y)) + "\n";
  }
  emit(out);
  return 0;
}

// -------------------------------------------------------------- heights ----

int run_heights(const std::string& point_text) {
  std::vector<Rat> coords = parse_rat_list(point_text);
  ft::ProjPoint P(coords);
  ft::LogRat h = ft::height(P);

  ordered_json j;
  j["kind"] = "heights";
  ordered_json cs = ordered_json::array();
  for (const Int& c : P.coords()) cs.push_back(ft::int_str(c));
  j["point"] = cs;
  j["height"] = ft::log_json(h);

  bool mismatch = false;
  if (P.dim() == 2) {
    const std::pair<const char*, ft::LineDivisor> lines[] = {
        {"x", ft::LineDivisor::coordinate_x()},
        {"y", ft::LineDivisor::coordinate_y()},
        {"z", ft::LineDivisor::coordinate_z()},
    };
    ordered_json lj;
    for (const auto& [name, F] : lines) {
      Int fx = F.evaluate(P);
      if (fx == 0) {
        lj[name] = nullptr;  // the point lies on this line
        continue;
      }
      ordered_json terms = ordered_json::array();
      ft::LogRat sum;
      ft::Place inf = ft::Place::infinite_place();
      ft::LogRat t = ft::local_height_line(F, P, inf);
      terms.push_back({{"place", inf.str()}, {"value", ft::log_json(t)}});
      sum = sum + t;
      ft::Factorization fac = ft::factor(Rat(fx));
      for (const auto& [p, e] : fac.exponents) {
        ft::Place v = ft::Place::finite(p);
        ft::LogRat lp = ft::local_height_line(F, P, v);
        terms.push_back({{"place", v.str()}, {"value", ft::log_json(lp)}});
        sum = sum + lp;
      }
      bool matches = sum == h;
      mismatch = mismatch || !matches;
      lj[name] = {{"terms", terms}, {"sum", ft::log_json(sum)}, {"matches_height", matches}};
    }
    j["lines"] = lj;
  } else {
    j["lines"] = nullptr;
  }

  emit(j.dump(2) + "\n");
  if (mismatch) {
    std::fprintf(stderr, "height decomposition mismatch: this is a bug\n");
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------- tower ----

int run_tower(const std::string& shape, const std::string& centers_text) {
  std::string out;
  bool first = true;
  for (const Rat& center : parse_rat_list(centers_text)) {
    ft::Tower t = ft::parse_tower_shape(shape, center);
    if (!first) out += "\n";
    first = false;
    out += "# center " + ft::rat_str(t.center()) + ", " + std::to_string(t.n_blowups()) +
           " blowups" + (t.is_chain() ? ", chain" : "") + "\n";
    out += "index\tfraction\tcreating\tmult\tdisc\tpath\n";
    for (int i = 0; i <= t.n_blowups(); ++i) {
      const ft::DivisorNode& nd = t.node(i);
      std::string path = "-";
      Rat v = nd.fraction.value();
      if (ft::sgn(v) > 0 && v < 1) path = ft::path_str(ft::path_to(v));
      out += "E" + std::to_string(i) + "\t" + nd.fraction.str() + "\t" +
             (nd.creating ? nd.creating->str() : "-") + "\t" + ft::int_str(nd.mult_pullback) +
             "\t" + ft::int_str(nd.discrepancy) + "\t" + path + "\n";
    }
  }
  emit(out);
  return 0;
}

// ----------------------------------------------------------------- scans ---

struct ScanFlags {
  std::string a_range, b_range;
  std::string a_den_range = "1:1", b_den_range = "1:1";
  std::string tower = "chain:4";
  std::string centers = "1";
  std::string S;
  std::string eps = "1/10";
  int jobs = 1;
  std::size_t top_k = 10;
  bool no_points = false;
  bool force_generic = false;
  std::string out;
  bool no_timestamp = false;
};

ft::ScanConfig to_config(const ScanFlags& f, bool with_b) {
  ft::ScanConfig cfg;
  cfg.a_num = parse_range(f.a_range);
  cfg.a_den = parse_range(f.a_den_range);
  if (with_b) {
    cfg.b_num = parse_range(f.b_range);
    cfg.b_den = parse_range(f.b_den_range);
    cfg.tower_shape = f.tower;
    cfg.centers = parse_rat_list(f.centers);
  }
  cfg.S = f.S.empty() ? ft::PlaceSet() : ft::PlaceSet::parse(f.S);
  cfg.eps = ft::parse_rat(f.eps);
  cfg.jobs = f.jobs;
  cfg.record_points = !f.no_points;
  cfg.top_k = f.top_k;
  cfg.force_generic = f.force_generic;
  return cfg;
}

int run_scan_vojta(const ScanFlags& f) {
  ft::ScanConfig cfg = to_config(f, true);
  ft::VojtaScanResult res = ft::vojta_scan(cfg);
  if (!f.out.empty())
    emit_report_paths(ft::write_vojta_report(res, cfg, f.out, !f.no_timestamp));
  else
    emit(ft::vojta_summary(res, cfg, !f.no_timestamp).dump(2) + "\n");
  if (!res.violations.empty()) {
    std::fprintf(stderr, "%zu per-prime bound violations found, see the summary report\n",
                 res.violations.size());
    return 1;
  }
  return 0;
}

int run_scan_ridout(const ScanFlags& f) {
  ft::ScanConfig cfg = to_config(f, false);
  ft::RidoutScanResult res = ft::ridout_scan(cfg);
  if (!f.out.empty())
    emit_report_paths(ft::write_ridout_report(res, cfg, f.out, !f.no_timestamp));
  else
    emit(ft::ridout_summary(res, cfg, !f.no_timestamp).dump(2) + "\n");
  return 0;
}

int run_scan_abc(const std::string& c_max_text, std::size_t top_k, const std::string& out,
                 bool no_timestamp) {
  Int c_max = ft::parse_int(c_max_text);
  std::size_t k = top_k == 0 ? static_cast<std::size_t>(-1) : top_k;
  std::vector<ft::AbcTriple> triples = ft::abc_scan(c_max, k);
  if (!out.empty())
    emit_report_paths(ft::write_abc_report(triples, c_max, k, out, !no_timestamp));
  else
    emit(ft::abc_summary(triples, c_max, k, !no_timestamp).dump(2) + "\n");
  return 0;
}

// ----------------------------------------------------------- construct-t2 --

int run_construct_t2(const std::string& a_text, int n, const std::string& S_text,
                     bool rational_variant, const std::string& eps_text,
                     const std::string& out, bool no_timestamp) {
  ft::PlaceSet S = S_text.empty() ? ft::PlaceSet() : ft::PlaceSet::parse(S_text);
  std::vector<ft::T2Construction> cs;
  for (const Rat& a : parse_rat_list(a_text))
    cs.push_back(ft::theorem2_construct(a, n, S, rational_variant));

  ordered_json j;
  j["kind"] = "construct-t2";
  ordered_json arr = ordered_json::array();
  for (const ft::T2Construction& c : cs) arr.push_back(ft::t2_json(c));
  j["constructions"] = arr;
  if (!eps_text.empty()) {
    Rat eps = ft::parse_rat(eps_text);
    j["saturation"] = ft::saturation_json(ft::saturation_report(cs, eps), eps, false);
  }
  if (!no_timestamp) j["timestamp"] = ft::utc_timestamp_now();

  std::string text = j.dump(2) + "\n";
  if (!out.empty()) {
    ft::write_text_file(out + ".json", text);
    emit("wrote " + out + ".json\n");
  } else {
    emit(text);
  }

  for (const ft::T2Construction& c : cs) {
    if (!c.identities_ok() || !c.height_bound_ok) {
      std::fprintf(stderr, "construction identity failed for a = %s: this is a bug\n",
                   ft::rat_str(c.a).c_str());
      return 1;
    }
  }
  return 0;
}

// ---------------------------------------------------------------- check ----

struct SuiteOutcome {
  bool ok = true;
  std::string detail;
};

SuiteOutcome suite_sb() {
  for (int n = 1; n <= 10; ++n) {
    std::vector<ft::Farey> fs = ft::level_fractions(n);
    if (fs.size() != (std::size_t{1} << (n - 1)) + 1) return {false, "level count"};
    for (std::size_t i = 0; i + 1 < fs.size(); ++i)
      if (fs[i].q * fs[i + 1].p - fs[i].p * fs[i + 1].q != 1)
        return {false, "unimodularity at level " + std::to_string(n)};
  }
  for (long q = 1; q <= 30; ++q)
    for (long p = 0; p <= q; ++p) {
      if (boost::multiprecision::gcd(Int(p), Int(q)) != 1) continue;
      if (ft::first_level(Rat(p, q)) > q)
        return {false, "late first appearance of " + std::to_string(p) + "/" + std::to_string(q)};
    }
  return {true, "levels 1..10, first appearance q <= 30"};
}

SuiteOutcome suite_phi() {
  int alphas = 0;
  for (long q = 2; q <= 40; ++q)
    for (long p = 1; p < q; ++p) {
      if (boost::multiprecision::gcd(Int(p), Int(q)) != 1) continue;
      ++alphas;
      Rat alpha(p, q);
      const ft::FareyInterval last = ft::interval_chain(alpha).back();
      Rat lo = last.lo.value(), hi = last.hi.value();
      for (int j = 0; j <= 8; ++j) {
        Rat x = lo + (hi - lo) * Rat(j, 8);
        if (ft::phi_direct(alpha, x) != ft::phi_closed(alpha, x))
          return {false, "direct/closed mismatch at alpha " + ft::rat_str(alpha)};
      }
      if (ft::phi_direct(alpha, alpha) != Rat(q - 1, q))
        return {false, "peak value at alpha " + ft::rat_str(alpha)};
    }
  return {true, std::to_string(alphas) + " alphas, q <= 40, 9 samples each"};
}

SuiteOutcome suite_lemma() {
  for (long q = 1; q <= 40; ++q)
    for (long p = 0; p <= q; ++p) {
      if (boost::multiprecision::gcd(Int(p), Int(q)) != 1) continue;
      for (long ell = 0; ell <= 30; ++ell) {
        ft::LemmaCheck c = ft::lemma_elementary_check(Rat(p, q), Int(ell));
        if (!c.holds || !c.equality_matches_class)
          return {false, "alpha " + ft::rat_str(c.alpha) + " ell " + std::to_string(ell)};
      }
    }
  return {true, "q <= 40, ell <= 30, equality classified"};
}

void enumerate_towers(const ft::Tower& t, int max_blowups,
                      const std::function<void(const ft::Tower&)>& visit) {
  visit(t);
  if (t.n_blowups() >= max_blowups) return;
  for (const ft::FareyInterval& I : std::vector<ft::FareyInterval>(t.crossings())) {
    ft::Tower u = t;
    u.blow_up(I);
    enumerate_towers(u, max_blowups, visit);
  }
}

SuiteOutcome suite_tower() {
  int count = 0;
  bool all_ok = true;
  enumerate_towers(ft::Tower{Rat(1)}, 6, [&](const ft::Tower& t) {
    ++count;
    all_ok = all_ok && ft::check_divisor_bookkeeping(t).ok();
  });
  if (!all_ok) return {false, "divisor bookkeeping"};
  if (count != 154) return {false, "tower census: " + std::to_string(count)};
  ft::Tower two = ft::chain_tower(2);
  if (two.node(1).mult_pullback != 1 || two.node(2).mult_pullback != 2)
    return {false, "two-blowup pullback multiplicities"};
  return {true, "154 towers <= 6 blowups, bookkeeping exact"};
}

SuiteOutcome suite_heights() {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> nd(-10000, 10000), dd(1, 10000);
  const ft::LineDivisor lines[] = {ft::LineDivisor::coordinate_x(),
                                   ft::LineDivisor::coordinate_y(),
                                   ft::LineDivisor::coordinate_z()};
  for (int i = 0; i < 200; ++i) {
    long an = 0, bn = 0;
    while (an == 0) an = nd(rng);
    while (bn == 0) bn = nd(rng);
    ft::ProjPoint P = ft::ProjPoint::plane_point(Rat(an, dd(rng)), Rat(bn, dd(rng)));
    ft::LogRat h = ft::height(P);
    for (const ft::LineDivisor& F : lines) {
      ft::LogRat sum = ft::local_height_line(F, P, ft::Place::infinite_place());
      for (const auto& [p, e] : ft::factor(Rat(F.evaluate(P))).exponents)
        sum = sum + ft::local_height_line(F, P, ft::Place::finite(p));
      if (!(sum == h)) return {false, "decomposition mismatch"};
    }
  }
  return {true, "200 random points, three lines, exact"};
}

SuiteOutcome suite_t2() {
  for (int n : {3, 4})
    for (long p : {2L, 3L})
      for (std::uint64_t e = 2; e <= 5; ++e) {
        ft::T2Construction c =
            ft::theorem2_construct(Rat(ft::ipow(Int(p), e) + 1), n, ft::PlaceSet());
        if (!c.identities_ok() || !c.height_bound_ok)
          return {false, "identity at p " + std::to_string(p) + " e " + std::to_string(e)};
      }
  return {true, "per-prime identities, n in {3,4}, p in {2,3}, e <= 5"};
}

SuiteOutcome suite_abc() {
  std::vector<ft::AbcTriple> list = ft::abc_scan(Int(300));
  for (const ft::AbcTriple& t : list) {
    if (t.a + t.b != t.c || t.a < 1) return {false, "sum relation"};
    if (boost::multiprecision::gcd(t.a, t.b) != 1) return {false, "coprimality"};
    Int r = 1, m = t.a * t.b * t.c;
    for (Int p = 2; p * p <= m; ++p)
      if (m % p == 0) {
        r *= p;
        while (m % p == 0) m /= p;
      }
    if (m > 1) r *= m;
    if (r != t.rad) return {false, "radical of " + ft::int_str(t.c)};
    if (t.rad >= t.c) return {false, "quality filter"};
  }
  for (std::size_t i = 0; i + 1 < list.size(); ++i)
    if (ft::compare_quality(list[i], list[i + 1]) < 0) return {false, "ranking order"};
  return {true, std::to_string(list.size()) + " triples, c <= 300, radicals re-derived"};
}

int run_check(const std::string& suite) {
  const std::vector<std::pair<std::string, SuiteOutcome (*)()>> suites = {
      {"sb", suite_sb},         {"phi", suite_phi}, {"lemma", suite_lemma},
      {"tower", suite_tower},   {"t2", suite_t2},   {"heights", suite_heights},
      {"abc", suite_abc},
  };
  bool any = false, all_ok = true;
  for (const auto& [name, fn] : suites) {
    if (suite != "all" && suite != name) continue;
    any = true;
    SuiteOutcome r = fn();
    all_ok = all_ok && r.ok;
    emit((r.ok ? "ok " : "FAIL ") + name + ": " + r.detail + "\n");
  }
  if (!any) throw ft::input_error("check: unknown suite " + suite);
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact arithmetic for Farey intervals, blowup towers, heights, and gcd scans"};
  app.name("fareytower");
  app.require_subcommand(1);
  int rc = 0;
  std::string config_path;

  // farey
  auto* farey = app.add_subcommand("farey", "Print one level of the Farey tree");
  int level = 1;
  farey->add_option("--level", level, "Tree level")->required()->check(CLI::Range(1, 20));
  farey->add_option("--config", config_path, "Flat key = value config file");
  farey->callback([&] { rc = run_farey(level); });

  // phi
  auto* phi = app.add_subcommand("phi", "Tab-separated samples of the tent profile of alpha");
  std::string alpha;
  int samples = 100;
  phi->add_option("--alpha", alpha, "Rational alpha in (0,1)")->required();
  phi->add_option("--samples", samples, "Number of evenly spaced samples")
      ->check(CLI::Range(2, 100000));
  phi->add_option("--config", config_path, "Flat key = value config file");
  phi->callback([&] { rc = run_phi(alpha, samples); });

  // heights
  auto* heights = app.add_subcommand("heights", "Height and local height decomposition");
  std::string point;
  heights->add_option("--point", point, "Comma-separated homogeneous coordinates (2 or 3)")
      ->required();
  heights->add_option("--config", config_path, "Flat key = value config file");
  heights->callback([&] { rc = run_heights(point); });

  // tower
  auto* tower = app.add_subcommand("tower", "Describe a blowup tower divisor by divisor");
  std::string tower_shape, tower_centers = "1";
  tower->add_option("--tower", tower_shape, "chain:N | t2:N | custom:f1,f2,...")->required();
  tower->add_option("--centers", tower_centers, "Comma-separated centers (default 1)");
  tower->add_option("--config", config_path, "Flat key = value config file");
  tower->callback([&] { rc = run_tower(tower_shape, tower_centers); });

  // scan-vojta
  ScanFlags vf;
  auto* sv = app.add_subcommand("scan-vojta", "Scan a point box for gcd-height margins");
  sv->add_option("--a-range", vf.a_range, "Numerator range lo:hi for a")->required();
  sv->add_option("--b-range", vf.b_range, "Numerator range lo:hi for b")->required();
  sv->add_option("--a-den-range", vf.a_den_range, "Denominator range lo:hi for a");
  sv->add_option("--b-den-range", vf.b_den_range, "Denominator range lo:hi for b");
  sv->add_option("--tower", vf.tower, "chain:N | t2:N | custom:f1,f2,...");
  sv->add_option("--centers", vf.centers, "Comma-separated tower centers");
  sv->add_option("--S", vf.S, "Comma-separated finite primes of S");
  sv->add_option("--eps", vf.eps, "Rational epsilon");
  sv->add_option("--jobs", vf.jobs, "Worker threads")->check(CLI::Range(1, 256));
  sv->add_option("--top-k", vf.top_k, "Extremal list size")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  sv->add_flag("--no-points", vf.no_points, "Skip the per-point record stream");
  sv->add_flag("--force-generic", vf.force_generic, "Disable the machine-word fast path");
  sv->add_option("--out", vf.out, "Report path prefix");
  sv->add_flag("--no-timestamp", vf.no_timestamp, "Omit the timestamp field");
  sv->add_option("--config", config_path, "Flat key = value config file");
  sv->callback([&] { rc = run_scan_vojta(vf); });

  // scan-ridout
  ScanFlags rf;
  auto* sr = app.add_subcommand("scan-ridout", "Scan S-unit approximation excesses");
  sr->add_option("--a-range", rf.a_range, "Numerator range lo:hi for a")->required();
  sr->add_option("--a-den-range", rf.a_den_range, "Denominator range lo:hi for a");
  sr->add_option("--S", rf.S, "Comma-separated finite primes of S");
  sr->add_option("--eps", rf.eps, "Rational epsilon");
  sr->add_option("--jobs", rf.jobs, "Worker threads")->check(CLI::Range(1, 256));
  sr->add_option("--top-k", rf.top_k, "Extremal list size")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  sr->add_flag("--no-points", rf.no_points, "Skip the per-point record stream");
  sr->add_option("--out", rf.out, "Report path prefix");
  sr->add_flag("--no-timestamp", rf.no_timestamp, "Omit the timestamp field");
  sr->add_option("--config", config_path, "Flat key = value config file");
  sr->callback([&] { rc = run_scan_ridout(rf); });

  // scan-abc
  auto* sa = app.add_subcommand("scan-abc", "Rank sum triples by radical quality");
  std::string c_max;
  std::size_t abc_top_k = 10;
  std::string abc_out;
  bool abc_no_ts = false;
  sa->add_option("--c-max", c_max, "Upper bound for c")->required();
  sa->add_option("--top-k", abc_top_k, "How many triples to keep (0 = all)");
  sa->add_option("--out", abc_out, "Report path prefix");
  sa->add_flag("--no-timestamp", abc_no_ts, "Omit the timestamp field");
  sa->add_option("--config", config_path, "Flat key = value config file");
  sa->callback([&] { rc = run_scan_abc(c_max, abc_top_k, abc_out, abc_no_ts); });

  // construct-t2
  auto* t2 = app.add_subcommand("construct-t2", "Build companion powers with exact excess records");
  std::string t2_a, t2_S, t2_eps, t2_out;
  int t2_n = 3;
  bool t2_variant = false, t2_no_ts = false;
  t2->add_option("--a", t2_a, "Comma-separated list of a values")->required();
  t2->add_option("--n", t2_n, "Exponent parameter n >= 3")->required()->check(CLI::Range(3, 64));
  t2->add_option("--S", t2_S, "Comma-separated finite primes of S");
  t2->add_flag("--rational-variant", t2_variant, "Allow non-integral a, factoring A - B");
  t2->add_option("--eps", t2_eps, "Also tabulate saturation rows at this epsilon");
  t2->add_option("--out", t2_out, "Report path prefix");
  t2->add_flag("--no-timestamp", t2_no_ts, "Omit the timestamp field");
  t2->add_option("--config", config_path, "Flat key = value config file");
  t2->callback([&] { rc = run_construct_t2(t2_a, t2_n, t2_S, t2_variant, t2_eps, t2_out, t2_no_ts); });

  // check
  auto* check = app.add_subcommand("check", "Run fast invariant suites");
  std::string suite = "all";
  check->add_option("--suite", suite, "all | sb | phi | lemma | tower | t2 | heights | abc");
  check->add_option("--config", config_path, "Flat key = value config file");
  check->callback([&] { rc = run_check(suite); });

  try {
    std::vector<std::string> tokens(argv + 1, argv + argc);
    tokens = expand_config(tokens);
    std::reverse(tokens.begin(), tokens.end());  // CLI11 consumes from the back
    app.parse(std::move(tokens));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ft::input_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return rc;
}
