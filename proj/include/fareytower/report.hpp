#pragma once

// Rendering of scan and construction results. Every numeric field carries
// its exact expression (as a string) next to a certified double; exactness
// lives in the strings, the floats are for reading. Summaries never include
// anything that varies with the worker count or the wall clock, except the
// optional timestamp, so identical inputs produce identical bytes.

#include <json.hpp>

#include <ctime>
#include <fstream>
#include <string>
#include <vector>

#include "fareytower/abc.hpp"
#include "fareytower/construct.hpp"
#include "fareytower/error.hpp"
#include "fareytower/scan.hpp"

namespace fareytower {

using ordered_json = nlohmann::ordered_json;

inline ordered_json log_json(const LogRat& l) {
  ordered_json j;
  j["logof"] = rat_str(l.value());
  j["float"] = lograt_to_float(l).value;
  return j;
}

inline ordered_json scaled_json(const ScaledLog& s) {
  ordered_json j;
  j["logof"] = rat_str(s.base().value());
  if (s.scale() != 1) j["scale"] = s.scale().convert_to<std::int64_t>();
  j["float"] = s.to_float().value;
  return j;
}

inline ordered_json vojta_point_json(const VojtaPoint& p) {
  ordered_json j;
  j["a"] = rat_str(p.a);
  j["b"] = rat_str(p.b);
  j["lhs"] = log_json(p.lhs);
  j["rhs"] = scaled_json(p.rhs);
  j["margin"] = scaled_json(p.margin);
  return j;
}

inline ordered_json ridout_point_json(const RidoutPoint& p) {
  ordered_json j;
  j["a"] = rat_str(p.a);
  j["excess"] = scaled_json(p.excess);
  return j;
}

inline ordered_json violation_json(const ViolationRecord& v) {
  ordered_json j;
  j["a"] = rat_str(v.a);
  j["b"] = rat_str(v.b);
  j["center"] = rat_str(v.center);
  j["p"] = v.p.str();
  j["lhs"] = log_json(v.lhs);
  j["bound"] = log_json(v.bound);
  return j;
}

inline std::string utc_timestamp_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline ordered_json range_json(const Range& r) {
  ordered_json j;
  j["lo"] = r.lo.str();
  j["hi"] = r.hi.str();
  return j;
}

// Everything that determines the scan output; deliberately no job count and
// no clock, so reruns compare byte for byte.
inline ordered_json scan_config_json(const ScanConfig& cfg, bool with_b) {
  ordered_json j;
  j["a_num"] = range_json(cfg.a_num);
  j["a_den"] = range_json(cfg.a_den);
  if (with_b) {
    j["b_num"] = range_json(cfg.b_num);
    j["b_den"] = range_json(cfg.b_den);
    j["tower"] = cfg.tower_shape;
    ordered_json cs = ordered_json::array();
    for (const Rat& c : cfg.centers) cs.push_back(rat_str(c));
    j["centers"] = cs;
  }
  j["S"] = cfg.S.str();
  j["eps"] = rat_str(cfg.eps);
  j["top_k"] = cfg.top_k;
  return j;
}

}  // namespace detail

inline ordered_json vojta_summary(const VojtaScanResult& res, const ScanConfig& cfg,
                                  bool with_timestamp = true) {
  ordered_json j;
  j["kind"] = "scan-vojta";
  j["config"] = detail::scan_config_json(cfg, true);
  j["counts"]["evaluated"] = res.evaluated;
  j["counts"]["skipped"] = res.skipped;
  j["counts"]["chunks"] = res.chunks;
  if (res.fitted) {
    ordered_json f = scaled_json(res.fitted->margin);
    f["at"]["a"] = rat_str(res.fitted->a);
    f["at"]["b"] = rat_str(res.fitted->b);
    j["fitted_C"] = f;
  } else {
    j["fitted_C"] = nullptr;
  }
  ordered_json ex = ordered_json::array();
  for (const VojtaPoint& p : res.extremal) ex.push_back(vojta_point_json(p));
  j["extremal"] = ex;
  ordered_json vs = ordered_json::array();
  for (const ViolationRecord& v : res.violations) vs.push_back(violation_json(v));
  j["violations"] = vs;
  if (with_timestamp) j["timestamp"] = utc_timestamp_now();
  return j;
}

inline ordered_json ridout_summary(const RidoutScanResult& res, const ScanConfig& cfg,
                                   bool with_timestamp = true) {
  ordered_json j;
  j["kind"] = "scan-ridout";
  j["config"] = detail::scan_config_json(cfg, false);
  j["counts"]["evaluated"] = res.evaluated;
  j["counts"]["skipped"] = res.skipped;
  j["counts"]["chunks"] = res.chunks;
  if (res.fitted) {
    ordered_json f = scaled_json(res.fitted->excess);
    f["at"]["a"] = rat_str(res.fitted->a);
    j["fitted_C"] = f;
  } else {
    j["fitted_C"] = nullptr;
  }
  ordered_json ex = ordered_json::array();
  for (const RidoutPoint& p : res.extremal) ex.push_back(ridout_point_json(p));
  j["extremal"] = ex;
  if (with_timestamp) j["timestamp"] = utc_timestamp_now();
  return j;
}

inline std::string vojta_jsonl(const VojtaScanResult& res) {
  std::string out;
  for (const VojtaPoint& p : res.points) out += vojta_point_json(p).dump() + "\n";
  return out;
}

inline std::string ridout_jsonl(const RidoutScanResult& res) {
  std::string out;
  for (const RidoutPoint& p : res.points) out += ridout_point_json(p).dump() + "\n";
  return out;
}

inline std::string vojta_extremal_csv(const VojtaScanResult& res) {
  std::string out = "a,b,margin_float,margin_exact\n";
  for (const VojtaPoint& p : res.extremal) {
    out += rat_str(p.a) + "," + rat_str(p.b) + "," +
           ordered_json(p.margin.to_float().value).dump() + "," + p.margin.str() + "\n";
  }
  return out;
}

inline std::string ridout_extremal_csv(const RidoutScanResult& res) {
  std::string out = "a,excess_float,excess_exact\n";
  for (const RidoutPoint& p : res.extremal) {
    out += rat_str(p.a) + "," + ordered_json(p.excess.to_float().value).dump() + "," +
           p.excess.str() + "\n";
  }
  return out;
}

inline ordered_json t2_prime_json(const T2PrimeRecord& r) {
  ordered_json j;
  j["p"] = r.p.str();
  j["n_p"] = r.n_p;
  j["m_p"] = r.m_p;
  j["tower_sum"] = log_json(r.tower_sum);
  j["line_height"] = log_json(r.line_height);
  j["excess"] = log_json(r.excess);
  j["expected_excess"] = log_json(r.expected_excess);
  j["identity_ok"] = r.identity_ok;
  if (r.slope) j["slope"] = rat_str(*r.slope);
  return j;
}

inline ordered_json t2_json(const T2Construction& c) {
  ordered_json j;
  j["kind"] = "construct-t2";
  j["a"] = rat_str(c.a);
  j["n"] = c.n;
  j["S"] = c.S.str();
  j["rational_variant"] = c.rational_variant;
  j["b"] = c.b.str();
  j["delta"] = rat_str(c.delta);
  ordered_json ps = ordered_json::array();
  for (const T2PrimeRecord& r : c.primes) ps.push_back(t2_prime_json(r));
  j["primes"] = ps;
  j["height_b"] = log_json(c.height_b);
  j["height_bound_ok"] = c.height_bound_ok;
  j["identities_ok"] = c.identities_ok();
  return j;
}

inline ordered_json saturation_row_json(const SaturationRow& r) {
  ordered_json j;
  j["a"] = rat_str(r.a);
  j["n"] = r.n;
  j["b"] = r.b.str();
  j["excess_sum"] = log_json(r.excess_sum);
  j["excess_bound"] = scaled_json(r.excess_bound);
  j["excess_margin"] = scaled_json(r.excess_margin);
  j["dropped_gcd"] = log_json(r.dropped_gcd);
  j["final_lhs"] = log_json(r.final_lhs);
  j["final_bound"] = scaled_json(r.final_bound);
  j["final_margin"] = scaled_json(r.final_margin);
  return j;
}

inline ordered_json saturation_json(const std::vector<SaturationRow>& rows, const Rat& eps,
                                    bool with_timestamp = true) {
  ordered_json j;
  j["kind"] = "saturation";
  j["eps"] = rat_str(eps);
  ordered_json rs = ordered_json::array();
  for (const SaturationRow& r : rows) rs.push_back(saturation_row_json(r));
  j["rows"] = rs;
  if (with_timestamp) j["timestamp"] = utc_timestamp_now();
  return j;
}

inline ordered_json abc_triple_json(const AbcTriple& t) {
  ordered_json j;
  j["a"] = t.a.str();
  j["b"] = t.b.str();
  j["c"] = t.c.str();
  j["rad"] = t.rad.str();
  j["quality"] = quality_approx(t).value;
  if (auto q = detail::log_ratio_exact(t.c, t.rad)) j["quality_exact"] = rat_str(*q);
  return j;
}

inline ordered_json lemma_json(const LemmaCheck& c) {
  ordered_json j;
  j["alpha"] = rat_str(c.alpha);
  j["ell"] = c.ell.str();
  j["sum"] = rat_str(c.sum);
  j["m"] = c.m.str();
  j["holds"] = c.holds;
  j["equality"] = c.equality;
  j["equality_matches_class"] = c.equality_matches_class;
  return j;
}

inline ordered_json abc_summary(const std::vector<AbcTriple>& triples, const Int& c_max,
                                std::size_t top_k, bool with_timestamp = true) {
  ordered_json j;
  j["kind"] = "scan-abc";
  j["config"]["c_max"] = int_str(c_max);
  if (top_k != static_cast<std::size_t>(-1)) j["config"]["top_k"] = top_k;
  ordered_json ts = ordered_json::array();
  for (const AbcTriple& t : triples) ts.push_back(abc_triple_json(t));
  j["triples"] = ts;
  if (with_timestamp) j["timestamp"] = utc_timestamp_now();
  return j;
}

inline std::string abc_extremal_csv(const std::vector<AbcTriple>& triples) {
  std::string out = "a,b,c,rad,quality_float\n";
  for (const AbcTriple& t : triples) {
    QualityApprox q = quality_approx(t);
    out += int_str(t.a) + "," + int_str(t.b) + "," + int_str(t.c) + "," + int_str(t.rad) +
           "," + ordered_json(q.value).dump() + "\n";
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw input_error("write_text_file: cannot open " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw input_error("write_text_file: short write to " + path);
}

// Paths actually written, for the caller to echo.
struct ReportFiles {
  std::vector<std::string> paths;
};

inline ReportFiles write_vojta_report(const VojtaScanResult& res, const ScanConfig& cfg,
                                      const std::string& out_prefix,
                                      bool with_timestamp = true) {
  ReportFiles files;
  if (!res.points.empty()) {
    std::string p = out_prefix + ".jsonl";
    write_text_file(p, vojta_jsonl(res));
    files.paths.push_back(p);
  }
  std::string s = out_prefix + ".summary.json";
  write_text_file(s, vojta_summary(res, cfg, with_timestamp).dump(2) + "\n");
  files.paths.push_back(s);
  std::string c = out_prefix + ".extremal.csv";
  write_text_file(c, vojta_extremal_csv(res));
  files.paths.push_back(c);
  return files;
}

inline ReportFiles write_abc_report(const std::vector<AbcTriple>& triples, const Int& c_max,
                                    std::size_t top_k, const std::string& out_prefix,
                                    bool with_timestamp = true) {
  ReportFiles files;
  std::string s = out_prefix + ".summary.json";
  write_text_file(s, abc_summary(triples, c_max, top_k, with_timestamp).dump(2) + "\n");
  files.paths.push_back(s);
  std::string c = out_prefix + ".extremal.csv";
  write_text_file(c, abc_extremal_csv(triples));
  files.paths.push_back(c);
  return files;
}

inline ReportFiles write_ridout_report(const RidoutScanResult& res, const ScanConfig& cfg,
                                       const std::string& out_prefix,
                                       bool with_timestamp = true) {
  ReportFiles files;
  if (!res.points.empty()) {
    std::string p = out_prefix + ".jsonl";
    write_text_file(p, ridout_jsonl(res));
    files.paths.push_back(p);
  }
  std::string s = out_prefix + ".summary.json";
  write_text_file(s, ridout_summary(res, cfg, with_timestamp).dump(2) + "\n");
  files.paths.push_back(s);
  std::string c = out_prefix + ".extremal.csv";
  write_text_file(c, ridout_extremal_csv(res));
  files.paths.push_back(c);
  return files;
}

}  // namespace fareytower
