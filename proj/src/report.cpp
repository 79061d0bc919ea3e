#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "mcl/concentration.hpp"
#include "mcl/experiments.hpp"
#include "mcl/vc.hpp"
#include "mcl/version.hpp"

namespace mcl {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw Error(Errc::io, "CSV missing column '" + name + "'");
  }
  double num(std::size_t row, const std::string& name) const {
    return std::stod(rows[row][col(name)]);
  }
};

Csv read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open artifact '" + path.string() + "'");
  Csv csv;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (first) {
      csv.header = std::move(fields);
      first = false;
    } else {
      csv.rows.push_back(std::move(fields));
    }
  }
  if (csv.header.empty()) throw Error(Errc::io, "empty artifact '" + path.string() + "'");
  return csv;
}

struct Checker {
  std::ostream& out;
  int failures = 0;

  void check(bool ok, const std::string& what) {
    out << (ok ? "  [ok]   " : "  [FAIL] ") << what << "\n";
    if (!ok) ++failures;
  }
  void info(const std::string& what) { out << "  [info] " << what << "\n"; }
};

void report_curse(const json& meta, const Csv& csv, Checker& ck) {
  ck.out << "  d        n   mean_cost  fraction  speedup\n";
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-6s %-6s %-10.1f %-9.4f %.3f%s\n",
                  csv.rows[r][csv.col("d")].c_str(), csv.rows[r][csv.col("n")].c_str(),
                  csv.num(r, "mean_cost"), csv.num(r, "fraction_leaves_opened"),
                  csv.num(r, "speedup"), csv.num(r, "speedup") < 2.0 ? "   <-- speedup < 2" : "");
    ck.out << buf;
  }

  const auto checked = meta.at("counters").value("replay_checked", std::uint64_t{0});
  const auto failures = meta.at("counters").value("replay_failures", std::uint64_t{1});
  ck.check(failures == 0, "oracle replay: " + std::to_string(checked) + " queries checked, " +
                              std::to_string(failures) + " failures");

  bool in_range = true;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    if (csv.num(r, "fraction_leaves_opened") < 0.0 || csv.num(r, "fraction_leaves_opened") > 1.0 ||
        csv.num(r, "speedup") <= 0.0)
      in_range = false;
  }
  ck.check(in_range, "row invariants: fraction in [0,1], speedup > 0");

  // the dimensionality trend applies to fixed-n sweeps over increasing d
  const bool fixed_n = meta.at("config").value("n_rule", "fixed") == std::string("fixed");
  bool dims_increasing = true;
  for (std::size_t r = 1; r < csv.rows.size(); ++r)
    if (csv.num(r, "d") <= csv.num(r - 1, "d")) dims_increasing = false;
  if (fixed_n && dims_increasing && csv.rows.size() >= 2) {
    bool monotone = true;
    for (std::size_t r = 1; r < csv.rows.size(); ++r)
      if (csv.num(r, "fraction_leaves_opened") <= csv.num(r - 1, "fraction_leaves_opened"))
        monotone = false;
    ck.check(monotone, "fraction of leaves opened strictly increases with d");
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
      if (csv.num(r, "d") == 128.0 && csv.rows[r][csv.col("strategy")] == "vp") {
        ck.check(csv.num(r, "fraction_leaves_opened") > 0.5,
                 "fraction of leaves opened exceeds 0.5 at d=128");
        ck.check(csv.num(r, "speedup") < 2.0, "speedup over linear scan below 2x at d=128");
      }
    }
  }
}

void report_concentration(const json&, const Csv& csv, Checker& ck) {
  // regroup rows by (d, method)
  std::map<double, std::map<std::string, std::map<double, double>>> by_d;
  for (std::size_t r = 0; r < csv.rows.size(); ++r)
    by_d[csv.num(r, "d")][csv.rows[r][csv.col("method")]][csv.num(r, "eps")] =
        csv.num(r, "value");

  bool in_range = true;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const double v = csv.num(r, "value");
    if (v < 0.0 || v > 1.0) in_range = false;
  }
  ck.check(in_range, "alpha values in [0,1]");

  for (const auto& [d, methods] : by_d) {
    const auto exact_it = methods.find("exact_halfcube");
    const auto bound_it = methods.find("chernoff_okamoto");
    if (exact_it != methods.end() && bound_it != methods.end()) {
      bool dominated = true;
      for (const auto& [eps, v] : exact_it->second) {
        const auto b = bound_it->second.find(eps);
        if (b != bound_it->second.end() && v > b->second) dominated = false;
      }
      ck.check(dominated, "exact half-cube alpha <= Chernoff-Okamoto bound at every grid eps (d=" +
                              std::to_string(static_cast<int>(d)) + ")");
    }
    const auto emp_it = methods.find("empirical_lower");
    if (emp_it != methods.end()) {
      bool monotone = true;
      double prev = 2.0;
      for (const auto& [eps, v] : emp_it->second) {  // map: ascending eps
        if (v > prev + 1e-12) monotone = false;
        prev = v;
      }
      ck.check(monotone, "empirical lower bound non-increasing in eps (d=" +
                             std::to_string(static_cast<int>(d)) + ")");
    }
  }
}

void report_nn_radius(const json& meta, const Csv& csv, Checker& ck) {
  bool quantiles_ok = true, occupancy_ok = true;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    if (!(csv.num(r, "p10") <= csv.num(r, "median") && csv.num(r, "median") <= csv.num(r, "p90")))
      quantiles_ok = false;
    if (csv.num(r, "occupancy") < 1.0) occupancy_ok = false;
    char buf[200];
    std::snprintf(buf, sizeof buf, "  d=%-5s n=%-7s median=%.4f spread=%.4f occupancy=%.3f\n",
                  csv.rows[r][csv.col("d")].c_str(), csv.rows[r][csv.col("n")].c_str(),
                  csv.num(r, "median"), csv.num(r, "p90") - csv.num(r, "p10"),
                  csv.num(r, "occupancy"));
    ck.out << buf;
  }
  ck.check(quantiles_ok, "quantiles ordered p10 <= median <= p90");
  ck.check(occupancy_ok, "occupancy >= 1");

  const bool hamming = meta.at("config").value("domain", "") == std::string("hamming");
  if (hamming) {
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
      const auto d = static_cast<std::uint32_t>(csv.num(r, "d"));
      const auto n = static_cast<std::uint64_t>(csv.num(r, "n"));
      char buf[120];
      std::snprintf(buf, sizeof buf, "entropy oracle for d=%u, n=%llu: %.4f (measured %.4f)", d,
                    static_cast<unsigned long long>(n), nn_median_prediction(d, n),
                    csv.num(r, "median"));
      ck.info(buf);
    }
  }
  const bool growth_rule = meta.at("config").value("n_rule", "") == std::string("pow2_sqrt");
  if (growth_rule && csv.rows.size() >= 2) {
    bool med_up = true, spread_down = true;
    for (std::size_t r = 1; r < csv.rows.size(); ++r) {
      if (csv.num(r, "median") <= csv.num(r - 1, "median")) med_up = false;
      if (csv.num(r, "p90") - csv.num(r, "p10") >=
          csv.num(r - 1, "p90") - csv.num(r - 1, "p10"))
        spread_down = false;
    }
    ck.check(med_up, "median NN radius strictly increases with d");
    ck.check(spread_down, "NN radius spread (p90-p10) strictly decreases with d");
  }
}

void report_vc(const fs::path& dir, Checker& ck) {
  std::ifstream in(dir / "vc-report.json");
  if (!in) throw Error(Errc::io, "cannot open artifact 'vc-report.json'");
  json rep = json::parse(in);

  ck.check(rep.at("bounds").at("goldberg_jerrum").value("s3_t10", std::uint64_t{0}) ==
               goldberg_jerrum_bound(3, 10),
           "goldberg_jerrum_bound(3,10) == 144");
  ck.check(rep.at("bounds").at("bins_class").value("h8_p4", 0.0) == bins_class_bound(8, 4),
           "bins_class_bound(8,4) == 768");
  ck.check(rep.at("bounds").at("sample_size").value("n", std::uint64_t{0}) ==
               sample_size_bound(0.1, 0.05, 10),
           "sample_size_bound(0.1,0.05,10) reproduces");

  const auto& r1 = rep.at("classes").at("balls_r1");
  ck.check(r1.at("k2").value("shattered", false), "balls in R^1: 2-point witness found");
  ck.check(!r1.value("k3_found", true), "balls in R^1: no 3-point shattered set found");
  const auto& r2 = rep.at("classes").at("balls_r2");
  ck.check(r2.at("k3").value("shattered", false), "balls in R^2: 3-point witness found");
  ck.check(!r2.value("k4_found", true), "balls in R^2: no 4-point shattered set found");
  if (rep.at("classes").contains("intervals")) {
    const auto& iv = rep.at("classes").at("intervals");
    ck.check(iv.at("k2").value("shattered", false) && !iv.value("k3_found", true) &&
                 iv.value("k3_exhaustive", false),
             "intervals: 2-point witness found, 3-point shatter refuted exactly");
  }

  for (const auto& c : rep.at("log_bound_checks"))
    ck.check(!c.value("shattered_above_bound", true),
             "finite class log2 bound holds for " + c.value("class", std::string("?")));
}

}  // namespace

int report_dir(const std::string& dir_str, std::ostream& out) {
  const fs::path dir(dir_str);
  if (!fs::exists(dir / "metadata.json")) {
    out << "error: no metadata.json under '" << dir_str << "' (not an artifact directory)\n";
    return 2;
  }
  json meta;
  try {
    std::ifstream in(dir / "metadata.json");
    meta = json::parse(in);
  } catch (const std::exception& e) {
    out << "error: corrupt metadata.json: " << e.what() << "\n";
    return 2;
  }

  const std::string version = meta.value("mcl_version", "?");
  const std::string kind = meta.value("kind", "?");
  out << "experiment: " << kind << " (library " << version << ", seed "
      << meta.at("config").value("seed", std::uint64_t{0}) << ")\n";
  if (version != kVersion)
    out << "warning: artifact written by library " << version << ", this is " << kVersion
        << "\n";

  Checker ck{out};
  try {
    if (kind == "curse_sweep")
      report_curse(meta, read_csv(dir / "curse.csv"), ck);
    else if (kind == "concentration")
      report_concentration(meta, read_csv(dir / "alpha.csv"), ck);
    else if (kind == "nn_radius")
      report_nn_radius(meta, read_csv(dir / "nnradius.csv"), ck);
    else if (kind == "vc_demo")
      report_vc(dir, ck);
    else if (kind == "bench")
      ck.info("bench artifacts carry no assertions");
    else {
      out << "error: unknown experiment kind '" << kind << "'\n";
      return 2;
    }
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }

  out << (ck.failures == 0 ? "PASS" : "FAIL") << ": " << ck.failures << " failed checks\n";
  return ck.failures == 0 ? 0 : 1;
}

}  // namespace mcl
