// bandcli: command-line surface over the bandrmt headers.
//
// Subcommands: partitions | moments | limit | simulate | convolve | typeb.
// Every run writes a JSON manifest echoing the fully-resolved configuration;
// `bandcli --manifest FILE` replays a stored manifest and reproduces the
// output files bit for bit (the manifest timestamp is informational).
//
// Exit codes: 0 success, 1 usage/parse, 2 enumeration cap, 3 resource,
// 4 numeric/solver/IO, 5 convergence (with the failing points listed).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bandrmt/convolve.hpp"
#include "bandrmt/counting.hpp"
#include "bandrmt/errors.hpp"
#include "bandrmt/integrals.hpp"
#include "bandrmt/io.hpp"
#include "bandrmt/measures.hpp"
#include "bandrmt/moments.hpp"
#include "bandrmt/pairings.hpp"
#include "bandrmt/quotient.hpp"
#include "bandrmt/simulate.hpp"

namespace {

using bandrmt::json;

std::string partition_str(const bandrmt::PairPartition& p) {
  std::ostringstream ss;
  for (auto& [a, b] : p.blocks) ss << '(' << a << ' ' << b << ')';
  return ss.str();
}

void write_manifest(const std::string& out, const std::string& sub, const json& config,
                    const json& results) {
  json m = bandrmt::manifest_skeleton(sub);
  m["config"] = config;
  if (!results.is_null()) m["results"] = results;
  bandrmt::write_text_file(out + ".manifest.json", m.dump(2) + "\n");
}

void note_outputs(const std::vector<std::string>& paths) {
  std::cout << "wrote:";
  for (auto& p : paths) std::cout << ' ' << p;
  std::cout << "\n";
}

// ---- partitions ----------------------------------------------------------

struct PartitionsCfg {
  int ell = 0;
  int genus = -1;  // -1: no filter
  bool noncrossing = false;
  bool emit_graphs = false;
  std::string out = "partitions";
  std::string format = "csv";
};

json to_json(const PartitionsCfg& c) {
  return {{"ell", c.ell},         {"genus", c.genus},
          {"noncrossing", c.noncrossing}, {"emit_graphs", c.emit_graphs},
          {"out", c.out},         {"format", c.format}};
}

PartitionsCfg partitions_from_json(const json& j) {
  PartitionsCfg c;
  c.ell = j.at("ell").get<int>();
  c.genus = j.at("genus").get<int>();
  c.noncrossing = j.at("noncrossing").get<bool>();
  c.emit_graphs = j.at("emit_graphs").get<bool>();
  c.out = j.at("out").get<std::string>();
  c.format = j.at("format").get<std::string>();
  return c;
}

int run_partitions(const PartitionsCfg& c) {
  if (c.ell < 1) throw std::invalid_argument("partitions: --ell must be >= 1");
  std::ostringstream table, graphs;
  json rows = json::array();
  bandrmt::CsvWriter* csv = nullptr;
  bandrmt::CsvWriter writer(table,
                            {"partition", "cycle_count", "genus", "noncrossing", "double_tree"});
  if (c.format == "csv") csv = &writer;
  long long kept = 0;
  bandrmt::for_each_pair_partition(c.ell, [&](const bandrmt::PairPartition& p) {
    auto prof = bandrmt::genus(p);
    if (c.genus >= 0 && prof.genus != c.genus) return;
    bool nc = bandrmt::is_noncrossing(p);
    if (c.noncrossing && !nc) return;
    auto q = bandrmt::build_quotient(p);
    bool dt = bandrmt::is_double_tree(q);
    std::string ps = partition_str(p);
    if (csv) {
      csv->row({ps, std::to_string(prof.cycle_count), std::to_string(prof.genus),
                std::to_string(nc ? 1 : 0), std::to_string(dt ? 1 : 0)});
    } else {
      rows.push_back({{"partition", ps},
                      {"cycle_count", prof.cycle_count},
                      {"genus", prof.genus},
                      {"noncrossing", nc},
                      {"double_tree", dt}});
    }
    if (c.emit_graphs) graphs << "# " << ps << "\n" << bandrmt::emit_edges(bandrmt::underlying_simple(q));
    ++kept;
  });
  std::vector<std::string> paths;
  if (c.format == "csv") {
    bandrmt::write_text_file(c.out + ".csv", table.str());
    paths.push_back(c.out + ".csv");
  } else {
    bandrmt::write_text_file(c.out + ".json", json{{"rows", rows}}.dump(2) + "\n");
    paths.push_back(c.out + ".json");
  }
  if (c.emit_graphs) {
    bandrmt::write_text_file(c.out + "_graphs.txt", graphs.str());
    paths.push_back(c.out + "_graphs.txt");
  }
  write_manifest(c.out, "partitions", to_json(c), json{{"rows", kept}});
  paths.push_back(c.out + ".manifest.json");
  std::cout << "partitions: ell=" << c.ell << " rows=" << kept << "\n";
  note_outputs(paths);
  return 0;
}

// ---- moments -------------------------------------------------------------

struct MomentsCfg {
  std::vector<int> ells;
  long long N = 0, b = 0;
  std::string mode = "periodic";
  double sigma2 = 1.0;
  std::string out = "moments";
  std::string format = "csv";
};

json to_json(const MomentsCfg& c) {
  return {{"ells", c.ells}, {"N", c.N},     {"b", c.b},
          {"mode", c.mode}, {"sigma2", c.sigma2}, {"out", c.out}, {"format", c.format}};
}

MomentsCfg moments_from_json(const json& j) {
  MomentsCfg c;
  c.ells = j.at("ells").get<std::vector<int>>();
  c.N = j.at("N").get<long long>();
  c.b = j.at("b").get<long long>();
  c.mode = j.at("mode").get<std::string>();
  c.sigma2 = j.at("sigma2").get<double>();
  c.out = j.at("out").get<std::string>();
  c.format = j.at("format").get<std::string>();
  return c;
}

bandrmt::BandMode parse_mode(const std::string& s) {
  if (s == "periodic") return bandrmt::BandMode::periodic;
  if (s == "regular") return bandrmt::BandMode::regular;
  throw std::invalid_argument("--mode must be periodic or regular");
}

int run_moments(const MomentsCfg& c) {
  if (c.ells.empty()) throw std::invalid_argument("moments: at least one --ell required");
  for (int l : c.ells)
    if (l < 1) throw std::invalid_argument("moments: --ell must be >= 1");
  if (c.N < 1 || c.b < 0) throw std::invalid_argument("moments: need --N >= 1 and --b >= 0");
  bandrmt::BandGeometry g{c.N, c.b, parse_mode(c.mode)};
  std::ostringstream table;
  bandrmt::CsvWriter csv(table,
                         {"ell", "N", "b", "mode", "sigma2", "exact", "catalan_term", "correction"});
  json rows = json::array();
  for (int l : c.ells) {
    auto m = bandrmt::exact_trace_moment(l, g, c.sigma2);
    csv.row({std::to_string(l), std::to_string(c.N), std::to_string(c.b), c.mode,
             bandrmt::fmt_g17(c.sigma2), bandrmt::fmt_g17(m.exact()),
             bandrmt::fmt_g17(m.catalan_term()), bandrmt::fmt_g17(m.correction())});
    rows.push_back({{"ell", l},
                    {"N", c.N},
                    {"b", c.b},
                    {"mode", c.mode},
                    {"sigma2", c.sigma2},
                    {"exact", m.exact()},
                    {"catalan_term", m.catalan_term()},
                    {"correction", m.correction()}});
    std::cout << "ell=" << l << " exact=" << bandrmt::fmt_g17(m.exact())
              << " catalan=" << bandrmt::fmt_g17(m.catalan_term())
              << " correction=" << bandrmt::fmt_g17(m.correction()) << "\n";
  }
  std::vector<std::string> paths;
  if (c.format == "csv") {
    bandrmt::write_text_file(c.out + ".csv", table.str());
    paths.push_back(c.out + ".csv");
  } else {
    bandrmt::write_text_file(c.out + ".json", json{{"rows", rows}}.dump(2) + "\n");
    paths.push_back(c.out + ".json");
  }
  write_manifest(c.out, "moments", to_json(c), json());
  paths.push_back(c.out + ".manifest.json");
  note_outputs(paths);
  return 0;
}

// ---- limit ---------------------------------------------------------------

struct LimitCfg {
  int ell = 0;
  double c = 1.0, sigma2 = 1.0;
  std::uint64_t samples = 1000000, seed = bandrmt::kDefaultSeed;
  bool per_partition = false;
  std::string out = "limit";
};

json to_json(const LimitCfg& c) {
  return {{"ell", c.ell},       {"c", c.c},
          {"sigma2", c.sigma2}, {"samples", c.samples},
          {"seed", c.seed},     {"per_partition", c.per_partition},
          {"out", c.out}};
}

LimitCfg limit_from_json(const json& j) {
  LimitCfg c;
  c.ell = j.at("ell").get<int>();
  c.c = j.at("c").get<double>();
  c.sigma2 = j.at("sigma2").get<double>();
  c.samples = j.at("samples").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.per_partition = j.at("per_partition").get<bool>();
  c.out = j.at("out").get<std::string>();
  return c;
}

int run_limit(const LimitCfg& c) {
  if (c.ell < 1) throw std::invalid_argument("limit: --ell must be >= 1");
  auto lim = bandrmt::infinitesimal_correction_limit(c.ell, c.c, c.sigma2, c.samples, c.seed);
  std::ostringstream table;
  bandrmt::CsvWriter csv(table,
                         {"ell", "c", "sigma2", "samples", "value", "stderr", "genus_one_count"});
  csv.row({std::to_string(c.ell), bandrmt::fmt_g17(c.c), bandrmt::fmt_g17(c.sigma2),
           std::to_string(c.samples), bandrmt::fmt_g17(lim.value), bandrmt::fmt_g17(lim.stderr_),
           std::to_string(lim.terms.size())});
  std::vector<std::string> paths;
  bandrmt::write_text_file(c.out + ".csv", table.str());
  paths.push_back(c.out + ".csv");
  if (c.per_partition) {
    double pref = std::pow(c.sigma2, c.ell) / (std::pow(2.0, c.ell) * c.c * c.c);
    std::ostringstream tt;
    bandrmt::CsvWriter tcsv(tt, {"partition", "integral", "integral_stderr", "contribution"});
    for (auto& t : lim.terms)
      tcsv.row({partition_str(t.pi), bandrmt::fmt_g17(t.est.value),
                bandrmt::fmt_g17(t.est.stderr_), bandrmt::fmt_g17(pref * t.est.value)});
    bandrmt::write_text_file(c.out + "_terms.csv", tt.str());
    paths.push_back(c.out + "_terms.csv");
  }
  write_manifest(c.out, "limit", to_json(c),
                 json{{"value", lim.value},
                      {"stderr", lim.stderr_},
                      {"genus_one_count", lim.terms.size()}});
  paths.push_back(c.out + ".manifest.json");
  std::cout << "m_" << 2 * c.ell << "(sigma2=" << c.sigma2 << ", c=" << c.c
            << ") = " << bandrmt::fmt_g17(lim.value) << " +- " << bandrmt::fmt_g17(lim.stderr_)
            << "  (genus-one pairings: " << lim.terms.size() << ")\n";
  note_outputs(paths);
  return 0;
}

// ---- simulate ------------------------------------------------------------

struct SimulateCfg {
  long long N = 1296, b = -1;  // b < 0: dense (band covers the whole matrix)
  double sigma2 = 1.0;
  std::vector<double> theta, delocalized;
  int kind = 1, reps = 100, threads = 0, bins = 40, esd_powers = 0;
  double hist_lo = -4.0, hist_hi = 4.0;
  std::uint64_t seed = bandrmt::kDefaultSeed;
  std::string out = "simulate";
};

json to_json(const SimulateCfg& c) {
  return {{"N", c.N},
          {"b", c.b},
          {"sigma2", c.sigma2},
          {"theta", c.theta},
          {"delocalized", c.delocalized},
          {"kind", c.kind},
          {"reps", c.reps},
          {"threads", c.threads},
          {"bins", c.bins},
          {"esd_powers", c.esd_powers},
          {"hist_lo", c.hist_lo},
          {"hist_hi", c.hist_hi},
          {"seed", c.seed},
          {"out", c.out}};
}

SimulateCfg simulate_from_json(const json& j) {
  SimulateCfg c;
  c.N = j.at("N").get<long long>();
  c.b = j.at("b").get<long long>();
  c.sigma2 = j.at("sigma2").get<double>();
  c.theta = j.at("theta").get<std::vector<double>>();
  c.delocalized = j.at("delocalized").get<std::vector<double>>();
  c.kind = j.at("kind").get<int>();
  c.reps = j.at("reps").get<int>();
  c.threads = j.at("threads").get<int>();
  c.bins = j.at("bins").get<int>();
  c.esd_powers = j.at("esd_powers").get<int>();
  c.hist_lo = j.at("hist_lo").get<double>();
  c.hist_hi = j.at("hist_hi").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.out = j.at("out").get<std::string>();
  return c;
}

int run_simulate(const SimulateCfg& c) {
  if (c.N < 1 || c.reps < 1) throw std::invalid_argument("simulate: need --N >= 1, --reps >= 1");
  bandrmt::ExperimentSpec es;
  es.band = {c.N, c.b < 0 ? c.N : c.b, c.sigma2};
  es.pert.localized = c.theta;
  es.pert.delocalized = c.delocalized;
  es.kind = c.kind;
  es.reps = c.reps;
  es.seed = c.seed;
  es.esd_max_power = c.esd_powers;
  es.threads = c.threads > 0 ? c.threads
                             : std::max(1u, std::thread::hardware_concurrency());
  // rough wall-clock estimate from the eigensolver's N^3 scaling
  double est_s = c.reps * 0.04 * std::pow(double(c.N) / 500.0, 3.0) / es.threads;
  if (est_s > 60)
    std::cerr << "warning: estimated runtime ~" << int(est_s / 60 + 1)
              << " min (N=" << c.N << ", reps=" << c.reps << ")\n";
  auto s = bandrmt::run_experiment(es);

  std::ostringstream per;
  bandrmt::CsvWriter pcsv(per, {"rep", "lambda1", "F"});
  for (int r = 0; r < c.reps; ++r)
    pcsv.row({std::to_string(r), bandrmt::fmt_g17(s.lambda1[r]),
              s.has_f ? bandrmt::fmt_g17(s.fstat[r]) : "nan"});
  std::vector<std::string> paths;
  bandrmt::write_text_file(c.out + ".csv", per.str());
  paths.push_back(c.out + ".csv");

  const std::vector<double>& hsamples = s.has_f ? s.fstat : s.lambda1;
  double hlo = c.hist_lo, hhi = c.hist_hi;
  if (!s.has_f) {  // no natural normal scale: span the observed range
    auto [mn, mx] = std::minmax_element(hsamples.begin(), hsamples.end());
    hlo = *mn - 1e-9;
    hhi = *mx + 1e-9;
  }
  std::ostringstream hist;
  bandrmt::CsvWriter hcsv(hist, {"bin_lo", "bin_hi", "count", "normal_ref"});
  for (auto& bin : bandrmt::histogram(hsamples, hlo, hhi, c.bins))
    hcsv.row({bandrmt::fmt_g17(bin.lo), bandrmt::fmt_g17(bin.hi), std::to_string(bin.count),
              bandrmt::fmt_g17(bin.normal_ref)});
  bandrmt::write_text_file(c.out + "_hist.csv", hist.str());
  paths.push_back(c.out + "_hist.csv");

  if (c.esd_powers > 0) {
    std::ostringstream esd;
    std::vector<std::string> hdr{"rep"};
    for (int k = 1; k <= c.esd_powers; ++k) hdr.push_back("m" + std::to_string(k));
    bandrmt::CsvWriter ecsv(esd, hdr);
    for (int r = 0; r < c.reps; ++r) {
      std::vector<std::string> cells{std::to_string(r)};
      for (double v : s.esd[r]) cells.push_back(bandrmt::fmt_g17(v));
      ecsv.row(cells);
    }
    bandrmt::write_text_file(c.out + "_esd.csv", esd.str());
    paths.push_back(c.out + "_esd.csv");
  }

  json results{{"lambda1_mean", s.lambda1_mean}, {"lambda1_var", s.lambda1_var}};
  if (s.has_f) {
    results["f_mean"] = s.f_mean;
    results["f_var"] = s.f_var;
    results["f_ks"] = s.f_ks;
  }
  write_manifest(c.out, "simulate", to_json(c), results);
  paths.push_back(c.out + ".manifest.json");
  std::cout << "lambda1: mean=" << bandrmt::fmt_g17(s.lambda1_mean)
            << " var=" << bandrmt::fmt_g17(s.lambda1_var) << "\n";
  if (s.has_f)
    std::cout << "F: mean=" << bandrmt::fmt_g17(s.f_mean) << " var=" << bandrmt::fmt_g17(s.f_var)
              << " ks=" << bandrmt::fmt_g17(s.f_ks) << "\n";
  note_outputs(paths);
  return 0;
}

// ---- convolve ------------------------------------------------------------

struct ConvolveCfg {
  std::string a, b;
  double grid_lo = -4.0, grid_hi = 4.0;
  int grid_n = 201;
  std::vector<double> etas;
  std::string out = "convolve";
};

json to_json(const ConvolveCfg& c) {
  return {{"a", c.a},           {"b", c.b},       {"grid_lo", c.grid_lo},
          {"grid_hi", c.grid_hi}, {"grid_n", c.grid_n}, {"etas", c.etas},
          {"out", c.out}};
}

ConvolveCfg convolve_from_json(const json& j) {
  ConvolveCfg c;
  c.a = j.at("a").get<std::string>();
  c.b = j.at("b").get<std::string>();
  c.grid_lo = j.at("grid_lo").get<double>();
  c.grid_hi = j.at("grid_hi").get<double>();
  c.grid_n = j.at("grid_n").get<int>();
  c.etas = j.at("etas").get<std::vector<double>>();
  c.out = j.at("out").get<std::string>();
  return c;
}

bandrmt::GridSpec make_grid(double lo, double hi, int n, const std::vector<double>& etas) {
  bandrmt::GridSpec g;
  g.lo = lo;
  g.hi = hi;
  g.n = n;
  if (!(hi > lo) || n < 2) throw std::invalid_argument("bad grid: need hi > lo and n >= 2");
  if (!etas.empty()) {
    for (size_t i = 0; i < etas.size(); ++i)
      if (etas[i] <= 0 || (i && etas[i] >= etas[i - 1]))
        throw std::invalid_argument("--eta ladder must be positive and strictly descending");
    g.etas = etas;
  }
  return g;
}

json atoms_json(const std::vector<bandrmt::Atom>& atoms) {
  json a = json::array();
  for (auto& at : atoms) a.push_back({{"loc", at.x}, {"weight", at.w}});
  return a;
}

std::string density_csv(const std::vector<bandrmt::DensityPoint>& pts) {
  std::ostringstream os;
  bandrmt::CsvWriter csv(os, {"x", "density", "err"});
  for (auto& p : pts)
    csv.row({bandrmt::fmt_g17(p.x), bandrmt::fmt_g17(p.density), bandrmt::fmt_g17(p.err)});
  return os.str();
}

int report_unconverged(const std::vector<bandrmt::DensityPoint>& pts) {
  std::vector<double> bad;
  for (auto& p : pts)
    if (!p.converged) bad.push_back(p.x);
  if (bad.empty()) return 0;
  std::cerr << "error: subordination failed to converge at " << bad.size() << " point(s):";
  for (double x : bad) std::cerr << ' ' << bandrmt::fmt_g17(x);
  std::cerr << "\n";
  return 5;
}

int run_convolve(const ConvolveCfg& c) {
  auto A = bandrmt::parse_measure(c.a);
  auto B = bandrmt::parse_measure(c.b);
  auto grid = make_grid(c.grid_lo, c.grid_hi, c.grid_n, c.etas);
  auto res = bandrmt::free_convolve(A, B, grid);
  std::vector<std::string> paths;
  bandrmt::write_text_file(c.out + ".csv", density_csv(res.density));
  paths.push_back(c.out + ".csv");
  json aj{{"atoms", atoms_json(res.atoms)},
          {"mass", res.mass},
          {"max_relation_residual", res.max_relation_residual},
          {"max_step", res.max_step}};
  bandrmt::write_text_file(c.out + "_atoms.json", aj.dump(2) + "\n");
  paths.push_back(c.out + "_atoms.json");
  write_manifest(c.out, "convolve", to_json(c), aj);
  paths.push_back(c.out + ".manifest.json");
  std::cout << "atoms: " << res.atoms.size() << "  mass=" << bandrmt::fmt_g17(res.mass)
            << "  max_residual=" << bandrmt::fmt_g17(res.max_relation_residual) << "\n";
  note_outputs(paths);
  return report_unconverged(res.density);
}

// ---- typeb ---------------------------------------------------------------

struct TypebCfg {
  double sigma2 = 1.0;
  std::vector<double> theta, delocalized;
  std::string wigner;  // optional base nu, e.g. wigner-nu:goe
  double grid_lo = -4.0, grid_hi = 4.0;
  int grid_n = 201;
  std::vector<double> etas;
  std::string out = "typeb";
};

json to_json(const TypebCfg& c) {
  return {{"sigma2", c.sigma2}, {"theta", c.theta},     {"delocalized", c.delocalized},
          {"wigner", c.wigner}, {"grid_lo", c.grid_lo}, {"grid_hi", c.grid_hi},
          {"grid_n", c.grid_n}, {"etas", c.etas},       {"out", c.out}};
}

TypebCfg typeb_from_json(const json& j) {
  TypebCfg c;
  c.sigma2 = j.at("sigma2").get<double>();
  c.theta = j.at("theta").get<std::vector<double>>();
  c.delocalized = j.at("delocalized").get<std::vector<double>>();
  c.wigner = j.at("wigner").get<std::string>();
  c.grid_lo = j.at("grid_lo").get<double>();
  c.grid_hi = j.at("grid_hi").get<double>();
  c.grid_n = j.at("grid_n").get<int>();
  c.etas = j.at("etas").get<std::vector<double>>();
  c.out = j.at("out").get<std::string>();
  return c;
}

int run_typeb(const TypebCfg& c) {
  if (c.sigma2 <= 0) throw std::invalid_argument("typeb: --sigma2 must be positive");
  bandrmt::SignedMeasure base;
  if (!c.wigner.empty()) base = bandrmt::wigner_nu(bandrmt::parse_wigner_params(c.wigner));
  auto grid = make_grid(c.grid_lo, c.grid_hi, c.grid_n, c.etas);
  auto res = bandrmt::deformed_typeB(std::sqrt(c.sigma2), base, c.theta, c.delocalized, grid);
  std::vector<std::string> paths;
  bandrmt::write_text_file(c.out + ".csv", density_csv(res.numeric.nu_density));
  paths.push_back(c.out + ".csv");
  bandrmt::write_text_file(c.out + "_base.csv", density_csv(res.numeric.base.density));
  paths.push_back(c.out + "_base.csv");
  json aj{{"atoms", atoms_json(res.numeric.nu_atoms)},
          {"predicted_atoms", atoms_json(res.predicted_atoms)},
          {"nu_mass", res.numeric.nu_mass},
          {"base_mass", res.numeric.base.mass},
          {"max_relation_residual", res.numeric.base.max_relation_residual}};
  bandrmt::write_text_file(c.out + "_atoms.json", aj.dump(2) + "\n");
  paths.push_back(c.out + "_atoms.json");
  write_manifest(c.out, "typeb", to_json(c), aj);
  paths.push_back(c.out + ".manifest.json");
  std::cout << "nu atoms:";
  for (auto& a : res.numeric.nu_atoms)
    std::cout << " (" << bandrmt::fmt_g17(a.x) << ", " << bandrmt::fmt_g17(a.w) << ")";
  std::cout << "  nu_mass=" << bandrmt::fmt_g17(res.numeric.nu_mass) << "\n";
  note_outputs(paths);
  int rc = report_unconverged(res.numeric.base.density);
  if (!rc) rc = report_unconverged(res.numeric.nu_density);
  return rc;
}

// ---- manifest replay -----------------------------------------------------

int replay(const std::string& path) {
  json m = json::parse(bandrmt::read_text_file(path));
  std::string sub = m.at("subcommand").get<std::string>();
  const json& cfg = m.at("config");
  if (sub == "partitions") return run_partitions(partitions_from_json(cfg));
  if (sub == "moments") return run_moments(moments_from_json(cfg));
  if (sub == "limit") return run_limit(limit_from_json(cfg));
  if (sub == "simulate") return run_simulate(simulate_from_json(cfg));
  if (sub == "convolve") return run_convolve(convolve_from_json(cfg));
  if (sub == "typeb") return run_typeb(typeb_from_json(cfg));
  throw std::invalid_argument("manifest: unknown subcommand '" + sub + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"banded GUE moments, infinitesimal corrections, free/type-B convolution, "
               "and extremal-eigenvalue Monte Carlo"};
  app.set_version_flag("--version", "bandrmt 0.1.0");
  app.require_subcommand(0, 1);
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "replay a stored run manifest");

  PartitionsCfg pc;
  auto* sp = app.add_subcommand("partitions", "enumerate pair partitions with genus data");
  sp->add_option("--ell", pc.ell, "half-length (blocks)")->required();
  sp->add_option("--genus", pc.genus, "keep only this genus");
  sp->add_flag("--noncrossing", pc.noncrossing, "keep only non-crossing partitions");
  sp->add_flag("--emit-graphs", pc.emit_graphs, "also write quotient-graph edge lists");
  sp->add_option("--out", pc.out, "output prefix");
  sp->add_option("--format", pc.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  MomentsCfg mc;
  auto* sm = app.add_subcommand("moments", "exact trace moments of the banded ensemble");
  sm->add_option("--ell", mc.ells, "half-order(s); repeatable")->required();
  sm->add_option("--N", mc.N, "matrix size")->required();
  sm->add_option("--b", mc.b, "band radius")->required();
  sm->add_option("--mode", mc.mode, "periodic | regular")
      ->check(CLI::IsMember({"periodic", "regular"}));
  sm->add_option("--sigma2", mc.sigma2, "entry variance");
  sm->add_option("--out", mc.out, "output prefix");
  sm->add_option("--format", mc.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  LimitCfg lc;
  auto* sl = app.add_subcommand("limit", "infinitesimal correction m_{2l}(sigma2, c)");
  sl->add_option("--ell", lc.ell, "half-order")->required();
  sl->add_option("--c", lc.c, "band scale b / sqrt(N)");
  sl->add_option("--sigma2", lc.sigma2, "entry variance");
  sl->add_option("--samples", lc.samples, "Monte Carlo samples per pairing");
  sl->add_option("--seed", lc.seed, "RNG seed");
  sl->add_flag("--per-partition", lc.per_partition, "write per-pairing contributions");
  sl->add_option("--out", lc.out, "output prefix");

  SimulateCfg sc;
  auto* ss = app.add_subcommand("simulate", "sample the (deformed) banded GUE and report F");
  ss->add_option("--N", sc.N, "matrix size");
  ss->add_option("--b", sc.b, "band radius; omit for the dense ensemble");
  ss->add_option("--sigma2", sc.sigma2, "entry variance");
  ss->add_option("--theta", sc.theta, "localized diagonal deformation(s); repeatable");
  ss->add_option("--delocalized", sc.delocalized, "delocalized deformation(s) theta/N; repeatable");
  ss->add_option("--kind", sc.kind, "F normalization: 1 = sqrt(xi), 2 = sqrt(N)")
      ->check(CLI::IsMember({1, 2}));
  ss->add_option("--reps", sc.reps, "independent realizations");
  ss->add_option("--seed", sc.seed, "RNG seed");
  ss->add_option("--threads", sc.threads, "worker threads (default: hardware)");
  ss->add_option("--bins", sc.bins, "histogram bins");
  ss->add_option("--hist-lo", sc.hist_lo, "histogram lower edge (F)");
  ss->add_option("--hist-hi", sc.hist_hi, "histogram upper edge (F)");
  ss->add_option("--esd-powers", sc.esd_powers, "also record (1/N) tr M^k for k <= this");
  ss->add_option("--out", sc.out, "output prefix");

  ConvolveCfg cc;
  auto* sv = app.add_subcommand("convolve", "free additive convolution by subordination");
  sv->add_option("a", cc.a, "first measure, e.g. semicircle:1")->required();
  sv->add_option("b", cc.b, "second measure, e.g. rademacher")->required();
  sv->add_option("--grid-lo", cc.grid_lo, "grid lower edge");
  sv->add_option("--grid-hi", cc.grid_hi, "grid upper edge");
  sv->add_option("--grid-n", cc.grid_n, "grid points");
  sv->add_option("--eta", cc.etas, "descending eta ladder; repeatable");
  sv->add_option("--out", cc.out, "output prefix");

  TypebCfg tc;
  auto* st = app.add_subcommand("typeb", "type-B free convolution for the deformed semicircle");
  st->add_option("--sigma2", tc.sigma2, "semicircle variance");
  st->add_option("--theta", tc.theta, "localized deformation(s); repeatable");
  st->add_option("--delocalized", tc.delocalized, "delocalized deformation(s); repeatable");
  st->add_option("--wigner", tc.wigner, "base nu spec, e.g. wigner-nu:goe");
  st->add_option("--grid-lo", tc.grid_lo, "grid lower edge");
  st->add_option("--grid-hi", tc.grid_hi, "grid upper edge");
  st->add_option("--grid-n", tc.grid_n, "grid points");
  st->add_option("--eta", tc.etas, "descending eta ladder; repeatable");
  st->add_option("--out", tc.out, "output prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (!manifest_path.empty()) return replay(manifest_path);
    if (sp->parsed()) return run_partitions(pc);
    if (sm->parsed()) return run_moments(mc);
    if (sl->parsed()) return run_limit(lc);
    if (ss->parsed()) return run_simulate(sc);
    if (sv->parsed()) return run_convolve(cc);
    if (st->parsed()) return run_typeb(tc);
    std::cerr << app.help();
    return 1;
  } catch (const bandrmt::cap_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const bandrmt::resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const bandrmt::solver_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const bandrmt::convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
