#pragma once

// Output plumbing shared by the CLI and tests: CSV with pinned formatting,
// JSON run manifests, and the textual measure mini-language.

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandrmt/measures.hpp"

namespace bandrmt {

// Plain nlohmann::json keeps object keys sorted, which is what we want for
// diff-friendly manifests.
using json = nlohmann::json;

// %.17g: shortest round-trippable for doubles. '.' decimal point, LF rows.
inline std::string fmt_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct CsvWriter {
  std::ostream& os;
  explicit CsvWriter(std::ostream& s, const std::vector<std::string>& header) : os(s) {
    if (header.empty()) throw std::invalid_argument("csv: header required");
    for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  }
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_num(const std::string& s) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("measure spec: bad number '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("measure spec: bad number '" + s + "'");
  return v;
}

// Grammar:
//   semicircle:SIGMA
//   atoms:X=W,X=W,...         weights must be nonnegative and sum to 1
//   rademacher                (= atoms:-1=0.5,1=0.5)
//   delta:X                   single unit atom
inline Measure parse_measure(const std::string& spec) {
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "semicircle") {
    if (rest.empty()) throw std::invalid_argument("semicircle: expected sigma");
    return semicircle_measure(parse_num(rest));
  }
  if (head == "rademacher") {
    if (!rest.empty()) throw std::invalid_argument("rademacher takes no parameters");
    return rademacher_measure();
  }
  if (head == "delta") {
    if (rest.empty()) throw std::invalid_argument("delta: expected location");
    return atomic_measure({{parse_num(rest), 1.0}});
  }
  if (head == "atoms") {
    std::vector<Atom> atoms;
    for (const auto& part : split(rest, ',')) {
      auto eq = part.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("atoms: expected loc=weight, got '" + part + "'");
      atoms.push_back({parse_num(part.substr(0, eq)), parse_num(part.substr(eq + 1))});
    }
    return atomic_measure(atoms);
  }
  throw std::invalid_argument("unknown measure '" + head + "'");
}

// wigner-nu:BETA,SIGMA2,S2,ALPHA (or the shorthands wigner-nu:gue / wigner-nu:goe)
inline WignerMomentParams parse_wigner_params(const std::string& spec) {
  auto colon = spec.find(':');
  if (spec.substr(0, colon) != "wigner-nu" || colon == std::string::npos)
    throw std::invalid_argument("expected wigner-nu:...");
  std::string rest = spec.substr(colon + 1);
  if (rest == "gue") return gue_params(1.0);
  if (rest == "goe") return goe_params(1.0);
  auto parts = split(rest, ',');
  if (parts.size() != 4)
    throw std::invalid_argument("wigner-nu: expected beta,sigma2,s2,alpha");
  WignerMomentParams p;
  p.beta = parse_num(parts[0]);
  p.sigma2 = parse_num(parts[1]);
  p.s2 = parse_num(parts[2]);
  p.alpha = parse_num(parts[3]);
  return p;
}

// ---- manifests ----------------------------------------------------------
//
// Every CLI run can write a JSON manifest recording the resolved inputs; a
// stored manifest can be replayed and must reproduce the outputs bit for
// bit.  "timestamp" is informational and excluded from equality.

inline std::string iso_timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

inline json manifest_skeleton(const std::string& subcommand) {
  json m;
  m["tool"] = "bandrmt";
  m["version"] = "0.1.0";
  m["subcommand"] = subcommand;
  m["timestamp"] = iso_timestamp();
  return m;
}

inline bool manifest_equal(json a, json b) {
  a.erase("timestamp");
  b.erase("timestamp");
  return a == b;
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << body;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace bandrmt
