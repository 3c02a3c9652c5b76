#pragma once

// Limiting profile integrals for genus-one pairings: Monte Carlo over the
// hypercube [0, 2(l-2)]^{l-2}, one coordinate per non-root quotient vertex,
// with the wrapped metric |x|_L = min(|x| mod L, L - |x| mod L), L = 2(l-2).
// Each simple quotient edge contributes an indicator that its endpoints are
// within distance 1; loops are vacuous.  I = (volume) * P(all indicators).

#include <cmath>
#include <cstdint>

#include "bandrmt/counting.hpp"
#include "bandrmt/rng.hpp"

namespace bandrmt {

struct IntegralEstimate {
  double value = 0;
  double stderr_ = 0;
  std::uint64_t samples = 0;
  bool exact = false;
};

// I for the (unique) genus-one pairing at l = 2 is exactly 1 (empty product).
inline IntegralEstimate integral_I(const PairPartition& p, std::uint64_t samples,
                                   std::uint64_t seed = kDefaultSeed, int root = -1) {
  auto g = genus(p);
  if (g.genus != 1) throw std::domain_error("integral_I: genus-one pairings only");
  const int l = p.ell;
  if (l == 2) return {1.0, 0.0, 0, true};

  auto s = underlying_simple(build_quotient(p));
  if (root < 0) root = 0;  // vertex 0 carries the smallest key
  if (root >= s.n) throw std::invalid_argument("integral_I: bad root");
  const double L = 2.0 * (l - 2);
  // coordinates for non-root vertices
  std::vector<int> coord(s.n, -1);
  int dim = 0;
  for (int v = 0; v < s.n; ++v)
    if (v != root) coord[v] = dim++;
  // dedup simple edges, skip loops
  struct Pair {
    int cu, cv;  // coordinate indices; -1 = root (pinned at 0)
  };
  std::vector<Pair> cons;
  for (auto& e : s.edges) {
    if (e.u == e.v) continue;
    cons.push_back({coord[e.u], coord[e.v]});
  }
  auto wrapdist = [L](double x) {
    x = std::fabs(std::fmod(x, L));
    return std::min(x, L - x);
  };
  RandomStream rs(seed, 0);
  std::uint64_t hits = 0;
  std::vector<double> t(dim);
  for (std::uint64_t n = 0; n < samples; ++n) {
    for (int d = 0; d < dim; ++d) t[d] = L * rs.uniform();
    bool ok = true;
    for (auto& c : cons) {
      double a = c.cu < 0 ? 0.0 : t[c.cu];
      double b = c.cv < 0 ? 0.0 : t[c.cv];
      if (wrapdist(a - b) > 1.0) {
        ok = false;
        break;
      }
    }
    hits += ok;
  }
  double vol = std::pow(L, dim);
  double ph = double(hits) / double(samples);
  IntegralEstimate out;
  out.value = vol * ph;
  out.stderr_ = vol * std::sqrt(ph * (1.0 - ph) / double(samples));
  out.samples = samples;
  return out;
}

}  // namespace bandrmt
