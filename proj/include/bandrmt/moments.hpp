#pragma once

// Exact finite-N trace moments of periodically banded matrices via the genus
// expansion: E[Tr Xi^{2l}] = sigma^{2l} xi^{-l} sum_pi Q(pi), the sum over all
// pair partitions of 2l points, Q the admissible-labeling count of the
// quotient.  Also the infinitesimal (1/N) correction in the critical regime
// b = c sqrt(N) and its genus-one integral representation.

#include <cmath>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>

#include "bandrmt/counting.hpp"
#include "bandrmt/integrals.hpp"

namespace bandrmt {

using rational = boost::multiprecision::cpp_rational;

inline double to_double(const rational& r) { return r.convert_to<double>(); }

struct MomentResult {
  int ell = 0;
  BandGeometry geom;
  double sigma2 = 1;
  rational exact_norm;       // E[Tr Xi^{2l}] at sigma = 1, exact
  rational catalan_norm;     // N * Catalan(l)
  rational correction_norm;  // exact_norm - catalan_norm

  double sig_pow() const { return std::pow(sigma2, ell); }
  double exact() const { return to_double(exact_norm) * sig_pow(); }
  double catalan_term() const { return to_double(catalan_norm) * sig_pow(); }
  double correction() const { return to_double(correction_norm) * sig_pow(); }
};

inline MomentResult exact_trace_moment(int ell, const BandGeometry& g, double sigma2 = 1.0,
                                       int cap = kEnumerationCapDefault,
                                       std::uint64_t budget = 400000000ull) {
  if (g.N < 1 || g.b < 0) throw std::invalid_argument("exact_trace_moment: bad geometry");
  MomentResult r;
  r.ell = ell;
  r.geom = g;
  r.sigma2 = sigma2;
  bigint xi_l = 1;
  for (int i = 0; i < ell; ++i) xi_l *= band_width(g);
  bigint qsum = 0;
  for_each_pair_partition(
      ell, [&](const PairPartition& p) { qsum += count_admissible(p, g, budget).count; }, cap);
  r.exact_norm = rational(qsum, xi_l);
  r.catalan_norm = rational(bigint(g.N) * catalan(ell));
  r.correction_norm = r.exact_norm - r.catalan_norm;
  return r;
}

// Unbanded ensemble: E[Tr Xi^{2l}] / sigma^{2l} = sum_g eps_g(l) N^{1-2g}.
inline rational full_band_moment_norm(int ell, long long N, int cap = kEnumerationCapDefault) {
  auto census = genus_census(ell, cap);
  rational total = 0;
  for (int g = 0; g < (int)census.size(); ++g) {
    bigint npow = N;  // N^{1-2g} = N / N^{2g}
    bigint den = 1;
    for (int i = 0; i < 2 * g; ++i) den *= N;
    total += rational(census[g] * npow, den);
  }
  return total;
}

inline double full_band_moment(int ell, long long N, double sigma2 = 1.0,
                               int cap = kEnumerationCapDefault) {
  return to_double(full_band_moment_norm(ell, N, cap)) * std::pow(sigma2, ell);
}

// Band-genus sandwich on the correction Delta = E[Tr Xi^{2l}]/sigma^{2l} - N Cat(l):
//   (N / l^l) * S <= Delta <= N * S,  S = sum_{g>=1} eps_g(l) / xi^{2g},
// checked in exact rational arithmetic.
struct SandwichReport {
  rational lower, delta, upper;
  bool holds = false;
};

inline SandwichReport band_genus_sandwich(int ell, const BandGeometry& g,
                                          int cap = kEnumerationCapDefault) {
  SandwichReport rep;
  auto m = exact_trace_moment(ell, g, 1.0, cap);
  rep.delta = m.correction_norm;
  auto census = genus_census(ell, cap);
  rational S = 0;
  bigint xi = band_width(g);
  for (int gg = 1; gg < (int)census.size(); ++gg) {
    bigint den = 1;
    for (int i = 0; i < 2 * gg; ++i) den *= xi;
    S += rational(census[gg], den);
  }
  bigint lpow = 1;
  for (int i = 0; i < ell; ++i) lpow *= ell;
  rep.upper = rational(g.N) * S;
  rep.lower = rational(g.N) * S / rational(lpow);
  rep.holds = rep.lower <= rep.delta && rep.delta <= rep.upper;
  return rep;
}

// Infinitesimal correction in the critical regime b = c sqrt(N):
//   m_{2l}(sigma^2, c) = sigma^{2l} / (2^l c^2) * sum_{genus-one pi} I_pi.
struct LimitTerm {
  PairPartition pi;
  IntegralEstimate est;
};

struct LimitCorrection {
  int ell = 0;
  double c = 1, sigma2 = 1;
  double value = 0, stderr_ = 0;
  std::vector<LimitTerm> terms;
};

inline LimitCorrection infinitesimal_correction_limit(int ell, double c, double sigma2,
                                                      std::uint64_t samples,
                                                      std::uint64_t seed = kDefaultSeed,
                                                      int cap = kEnumerationCapDefault) {
  if (c <= 0) throw std::invalid_argument("infinitesimal_correction_limit: c > 0 required");
  LimitCorrection out;
  out.ell = ell;
  out.c = c;
  out.sigma2 = sigma2;
  double pref = std::pow(sigma2, ell) / (std::pow(2.0, ell) * c * c);
  double sum = 0, var = 0;
  std::uint64_t idx = 0;
  for_each_pair_partition(
      ell,
      [&](const PairPartition& p) {
        if (genus(p).genus != 1) return;
        auto est = integral_I(p, samples, seed + idx, -1);
        ++idx;
        sum += est.value;
        var += est.stderr_ * est.stderr_;
        out.terms.push_back({p, est});
      },
      cap);
  out.value = pref * sum;
  out.stderr_ = pref * std::sqrt(var);
  return out;
}

// Correction table across (N, b) pairs with a crude trend classification.
enum class Regime { vanishing, critical, growing };

struct RegimeRow {
  long long N, b;
  double correction;
};

struct RegimeReport {
  std::vector<RegimeRow> rows;
  Regime regime = Regime::critical;
  double critical_c = 0;       // b / sqrt(N) at the last row
  double critical_limit = 0;   // m_{2l}(sigma2, critical_c), if computed
  double critical_stderr = 0;
};

inline RegimeReport regime_classify(int ell, const std::vector<std::pair<long long, long long>>& pairs,
                                    double sigma2 = 1.0, std::uint64_t samples = 200000,
                                    std::uint64_t seed = kDefaultSeed) {
  if (pairs.size() < 2) throw std::invalid_argument("regime_classify: need at least two (N,b) pairs");
  RegimeReport rep;
  for (auto& [N, b] : pairs) {
    auto m = exact_trace_moment(ell, BandGeometry{N, b, BandMode::periodic}, sigma2);
    rep.rows.push_back({N, b, m.correction()});
  }
  double logratio = 0;
  int nr = 0;
  for (size_t i = 1; i < rep.rows.size(); ++i) {
    double a = std::fabs(rep.rows[i - 1].correction), bb = std::fabs(rep.rows[i].correction);
    if (a > 0 && bb > 0) {
      logratio += std::log(bb / a);
      ++nr;
    }
  }
  double mean_ratio = nr ? std::exp(logratio / nr) : 1.0;
  if (mean_ratio < 0.75)
    rep.regime = Regime::vanishing;
  else if (mean_ratio > 4.0 / 3.0)
    rep.regime = Regime::growing;
  else
    rep.regime = Regime::critical;
  auto& last = rep.rows.back();
  rep.critical_c = double(last.b) / std::sqrt(double(last.N));
  if (rep.regime == Regime::critical && ell >= 2) {
    auto lim = infinitesimal_correction_limit(ell, rep.critical_c, sigma2, samples, seed);
    rep.critical_limit = lim.value;
    rep.critical_stderr = lim.stderr_;
  }
  return rep;
}

// Mixed-color trace moments: E[Tr Xi^(c_1) ... Xi^(c_m)] for independent
// banded ensembles indexed by color.  A pairing contributes only when paired
// positions share a color; each block (j,k) adds one band constraint (the
// block color's geometry) on the quotient edge out of position j.  All colors
// must share N.  Odd-length words and odd color multiplicities vanish.
struct MixedMomentResult {
  rational norm;  // value at sigma = 1
  double value = 0;
  int contributing = 0;  // pairings that matched colors
};

inline MixedMomentResult mixed_trace_moment(const std::vector<int>& colors,
                                            const std::vector<BandGeometry>& geoms,
                                            double sigma2 = 1.0,
                                            int cap = kEnumerationCapDefault,
                                            std::uint64_t budget = 400000000ull) {
  MixedMomentResult out;
  out.norm = 0;
  const int m = (int)colors.size();
  if (m == 0) throw std::invalid_argument("mixed_trace_moment: empty word");
  for (int c : colors)
    if (c < 0 || c >= (int)geoms.size())
      throw std::invalid_argument("mixed_trace_moment: color without a geometry");
  long long N = geoms.empty() ? 0 : geoms[0].N;
  for (auto& g : geoms)
    if (g.N != N) throw std::invalid_argument("mixed_trace_moment: all colors must share N");
  if (m % 2) return out;  // odd moments vanish identically
  std::map<int, int> mult;
  for (int c : colors) ++mult[c];
  for (auto& [c, k] : mult)
    if (k % 2) return out;  // odd color multiplicity: no color-matched pairing
  const int ell = m / 2;
  bigint xi_prod = 1;  // prod over blocks of xi_{color(block)} = prod_c xi_c^{mult_c/2}
  for (auto& [c, k] : mult) {
    bigint xc = band_width(geoms[c]);
    for (int i = 0; i < k / 2; ++i) xi_prod *= xc;
  }
  bigint qsum = 0;
  for_each_pair_partition(
      ell,
      [&](const PairPartition& p) {
        for (auto& [a, b] : p.blocks)
          if (colors[a - 1] != colors[b - 1]) return;
        auto q = build_quotient(p);
        std::vector<ConstraintEdge> edges;
        for (auto& [a, b] : p.blocks) {
          auto& e = q.edges[a - 1];  // e_a: class(a) -> class(a+1)
          const BandGeometry& g = geoms[colors[a - 1]];
          edges.push_back({e.u, e.v, {Band{g.b, g.mode == BandMode::periodic}}});
        }
        qsum += count_labelings(q.num_vertices(), edges, N, budget);
        ++out.contributing;
      },
      cap);
  out.norm = rational(qsum, xi_prod);
  out.value = to_double(out.norm) * std::pow(sigma2, ell);
  return out;
}

}  // namespace bandrmt
