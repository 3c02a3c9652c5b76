#pragma once

// Pair partitions of {1,...,2l}, their cycle structure against the full cycle
// gamma = (1 2 ... 2l), and genus statistics.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bandrmt/errors.hpp"

namespace bandrmt {

using bigint = boost::multiprecision::cpp_int;

inline constexpr int kEnumerationCapDefault = 8;  // (2*8-1)!! = 2,027,025 partitions

// A pair partition of {1,...,2l}: l blocks {j,k} with j<k, stored sorted by j.
// Equivalently a fixed-point-free involution.
struct PairPartition {
  int ell = 0;
  std::vector<std::pair<int, int>> blocks;  // 1-based, block.first < block.second

  int partner(int j) const {
    for (auto& [a, b] : blocks) {
      if (a == j) return b;
      if (b == j) return a;
    }
    return 0;
  }

  // involution as an array: mate[j] = partner of j, 1-based
  std::vector<int> mates() const {
    std::vector<int> m(2 * ell + 1, 0);
    for (auto& [a, b] : blocks) {
      m[a] = b;
      m[b] = a;
    }
    return m;
  }

  bool operator==(const PairPartition& o) const { return ell == o.ell && blocks == o.blocks; }
};

// Enumerate all pair partitions of {1,...,2l} in the canonical order: the
// smallest unpaired element is paired with each larger unpaired element in
// increasing order, recursively.  Visits (2l-1)!! partitions.
inline void for_each_pair_partition(int ell, const std::function<void(const PairPartition&)>& fn,
                                    int cap = kEnumerationCapDefault) {
  if (ell < 1) throw std::invalid_argument("for_each_pair_partition: ell must be >= 1");
  if (ell > cap) throw cap_error("pair-partition enumeration capped at ell = " + std::to_string(cap));
  const int n = 2 * ell;
  std::vector<int> mate(n + 1, 0);
  PairPartition p;
  p.ell = ell;
  p.blocks.reserve(ell);
  std::function<void()> rec = [&]() {
    int a = 0;
    for (int j = 1; j <= n; ++j)
      if (!mate[j]) {
        a = j;
        break;
      }
    if (!a) {
      fn(p);
      return;
    }
    for (int b = a + 1; b <= n; ++b) {
      if (mate[b]) continue;
      mate[a] = b;
      mate[b] = a;
      p.blocks.emplace_back(a, b);
      rec();
      p.blocks.pop_back();
      mate[a] = 0;
      mate[b] = 0;
    }
  };
  rec();
}

inline std::vector<PairPartition> all_pair_partitions(int ell, int cap = kEnumerationCapDefault) {
  std::vector<PairPartition> out;
  for_each_pair_partition(ell, [&](const PairPartition& p) { out.push_back(p); }, cap);
  return out;
}

// Build a PairPartition from explicit blocks; validates it is a perfect matching.
inline PairPartition make_pairing(int ell, std::vector<std::pair<int, int>> blocks) {
  PairPartition p;
  p.ell = ell;
  std::vector<int> seen(2 * ell + 1, 0);
  for (auto& [a, b] : blocks) {
    if (a > b) std::swap(a, b);
    if (a < 1 || b > 2 * ell || a == b) throw std::invalid_argument("make_pairing: bad block");
    if (seen[a]++ || seen[b]++) throw std::invalid_argument("make_pairing: repeated element");
  }
  std::sort(blocks.begin(), blocks.end());
  if ((int)blocks.size() != ell) throw std::invalid_argument("make_pairing: wrong block count");
  p.blocks = std::move(blocks);
  return p;
}

// Cycles of the composition "apply pi, then gamma" where gamma = (1 2 ... 2l).
// Each cycle starts at its minimal element; cycles sorted by minimal element.
inline std::vector<std::vector<int>> cycles_gamma_pi(const PairPartition& p) {
  const int n = 2 * p.ell;
  auto mate = p.mates();
  auto gamma = [n](int j) { return j == n ? 1 : j + 1; };
  std::vector<char> done(n + 1, 0);
  std::vector<std::vector<int>> cycles;
  for (int s = 1; s <= n; ++s) {
    if (done[s]) continue;
    std::vector<int> cyc;
    int j = s;
    do {
      cyc.push_back(j);
      done[j] = 1;
      j = gamma(mate[j]);
    } while (j != s);
    cycles.push_back(std::move(cyc));
  }
  return cycles;
}

struct GenusProfile {
  int ell = 0;
  int cycle_count = 0;  // #(gamma o pi)
  int genus = 0;        // cycle_count = ell + 1 - 2g
};

inline GenusProfile genus(const PairPartition& p) {
  GenusProfile g;
  g.ell = p.ell;
  g.cycle_count = (int)cycles_gamma_pi(p).size();
  int twice = p.ell + 1 - g.cycle_count;
  if (twice < 0 || twice % 2) throw std::logic_error("genus: parity violation");
  g.genus = twice / 2;
  return g;
}

// Non-crossing test: blocks (a,b), (c,d) cross iff a < c < b < d.
inline bool is_noncrossing(const PairPartition& p) {
  for (size_t i = 0; i < p.blocks.size(); ++i)
    for (size_t j = i + 1; j < p.blocks.size(); ++j) {
      auto [a, b] = p.blocks[i];
      auto [c, d] = p.blocks[j];  // a < c by sort order
      if (c < b && b < d) return false;
    }
  return true;
}

inline bigint catalan(int n) {
  if (n < 0) throw std::invalid_argument("catalan: negative index");
  bigint c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

// (2m-1)!! = 1*3*5*...*(2m-1); total number of pair partitions of 2m points.
inline bigint double_factorial_odd(int m) {
  bigint r = 1;
  for (int j = 1; j <= m; ++j) r *= 2 * j - 1;
  return r;
}

// Number of pairings of genus g at a given l, by enumeration.
// epsilon_0(l) = Catalan(l); sum over g equals (2l-1)!!.
inline std::vector<bigint> genus_census(int ell, int cap = kEnumerationCapDefault) {
  std::vector<bigint> counts((ell + 1) / 2 + 1, 0);
  for_each_pair_partition(
      ell, [&](const PairPartition& p) { counts[genus(p).genus] += 1; }, cap);
  while (counts.size() > 1 && counts.back() == 0) counts.pop_back();
  return counts;
}

inline bigint epsilon_g(int ell, int g, int cap = kEnumerationCapDefault) {
  auto c = genus_census(ell, cap);
  return g < (int)c.size() ? c[g] : bigint(0);
}

// Closed form for the genus-one count: (2l-1)! / (6 (l-2)! (l-1)!), l >= 2.
inline bigint epsilon1_closed(int ell) {
  if (ell < 2) return 0;
  bigint num = 1;
  for (int j = 2; j <= 2 * ell - 1; ++j) num *= j;
  bigint den = 6;
  for (int j = 2; j <= ell - 2; ++j) den *= j;
  for (int j = 2; j <= ell - 1; ++j) den *= j;
  return num / den;
}

// Star pairing (1,3)(2,4)(5,6)(7,8)...(2l-1,2l): genus one for l >= 2, with a
// hub quotient vertex; handy extremal example.
inline PairPartition star_pairing(int ell) {
  if (ell < 2) throw std::invalid_argument("star_pairing: ell >= 2 required");
  std::vector<std::pair<int, int>> b{{1, 3}, {2, 4}};
  for (int j = 5; j < 2 * ell; j += 2) b.emplace_back(j, j + 1);
  return make_pairing(ell, std::move(b));
}

}  // namespace bandrmt
