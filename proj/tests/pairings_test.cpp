#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "bandrmt/pairings.hpp"

using namespace bandrmt;

namespace {

// Independent oracle: (2l-1)!! by plain integer product.
long long dfac_oracle(int l) {
  long long r = 1;
  for (int j = 1; j <= l; ++j) r *= 2 * j - 1;
  return r;
}

// Independent non-crossing oracle: repeatedly delete a block made of two
// cyclically-adjacent-in-the-linear-order elements (j, j+1); non-crossing iff
// this empties the diagram.  (Classical "nested arches" peeling.)
bool noncrossing_oracle(const PairPartition& p) {
  std::vector<std::pair<int, int>> blocks = p.blocks;
  bool changed = true;
  while (!blocks.empty() && changed) {
    changed = false;
    for (size_t i = 0; i < blocks.size(); ++i) {
      // adjacency among the surviving elements
      std::set<int> alive;
      for (auto& [a, b] : blocks) {
        alive.insert(a);
        alive.insert(b);
      }
      auto [a, b] = blocks[i];
      auto it = alive.find(a);
      ++it;
      if (it != alive.end() && *it == b) {
        blocks.erase(blocks.begin() + i);
        changed = true;
        break;
      }
    }
  }
  return blocks.empty();
}

std::string cyc_str(const std::vector<std::vector<int>>& cs) {
  std::string s;
  for (auto& c : cs) {
    s += '(';
    for (size_t i = 0; i < c.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(c[i]);
    }
    s += ')';
  }
  return s;
}

}  // namespace

TEST_CASE("enumeration counts and validity", "[pairings]") {
  for (int l = 1; l <= 6; ++l) {
    long long n = 0;
    std::set<std::vector<std::pair<int, int>>> uniq;
    for_each_pair_partition(l, [&](const PairPartition& p) {
      ++n;
      REQUIRE((int)p.blocks.size() == l);
      auto m = p.mates();
      for (int j = 1; j <= 2 * l; ++j) {
        REQUIRE(m[j] != j);          // fixed-point free
        REQUIRE(m[m[j]] == j);       // involution
      }
      uniq.insert(p.blocks);
    });
    REQUIRE(n == dfac_oracle(l));
    REQUIRE((long long)uniq.size() == n);  // no repeats
    REQUIRE(double_factorial_odd(l) == bigint(dfac_oracle(l)));
  }
}

TEST_CASE("enumeration order starts lexicographically", "[pairings]") {
  auto all = all_pair_partitions(2);
  REQUIRE(all.size() == 3);
  // smallest-first pairing rule: (1,2)(3,4) comes first, then (1,3)(2,4), then (1,4)(2,3)
  REQUIRE(all[0].blocks == std::vector<std::pair<int, int>>{{1, 2}, {3, 4}});
  REQUIRE(all[1].blocks == std::vector<std::pair<int, int>>{{1, 3}, {2, 4}});
  REQUIRE(all[2].blocks == std::vector<std::pair<int, int>>{{1, 4}, {2, 3}});
}

TEST_CASE("enumeration cap", "[pairings]") {
  REQUIRE_THROWS_AS(all_pair_partitions(9), cap_error);
  REQUIRE_THROWS_AS(all_pair_partitions(5, 4), cap_error);
  REQUIRE_NOTHROW(for_each_pair_partition(5, [](const PairPartition&) {}));
}

TEST_CASE("gamma-pi composition worked examples", "[pairings]") {
  // l=4, pi = (1,5)(2,8)(3,7)(4,6) -> cycles (1,6,5,2)(3,8)(4,7)
  auto p = make_pairing(4, {{1, 5}, {2, 8}, {3, 7}, {4, 6}});
  auto cs = cycles_gamma_pi(p);
  REQUIRE(cyc_str(cs) == "(1,6,5,2)(3,8)(4,7)");
  REQUIRE(genus(p).cycle_count == 3);
  REQUIRE(genus(p).genus == 1);

  // l=2 anchors
  auto p12 = make_pairing(2, {{1, 2}, {3, 4}});
  REQUIRE(cyc_str(cycles_gamma_pi(p12)) == "(1,3)(2)(4)");
  REQUIRE(genus(p12).genus == 0);
  auto p13 = make_pairing(2, {{1, 3}, {2, 4}});
  REQUIRE(cyc_str(cycles_gamma_pi(p13)) == "(1,4,3,2)");
  REQUIRE(genus(p13).genus == 1);
}

TEST_CASE("genus census identities", "[pairings]") {
  // epsilon_0 = Catalan, sum over g = (2l-1)!!
  for (int l = 1; l <= 6; ++l) {
    auto c = genus_census(l);
    REQUIRE(c[0] == catalan(l));
    bigint tot = 0;
    for (auto& x : c) tot += x;
    REQUIRE(tot == double_factorial_odd(l));
  }
  // genus-one closed form: 1, 10, 70, 420, 2310 for l = 2..6
  const long long eps1[] = {1, 10, 70, 420, 2310};
  for (int l = 2; l <= 6; ++l) {
    REQUIRE(epsilon_g(l, 1) == bigint(eps1[l - 2]));
    REQUIRE(epsilon1_closed(l) == bigint(eps1[l - 2]));
  }
  REQUIRE(epsilon1_closed(7) == bigint(12012));
  REQUIRE(epsilon1_closed(8) == bigint(60060));
  // genus-two counts pinned at small l
  REQUIRE(epsilon_g(3, 2) == bigint(0));
  REQUIRE(epsilon_g(4, 2) == bigint(21));
}

TEST_CASE("catalan values", "[pairings]") {
  const long long cat[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};
  for (int n = 0; n <= 8; ++n) REQUIRE(catalan(n) == bigint(cat[n]));
}

TEST_CASE("noncrossing matches oracle and catalan count", "[pairings]") {
  for (int l = 1; l <= 6; ++l) {
    long long nc = 0;
    for_each_pair_partition(l, [&](const PairPartition& p) {
      bool a = is_noncrossing(p);
      REQUIRE(a == noncrossing_oracle(p));
      // genus zero iff non-crossing
      REQUIRE(a == (genus(p).genus == 0));
      if (a) ++nc;
    });
    REQUIRE(bigint(nc) == catalan(l));
  }
}

TEST_CASE("genus profiles of named pairings", "[pairings]") {
  // pi1 = (1,2)(3,4)...(2l-1,2l) has l+1 cycles (genus 0);
  // the star pairing has genus 1 for every l >= 2
  for (int l = 2; l <= 6; ++l) {
    std::vector<std::pair<int, int>> adj;
    for (int j = 1; j < 2 * l; j += 2) adj.emplace_back(j, j + 1);
    REQUIRE(genus(make_pairing(l, adj)).cycle_count == l + 1);
    REQUIRE(genus(star_pairing(l)).genus == 1);
  }
}

TEST_CASE("make_pairing validation", "[pairings]") {
  REQUIRE_THROWS_AS(make_pairing(2, {{1, 2}, {2, 3}}), std::invalid_argument);
  REQUIRE_THROWS_AS(make_pairing(2, {{1, 2}}), std::invalid_argument);
  REQUIRE_THROWS_AS(make_pairing(2, {{1, 5}, {2, 3}}), std::invalid_argument);
}
