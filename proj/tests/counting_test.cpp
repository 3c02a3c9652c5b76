#include <catch2/catch_amalgamated.hpp>

#include "bandrmt/counting.hpp"

using namespace bandrmt;

namespace {

// Independent oracle: enumerate every labeling of the quotient vertices and
// test each non-loop edge constraint directly from the definition.
bigint brute_count(const PairPartition& p, const BandGeometry& g) {
  auto s = underlying_simple(build_quotient(p));
  const long long N = g.N, b = g.b;
  auto dist = [&](long long x, long long y) {
    long long d = std::llabs(x - y);
    if (g.mode == BandMode::periodic) d = std::min(d, N - d);
    return d;
  };
  std::vector<long long> lab(s.n, 0);
  bigint count = 0;
  std::function<void(int)> rec = [&](int v) {
    if (v == s.n) {
      for (auto& e : s.edges) {
        if (e.u == e.v) continue;
        if (dist(lab[e.u], lab[e.v]) > b) return;
      }
      count += 1;
      return;
    }
    for (long long x = 0; x < N; ++x) {
      lab[v] = x;
      rec(v + 1);
    }
  };
  rec(0);
  return count;
}

PairPartition worked4() { return make_pairing(4, {{1, 5}, {2, 8}, {3, 7}, {4, 6}}); }

}  // namespace

TEST_CASE("counting matches brute force, both modes, l <= 3", "[counting][oracle]") {
  for (int l = 1; l <= 3; ++l)
    for (long long N : {10, 20, 30})
      for (long long b : {1, 2, 5})
        for (auto mode : {BandMode::periodic, BandMode::regular}) {
          BandGeometry g{N, b, mode};
          for_each_pair_partition(l, [&](const PairPartition& p) {
            INFO("l=" << l << " N=" << N << " b=" << b
                      << " mode=" << (mode == BandMode::periodic ? "periodic" : "regular"));
            REQUIRE(count_admissible(p, g).count == brute_count(p, g));
          });
        }
}

TEST_CASE("worked quotient count and closed form", "[counting]") {
  // triangle-with-loops quotient: Q = N((2b+1)^2 - b(b+1)) once N > 4b
  auto p = worked4();
  for (long long b : {1, 2, 4})
    for (long long N : {20, 40}) {
      if (N <= 4 * b) continue;
      BandGeometry g{N, b, BandMode::periodic};
      bigint closed = bigint(N) * ((2 * b + 1) * (2 * b + 1) - b * (b + 1));
      REQUIRE(count_admissible(p, g).count == closed);
    }
  BandGeometry g40{40, 4, BandMode::periodic};
  REQUIRE(count_admissible(worked4(), g40).count == bigint(40) * 61);
  REQUIRE(count_admissible(worked4(), g40).count == brute_count(worked4(), g40));
}

TEST_CASE("double trees count exactly N xi^l", "[counting]") {
  for (int l = 1; l <= 4; ++l)
    for (auto [N, b] : std::vector<std::pair<long long, long long>>{{20, 3}, {50, 10}, {101, 7}}) {
      BandGeometry g{N, b, BandMode::periodic};
      bigint expect = N;
      for (int i = 0; i < l; ++i) expect *= band_width(g);
      for_each_pair_partition(l, [&](const PairPartition& p) {
        if (!is_noncrossing(p)) return;
        REQUIRE(count_admissible(p, g).count == expect);
      });
    }
}

TEST_CASE("full band gives N^k", "[counting]") {
  for (int l = 1; l <= 3; ++l)
    for (long long N : {5, 8})
      for (auto mode : {BandMode::periodic, BandMode::regular}) {
        BandGeometry g{N, N, mode};  // b >= floor(N/2) and b >= N-1: fully vacuous
        for_each_pair_partition(l, [&](const PairPartition& p) {
          int k = genus(p).cycle_count;
          bigint expect = 1;
          for (int i = 0; i < k; ++i) expect *= N;
          REQUIRE(count_admissible(p, g).count == expect);
        });
      }
}

TEST_CASE("regular mode l=1 closed form", "[counting]") {
  // k=2 path quotient: Q = sum_x |[x-b, x+b] cap [0,N)| = N(2b+1) - b(b+1)
  auto p = make_pairing(1, {{1, 2}});
  for (auto [N, b] : std::vector<std::pair<long long, long long>>{
           {10, 1}, {50, 5}, {100, 10}, {30, 2}}) {
    BandGeometry g{N, b, BandMode::regular};
    REQUIRE(count_admissible(p, g).count == bigint(N) * (2 * b + 1) - b * (b + 1));
  }
}

TEST_CASE("periodic homogeneity in the root label", "[counting]") {
  for (auto& p : {worked4(), star_pairing(4)}) {
    BandGeometry g{40, 4, BandMode::periodic};
    auto q0 = count_admissible_rooted(p, g, 0);
    REQUIRE(count_admissible_rooted(p, g, 20) == q0);
    REQUIRE(count_admissible_rooted(p, g, 39) == q0);
    REQUIRE(count_admissible(p, g).count == bigint(40) * q0);
  }
}

TEST_CASE("sandwich bounds", "[counting]") {
  BandGeometry g{60, 5, BandMode::periodic};
  for (int l = 1; l <= 4; ++l)
    for_each_pair_partition(l, [&](const PairPartition& p) { REQUIRE(check_bounds(p, g)); });
  // strictness for the worked partition: 640 <= 2440 <= 3240 at N=40, b=4
  BandGeometry g40{40, 4, BandMode::periodic};
  auto lc = count_admissible(worked4(), g40);
  REQUIRE(lc.count == 2440);
  REQUIRE(bigint(40) * 16 < lc.count);
  REQUIRE(lc.count < bigint(40) * 81);
}

TEST_CASE("degenerate bandwidths", "[counting]") {
  // b = 0 forces all labels equal: Q = N for every connected quotient
  for (int l = 1; l <= 4; ++l)
    for (auto mode : {BandMode::periodic, BandMode::regular}) {
      BandGeometry g{12, 0, mode};
      for_each_pair_partition(l, [&](const PairPartition& p) {
        REQUIRE(count_admissible(p, g).count == bigint(12));
      });
    }
}

TEST_CASE("node budget trips resource_error", "[counting]") {
  BandGeometry g{10000, 2000, BandMode::periodic};
  REQUIRE_THROWS_AS(count_admissible(worked4(), g, 100000), resource_error);
}

TEST_CASE("bad geometry rejected", "[counting]") {
  REQUIRE_THROWS_AS(count_admissible(worked4(), BandGeometry{0, 1, BandMode::periodic}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(count_admissible(worked4(), BandGeometry{10, -1, BandMode::periodic}),
                    std::invalid_argument);
}
