#pragma once

// Counter-based RNG: Philox4x32-10.  Streams are keyed (seed, stream-index),
// so realization r of an experiment owns stream r and draws are reproducible
// independent of evaluation order.  Default seed used by the tools: 20240614.

#include <array>
#include <cmath>
#include <cstdint>

namespace bandrmt {

inline constexpr std::uint64_t kDefaultSeed = 20240614ull;

namespace detail {

// One Philox4x32 block: 10 rounds over a 128-bit counter with a 64-bit key.
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> x,
                                                  std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int r = 0; r < 10; ++r) {
    std::uint64_t p0 = std::uint64_t(M0) * x[0];
    std::uint64_t p1 = std::uint64_t(M1) * x[2];
    std::array<std::uint32_t, 4> y;
    y[0] = std::uint32_t(p1 >> 32) ^ x[1] ^ k[0];
    y[1] = std::uint32_t(p1);
    y[2] = std::uint32_t(p0 >> 32) ^ x[3] ^ k[1];
    y[3] = std::uint32_t(p0);
    x = y;
    k[0] += W0;
    k[1] += W1;
  }
  return x;
}

}  // namespace detail

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  // counter-indexed access: block c of this stream, honest function of (seed, stream, c)
  std::array<std::uint32_t, 4> block(std::uint64_t c) const {
    std::array<std::uint32_t, 4> ctr{std::uint32_t(c), std::uint32_t(c >> 32),
                                     std::uint32_t(stream_), std::uint32_t(stream_ >> 32)};
    std::array<std::uint32_t, 2> key{std::uint32_t(seed_), std::uint32_t(seed_ >> 32)};
    return detail::philox4x32_10(ctr, key);
  }

  std::uint64_t raw64() {
    if (have_half_) {
      have_half_ = false;
      return half_;
    }
    auto w = block(ctr_++);
    half_ = (std::uint64_t(w[2]) << 32) | w[3];
    have_half_ = true;
    return (std::uint64_t(w[0]) << 32) | w[1];
  }

  // uniform on (0, 1]; never returns 0 so logs are safe
  double uniform() { return double((raw64() >> 11) + 1) * 0x1.0p-53; }

  // standard normal via Box-Muller, pair cached
  double gaussian() {
    if (have_gauss_) {
      have_gauss_ = false;
      return gauss_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925287 * u2;
    gauss_ = r * std::sin(a);
    have_gauss_ = true;
    return r * std::cos(a);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_, stream_;
  std::uint64_t ctr_ = 0;
  std::uint64_t half_ = 0;
  bool have_half_ = false;
  double gauss_ = 0;
  bool have_gauss_ = false;
};

}  // namespace bandrmt
