#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace pklm {

// splitmix64 increment and output mix (Steele, Lea & Flood's generator).
inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Key derivation for independent substreams. Streams are addressed by a
// path of integer ids hung off a master seed, e.g.
//   derive_stream(derive_stream(seed, kProjectionStream), proj_index)
// so the stream consumed by one task never depends on scheduling order.
constexpr std::uint64_t derive_stream(std::uint64_t key, std::uint64_t id) noexcept {
  return mix64(key + kGoldenGamma * (id + 1));
}

// Counter-based generator: the state is a counter, each output is a hash
// of it. Cheap to construct, no warm-up, and any substream is reachable
// directly from its key.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  // uniform on [0,1), 53-bit resolution
  double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on the open interval (0,1); safe to pass to log()
  double next_open() noexcept {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  // uniform integer in [0, bound), Lemire's multiply-shift with rejection
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    using u128 = unsigned __int128;
    std::uint64_t x = next_u64();
    u128 m = static_cast<u128>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      std::uint64_t threshold = (0ULL - bound) % bound;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<u128>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // standard normal via Box-Muller; two uniforms per draw, no cached spare,
  // so the consumed stream length is a fixed function of the call count
  double next_normal() noexcept {
    double u1 = next_open();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // chi-squared with 4 degrees of freedom: -2 log(U1 U2)
  double next_chisq4() noexcept { return -2.0 * std::log(next_open() * next_open()); }

  // Weibull with scale 1 and shape 2
  double next_weibull_shape2() noexcept { return std::sqrt(-std::log(next_open())); }

  template <typename T>
  void shuffle(std::vector<T>& v) noexcept {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// Stream ids used to partition the master seed. Values are arbitrary but
// frozen: changing them changes every seeded result.
enum StreamId : std::uint64_t {
  kPermutationStream = 1,
  kProjectionStream = 2,
  kForestStream = 3,
  kSimulateStream = 4,
  kBenchDataStream = 5,
  kBenchTestStream = 6,
};

}  // namespace pklm
