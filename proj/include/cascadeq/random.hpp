#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace cascadeq {

// SplitMix64 finalizer. Used to expand a 64-bit seed into engine state and to
// derive independent substream seeds from (seed, stream, index) triples.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** (Blackman & Vigna). Cheap to seed, which matters because
// every Monte Carlo replication owns its own engine.
class Engine {
 public:
  using result_type = std::uint64_t;

  explicit Engine(std::uint64_t seed = 0x5eed) noexcept { reseed(seed); }

  void reseed(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1); never returns 0, so safe under log().
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  friend bool operator==(const Engine&, const Engine&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

// Named substreams. Values are part of the reproducibility contract: changing
// them changes every seeded output.
enum class Stream : std::uint64_t {
  initialization = 1,
  price_noise = 2,
  threshold_noise = 3,
  threshold_reset = 4,
  arrivals = 16,
  services = 17,
  reneging = 18,
  cascade_field = 32,
  cascade_initiator = 33,
  synthetic = 64,
};

constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                                    std::uint64_t index = 0) noexcept {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ static_cast<std::uint64_t>(stream);
  std::uint64_t b = splitmix64(s);
  s = b ^ index;
  return splitmix64(s);
}

inline Engine make_engine(std::uint64_t seed, Stream stream,
                          std::uint64_t index = 0) noexcept {
  return Engine(derive_seed(seed, stream, index));
}

}  // namespace cascadeq
