#pragma once

// Deterministic random streams. Distributions from <random> are
// implementation-defined, so bounded draws are done here to keep results
// identical across standard libraries.

#include <cstddef>
#include <cstdint>
#include <random>

namespace slotswapper {

/// SplitMix64 finalizer: a bijective 64-bit mix.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// SplitMix64 generator. State transition: state += 0x9E3779B97F4A7C15,
/// output = splitmix64_mix(state).
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}
  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
  }
  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Child seed for stream `index` of a parent seed.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64_mix(parent ^ splitmix64_mix(index + 0x632BE59BD9B4E019ULL));
}

/// Seeded Mersenne Twister with portable bounded draws.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);
  /// Uniform integer in [lo, hi].
  int between(int lo, int hi) {
    return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo) + 1));
  }
  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Rejection-sampled uniform draw in [0, n) from 64-bit words supplied by `next`.
template <typename Next>
std::uint64_t bounded_draw(std::uint64_t n, Next&& next) {
  // Accept only words below the largest multiple of n.
  const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - n) % n;
  for (;;) {
    const std::uint64_t v = next();
    if (limit == 0 || v < limit) return v % n;
  }
}

inline std::size_t Rng::index(std::size_t n) {
  return static_cast<std::size_t>(bounded_draw(n, [this] { return engine_(); }));
}

}  // namespace slotswapper
