#pragma once

// 32-bit Mersenne Twister (MT19937), seeded with the 2002 init_genrand
// recurrence. Output is identical on every platform for a given seed.

#include <array>
#include <concepts>
#include <cstdint>

namespace anneal_noise {

class Prng {
 public:
  static constexpr std::uint32_t kDefaultSeed = 5489u;

  explicit Prng(std::uint32_t seed = kDefaultSeed) noexcept { reseed(seed); }

  void reseed(std::uint32_t seed) noexcept {
    seed_ = seed;
    state_[0] = seed;
    for (std::size_t i = 1; i < kN; ++i) {
      state_[i] = 1812433253u * (state_[i - 1] ^ (state_[i - 1] >> 30)) +
                  static_cast<std::uint32_t>(i);
    }
    index_ = kN;
  }

  std::uint32_t seed() const noexcept { return seed_; }

  /// Next raw 32-bit word.
  std::uint32_t next_u32() noexcept {
    if (index_ >= kN) twist();
    std::uint32_t y = state_[index_++];
    y ^= y >> 11;
    y ^= (y << 7) & 0x9d2c5680u;
    y ^= (y << 15) & 0xefc60000u;
    y ^= y >> 18;
    return y;
  }

  /// next_u32() / 2^32, in [0, 1).
  double next_unit() noexcept { return static_cast<double>(next_u32()) * kInv2Pow32; }

  /// 2 * next_unit() - 1, in [-1, 1).
  double next_symmetric() noexcept { return 2.0 * next_unit() - 1.0; }

  friend bool operator==(const Prng&, const Prng&) = default;

 private:
  static constexpr std::size_t kN = 624;
  static constexpr std::size_t kM = 397;
  static constexpr std::uint32_t kMatrixA = 0x9908b0dfu;
  static constexpr std::uint32_t kUpperMask = 0x80000000u;
  static constexpr std::uint32_t kLowerMask = 0x7fffffffu;
  static constexpr double kInv2Pow32 = 1.0 / 4294967296.0;

  void twist() noexcept {
    for (std::size_t i = 0; i < kN; ++i) {
      const std::uint32_t y = (state_[i] & kUpperMask) | (state_[(i + 1) % kN] & kLowerMask);
      state_[i] = state_[(i + kM) % kN] ^ (y >> 1) ^ ((y & 1u) ? kMatrixA : 0u);
    }
    index_ = 0;
  }

  std::array<std::uint32_t, kN> state_{};
  std::size_t index_ = kN;
  std::uint32_t seed_ = kDefaultSeed;
};

/// Anything that can stand in for Prng as a source of uniform doubles.
/// Tests substitute deterministic stubs through this.
template <typename G>
concept UniformSource = requires(G& g) {
  { g.next_unit() } -> std::convertible_to<double>;
  { g.next_symmetric() } -> std::convertible_to<double>;
};

static_assert(UniformSource<Prng>);

}  // namespace anneal_noise
