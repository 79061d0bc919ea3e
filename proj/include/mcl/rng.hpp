#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mcl {

// 64-bit finalizer (splitmix64). Bijective with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Purpose tags for stream splitting. Every consumer of randomness derives
// its own substream from (seed, purpose, index), so adding a consumer or
// reordering work never perturbs another stream.
namespace streams {
inline constexpr std::uint64_t kDataset = 0x01;
inline constexpr std::uint64_t kQueries = 0x02;
inline constexpr std::uint64_t kBuild = 0x03;
inline constexpr std::uint64_t kPairs = 0x04;
inline constexpr std::uint64_t kWitness = 0x05;
inline constexpr std::uint64_t kMonteCarlo = 0x06;
inline constexpr std::uint64_t kShatter = 0x07;
inline constexpr std::uint64_t kLipschitz = 0x08;
}  // namespace streams

// Stream-splitting rule:
//   key(seed, purpose, index) = mix64(mix64(seed ^ mix64(purpose)) + index * GAMMA)
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t purpose,
                                   std::uint64_t index = 0) noexcept {
  return mix64(mix64(seed ^ mix64(purpose)) + index * kGoldenGamma);
}

/// Counter-based generator: draw i of a stream is mix64(key + i*GAMMA).
/// Any draw is addressable by its index, so substreams never overlap and
/// parallel sampling is replayable independent of scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_u64() noexcept { return mix64(key_ + (++counter_) * kGoldenGamma); }

  /// Uniform in [0,1), 53-bit resolution.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0,1]; safe as a log() argument.
  double next_unit_pos() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Fixed-point multiply; bias < 2^-64.
  std::uint64_t next_below(std::uint64_t n) noexcept {
    using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * n) >> 64);
  }

  bool next_bool() noexcept { return (next_u64() >> 63) != 0; }

  /// Standard normal via Box-Muller (pair cached within this stream).
  double next_gaussian() noexcept {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = next_unit_pos();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

inline CounterRng substream(std::uint64_t seed, std::uint64_t purpose,
                            std::uint64_t index = 0) noexcept {
  return CounterRng(derive_key(seed, purpose, index));
}

}  // namespace mcl
