#pragma once

#include <cstdint>
#include <limits>

namespace dclust {

// Separates the independent random streams a run consumes.
enum class StreamDomain : std::uint64_t {
  init = 0x1,
  pattern_shift = 0x2,
  tie_break = 0x3,
  trial = 0x4,
};

namespace detail {

__extension__ using uint128 = unsigned __int128;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-keyed SplitMix64 stream. The starting state is a hash of
/// (seed, domain, a, b), so a vertex's draws do not depend on how many other
/// vertices were processed before it or on which thread processed them.
class KeyedStream {
 public:
  using result_type = std::uint64_t;

  constexpr KeyedStream(std::uint64_t seed, StreamDomain domain, std::uint64_t a,
                        std::uint64_t b = 0) noexcept
      : state_(key(seed, domain, a, b)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state_);
  }

  /// Uniform integer in [0, n), n > 0. Lemire's multiply-shift with rejection.
  std::uint64_t uniform_below(std::uint64_t n) noexcept {
    detail::uint128 m = static_cast<detail::uint128>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<detail::uint128>((*this)()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static constexpr std::uint64_t key(std::uint64_t seed, StreamDomain domain, std::uint64_t a,
                                     std::uint64_t b) noexcept {
    std::uint64_t h = detail::mix64(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(domain));
    h = detail::mix64(h ^ (a * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
    h = detail::mix64(h ^ (b * 0xaef17502108ef2d9ULL + 0x2545f4914f6cdd1dULL));
    return h;
  }

  std::uint64_t state_;
};

/// Seed for the `index`-th independent replicate derived from a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return KeyedStream(base, StreamDomain::trial, index)();
}

}  // namespace dclust
