#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>

namespace phav {

/// SplitMix64 finalizer. Used for seed derivation only, never as a stream.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Combines a parent seed with a child index into a new, well-mixed seed.
/// mix_seed(master, i) is the scenario seed of video i.
constexpr std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t child) noexcept {
  return splitmix64(splitmix64(parent) ^ splitmix64(child + 0x632BE59BD9B4E019ULL));
}

/// FNV-1a; gives stable stream ids for textual tags ("world", "camera", ...).
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Deterministic random stream identified by (seed, stream id).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. All conversions to reals and integers are done here rather than
/// through <random> distributions, whose algorithms are implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream), engine_(mix_seed(seed, stream)) {}

  RngStream(std::uint64_t seed, std::string_view tag) : RngStream(seed, tag_hash(tag)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Independent child stream; does not advance this stream.
  RngStream fork(std::string_view tag) const { return RngStream(mix_seed(seed_, stream_), tag); }
  RngStream fork(std::uint64_t index) const { return RngStream(mix_seed(seed_, stream_), index); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer on [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform integer on [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: hi < lo");
    return lo + static_cast<std::int64_t>(uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Fisher-Yates; std::shuffle is not portable across standard libraries.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_index(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  bool operator==(const RngStream&) const = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace phav
