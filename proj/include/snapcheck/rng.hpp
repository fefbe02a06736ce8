#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace snapcheck {

/// Seedable stream built on std::mt19937_64, whose output sequence is fixed
/// by the standard. The distribution helpers are written out here because
/// the std:: distributions differ between standard library vendors.
class Rng {
 public:
  Rng(std::uint64_t root_seed, std::string_view stream) : engine_(derive(root_seed, stream)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform over the closed range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo);
    if (span == UINT64_MAX) return lo + static_cast<std::int64_t>(next());
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return lo + static_cast<std::int64_t>(x % range);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Per-stream seed: FNV-1a of the stream name mixed into the root seed.
  static std::uint64_t derive(std::uint64_t root, std::string_view stream) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : stream) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return splitmix64(root ^ splitmix64(h));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace snapcheck
