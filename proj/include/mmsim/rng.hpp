#pragma once

// Counter-based random streams. Every draw is a pure function of its key, so
// results do not depend on evaluation order or thread count.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace mmsim::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hashKey(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc909ull;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

/// Uniform in (0, 1): never returns 0, so log() is safe.
inline double toUnitOpen(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

class Stream {
 public:
  explicit Stream(std::uint64_t key) : key_(key) {}
  std::uint64_t nextU64() { return splitmix64(key_ ^ splitmix64(counter_++)); }
  double uniform() { return toUnitOpen(nextU64()); }
  /// Uniform integer in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = nextU64();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Two independent standard normals from one key (Box-Muller).
struct NormalPair {
  double a, b;
};
inline NormalPair normalPair(std::uint64_t key) {
  const double u1 = toUnitOpen(splitmix64(key));
  const double u2 = toUnitOpen(splitmix64(key ^ 0xd1b54a32d192ed03ull));
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace mmsim::rng
