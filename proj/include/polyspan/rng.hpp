#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace polyspan {

/// Seeded generator used by every random constructor. The standard
/// distributions are implementation-defined, so bounded draws are done here
/// by rejection on the raw 64-bit engine; outputs are identical across
/// standard libraries for the same seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit)
      x = engine_();
    return x % n;
  }

  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(below(hi - lo + 1));
  }

  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  template <class T> void shuffle(std::vector<T> &v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }

  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

/// Derives an independent seed for case `index` of a suite run with `seed`.
inline std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace polyspan
