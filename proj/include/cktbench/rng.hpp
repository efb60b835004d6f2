#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cktbench {

/// One splitmix64 step.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master;
  const std::uint64_t a = splitmix64(state);
  state = a ^ (index + 0x632BE59BD9B4E019ULL);
  splitmix64(state);
  return splitmix64(state);
}

/// mt19937_64 with hand-rolled distributions so that draws are identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform in [0, n).
  std::size_t below(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  /// Uniform in [lo, hi].
  long between(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::size_t>(hi - lo + 1))); }

  bool chance(double p) { return uniform() < p; }

  /// Index drawn proportionally to non-negative weights; at least one must be positive.
  std::size_t weighted(const std::vector<double>& w) {
    double total = 0;
    for (double x : w) total += x;
    if (!(total > 0)) throw std::invalid_argument("Rng::weighted: no positive weight");
    double r = uniform() * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] <= 0) continue;
      if (r < w[i]) return i;
      r -= w[i];
    }
    for (std::size_t i = w.size(); i-- > 0;) {
      if (w[i] > 0) return i;
    }
    return 0;
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v.at(below(v.size()));
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cktbench
