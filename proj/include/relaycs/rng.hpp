#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace relaycs {

// One splitmix64 step; used for seed derivation only.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Folds a master seed and stream coordinates (scenario tag, sweep point,
/// trial index, ...) into one sub-seed. Trials seed themselves from their
/// coordinates, never from execution order, so parallel and serial runs of
/// the same configuration produce identical results.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> coords) {
  std::uint64_t s = master;
  for (std::uint64_t c : coords) {
    s = splitmix64(s) ^ (c * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull);
  }
  return splitmix64(s);
}

/// Seeded random source with fixed, implementation-independent draw
/// procedures (std distributions are not bit-reproducible across standard
/// libraries; the mt19937_64 engine itself is).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard real normal via Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Circularly-symmetric complex normal, unit variance: E|z|^2 = 1.
  std::complex<double> cnormal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::polar(std::sqrt(-std::log(u1)),
                      2.0 * std::numbers::pi * u2);
  }

  /// Unbiased uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % n;
    }
  }

  /// k distinct indices from [0, n), in random order (partial Fisher-Yates).
  /// The first j entries coincide with a separate draw of j <= k indices from
  /// the same state, which lets callers build nested fault supports.
  std::vector<int> sample_without_replacement(int n, int k) {
    if (n < 0 || k < 0 || k > n) {
      throw std::invalid_argument(
          "Rng::sample_without_replacement: need 0 <= k <= n");
    }
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(static_cast<std::size_t>(k));
    return idx;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace relaycs
