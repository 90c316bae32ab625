#pragma once

#include <cstdint>
#include <vector>

#include <random>

namespace spacc {

/// Deterministic random source used by every seeded routine in the
/// library. The engine (std::mt19937_64) has a bit-exact sequence fixed by
/// the standard; all draws on top of it are implemented here because the
/// standard library distributions are implementation-defined and would
/// break byte-reproducibility across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double q) { return uniform() < q; }

  /// Standard normal via Box-Muller; consumes two uniforms per draw.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Gamma(shape, 1), Marsaglia-Tsang.
  double gamma(double shape);

  /// Beta(a, b) as a ratio of gammas.
  double beta(double a, double b);

  /// Geometric on {0, 1, ...} with success probability q in (0, 1];
  /// mean (1-q)/q.
  std::uint64_t geometric(double q);

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Seed for an independent child stream (per fold, per replicate, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace spacc
