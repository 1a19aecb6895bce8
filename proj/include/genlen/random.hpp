#pragma once

// Reproducible random streams.
//
// A stream is identified by (seed, stream). The engine is std::mt19937_64,
// whose output sequence is fixed by the C++ standard, seeded with
// splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15)). Uniform doubles
// take the top 53 bits; Gaussians use the Marsaglia polar method with the
// spare deviate cached. No <random> distributions are used, since their
// algorithms differ between standard libraries.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace genlen {

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngSpec substream(std::uint64_t id) const;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline RngSpec RngSpec::substream(std::uint64_t id) const {
  return RngSpec{seed, splitmix64(stream ^ splitmix64(id + 0x632BE59BD9B4E019ULL))};
}

class Rng {
 public:
  explicit Rng(RngSpec spec)
      : engine_(splitmix64(spec.seed ^ splitmix64(spec.stream + 0x9E3779B97F4A7C15ULL))) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal N(0, 1).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Standard complex Gaussian: E|z|^2 = 1.
  std::complex<double> complex_normal() {
    constexpr double kHalf = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {kHalf * re, kHalf * im};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace genlen
