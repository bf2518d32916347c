#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Deterministic random number utilities. Everything here is seeded
// explicitly and produces identical streams on every platform, so runs
// are reproducible regardless of compiler or thread count. Standard
// library engines are avoided because their distributions are
// implementation-defined.

namespace mstlab {

// SplitMix64 finalizer. Also used as the stateless counter-based PRF.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stateless PRF: 64-bit output keyed by (seed, counter). Two mixing
// rounds so that structured counters (edge indices) decorrelate.
inline std::uint64_t prf64(std::uint64_t seed, std::uint64_t counter) {
  return mix64(mix64(seed ^ 0x8f462907511d4bf3ULL) + counter);
}

// Derive an independent child seed from (seed, stream index). Used to
// give every replica / component / excursion its own stream.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  return prf64(seed ^ 0xd1b54a32d192ed03ULL, stream);
}

// uint64 tick -> double in (0,1]; the tick is the canonical identity of
// the variate, the double is its numeric projection.
inline double tick_to_unit(std::uint64_t t) {
  return (static_cast<double>(t >> 11) + 1.0) * 0x1.0p-53;
}

// xoshiro256++ (Blackman & Vigna, public domain reference logic).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& w : s_) w = mix64(z++);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on (0,1].
  double u01() { return tick_to_unit(next_u64()); }
  // Uniform on (0,1).
  double u01_open() {
    for (;;) {
      double u = u01();
      if (u < 1.0) return u;
    }
  }
  // Uniform on (0,hi).
  double uniform(double hi) { return hi * u01_open(); }

  // Unbiased integer in [0,n).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = -n % n;
      while (lo < t) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Standard normal via Marsaglia polar method.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, q;
    do {
      u = 2.0 * u01_open() - 1.0;
      v = 2.0 * u01_open() - 1.0;
      q = u * u + v * v;
    } while (q >= 1.0 || q == 0.0);
    const double f = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  double exponential() { return -std::log(u01_open()); }

  // Gamma(shape, scale) by Marsaglia-Tsang; shape < 1 via the boosting
  // identity Gamma(a) = Gamma(a+1) * U^{1/a}.
  double gamma(double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0)
      throw std::invalid_argument("gamma: parameters must be positive");
    if (shape < 1.0) {
      const double u = u01_open();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = u01_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
  }

  // Poisson by inversion-by-multiplication; adequate for the small
  // per-cell means used in this project.
  int poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
    if (mean == 0.0) return 0;
    if (mean > 50.0) {
      // split recursively; exact because Poisson sums are Poisson
      int half = poisson(mean / 2.0);
      return half + poisson(mean - mean / 2.0);
    }
    const double limit = std::exp(-mean);
    int k = 0;
    double prod = u01_open();
    while (prod > limit) {
      ++k;
      prod *= u01_open();
    }
    return k;
  }

  // Dirichlet(alpha,...,alpha) with n coordinates.
  std::vector<double> dirichlet(double alpha, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& xi : x) total += xi = gamma(alpha, 1.0);
    for (auto& xi : x) xi /= total;
    return x;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mstlab
