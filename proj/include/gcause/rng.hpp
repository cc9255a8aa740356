#ifndef GCAUSE_RNG_HPP
#define GCAUSE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace gcause {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic RNG. mt19937_64 output is fully specified by the standard, and
// all variate transforms below are explicit, so identical seeds give identical
// streams on every platform. Never use std::*_distribution here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix_seed(seed)) {}

  // Independent stream for item `index` under the same master seed.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
    return Rng(splitmix64(s));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Exponential with given rate (mean 1/rate).
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  double normal() {
    // Box-Muller; consumes exactly two uniforms per pair of draws.
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // in (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Poisson via inversion for small means, PTRS transformed rejection for
  // large means (Hormann 1993).
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) {
      double p = std::exp(-mean);
      double cum = p;
      double u = uniform();
      std::uint64_t k = 0;
      while (u > cum && k < 10000) {
        ++k;
        p *= mean / static_cast<double>(k);
        cum += p;
      }
      return k;
    }
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
      double u = uniform() - 0.5;
      double v = uniform();
      double us = 0.5 - std::fabs(u);
      double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      double k = kf;
      double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
      double rhs = -mean + k * std::log(mean) - std::lgamma(k + 1.0);
      if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
    }
  }

  // Fisher-Yates shuffle of [0, n) index permutations and generic containers.
  template <typename T>
  void shuffle(T& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_u64() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t mix_seed(std::uint64_t seed) {
    std::uint64_t s = seed ^ 0xd1b54a32d192ed03ULL;
    return splitmix64(s);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gcause

#endif  // GCAUSE_RNG_HPP
