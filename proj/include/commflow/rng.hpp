#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace commflow {

// Deterministic RNG wrapper. Distributions are hand-rolled so that streams
// are reproducible across standard libraries (std::uniform_*_distribution is
// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // 53-bit uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Rejection-free modulo is fine here: span is tiny relative to 2^64.
    return lo + static_cast<std::int64_t>(gen_() % span);
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t next_u64() { return gen_(); }

  // Substream for (seed, tag, call index): deterministic and independent of
  // how calls to other tags are interleaved.
  static Rng tagged_stream(std::uint64_t seed, const std::string& tag,
                           std::uint64_t counter) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : tag)
      h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    return Rng(mix(mix(seed, h), counter));
  }

  // splitmix64 finalizer, used to derive independent substreams.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return mix(a ^ mix(b));
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace commflow
