#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

// Seed derivation and portable random sampling.
//
// Every random quantity in the project flows from a single base seed.
// Subsystem streams are derived by labeled hashing:
//
//   stream_seed = mix64(mix64(base ^ mix64(fnv1a(label))) ^ index)
//
// where mix64 is the SplitMix64 finalizer. Distinct (label, index) pairs
// give statistically independent streams, so sample generation can run in
// parallel with results independent of thread count.
//
// Floating-point draws are built directly from 64-bit engine output
// instead of std::uniform_real_distribution, whose algorithm is
// implementation-defined; this keeps generated datasets stable across
// standard libraries.

namespace netdelay {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // SplitMix64 step.
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0, 1); never returns an exact endpoint.
  double uniform_open() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  // Uniform on (lo, hi), endpoints excluded.
  double uniform_open(double lo, double hi) { return lo + uniform_open() * (hi - lo); }

  // Unbiased integer in [0, n), n >= 1. Rejection sampling on the top range.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Exponential with given rate.
  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  // Standard normal via Box-Muller (one value per call, cached pair).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = uniform_open();
    double v = uniform_open();
    double r = std::sqrt(-2.0 * std::log(u));
    double theta = 6.283185307179586476925286766559 * v;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer as a pure function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view label,
                                    std::uint64_t index = 0) {
  return mix64(mix64(base ^ mix64(fnv1a(label))) ^ index);
}

inline Rng make_rng(std::uint64_t base, std::string_view label, std::uint64_t index = 0) {
  return Rng(derive_seed(base, label, index));
}

}  // namespace netdelay
