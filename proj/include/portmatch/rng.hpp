#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace portmatch {

/// Engine used everywhere. mt19937_64's output sequence is fixed by the
/// standard; the helpers below avoid std distributions, whose algorithms are
/// implementation-defined, so runs reproduce across standard libraries.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of an independent substream `stream` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Rng make_stream(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_seed(master, stream));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n), n > 0, by rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

inline bool bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01(rng) < p;
}

/// Geometric number of failures before the first success, mean `mean`.
inline std::int64_t geometric_failures(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  const double q = mean / (1.0 + mean);  // failure probability
  const double u = 1.0 - uniform01(rng);  // (0, 1]
  return static_cast<std::int64_t>(std::floor(std::log(u) / std::log(q)));
}

}  // namespace portmatch
