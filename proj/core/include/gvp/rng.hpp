#pragma once

#include <cstdint>
#include <random>

namespace gvp {

using Rng = std::mt19937_64;

// splitmix64 finalizer. Seeds for nested streams (per cell, per refit, per
// draw block) are derived by folding tags into the master seed through this,
// so nearby tags give unrelated streams and reruns stay bitwise identical.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(mix64(master) ^ mix64(stream + 0x517cc1b727220a95ULL));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(master, a), b);
}

inline double draw_normal(Rng& rng) {
  std::normal_distribution<double> dist;
  return dist(rng);
}

inline double draw_uniform(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

}  // namespace gvp
