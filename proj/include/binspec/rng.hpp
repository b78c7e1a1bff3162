#pragma once

#include <cstdint>
#include <random>

namespace binspec {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a root seed and a stream index.
/// Every random draw in the library goes through this, so a single root seed
/// reproduces a whole run regardless of evaluation order.
constexpr std::uint64_t split_seed(std::uint64_t root, std::uint64_t stream) {
  return mix64(mix64(root) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t root, std::uint64_t stream) {
  return Engine(split_seed(root, stream));
}

/// Uniform double in [0, 1) built from the top 53 bits; unlike
/// std::uniform_real_distribution this is identical across standard libraries.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& engine, double lo, double hi) {
  return lo + (hi - lo) * uniform01(engine);
}

}  // namespace binspec
