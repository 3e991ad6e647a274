#pragma once

#include <cstdint>
#include <random>

namespace crisscross {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic child seed for (master, replication, stream).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication, std::uint64_t stream = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ replication) ^ (stream * 0xD1B54A32D192ED03ULL));
}

// Primitive random streams of the network.
enum class Stream : std::uint64_t { arrival1 = 1, arrival2, service1, service2, service3, gaussian, uniform };

inline Engine make_engine(std::uint64_t master, std::uint64_t replication, Stream stream) {
  return Engine(derive_seed(master, replication, static_cast<std::uint64_t>(stream)));
}

}  // namespace crisscross
