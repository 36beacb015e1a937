#ifndef SEMQUAD_RNG_HPP_
#define SEMQUAD_RNG_HPP_

#include <cstdint>
#include <random>

namespace semquad {

using Rng = std::mt19937_64;

// Derives an independent stream seed from a base seed and a stream tag, so
// that e.g. weight init and mining never share a generator position.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  // splitmix64 over the combined value
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream names hash with FNV-1a before mixing.
inline std::uint64_t derive_seed(std::uint64_t base, const char* stream) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char* c = stream; *c != '\0'; ++c) {
    h = (h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(*c))) *
        1099511628211ULL;
  }
  return derive_seed(base, h);
}

}  // namespace semquad

#endif  // SEMQUAD_RNG_HPP_
