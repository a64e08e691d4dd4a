#pragma once

#include <cstdint>

namespace cara {

// Counter-based generator: splitmix64 finalizer applied to
// seed + counter * golden ratio. Stateless per draw, so instance
// generation can be indexed (and parallelized) by counter while staying
// bit-reproducible, and is easy to replicate in other languages.
inline uint64_t splitmix64_at(uint64_t seed, uint64_t counter) {
  uint64_t x = seed + counter * 0x9e3779b97f4a7c15ULL;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Sign from the low bit: 0 -> +1, 1 -> -1.
inline int sign_at(uint64_t seed, uint64_t counter) {
  return (splitmix64_at(seed, counter) & 1ULL) ? -1 : 1;
}

// Uniform double in [0, 1), 53 bits.
inline double uniform_at(uint64_t seed, uint64_t counter) {
  return static_cast<double>(splitmix64_at(seed, counter) >> 11) * 0x1.0p-53;
}

// Sequential convenience wrapper over the counter mode. The starting
// counter lets independent draw streams share one seed without overlap.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t start_counter = 0)
      : seed_(seed), counter_(start_counter) {}

  uint64_t next_u64() { return splitmix64_at(seed_, counter_++); }
  double next_double() { return uniform_at(seed_, counter_++); }
  int next_sign() { return sign_at(seed_, counter_++); }

  // Uniform integer in [0, bound) by rejection-free modulo; fine for the
  // desk-scale bounds used here.
  uint64_t next_below(uint64_t bound) { return next_u64() % bound; }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

}  // namespace cara
