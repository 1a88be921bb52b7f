/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

#ifndef HNL_RNG_HPP
#define HNL_RNG_HPP

#include <cstdint>
#include <random>

namespace hnl {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic seed stream. Child streams are derived by index, so
/// parallel consumers draw from disjoint sequences and every result is a
/// pure function of the root seed regardless of worker count.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : state_(seed) {}

  /// Child stream for the given index; derivation is stateless.
  SeedStream at(std::uint64_t index) const {
    std::uint64_t x = state_ ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL);
    (void)splitmix64(x);
    return SeedStream(splitmix64(x));
  }

  /// Engine for bulk sampling. Each call returns a fresh engine at the
  /// start of the stream.
  std::mt19937_64 engine() const {
    std::uint64_t x = state_;
    std::seed_seq seq{splitmix64(x), splitmix64(x), splitmix64(x), splitmix64(x)};
    return std::mt19937_64(seq);
  }

  /// Next canonical double in [0, 1); advances the stream. Intended for
  /// low-dimensional parameter draws where spinning up an engine per draw
  /// would dominate the cost.
  double next_double() {
    return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
  }

  std::uint64_t raw() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace hnl

#endif
