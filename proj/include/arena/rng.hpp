#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace arena {

// Seeded random source. Built on mt19937_64 (whose output sequence is fixed
// by the standard); the sampling helpers below avoid std distributions so
// draws are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n). n must be > 0.
  std::size_t index(std::size_t n);

  // Knuth's multiplicative method; fine for the small means used here.
  unsigned poisson(double mean);

  double normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Mixes a base seed with stream tags into an independent child seed.
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> tags);

std::uint64_t fnv1a64(std::string_view text);

}  // namespace arena
