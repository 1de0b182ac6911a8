#include "arena/rng.hpp"

#include <cmath>
#include <limits>

namespace arena {

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

unsigned Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  unsigned k = 0;
  double p = uniform01();
  while (p > limit) {
    ++k;
    p *= uniform01();
  }
  return k;
}

double Rng::normal() {
  // Box-Muller, one value per call.
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(base);
  for (auto t : tags) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace arena
