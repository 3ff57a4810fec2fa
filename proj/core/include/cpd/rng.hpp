#pragma once

#include <cstdint>
#include <random>

namespace cpd {

// splitmix64 finalizer, used to decorrelate derived seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform(0,1) doubles from mt19937_64 with explicit 53-bit scaling; streams
// are bit-identical across standard libraries for a given seed.
class Uniform01 {
public:
  explicit Uniform01(std::uint64_t seed) : eng_(mix_seed(seed)) {}

  double next() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 eng_;
};

} // namespace cpd
