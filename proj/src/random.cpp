#include "bolab/random.hpp"

#include <cmath>

namespace bolab {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t index) : engine_(stream_seed(seed, index)) {}

double SampleRng::normal() { return normal_(engine_); }

complex SampleRng::complex_gaussian() {
  static const double s = std::sqrt(0.5);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

double SampleRng::uniform() { return uniform_(engine_); }

}  // namespace bolab
