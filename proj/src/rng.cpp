#include "gauss_extremes/rng.hpp"

namespace gex {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Engine substream(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
  std::uint64_t s = substream_seed(seed, index);
  if (lane != 0) s = splitmix64(s ^ splitmix64(lane));
  return Engine(s);
}

}  // namespace gex
