#pragma once

#include <cstdint>
#include <random>
#include <span>

#include <boost/random/normal_distribution.hpp>

namespace gex {

using Engine = std::mt19937_64;

// Seed of the independent substream owned by replication `index` under
// master seed `seed`. Pure function of its inputs, so a replication draws
// the same numbers whichever worker happens to run it.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

// Substream for one replication; `lane` separates independent consumers
// inside the same replication (e.g. the anchor draw vs. the path normals).
Engine substream(std::uint64_t seed, std::uint64_t index, std::uint64_t lane = 0);

class NormalSource {
 public:
  explicit NormalSource(Engine& engine) : engine_(engine) {}

  double operator()() { return dist_(engine_); }

  void fill(std::span<double> out) {
    for (double& v : out) v = dist_(engine_);
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

 private:
  Engine& engine_;
  boost::random::normal_distribution<double> dist_;
};

}  // namespace gex
