#pragma once

#include <array>
#include <cstdint>

namespace qnet {

// Threefry2x64-20 counter-based generator. A draw is a pure function of
// (key, counter), so any labelled substream can be read in any order and two
// runs that use the same labels see the same uniforms. That property is what
// makes common-random-number comparisons across perturbed parameter values
// exact rather than approximate.
inline std::array<std::uint64_t, 2> threefry2x64(std::array<std::uint64_t, 2> ctr,
                                                 std::array<std::uint64_t, 2> key) {
  constexpr std::uint64_t parity = 0x1BD11BDAA9FC1A22ULL;
  constexpr int rot[8] = {16, 42, 12, 31, 16, 32, 24, 21};
  const std::uint64_t ks[3] = {key[0], key[1], parity ^ key[0] ^ key[1]};

  std::uint64_t x0 = ctr[0] + ks[0];
  std::uint64_t x1 = ctr[1] + ks[1];
  for (int i = 0; i < 20; ++i) {
    x0 += x1;
    const int r = rot[i % 8];
    x1 = (x1 << r) | (x1 >> (64 - r));
    x1 ^= x0;
    if (i % 4 == 3) {
      const std::uint64_t q = static_cast<std::uint64_t>(i / 4 + 1);
      x0 += ks[q % 3];
      x1 += ks[(q + 1) % 3] + q;
    }
  }
  return {x0, x1};
}

// Top 53 bits -> [0, 1).
inline double to_unit_interval(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

enum class Purpose : std::uint64_t { service = 1, routing = 2, aux = 3 };

// Label-addressed uniform stream. The label (replication, node, purpose, k)
// is hashed into the counter, never advanced, so consumers cannot fall out of
// sync no matter what order events fire in.
struct RandomStream {
  std::uint64_t seed = 0;

  double uniform(std::uint64_t replication, std::uint32_t node, Purpose purpose,
                 std::uint32_t k) const {
    const std::array<std::uint64_t, 2> ctr = {
        replication, (static_cast<std::uint64_t>(node) << 32) | k};
    const std::array<std::uint64_t, 2> key = {seed, static_cast<std::uint64_t>(purpose)};
    return to_unit_interval(threefry2x64(ctr, key)[0]);
  }

  // Derives an independent child seed, used to give every point of a theta
  // sweep its own replication universe.
  std::uint64_t child_seed(std::uint64_t index) const {
    return threefry2x64({index, 0}, {seed, static_cast<std::uint64_t>(Purpose::aux)})[0];
  }
};

// A RandomStream with the replication index bound, which is how the
// simulator consumes it.
struct ReplicationStream {
  const RandomStream* stream = nullptr;
  std::uint64_t replication = 0;

  double uniform(std::uint32_t node, Purpose purpose, std::uint32_t k) const {
    return stream->uniform(replication, node, purpose, k);
  }
};

}  // namespace qnet
