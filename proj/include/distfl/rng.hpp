#pragma once

// Deterministic seeded randomness. Every random decision in the project goes
// through these streams so that runs are bit-identical for a fixed seed on any
// platform (std::uniform_int_distribution is implementation-defined and is
// not used anywhere).

#include <cstdint>

namespace distfl {

// splitmix64; passes through the full 2^64 state space, good enough mixing
// for simulation purposes.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Top k bits of the next output, 0 <= k <= 63.
  uint64_t bits(int k) {
    if (k == 0) return 0;
    return next() >> (64 - k);
  }

  // Unbiased draw from [0, n) by rejection.
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % n;
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

 private:
  uint64_t state_;
};

// Derives an independent per-node stream from (run seed, node kind, node id).
inline SplitMix64 node_stream(uint64_t seed, uint32_t kind, uint32_t id) {
  SplitMix64 mixer(seed ^ (0xa0761d6478bd642fULL * (kind + 1)) ^
                   (0xe7037ed1a0b428dbULL * (uint64_t{id} + 1)));
  // burn one output so nearby ids decorrelate
  mixer.next();
  return mixer;
}

}  // namespace distfl
