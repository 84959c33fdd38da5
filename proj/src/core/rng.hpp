#pragma once

#include <cstdint>
#include <cmath>

namespace extremal {

// splitmix64, used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with a splitmix64-expanded seed. Replica and helper streams are
// derived from (master seed, stream index), so results do not depend on how
// work is scheduled across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master + (stream + 1) * 0x9e3779b97f4a7c15ULL;
    (void)splitmix64(s);
    return splitmix64(s);
  }

  static Rng derive(std::uint64_t master, std::uint64_t stream) {
    return Rng(derive_seed(master, stream));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0,1), 53 random bits.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe under log().
  double uniform_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  // Fresh bits, most significant bit of each word first. The doubling-map
  // state and its bit-stream reference test rely on this exact order.
  int next_bit() {
    if (bits_left_ == 0) {
      bit_buf_ = next_u64();
      bits_left_ = 64;
    }
    const int b = int(bit_buf_ >> 63);
    bit_buf_ <<= 1;
    --bits_left_;
    return b;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  std::uint64_t bit_buf_ = 0;
  int bits_left_ = 0;
};

// Fixed stream tags for helper randomness that should not collide with
// replica streams (replica streams use indices 0..replicas-1).
inline constexpr std::uint64_t kStreamCalibration = 0x10000001ULL << 32;
inline constexpr std::uint64_t kStreamThreshold = 0x10000002ULL << 32;
inline constexpr std::uint64_t kStreamSelectQ = 0x10000003ULL << 32;
inline constexpr std::uint64_t kStreamAux = 0x10000004ULL << 32;

}  // namespace extremal
