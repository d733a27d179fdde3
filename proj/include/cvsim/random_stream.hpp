#pragma once

#include <cmath>
#include <cstdint>

namespace cvsim {

/// Source of standard-normal deviates. Measurements draw through this
/// interface so tests can substitute prescribed sequences.
class NormalSource {
 public:
  virtual ~NormalSource() = default;
  virtual double next_normal() = 0;
};

/// Deterministic per-shot random stream: identical (seed, shot_index) gives
/// an identical draw sequence on every platform. xoshiro256++ seeded via
/// splitmix64; normals via Box-Muller (two uniforms per draw).
class RandomStream final : public NormalSource {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t shot_index = 0)
      : seed_(seed), shot_index_(shot_index), counter_(0) {
    std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (shot_index + 1));
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t shot_index() const { return shot_index_; }
  std::uint64_t counter() const { return counter_; }

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

  // Uniform on (0, 1].
  double next_uniform() {
    ++counter_;
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double next_normal() override {
    ++counter_;
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t shot_index_;
  std::uint64_t counter_;
  std::uint64_t state_[4];
};

}  // namespace cvsim
