#pragma once
#include <cmath>
#include <cstdint>

namespace pigan {

// splitmix64 step; also used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic xoshiro256++ generator. All randomness in the project flows
// through this type so results are bit-stable across standard library
// versions (std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Independent stream seed derived from (master, a, b).
  static std::uint64_t derive(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t st = master;
    std::uint64_t h = splitmix64(st);
    st = h ^ (a + 0x9e3779b97f4a7c15ULL);
    h = splitmix64(st);
    st = h ^ (b + 0xd1b54a32d192ed03ULL);
    return splitmix64(st);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream tags for Rng::derive, so separate consumers of one master seed
// never collide.
namespace seed_tag {
inline constexpr std::uint64_t kDataset = 1;
inline constexpr std::uint64_t kInitGenerator = 2;
inline constexpr std::uint64_t kInitEncoder = 3;
inline constexpr std::uint64_t kInitDiscriminator = 4;
inline constexpr std::uint64_t kTrainLoop = 5;
inline constexpr std::uint64_t kPosterior = 6;
inline constexpr std::uint64_t kSweepCell = 7;
inline constexpr std::uint64_t kTestPoints = 8;
}  // namespace seed_tag

}  // namespace pigan
