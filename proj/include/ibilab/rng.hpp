#pragma once

#include <cstdint>
#include <random>

namespace ibilab::rng {

inline constexpr char kPrngId[] = "mt19937_64+splitmix64";

// splitmix64 step (Vigna). Used for channel tap phases and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Small counter-based stream of doubles in [0,1). Bit-exact everywhere.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64() { return splitmix64(state_); }
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Independent sub-stream seeds from (seed, salt...) without correlating streams.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t s = seed ^ (salt * 0xD6E8FEB86659FD93ull + 0x2545F4914F6CDD1Dull);
  return splitmix64(s);
}
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive(derive(seed, a), b);
}

// Bulk generator with explicit transforms; std::*_distribution are not
// bit-reproducible across standard libraries, these are.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }
  int next_bit() { return static_cast<int>(gen_() >> 63); }
  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Box-Muller; returns one standard normal per call (pairs cached).
  double next_gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ibilab::rng
