#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mrproxy {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for replicate `index` of a run keyed by `master`:
//   derive_seed(m, i) = splitmix64(m ^ splitmix64(i + 0x632be59bd9b4e019))
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Counter-based stream keyed by (seed, individual index, variable tag).
// Draw k of a stream is a pure function of the key and k, so any partition
// of individuals across workers reproduces the serial output exactly.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index, std::uint64_t tag)
      : key_(splitmix64(splitmix64(seed ^ splitmix64(tag)) + index)) {}

  std::uint64_t next_u64() {
    return splitmix64(key_ ^ (0xd1b54a32d192ed03ULL * ++counter_));
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * bound) >> 64);
  }

  // Box-Muller, cosine branch only; one normal per two uniforms.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mrproxy
