#pragma once

#include <cstdint>

namespace svlab {

// Counter-based random numbers keyed by (master seed, trial index, draw
// index). Draw i is a pure function of the key and i, which gives two
// properties the harness relies on:
//   - prefix stability: extending a sample keeps the earlier draws;
//   - order independence: trials can run in any order or in parallel and
//     still produce identical streams.
// The generator is the splitmix64 output function over a keyed counter.
class TrialRng {
 public:
  static TrialRng keyed(std::uint64_t master_seed, std::uint64_t trial_index) {
    std::uint64_t k = mix(master_seed ^ 0x35cbf7f37f3d75cbULL);
    k = mix(k + 0x9e3779b97f4a7c15ULL * (trial_index + 1));
    return TrialRng(k);
  }

  // 64 uniform bits for the given draw index.
  std::uint64_t bits(std::uint64_t draw_index) const {
    return mix(key_ + 0x9e3779b97f4a7c15ULL * (draw_index + 1));
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t draw_index) const {
    return static_cast<double>(bits(draw_index) >> 11) * 0x1.0p-53;
  }

 private:
  explicit TrialRng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

  std::uint64_t key_;
};

}  // namespace svlab
