#pragma once

#include <cstdint>
#include <string_view>

namespace ncwass {

// Deterministic 64-bit generator (splitmix64). Every random quantity in the
// toolkit flows through one of these; derive() spawns an independent stream
// for a named subtask so that report bytes are reproducible across runs.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (no std::normal_distribution: its output
  // is implementation-defined and would break report determinism).
  double normal();

  Rng derive(std::string_view label) const;
  Rng derive(uint64_t salt) const;

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ncwass
