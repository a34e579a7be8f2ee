#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace ulr {

// Deterministic random source shared by noise and dataset generators.
// Engine: std::mt19937_64 seeded with the 64-bit seed (its output sequence is
// fixed by the C++ standard). uniform() = (x >> 11) * 2^-53. normal() uses the
// Box-Muller transform, first cos then sin variate of each pair. Only these
// primitives are used so results do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();                       // [0, 1)
  double uniform(double low, double high);
  int uniform_int(int low, int high);      // inclusive
  double normal();                         // N(0, 1)

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace ulr
