#pragma once

#include <cstdint>
#include <random>

namespace specsel {

// SplitMix64 finalizer. Used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// child_seed = mix64(master ^ mix64(stream + golden-ratio constant)).
// Distinct (master, stream) pairs give statistically independent streams, so
// parallel replicates can be seeded without coordination.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Seedable 64-bit generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not (their algorithms are
/// implementation-defined), so every variate is generated here from raw
/// engine output. Identical seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via the Marsaglia polar method.
  double normal();

  // Child generator for sub-stream `stream`; consumes one draw from this one.
  Rng split(std::uint64_t stream) { return Rng(derive_seed(next_u64(), stream)); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace specsel
