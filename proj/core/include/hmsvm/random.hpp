#pragma once

#include <cstdint>
#include <random>

namespace hmsvm {

/// Seeded generator with a fully specified output stream.
///
/// Bits come from std::mt19937_64, whose sequence is fixed by the standard.
/// Uniform doubles take the top 53 bits; normals use the Marsaglia polar
/// method (pairs are generated and the second value is cached); bounded
/// integers use rejection on the top bits. None of the implementation-defined
/// std:: distributions are involved, so a seed reproduces the same stream on
/// every conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via the polar method.
  double normal();
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace hmsvm
