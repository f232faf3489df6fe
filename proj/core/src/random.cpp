#include "hmsvm/random.hpp"

#include <bit>
#include <cmath>

#include "hmsvm/errors.hpp"

namespace hmsvm {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * factor;
  has_cached_ = true;
  return u * factor;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InputError("Rng::below: empty range");
  if (n == 1) return 0;
  const int bits = std::bit_width(n - 1);
  const int shift = 64 - bits;
  for (;;) {
    const std::uint64_t candidate = engine_() >> shift;
    if (candidate < n) return candidate;
  }
}

}  // namespace hmsvm
