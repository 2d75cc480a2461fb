#pragma once

#include <cstdint>
#include <random>

namespace plap {

// mt19937_64 is fully specified by the standard; the real mapping below is too, so draws are
// reproducible across platforms (std::uniform_real_distribution is not).
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

// magnitude in [lo, hi] with a random sign
inline double signed_uniform(Rng& rng, double lo, double hi) {
  double v = uniform(rng, lo, hi);
  return (rng() & 1u) ? v : -v;
}

}  // namespace plap
