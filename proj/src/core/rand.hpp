// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

namespace tdcoord {

// Uniform draws built from raw engine words so streams are identical across
// standard-library implementations (std::uniform_real_distribution is not).
inline double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * u01(rng);
}

}  // namespace tdcoord
