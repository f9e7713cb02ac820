// SPDX-License-Identifier: Apache-2.0
#include "qp/polygon.hpp"

#include <cmath>

#include "core/error.hpp"

namespace tdcoord::qp {

std::vector<HalfPlane> polygonize_disk(double rating, int sides) {
  if (!(rating >= 0.0) || !std::isfinite(rating))
    throw ValidationError("polygonize_disk: rating must be non-negative and finite");
  if (sides < 4 || sides % 2 != 0)
    throw ValidationError("polygonize_disk: sides must be even and >= 4");
  const double pi = std::acos(-1.0);
  const double offset = rating * std::cos(pi / sides);
  std::vector<HalfPlane> planes;
  planes.reserve(sides);
  for (int k = 0; k < sides; ++k) {
    const double phi = (2.0 * k + 1.0) * pi / sides;
    planes.push_back({std::cos(phi), std::sin(phi), offset});
  }
  return planes;
}

}  // namespace tdcoord::qp
