// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace tdcoord::qp {

// One half-plane cp*p + cq*q <= rhs of an inscribed polygon approximation
// of the disk p^2 + q^2 <= rating^2.
struct HalfPlane {
  double cp = 0.0;
  double cq = 0.0;
  double rhs = 0.0;
};

// Inscribed regular m-gon with vertices on the circle, rotated so no edge
// normal is axis-aligned: edge k has normal angle (2k+1)*pi/m and offset
// rating*cos(pi/m). Every feasible (p, q) lies inside the true disk; a
// zero rating pins (p, q) to the origin. Requires m >= 4 and m even.
std::vector<HalfPlane> polygonize_disk(double rating, int sides);

}  // namespace tdcoord::qp
