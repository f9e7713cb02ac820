// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "demand/curve.hpp"

using namespace tdcoord;

TEST_CASE("curve coefficients for the symmetric example") {
  // baseline 100, delta 0.5, prices in [10, 25]
  auto c = demand::make_curve(100.0, 0.5, 10.0, 25.0);
  CHECK(c.alpha == doctest::Approx(650.0 / 3.0).epsilon(1e-12));
  CHECK(c.beta == doctest::Approx(20.0 / 3.0).epsilon(1e-12));
  CHECK(c.p_min == doctest::Approx(50.0));
  CHECK(c.p_max == doctest::Approx(150.0));

  CHECK(demand::demand_at_price(c, 10.0) == doctest::Approx(150.0));
  CHECK(demand::demand_at_price(c, 17.5) == doctest::Approx(100.0));
  CHECK(demand::demand_at_price(c, 25.0) == doctest::Approx(50.0));
  // Outside the anchor range demand saturates at the band edges.
  CHECK(demand::demand_at_price(c, 5.0) == doctest::Approx(150.0));
  CHECK(demand::demand_at_price(c, 30.0) == doctest::Approx(50.0));
}

TEST_CASE("utility at the baseline and at the band edges") {
  auto c = demand::make_curve(100.0, 0.5, 10.0, 25.0);
  CHECK(demand::utility(c, c.p_min) == doctest::Approx(0.0).scale(1.0));
  CHECK(demand::utility(c, 100.0) == doctest::Approx(1062.5).epsilon(1e-9));
}

TEST_CASE("marginal utility equals the inverse demand curve") {
  auto c = demand::make_curve(80.0, 0.6, 10.0, 25.0);
  const double h = 1e-6;
  for (double p : {c.p_min + 1.0, 60.0, 80.0, 100.0, c.p_max - 1.0}) {
    double fd = (demand::utility(c, p + h) - demand::utility(c, p - h)) /
                (2.0 * h);
    double inverse = (c.alpha - p) / c.beta;
    CHECK(fd == doctest::Approx(inverse).epsilon(1e-4));
  }
}

TEST_CASE("utility is concave and maximal at the price-floor demand") {
  auto c = demand::make_curve(50.0, 0.4, 10.0, 25.0);
  double prev_slope = 1e300;
  double best_p = c.p_min, best_u = demand::utility(c, c.p_min);
  const int steps = 200;
  for (int i = 1; i <= steps; ++i) {
    double p0 = c.p_min + (c.p_max - c.p_min) * (i - 1) / steps;
    double p1 = c.p_min + (c.p_max - c.p_min) * i / steps;
    double slope = demand::utility(c, p1) - demand::utility(c, p0);
    CHECK(slope <= prev_slope + 1e-9);
    prev_slope = slope;
    if (demand::utility(c, p1) > best_u) {
      best_u = demand::utility(c, p1);
      best_p = p1;
    }
  }
  // Marginal utility >= price_floor > 0 throughout, so the maximum over
  // the band sits at p_max.
  CHECK(best_p == doctest::Approx(c.p_max));
}

TEST_CASE("consumer surplus argmax matches demand_at_price") {
  auto c = demand::make_curve(100.0, 0.5, 10.0, 25.0);
  for (double price : {11.0, 14.0, 17.5, 21.0, 24.0}) {
    double best_p = c.p_min, best = -1e300;
    const int steps = 4000;
    for (int i = 0; i <= steps; ++i) {
      double p = c.p_min + (c.p_max - c.p_min) * i / steps;
      double v = demand::utility(c, p) - price * p;
      if (v > best) {
        best = v;
        best_p = p;
      }
    }
    CHECK(best_p ==
          doctest::Approx(demand::demand_at_price(c, price)).epsilon(1e-3));
  }
}

TEST_CASE("wider flexibility widens the consumption band") {
  auto narrow = demand::make_curve(100.0, 0.2, 10.0, 25.0);
  auto wide = demand::make_curve(100.0, 0.75, 10.0, 25.0);
  CHECK(wide.p_min < narrow.p_min);
  CHECK(wide.p_max > narrow.p_max);
  CHECK(demand::make_curve(80.0, 0.75, 10.0, 25.0).p_min ==
        doctest::Approx(20.0));
  CHECK(demand::make_curve(80.0, 0.75, 10.0, 25.0).p_max ==
        doctest::Approx(140.0));
}

TEST_CASE("fixed loads have no utility term") {
  auto fixed = demand::make_curve(100.0, 0.0, 10.0, 25.0);
  CHECK_FALSE(fixed.flexible());
  CHECK(demand::demand_at_price(fixed, 10.0) == doctest::Approx(100.0));
  CHECK(demand::demand_at_price(fixed, 25.0) == doctest::Approx(100.0));
  CHECK_THROWS_AS(demand::utility(fixed, 100.0), ValidationError);
}

TEST_CASE("make_curve validates its arguments") {
  CHECK_THROWS_AS(demand::make_curve(-1.0, 0.5, 10.0, 25.0), ValidationError);
  CHECK_THROWS_AS(demand::make_curve(100.0, -0.1, 10.0, 25.0),
                  ValidationError);
  CHECK_THROWS_AS(demand::make_curve(100.0, 1.1, 10.0, 25.0), ValidationError);
  CHECK_THROWS_AS(demand::make_curve(100.0, 0.5, 25.0, 10.0), ValidationError);
  CHECK_THROWS_AS(demand::make_curve(100.0, 0.5, 10.0, 10.0), ValidationError);
}
