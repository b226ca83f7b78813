#pragma once

#include <numbers>

namespace plab {

namespace detail {

// J0 power series; converges for all x, accurate to double precision on [0, 4].
constexpr double bessel_j0_series(double x) {
  const double q = -(x * x) / 4.0;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 40; ++m) {
    term *= q / (static_cast<double>(m) * m);
    sum += term;
  }
  return sum;
}

constexpr double first_bessel_zero() {
  double lo = 2.0, hi = 3.0;  // J0(2) > 0 > J0(3)
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0_series(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

constexpr double fourth_root(double x) {
  // Newton on y^4 = x, x > 0.
  double y = x > 1.0 ? x : 1.0;
  for (int it = 0; it < 100; ++it) y = 0.75 * y + 0.25 * x / (y * y * y);
  return y;
}

} // namespace detail

struct Constants {
  double j;
  double pi_j_sq;
  double lambda_hexa1;
  double ell_hexa1;
  double pleijel;
};

inline constexpr double kBesselZero = detail::first_bessel_zero();
inline constexpr double kTwelveQuarter = detail::fourth_root(12.0);

inline constexpr Constants kConstants{
    kBesselZero,
    std::numbers::pi * kBesselZero * kBesselZero,
    18.5901,  // first Dirichlet eigenvalue of the unit-area regular hexagon
    2.0 * kTwelveQuarter,
    4.0 / (kBesselZero * kBesselZero),
};

constexpr const Constants& constants() { return kConstants; }

static_assert(kBesselZero > 2.4048 && kBesselZero < 2.4049);

} // namespace plab
