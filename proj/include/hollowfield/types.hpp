#pragma once

#include <complex>
#include <numbers>

namespace hollowfield {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Cartesian point in meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Polar coordinates: radius in meters, angle in radians on (-pi, pi].
struct Polar {
  double r = 0.0;
  double phi = 0.0;
};

inline double degrees_to_radians(double deg) { return deg * kPi / 180.0; }

}  // namespace hollowfield
