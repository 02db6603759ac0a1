#pragma once

// Independent reference computations used by the tests.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp50 = boost::multiprecision::cpp_bin_float_50;
using cplx = std::complex<double>;

inline double bessel_j(int n, double x) {
  return static_cast<double>(boost::math::cyl_bessel_j(n, mp50(x)));
}
inline double bessel_y(int n, double x) {
  return static_cast<double>(boost::math::cyl_neumann(n, mp50(x)));
}
inline cplx hankel2(int n, double x) { return {bessel_j(n, x), -bessel_y(n, x)}; }

// Romberg extrapolation of the trapezoid rule on [a, b] with 2^levels panels
// at the finest level.
inline cplx romberg(const std::function<cplx(double)>& f, double a, double b, int levels) {
  std::vector<std::vector<cplx>> r(levels + 1, std::vector<cplx>(levels + 1));
  double h = b - a;
  r[0][0] = 0.5 * h * (f(a) + f(b));
  for (int i = 1; i <= levels; ++i) {
    h *= 0.5;
    cplx sum{};
    const long long count = 1LL << (i - 1);
    for (long long k = 1; k <= count; ++k) sum += f(a + static_cast<double>(2 * k - 1) * h);
    r[i][0] = 0.5 * r[i - 1][0] + h * sum;
    double factor = 1.0;
    for (int j = 1; j <= i; ++j) {
      factor *= 4.0;
      r[i][j] = r[i][j - 1] + (r[i][j - 1] - r[i - 1][j - 1]) / (factor - 1.0);
    }
  }
  return r[levels][levels];
}

inline std::filesystem::path temp_dir(const std::string& name) {
  const char* base = std::getenv("HOLLOWFIELD_TEST_TMP");
  std::filesystem::path dir = base ? std::filesystem::path(base)
                                   : std::filesystem::temp_directory_path() / "hollowfield_tests";
  dir /= name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
