#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hollowfield/errors.hpp"
#include "hollowfield/specfun.hpp"
#include "oracles.hpp"

using namespace hollowfield;
using namespace hollowfield::specfun;

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) xs.push_back(lo * std::pow(hi / lo, i / double(count - 1)));
  return xs;
}

double ascending_j0(double x) {
  // J0(x) = sum (-x^2/4)^k / (k!)^2, summed in long double.
  long double term = 1.0L;
  long double sum = 1.0L;
  const long double q = -0.25L * x * x;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
  }
  return static_cast<double>(sum);
}

double series_y0(double x) {
  // Y0(x) = (2/pi) [(ln(x/2) + gamma) J0(x) + sum_{k>=1} (-1)^(k+1) H_k (x^2/4)^k / (k!)^2]
  const long double q = 0.25L * x * x;
  long double term = 1.0L;
  long double harmonic = 0.0L;
  long double sum = 0.0L;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    harmonic += 1.0L / k;
    sum += ((k % 2) ? 1.0L : -1.0L) * harmonic * term;
  }
  const long double gamma = 0.57721566490153286060651209L;
  const long double pi = 3.14159265358979323846264338L;
  return static_cast<double>(2.0L / pi * ((std::log(0.5L * x) + gamma) * ascending_j0(x) + sum));
}

}  // namespace

TEST_CASE("J and Y match a 50-digit oracle over the working range") {
  double worst = 0.0;
  for (double x : log_grid(1e-3, 600.0, 61)) {
    for (int n : {0, 1, 2, 3, 5, 8, 13, 21, 30, 40, 45, 64}) {
      const double jr = oracle::bessel_j(n, x);
      const double yr = oracle::bessel_y(n, x);
      // Near zeros of J only absolute accuracy relative to the envelope is meaningful.
      const double env = std::hypot(jr, yr);
      const double ej = std::abs(bessel_j(n, x) - jr) / std::max(std::abs(jr), 1e-300);
      const double ej_env = std::abs(bessel_j(n, x) - jr) / env;
      const double ey = std::abs(bessel_y(n, x) - yr) / std::abs(yr);
      worst = std::max({worst, std::min(ej, ej_env), ey});
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("tabulated values at x = 1") {
  CHECK(std::abs(bessel_j(0, 1.0) - ascending_j0(1.0)) <= 1e-15);
  CHECK(std::abs(bessel_y(0, 1.0) - series_y0(1.0)) <= 1e-15);
  CHECK(bessel_j(0, 1.0) == Catch::Approx(0.765197686557967).epsilon(1e-14));
  CHECK(bessel_y(0, 1.0) == Catch::Approx(0.088256964215677).epsilon(1e-13));
  const Complex h = hankel2(0, 1.0);
  CHECK(h.real() == Catch::Approx(0.765197686557967).epsilon(1e-14));
  CHECK(h.imag() == Catch::Approx(-0.088256964215677).epsilon(1e-13));
}

TEST_CASE("series oracles agree with the implementation for small arguments") {
  for (double x : {0.01, 0.3, 2.0, 5.5, 9.0}) {
    CHECK(std::abs(bessel_j(0, x) - ascending_j0(x)) <= 1e-14);
    CHECK(std::abs(bessel_y(0, x) - series_y0(x)) <= 2e-14 * std::max(1.0, std::abs(series_y0(x))));
  }
}

TEST_CASE("limits near the origin") {
  CHECK(bessel_j(0, 1e-3) == Catch::Approx(1.0).epsilon(1e-6));
  CHECK(bessel_y(0, 1e-3) < -4.0);
}

TEST_CASE("reflection is exact") {
  for (double x : {0.7, 3.5, 2.2, 5.0, 31.0, 250.0}) {
    for (int n = 1; n <= 64; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      CHECK(bessel_j(-n, x) == sign * bessel_j(n, x));
      CHECK(bessel_y(-n, x) == sign * bessel_y(n, x));
      CHECK(hankel2(-n, x) == sign * hankel2(n, x));
    }
  }
  CHECK(bessel_j(-2, 3.5) == bessel_j(2, 3.5));
  CHECK(bessel_y(-3, 2.2) == -bessel_y(3, 2.2));
  CHECK(hankel2(-1, 5.0) == -hankel2(1, 5.0));
}

TEST_CASE("hankel2 is J - iY componentwise") {
  for (double x : {0.01, 1.0, 12.0, 99.0}) {
    for (int n : {0, 1, 7, 40}) {
      const Complex h = hankel2(n, x);
      CHECK(h.real() == bessel_j(n, x));
      CHECK(h.imag() == -bessel_y(n, x));
    }
  }
}

TEST_CASE("Wronskian and recurrences") {
  double worst_w = 0.0;
  double worst_rj = 0.0;
  double worst_ry = 0.0;
  for (double x : log_grid(0.1, 600.0, 80)) {
    for (int n = 0; n <= 45; ++n) {
      const double w = bessel_j(n + 1, x) * bessel_y(n, x) - bessel_j(n, x) * bessel_y(n + 1, x);
      const double ref = 2.0 / (kPi * x);
      worst_w = std::max(worst_w, std::abs(w - ref) / ref);
      if (n >= 1) {
        const double jm = bessel_j(n - 1, x), jp = bessel_j(n + 1, x);
        const double rj = jm + jp - (2.0 * n / x) * bessel_j(n, x);
        worst_rj = std::max(worst_rj, std::abs(rj) / std::max({std::abs(jm), std::abs(jp), 1e-300}));
        const double ym = bessel_y(n - 1, x), yp = bessel_y(n + 1, x);
        const double ry = ym + yp - (2.0 * n / x) * bessel_y(n, x);
        worst_ry = std::max(worst_ry, std::abs(ry) / std::max({std::abs(ym), std::abs(yp), 1e-300}));
      }
    }
  }
  CHECK(worst_w <= 1e-10);
  CHECK(worst_rj <= 1e-10);
  CHECK(worst_ry <= 1e-10);
}

TEST_CASE("large-argument magnitude envelope") {
  for (int n = 0; n <= 45; n += 5) {
    for (double x : log_grid(std::max(10.0 * n, 1.0), 600.0, 20)) {
      const double env = std::sqrt(2.0 / (kPi * x));
      const double mag = std::abs(hankel2(n, x));
      CHECK(mag >= 0.5 * env);
      CHECK(mag <= 1.5 * env);
    }
  }
}

TEST_CASE("sequences match the scalar routines") {
  std::vector<double> j(41), y(41);
  std::vector<Complex> h(41);
  for (double x : {0.05, 4.0, 26.0, 480.0}) {
    bessel_jy_sequence(40, x, j, y);
    hankel2_sequence(40, x, h);
    for (int n = 0; n <= 40; ++n) {
      CHECK(j[n] == bessel_j(n, x));
      CHECK(y[n] == bessel_y(n, x));
      CHECK(h[n] == hankel2(n, x));
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_j(0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_j(0, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_y(65, 1.0), DomainError);
  CHECK_THROWS_AS(hankel2(-65, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_y(0, 5e-4), DomainError);
  CHECK_THROWS_AS(bessel_j(0, std::nan("")), DomainError);
}
