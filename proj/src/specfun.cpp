#include "hollowfield/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "hollowfield/errors.hpp"

namespace hollowfield::specfun {
namespace {

// Below this argument J_0, J_1 come from downward recurrence seeded by the
// ascending series and Y_0, Y_1 from Neumann series over those J_k; above
// it, from the Hankel asymptotic expansion.
constexpr double kAsymptoticFrom = 25.0;

// Headroom above max(nmax, x) for the series-seeded downward recurrence.
constexpr int kSeriesHeadroom = 40;

constexpr int kScratch = 1200;

constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kInvPi = std::numbers::inv_pi;

void check_arguments(int n, double x) {
  if (std::abs(n) > kMaxOrder) {
    throw DomainError("cylinder function order " + std::to_string(n) + " outside [-" +
                      std::to_string(kMaxOrder) + ", " + std::to_string(kMaxOrder) + "]");
  }
  if (!std::isfinite(x) || x < kMinArgument) {
    throw DomainError("cylinder function argument " + std::to_string(x) + " below " +
                      std::to_string(kMinArgument));
  }
}

// Ascending series for J_n(x); only used where x^2/4 is small relative to n
// so the alternating sum has no significant cancellation.
double ascending_series_j(int n, double x) {
  const double half = 0.5 * x;
  double lead = 1.0;
  for (int k = 1; k <= n; ++k) lead *= half / k;
  const double q = -half * half;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return lead * sum;
}

struct LowOrder {
  double j0, j1, y0, y1;
};

// Hankel's asymptotic expansion for orders 0 and 1.
LowOrder asymptotic_low_orders(double x) {
  const auto expand = [x](double nu, double& p, double& q) {
    const double mu = 4.0 * nu * nu;
    double a = 1.0;  // a_k(nu) / x^k
    p = 1.0;
    q = 0.0;
    for (int k = 1; k < 200; ++k) {
      const double odd = 2.0 * k - 1.0;
      a *= (mu - odd * odd) / (8.0 * k * x);
      // sign pattern: P = a0 - a2 + a4 ..., Q = a1 - a3 + ...
      const int phase = k % 4;
      if (phase == 1) {
        q += a;
      } else if (phase == 2) {
        p -= a;
      } else if (phase == 3) {
        q -= a;
      } else {
        p += a;
      }
      if (std::abs(a) < 1e-18) break;
    }
  };

  double p0, q0, p1, q1;
  expand(0.0, p0, q0);
  expand(1.0, p1, q1);

  const double s = std::sin(x);
  const double c = std::cos(x);
  const double r = std::numbers::sqrt2 / 2.0;
  // chi_0 = x - pi/4, chi_1 = x - 3pi/4
  const double cos0 = r * (c + s);
  const double sin0 = r * (s - c);
  const double cos1 = r * (s - c);
  const double sin1 = -r * (s + c);
  const double scale = std::sqrt(2.0 * kInvPi / x);

  return {scale * (p0 * cos0 - q0 * sin0), scale * (p1 * cos1 - q1 * sin1),
          scale * (p0 * sin0 + q0 * cos0), scale * (p1 * sin1 + q1 * cos1)};
}

// Small-argument path: fills j[0..top] by downward recurrence seeded with the
// ascending series at the top, then Y_0, Y_1 via Neumann series.
LowOrder series_low_orders(int nmax, double x, std::array<double, kScratch>& j) {
  const int top = std::max(nmax, static_cast<int>(std::ceil(x)) + kSeriesHeadroom);
  j[top + 1] = ascending_series_j(top + 1, x);
  j[top] = ascending_series_j(top, x);
  for (int k = top; k >= 1; --k) {
    j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
  }

  // Y_0 = (2/pi)(ln(x/2) + gamma) J_0 - (4/pi) sum (-1)^k J_2k / k
  // Y_1 = -2 J_0/(pi x) + (2/pi)(ln(x/2) - psi(2)) J_1
  //       - (2/pi) sum (-1)^k (2k+1) J_{2k+1} / (k (k+1))
  double sum0 = 0.0;
  double sum1 = 0.0;
  for (int k = 1; 2 * k + 1 <= top + 1; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum0 += sign * j[2 * k] / k;
    sum1 += sign * (2.0 * k + 1.0) * j[2 * k + 1] / (static_cast<double>(k) * (k + 1));
  }
  const double log_half = std::log(0.5 * x);
  const double y0 = 2.0 * kInvPi * (log_half + kEulerGamma) * j[0] - 4.0 * kInvPi * sum0;
  const double psi2 = 1.0 - kEulerGamma;
  const double y1 =
      -2.0 * kInvPi * j[0] / x + 2.0 * kInvPi * (log_half - psi2) * j[1] - 2.0 * kInvPi * sum1;
  return {j[0], j[1], y0, y1};
}

// Orders above x once J_0, J_1 came from the asymptotic expansion: upward
// recurrence up to floor(x), Miller downward recurrence beyond it, matched
// to the upward values over two overlapping orders.
void fill_j_large_argument(int nmax, double x, std::array<double, kScratch>& j) {
  const int turn = std::min(nmax, static_cast<int>(std::floor(x)));
  for (int k = 1; k < turn; ++k) {
    j[k + 1] = (2.0 * k / x) * j[k] - j[k - 1];
  }
  if (nmax <= turn) return;

  // Start order: forward-recur an auxiliary solution until it has grown by
  // 1e20, which bounds the relative size of J at the start order.
  int start = turn;
  {
    double prev = 0.0;
    double cur = 1.0;
    while ((std::abs(cur) < 1e20 || start <= nmax) && start < kScratch - 8) {
      const double next = (2.0 * start / x) * cur - prev;
      prev = cur;
      cur = next;
      ++start;
    }
    start += 4;
  }
  if (start >= kScratch - 2) {
    throw NumericError("bessel_j: recurrence start order exceeds scratch size");
  }

  std::array<double, kScratch> m{};
  m[start + 1] = 0.0;
  m[start] = 1e-30;
  for (int k = start; k >= turn; --k) {
    m[k - 1] = (2.0 * k / x) * m[k] - m[k + 1];
  }
  const double a = m[turn], b = m[turn - 1];
  const double scale = (j[turn] * a + j[turn - 1] * b) / (a * a + b * b);
  for (int k = turn + 1; k <= nmax; ++k) j[k] = scale * m[k];
}

void sequence_unchecked(int nmax, double x, double* jout, double* yout) {
  std::array<double, kScratch> j{};
  LowOrder low{};
  if (x < kAsymptoticFrom) {
    low = series_low_orders(nmax, x, j);
  } else {
    low = asymptotic_low_orders(x);
    j[0] = low.j0;
    j[1] = low.j1;
    fill_j_large_argument(nmax, x, j);
  }

  if (jout != nullptr) {
    std::copy_n(j.begin(), nmax + 1, jout);
  }
  if (yout != nullptr) {
    yout[0] = low.y0;
    if (nmax >= 1) yout[1] = low.y1;
    for (int k = 1; k < nmax; ++k) {
      yout[k + 1] = (2.0 * k / x) * yout[k] - yout[k - 1];
    }
  }
}

double reflect(int n, double value) { return (n < 0 && (-n) % 2 == 1) ? -value : value; }

}  // namespace

double bessel_j(int n, double x) {
  check_arguments(n, x);
  const int m = std::abs(n);
  std::array<double, kMaxOrder + 2> j{};
  sequence_unchecked(std::max(m, 1), x, j.data(), nullptr);
  return reflect(n, j[m]);
}

double bessel_y(int n, double x) {
  check_arguments(n, x);
  const int m = std::abs(n);
  std::array<double, kMaxOrder + 2> y{};
  sequence_unchecked(std::max(m, 1), x, nullptr, y.data());
  return reflect(n, y[m]);
}

Complex hankel2(int n, double x) {
  check_arguments(n, x);
  const int m = std::abs(n);
  std::array<double, kMaxOrder + 2> j{};
  std::array<double, kMaxOrder + 2> y{};
  sequence_unchecked(std::max(m, 1), x, j.data(), y.data());
  return {reflect(n, j[m]), -reflect(n, y[m])};
}

void bessel_jy_sequence(int nmax, double x, std::span<double> j, std::span<double> y) {
  check_arguments(nmax, x);
  if (nmax < 0) throw DomainError("bessel_jy_sequence: negative maximum order");
  if (j.size() < static_cast<std::size_t>(nmax) + 1 ||
      y.size() < static_cast<std::size_t>(nmax) + 1) {
    throw DomainError("bessel_jy_sequence: output span too small");
  }
  std::array<double, kMaxOrder + 2> jj{};
  std::array<double, kMaxOrder + 2> yy{};
  sequence_unchecked(std::max(nmax, 1), x, jj.data(), yy.data());
  std::copy_n(jj.begin(), nmax + 1, j.begin());
  std::copy_n(yy.begin(), nmax + 1, y.begin());
}

void hankel2_sequence(int nmax, double x, std::span<Complex> out) {
  check_arguments(nmax, x);
  if (nmax < 0) throw DomainError("hankel2_sequence: negative maximum order");
  if (out.size() < static_cast<std::size_t>(nmax) + 1) {
    throw DomainError("hankel2_sequence: output span too small");
  }
  std::array<double, kMaxOrder + 2> jj{};
  std::array<double, kMaxOrder + 2> yy{};
  sequence_unchecked(std::max(nmax, 1), x, jj.data(), yy.data());
  for (int k = 0; k <= nmax; ++k) out[k] = Complex(jj[k], -yy[k]);
}

}  // namespace hollowfield::specfun
