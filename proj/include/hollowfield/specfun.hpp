#pragma once

#include <span>

#include "hollowfield/types.hpp"

/// Integer-order cylinder functions of real positive argument.
///
/// All routines accept orders |n| <= kMaxOrder and arguments
/// x >= kMinArgument; anything else raises DomainError. Negative orders use
/// the reflection Z_{-n} = (-1)^n Z_n applied to the positive-order value.
namespace hollowfield::specfun {

inline constexpr int kMaxOrder = 64;
inline constexpr double kMinArgument = 1e-3;

double bessel_j(int n, double x);
double bessel_y(int n, double x);

/// H_n^(2)(x) = J_n(x) - i Y_n(x).
Complex hankel2(int n, double x);

/// J_0..J_nmax and Y_0..Y_nmax in one pass; both spans need nmax + 1 slots.
void bessel_jy_sequence(int nmax, double x, std::span<double> j, std::span<double> y);

/// H^(2)_0..H^(2)_nmax; `out` needs nmax + 1 slots.
void hankel2_sequence(int nmax, double x, std::span<Complex> out);

}  // namespace hollowfield::specfun
