// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Special functions needed by the covariance formulas.
///
/// Accuracy contracts (checked against 50-digit references in the tests):
///   erfc, erfcx        relative 1e-12 on [-6, 26]
///   bessel_k           relative 1e-12 on [1e-6, 700]
///   bessel_j           absolute 1e-12 on [0, 1e4]
///   expint_ei          relative 1e-10 on [-700, -1e-12]
///   hyp1f1             relative 1e-10 for the terminating (a - b in 2N) case
namespace ssrf::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

double erfc(double x);

/// Scaled complementary error function exp(x^2) erfc(x), x >= 0.
/// Throws DomainError for negative arguments.
double erfcx(double x);

/// Exponential integral Ei(x) for x < 0. Throws DomainError for x >= 0.
double expint_ei(double x);

/// Modified Bessel function of the second kind, orders -1/2, 0 and 1/2 only.
double bessel_k(double nu, double x);

/// Bessel function of the first kind, orders -1/2, 0 and 1/2 only.
double bessel_j(double nu, double x);

/// Confluent hypergeometric function 1F1(a; b; z) for z <= 0, b > 0.
/// Throws AccuracyError (carrying the partial sum) if the series does not
/// converge within the term cap.
double hyp1f1(double a, double b, double z);

/// Rising factorial a (a+1) ... (a+n-1).
double rising_factorial(double a, int n);

} // namespace ssrf::specfun
