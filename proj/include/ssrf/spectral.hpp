// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "ssrf/model.hpp"

namespace ssrf {

/// Wavenumber magnitude and cyclic temporal frequency.
struct SpectralPoint {
    double k = 0.0;
    double omega = 0.0;
};

namespace noise {
struct White {};
/// c(k) = exp(-k^2 a^2)
struct GaussianDamped {
    double a = 0.0;
};
/// Piecewise-linear in k; clamped to the end values outside the table.
struct Tabulated {
    std::vector<std::pair<double, double>> points; ///< (k, value), k ascending
};
} // namespace noise

/// Spatial spectral density of the driving noise, normalized so that white
/// noise has c(k) = 1.
using NoiseSpectrum = std::variant<noise::White, noise::GaussianDamped, noise::Tabulated>;

/// c(k). Throws InvalidParameter for malformed tables or negative values.
double noise_density(const NoiseSpectrum& noise, double k);
void validate_noise(const NoiseSpectrum& noise);

/// Relaxation rate of mode k: D~ (1 + eta1 (k xi)^2 + mu (k xi)^4).
double ldecay(const ModelParams& params, double k);

/// Zero-lag spatial spectral density eta0 xi^d / (1 + eta1 (k xi)^2 + mu (k xi)^4).
double spd_static(const ModelParams& params, double k);

/// Spatial spectral density at time lag tau: spd_static(k) exp(-ldecay(k) |tau|).
double spd_lagged(const ModelParams& params, double k, double tau);

/// Space-time spectrum 2 eta0 xi^d D~ / (D~^2 P(k)^2 + omega^2).
double spd_spacetime(const ModelParams& params, double k, double omega);
inline double spd_spacetime(const ModelParams& params, SpectralPoint p) {
    return spd_spacetime(params, p.k, p.omega);
}

/// Spectral susceptibility (2/D) dC~(k, tau)/dtau for tau > 0.
/// Throws DomainError for tau <= 0 (the response is causal).
double susceptibility_spectral(const ModelParams& params, double k, double tau);

/// Scans the static spectral density on [0, k_max] (n points): reports
/// positivity on the grid and whether int dk k^{d-1} spd_static converges,
/// judged from the power-law decay of the integrand at the cutoff.
struct BochnerScan {
    PermissibilityReport report;
    double min_density = 0.0;
    double integral = 0.0;      ///< int_0^{k_max} k^{d-1} spd_static dk (trapezoid)
    double integral_half = 0.0; ///< same up to k_max / 2
    double tail_exponent = 0.0; ///< local log-log slope of the integrand at k_max
};
BochnerScan bochner_scan(const ModelParams& params, double k_max, int n);

} // namespace ssrf
