// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssrf/cov_types.hpp"
#include "ssrf/model.hpp"
#include "ssrf/spectral.hpp"

namespace ssrf {

enum class QuadScheme {
    adaptive_gk,           ///< plain adaptive panels, cutoff extended by doubling
    oscillatory_partition, ///< split at kernel zeros, extrapolate the tail (Wynn epsilon)
};

struct QuadratureSpec {
    double k_cut = 100.0;    ///< initial spectral cutoff, extended when the tail bound requires it
    double rel_tol = 1e-9;   ///< target relative error
    int max_subdiv = 2000;   ///< bisection cap per panel
    QuadScheme scheme = QuadScheme::oscillatory_partition;
};

/// Throws InvalidParameter unless k_cut > 0 and 0 < rel_tol < 1.
void validate(const QuadratureSpec& quad);

/// Space-time covariance from the isotropic spectral representation
///
///   C(r, tau) = (2 pi)^{-d} int d^dk e^{i k.r} spd_static(k) e^{-ldecay(k) |tau|}
///
/// reduced to a radial integral with kernel cos(kr) (d=1), k J0(kr) (d=2) or
/// k^2 sinc(kr) (d=3). Valid for any permissible (eta1, mu).
/// Throws SingularityError for the divergent zero-lag configuration
/// (mu = 0, d >= 2, r = tau = 0) and AccuracyError on non-convergence.
CovValue cov_spectral_numeric(const ModelParams& params, Lag lag, const QuadratureSpec& quad = {});

/// Same integral with the driving-noise spectrum c(k) as an extra weight.
CovValue cov_colored_noise(const ModelParams& params, const NoiseSpectrum& noise, Lag lag,
                           const QuadratureSpec& quad = {});

/// Upper bound on the covariance mass discarded beyond k_cut, using
/// |kernel| <= 1 and the algebraic / Gaussian decay of the weight.
/// Returns +inf when no finite bound is available.
double tail_bound(const ModelParams& params, Lag lag, double k_cut);

} // namespace ssrf
