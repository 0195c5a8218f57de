// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssrf/cov_types.hpp"
#include "ssrf/model.hpp"
#include "ssrf/quadrature.hpp"

namespace ssrf {

// Closed and semi-analytic covariances for mu = 0, eta1 > 0. Each function
// throws WrongMethod when the parameter set is outside its domain.
//
// Notation: rho = r / (sqrt(eta1) xi), s = sqrt(D~ |tau|).

/// d = 1 explicit erfc form. Lags with D~|tau| < 1e-14 use the tau = 0 limit.
CovValue cov_closed_d1(const ModelParams& params, Lag lag);

/// d = 3 explicit erfc form; r = 0 throws SingularityError.
CovValue cov_closed_d3(const ModelParams& params, Lag lag);

/// C(0, tau). d = 2, 3 with tau = 0 throws SingularityError.
CovValue cov_zero_space(const ModelParams& params, double tau);

/// C(r, 0) via K_{d/2-1}. r = 0 returns eta0 / (2 sqrt(eta1)) for d = 1 and
/// throws SingularityError for d = 2, 3.
CovValue cov_zero_time(const ModelParams& params, double r);

/// Univariate integral over the spectral "time" variable, evaluated by
/// adaptive Gauss-Kronrod on a log-substituted monotone integrand.
CovValue cov_univariate_integral(const ModelParams& params, Lag lag, const QuadratureSpec& quad = {});

/// Expansion in powers of mu through order 2M (requires eta1 > 0, mu >= 0).
/// Warns when mu > 0.2 or when the terms stop decreasing at the cutoff.
/// Throws SingularityError at r = tau = 0 when mu > 0 (higher terms diverge).
CovValue cov_small_mu(const ModelParams& params, Lag lag, int M, const QuadratureSpec& quad = {});

/// Evaluates with a named method. zero_space / zero_time use lag.tau / lag.r
/// and require the other component to vanish.
CovValue cov_evaluate(const ModelParams& params, Lag lag, CovMethod method, const QuadratureSpec& quad = {},
                      int small_mu_order = 2);

/// closed_d1 when d = 1 and mu = 0, spectral_quadrature otherwise.
CovMethod auto_method(const ModelParams& params);

} // namespace ssrf
