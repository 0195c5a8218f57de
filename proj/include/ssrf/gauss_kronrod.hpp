// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace ssrf::quad {

struct IntegrationResult {
    double value = 0.0;
    double abs_error = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

/// 15-point Kronrod rule (with embedded 7-point Gauss) on [a, b], with the
/// QUADPACK error heuristic.
IntegrationResult gauss_kronrod_15(const std::function<double(double)>& f, double a, double b);

/// Globally adaptive bisection: always splits the interval with the largest
/// error estimate until error <= max(abs_tol, rel_tol |value|) or the
/// subdivision cap is hit (then converged = false).
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol, double rel_tol, int max_subdiv = 2000);

} // namespace ssrf::quad
