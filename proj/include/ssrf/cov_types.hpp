// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ssrf {

/// Spatial lag magnitude r >= 0 and time lag tau (any sign).
struct Lag {
    double r = 0.0;
    double tau = 0.0;
};

enum class CovMethod {
    closed_d1,
    closed_d3,
    zero_space,
    zero_time,
    univariate_integral,
    small_mu_series,
    spectral_quadrature,
};

std::string_view to_string(CovMethod m);
std::optional<CovMethod> parse_cov_method(std::string_view name);

struct CovValue {
    double value = 0.0;
    CovMethod method = CovMethod::spectral_quadrature;
    std::optional<double> est_error; ///< absolute error bound, when the method has one
    std::vector<std::string> warnings;
};

} // namespace ssrf
