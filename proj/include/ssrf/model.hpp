// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace ssrf {

/// Parameters of the Spartan space-time model.
///
/// The static spectral density is eta0 xi^d / (1 + eta1 (k xi)^2 + mu (k xi)^4)
/// and every Fourier mode relaxes at rate D~ (1 + eta1 (k xi)^2 + mu (k xi)^4),
/// with D~ = D / (2 xi^d eta0). The noise variance D is stored; D~ is always
/// derived from it.
struct ModelParams {
    int d = 1;            ///< spatial dimension, 1..3
    double eta0 = 1.0;    ///< scale coefficient, units [X]^2
    double eta1 = 1.0;    ///< rigidity coefficient (may be negative when mu > 0)
    double xi = 1.0;      ///< characteristic length
    double mu = 0.0;      ///< curvature coefficient
    double noise_d = 1.0; ///< white-noise variance D

    /// Builds a parameter set from D~ instead of D (D = 2 xi^d eta0 D~).
    static ModelParams from_dtilde(int d, double eta0, double eta1, double xi,
                                   double mu, double dtilde);

    /// xi^d.
    double xi_pow_d() const;
    /// 1 + eta1 (k xi)^2 + mu (k xi)^4.
    double polynomial(double k) const;

    bool operator==(const ModelParams&) const = default;
};

struct DerivedConstants {
    double dtilde; ///< D / (2 xi^d eta0)
    double beta0;  ///< 1 / (eta0 xi^d)
    double beta2;  ///< eta1 xi^2 / (eta0 xi^d)
    double eta1_xi2;

    /// D~ |tau| eta1 xi^2
    double beta1(double tau) const;
};

struct PermissibilityReport {
    bool spectrally_positive = false;
    bool finite_variance = false;
    bool oscillatory = false;
    std::vector<std::string> messages;
};

/// Classifies a parameter set. Throws InvalidParameter (naming the field) for
/// non-finite values, non-positive eta0 / xi / D, negative mu or d outside 1..3.
PermissibilityReport validate(const ModelParams& params);

/// Like validate(), but additionally rejects parameter sets whose spectral
/// density is not strictly positive.
void require_permissible(const ModelParams& params);

DerivedConstants derived(const ModelParams& params);

} // namespace ssrf
