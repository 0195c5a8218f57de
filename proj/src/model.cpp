// SPDX-License-Identifier: Apache-2.0
#include "ssrf/model.hpp"

#include <cmath>
#include <sstream>

#include "ssrf/errors.hpp"

namespace ssrf {

ModelParams ModelParams::from_dtilde(int d, double eta0, double eta1, double xi,
                                     double mu, double dtilde) {
    ModelParams p{d, eta0, eta1, xi, mu, 1.0};
    p.noise_d = 2.0 * p.xi_pow_d() * eta0 * dtilde;
    return p;
}

double ModelParams::xi_pow_d() const {
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= xi;
    return v;
}

double ModelParams::polynomial(double k) const {
    const double x = (k * xi) * (k * xi);
    return 1.0 + eta1 * x + mu * x * x;
}

double DerivedConstants::beta1(double tau) const {
    return dtilde * std::abs(tau) * eta1_xi2;
}

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidParameter(name, "must be a finite number");
}

void require_positive(double v, const char* name) {
    require_finite(v, name);
    if (!(v > 0.0)) throw InvalidParameter(name, "must be > 0");
}

} // namespace

PermissibilityReport validate(const ModelParams& p) {
    if (p.d < 1 || p.d > 3) throw InvalidParameter("d", "spatial dimension must be 1, 2 or 3");
    require_positive(p.eta0, "eta0");
    require_positive(p.xi, "xi");
    require_positive(p.noise_d, "noise_d");
    require_finite(p.eta1, "eta1");
    require_finite(p.mu, "mu");
    if (p.mu < 0.0) throw InvalidParameter("mu", "must be >= 0");

    PermissibilityReport report;
    if (p.mu == 0.0) {
        report.spectrally_positive = p.eta1 > 0.0;
        if (!report.spectrally_positive)
            report.messages.push_back("mu = 0 requires eta1 > 0 for an integrable, positive spectrum");
    } else {
        // 1 + eta1 x + mu x^2 > 0 for all x >= 0 iff eta1 > -2 sqrt(mu);
        // the boundary is a double root and a non-integrable pole.
        const double bound = -2.0 * std::sqrt(p.mu);
        report.spectrally_positive = p.eta1 > bound;
        if (!report.spectrally_positive) {
            std::ostringstream os;
            os << "eta1 = " << p.eta1 << " <= -2 sqrt(mu) = " << bound
               << ": spectral density has a pole or changes sign";
            report.messages.push_back(os.str());
        }
    }

    report.finite_variance = report.spectrally_positive && (p.mu > 0.0 || p.d == 1);
    if (report.spectrally_positive && !report.finite_variance)
        report.messages.push_back("mu = 0 with d >= 2: the covariance is singular at zero lag "
                                  "(infinite variance without a spectral cutoff)");

    report.oscillatory = report.spectrally_positive && p.mu > 0.0 && p.eta1 < 0.0;
    if (report.oscillatory)
        report.messages.push_back("-2 sqrt(mu) < eta1 < 0: the covariance develops negative lobes");
    return report;
}

void require_permissible(const ModelParams& params) {
    const auto report = validate(params);
    if (!report.spectrally_positive)
        throw InvalidParameter("eta1", report.messages.empty() ? "not permissible"
                                                               : report.messages.front());
}

DerivedConstants derived(const ModelParams& p) {
    validate(p);
    const double xid = p.xi_pow_d();
    DerivedConstants c{};
    c.dtilde = p.noise_d / (2.0 * xid * p.eta0);
    c.beta0 = 1.0 / (p.eta0 * xid);
    c.eta1_xi2 = p.eta1 * p.xi * p.xi;
    c.beta2 = c.eta1_xi2 / (p.eta0 * xid);
    return c;
}

} // namespace ssrf
