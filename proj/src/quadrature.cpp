// SPDX-License-Identifier: Apache-2.0
#include "ssrf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "ssrf/errors.hpp"
#include "ssrf/gauss_kronrod.hpp"
#include "ssrf/specfun.hpp"

namespace ssrf {

void validate(const QuadratureSpec& quad) {
    if (!(quad.k_cut > 0.0) || !std::isfinite(quad.k_cut)) throw InvalidParameter("k_cut", "must be finite and > 0");
    if (!(quad.rel_tol > 0.0 && quad.rel_tol < 1.0)) throw InvalidParameter("rel_tol", "must lie in (0, 1)");
    if (quad.max_subdiv < 1) throw InvalidParameter("max_subdiv", "must be >= 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1/pi, 1/(2 pi), 1/(2 pi^2): radial reduction of (2 pi)^{-d} int d^dk.
double radial_constant(int d) {
    using std::numbers::pi;
    switch (d) {
        case 1: return 1.0 / pi;
        case 2: return 1.0 / (2.0 * pi);
        default: return 1.0 / (2.0 * pi * pi);
    }
}

// int_kc^inf k^{d-1} e^{-a k^2} dk
double gaussian_moment_tail(int d, double a, double kc) {
    using std::numbers::pi;
    const double s = std::sqrt(a);
    switch (d) {
        case 1: return std::sqrt(pi) / (2.0 * s) * specfun::erfc(s * kc);
        case 2: return std::exp(-a * kc * kc) / (2.0 * a);
        default:
            return kc * std::exp(-a * kc * kc) / (2.0 * a) +
                   std::sqrt(pi) / (4.0 * a * s) * specfun::erfc(s * kc);
    }
}

// noise_sup bounds the noise density beyond kc; gauss_a2 > 0 adds an extra
// factor e^{-gauss_a2 k^2} that is known to multiply the integrand.
double tail_bound_impl(const ModelParams& p, double dtilde, double tau, double kc, double noise_sup,
                       double gauss_a2 = 0.0) {
    if (noise_sup == 0.0) return 0.0;
    const int d = p.d;
    const double xi = p.xi;
    const double at = dtilde * std::abs(tau);
    const double amp = radial_constant(d) * std::exp(-at) * p.eta0 * p.xi_pow_d() * noise_sup;
    double best = kInf;

    if (p.eta1 >= 0.0) {
        // P >= 1 and increasing, so e^{-at (P-1)} <= 1.
        if (p.mu > 0.0)
            best = std::min(best, amp / (p.mu * std::pow(xi, 4)) * std::pow(kc, d - 4) / (4.0 - d));
        if (p.eta1 > 0.0 && d == 1) best = std::min(best, amp / (p.eta1 * xi * xi) / kc);
        const double a = at * p.eta1 * xi * xi + gauss_a2;
        if (a > 0.0) best = std::min(best, amp / p.polynomial(kc) * gaussian_moment_tail(d, a, kc));
    } else {
        // For x = (k xi)^2 >= max(2|eta1|, 2) / mu: P >= mu x^2 / 2 >= 1 and P increasing.
        const double x = kc * kc * xi * xi;
        const double xstar = std::max(2.0 * std::abs(p.eta1), 2.0) / p.mu;
        if (x >= xstar) {
            best = std::min(best, amp / (0.5 * p.mu * std::pow(xi, 4)) * std::pow(kc, d - 4) / (4.0 - d));
            if (gauss_a2 > 0.0) best = std::min(best, amp / p.polynomial(kc) * gaussian_moment_tail(d, gauss_a2, kc));
        }
    }
    return best;
}

double noise_sup_beyond(const NoiseSpectrum& noise, double kc) {
    if (std::holds_alternative<noise::White>(noise)) return 1.0;
    if (const auto* g = std::get_if<noise::GaussianDamped>(&noise)) return std::exp(-(kc * g->a) * (kc * g->a));
    const auto& pts = std::get<noise::Tabulated>(noise).points;
    double sup = noise_density(noise, kc);
    for (const auto& [k, v] : pts)
        if (k >= kc) sup = std::max(sup, v);
    return sup;
}

// Wynn epsilon extrapolation of a sequence of partial sums; returns the
// deepest even-column entry and sets err to its distance from the previous one.
double wynn_epsilon(const std::vector<double>& sums, double& err) {
    const std::size_t n = sums.size();
    std::vector<double> prev(n + 1, 0.0);
    std::vector<double> cur(sums.begin(), sums.end());
    double best = sums.back();
    double best_prev = n > 1 ? sums[n - 2] : sums.back();
    for (std::size_t k = 1; cur.size() > 1; ++k) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const double diff = cur[i + 1] - cur[i];
            if (diff == 0.0) {
                err = 0.0;
                return cur[i + 1];
            }
            next[i] = prev[i + 1] + 1.0 / diff;
        }
        if (k % 2 == 0 && !next.empty() && std::isfinite(next.back())) {
            best = next.back();
            best_prev = next.size() > 1 ? next[next.size() - 2] : best;
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    err = std::abs(best - best_prev);
    return best;
}

struct RadialProblem {
    int d;
    double r;
    double dt_tau; // D~ |tau|
    double amp;    // radial constant * e^{-D~|tau|} * eta0 xi^d
    const ModelParams* params;
    const NoiseSpectrum* noise;
    bool white;

    double operator()(double k) const {
        const double poly = params->polynomial(k);
        double w = std::exp(-dt_tau * (poly - 1.0)) / poly;
        if (!white) w *= noise_density(*noise, k);
        const double kr = k * r;
        switch (d) {
            case 1: return w * std::cos(kr);
            case 2: return w * k * specfun::bessel_j(0.0, kr);
            default: return w * k * k * (kr == 0.0 ? 1.0 : std::sin(kr) / kr);
        }
    }

    // k-th positive zero of the kernel (approximate for J0, exact otherwise).
    double zero(int n) const {
        using std::numbers::pi;
        switch (d) {
            case 1: return (n - 0.5) * pi / r;
            case 2: {
                const double b = (n - 0.25) * pi;
                return (b + 1.0 / (8.0 * b) - 124.0 / (3.0 * std::pow(8.0 * b, 3))) / r;
            }
            default: return n * pi / r;
        }
    }
};

struct Accumulator {
    double value = 0.0;
    double error = 0.0;
};

CovValue radial_covariance(const ModelParams& params, const NoiseSpectrum& noise, Lag lag,
                           const QuadratureSpec& quad) {
    require_permissible(params);
    validate(quad);
    validate_noise(noise);
    if (!(lag.r >= 0.0) || !std::isfinite(lag.r)) throw InvalidParameter("r", "spatial lag must be finite and >= 0");
    if (!std::isfinite(lag.tau)) throw InvalidParameter("tau", "time lag must be finite");

    const auto dc = derived(params);
    const bool white = std::holds_alternative<noise::White>(noise);
    if (params.mu == 0.0 && params.d >= 2 && lag.r == 0.0 && lag.tau == 0.0 && noise_sup_beyond(noise, 1e300) > 0.0)
        throw SingularityError("covariance diverges at r = 0, tau = 0 for mu = 0 in d >= 2 (infinite variance)");

    const double dt_tau = dc.dtilde * std::abs(lag.tau);
    RadialProblem f{params.d, lag.r, dt_tau,
                    radial_constant(params.d) * std::exp(-dt_tau) * params.eta0 * params.xi_pow_d(),
                    &params, &noise, white};
    // bound in units of the integral (amp factored out)
    const auto* gauss = std::get_if<noise::GaussianDamped>(&noise);
    const double gauss_a2 = gauss ? gauss->a * gauss->a : 0.0;
    auto bound_at = [&](double k) {
        const double sup = gauss ? 1.0 : noise_sup_beyond(noise, k);
        return tail_bound_impl(params, dc.dtilde, lag.tau, k, sup, gauss_a2) / f.amp;
    };

    const double tol = quad.rel_tol;
    const double k0 = 0.5 / params.xi;
    Accumulator acc;
    std::vector<std::string> warnings;

    auto integrate_panel = [&](double a, double b) {
        const double abs_tol = 1e-2 * tol * std::abs(acc.value);
        const auto res = quad::integrate_adaptive(f, a, b, abs_tol, 1e-2 * tol, quad.max_subdiv);
        if (!res.converged && res.abs_error > tol * std::max(std::abs(acc.value), std::abs(res.value)))
            throw AccuracyError("spectral quadrature: panel [" + std::to_string(a) + ", " + std::to_string(b) +
                                    "] did not converge",
                                f.amp * (acc.value + res.value));
        acc.value += res.value;
        acc.error += res.abs_error;
    };
    // Geometric panels keep every adaptive call on a single length scale.
    auto integrate_range = [&](double a, double b) {
        double lo = a;
        if (lo < k0) {
            const double hi = std::min(k0, b);
            integrate_panel(lo, hi);
            lo = hi;
        }
        while (lo < b) {
            const double hi = std::min(2.0 * lo, b);
            integrate_panel(lo, hi);
            lo = hi;
        }
    };
    auto finish = [&](double tail) {
        CovValue out;
        out.value = f.amp * acc.value;
        out.method = CovMethod::spectral_quadrature;
        out.est_error = f.amp * (acc.error + tail);
        out.warnings = std::move(warnings);
        return out;
    };

    const bool oscillatory = lag.r > 0.0 && quad.scheme == QuadScheme::oscillatory_partition;
    if (!oscillatory) {
        integrate_range(0.0, quad.k_cut);
        double k = quad.k_cut;
        for (int doubling = 0; doubling < 200; ++doubling) {
            const double tb = bound_at(k);
            if (tb <= 0.5 * tol * std::abs(acc.value)) {
                if (k > quad.k_cut) {
                    std::ostringstream os;
                    os << "spectral cutoff extended from " << quad.k_cut << " to " << k;
                    warnings.push_back(os.str());
                }
                return finish(tb);
            }
            integrate_range(k, 2.0 * k);
            k *= 2.0;
        }
        throw AccuracyError("spectral quadrature: tail bound not met after cutoff extension", f.amp * acc.value);
    }

    // Oscillatory kernel: integrate between consecutive zeros, stop once the
    // tail bound certifies the sum or the extrapolated tail has converged.
    constexpr int kMaxSegments = 400000;
    constexpr int kWindow = 30;
    std::vector<double> partials;
    double k_prev = 0.0;
    double last_ext = std::numeric_limits<double>::quiet_NaN();
    int stable = 0;
    for (int n = 1; n <= kMaxSegments; ++n) {
        const double k_next = f.zero(n);
        integrate_range(k_prev, k_next);
        k_prev = k_next;

        const double tb = bound_at(k_prev);
        if (tb <= 0.5 * tol * std::abs(acc.value)) return finish(tb);
        if (k_prev < quad.k_cut) continue;

        partials.push_back(acc.value);
        if (partials.size() > static_cast<std::size_t>(kWindow)) partials.erase(partials.begin());
        if (partials.size() < 6) continue;
        double ext_err = 0.0;
        const double ext = wynn_epsilon(partials, ext_err);
        const double change = std::abs(ext - last_ext);
        const double target = 0.5 * tol * std::abs(ext);
        stable = (std::isfinite(change) && change <= target && ext_err <= 10.0 * target) ? stable + 1 : 0;
        last_ext = ext;
        if (stable >= 2) {
            acc.value = ext;
            return finish(std::max(change, ext_err));
        }
        if (partials.size() >= static_cast<std::size_t>(kWindow) && n > 2000 &&
            k_prev > 50.0 * std::max(quad.k_cut, 1.0))
            break;
    }
    throw AccuracyError("spectral quadrature: oscillatory tail did not converge", f.amp * acc.value);
}

} // namespace

CovValue cov_spectral_numeric(const ModelParams& params, Lag lag, const QuadratureSpec& quad) {
    return radial_covariance(params, noise::White{}, lag, quad);
}

CovValue cov_colored_noise(const ModelParams& params, const NoiseSpectrum& noise, Lag lag,
                           const QuadratureSpec& quad) {
    return radial_covariance(params, noise, lag, quad);
}

double tail_bound(const ModelParams& params, Lag lag, double k_cut) {
    if (!(k_cut > 0.0)) throw InvalidParameter("k_cut", "must be > 0");
    require_permissible(params);
    return tail_bound_impl(params, derived(params).dtilde, lag.tau, k_cut, 1.0);
}

} // namespace ssrf
