// SPDX-License-Identifier: Apache-2.0
#include "ssrf/covariance.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ssrf/errors.hpp"
#include "ssrf/gauss_kronrod.hpp"
#include "ssrf/specfun.hpp"

namespace ssrf {

namespace {

constexpr std::array<std::string_view, 7> kMethodNames = {
    "closed_d1", "closed_d3", "zero_space", "zero_time", "univariate_integral", "small_mu_series",
    "spectral_quadrature",
};

constexpr double kLimitThreshold = 1e-14;

using std::numbers::pi;

CovValue make(double value, CovMethod method) {
    CovValue v;
    v.value = value;
    v.method = method;
    return v;
}

void require_lag(Lag lag) {
    if (!std::isfinite(lag.r) || lag.r < 0.0) throw InvalidParameter("r", "spatial lag must be finite and >= 0");
    if (!std::isfinite(lag.tau)) throw InvalidParameter("tau", "time lag must be finite");
}

// Shared preconditions of every mu = 0 formula.
void require_curvature_free(const ModelParams& p, const char* method) {
    validate(p);
    if (p.mu != 0.0) throw WrongMethod(method, "requires mu = 0");
    if (!(p.eta1 > 0.0)) throw WrongMethod(method, "requires eta1 > 0");
}

// e^{-rho} erfc(s - q) and e^{rho} erfc(s + q) with q = rho / (2 s), s > 0.
// Both are rewritten through erfcx so that no factor overflows.
std::pair<double, double> erfc_pair(double rho, double s) {
    const double q = rho / (2.0 * s);
    const double common = std::exp(-s * s - q * q);
    const double y1 = s - q;
    const double t1 = y1 >= 0.0 ? common * specfun::erfcx(y1) : std::exp(-rho) * specfun::erfc(y1);
    const double t2 = common * specfun::erfcx(s + q);
    return {t1, t2};
}

// e^{-s^2} / (sqrt(pi) s) - erfc(s), which cancels badly for large s.
double zero_space_d3_bracket(double s) {
    if (s <= 6.0) return std::exp(-s * s) / (std::sqrt(pi) * s) - specfun::erfc(s);
    // erfcx(s) ~ (1 / (sqrt(pi) s)) sum_n (-1)^n (2n-1)!! / (2 s^2)^n
    const double x = 1.0 / (2.0 * s * s);
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n < 60; ++n) {
        const double next = -term * (2 * n - 1) * x;
        if (std::abs(next) > std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return -std::exp(-s * s) / (std::sqrt(pi) * s) * sum;
}

double zero_space_value(const ModelParams& p, double tau) {
    const double dt = derived(p).dtilde * std::abs(tau);
    switch (p.d) {
        case 1: return 0.5 * p.eta0 / std::sqrt(p.eta1) * specfun::erfc(std::sqrt(dt));
        case 2: return -p.eta0 / (4.0 * pi * p.eta1) * specfun::expint_ei(-dt);
        default:
            return p.eta0 / (4.0 * pi * std::pow(p.eta1, 1.5)) * zero_space_d3_bracket(std::sqrt(dt));
    }
}

struct LogIntegral {
    double value = 0.0;
    double error = 0.0;
};

// int over w = ln u of f(u) from max(ln sqrt(beta1), w_lo) to ln u_hi.
template <class F>
LogIntegral integrate_log(F&& f, double w_lo, double w_hi, const QuadratureSpec& quad, const char* what) {
    LogIntegral out;
    if (!(w_hi > w_lo)) return out;
    // Unit-width panels keep every adaptive call on one length scale.
    const int panels = std::max(1, static_cast<int>(std::ceil(w_hi - w_lo)));
    const double h = (w_hi - w_lo) / panels;
    for (int i = 0; i < panels; ++i) {
        const double a = w_lo + i * h;
        const auto res = quad::integrate_adaptive([&](double w) { return f(std::exp(w)); }, a, a + h,
                                                  1e-3 * quad.rel_tol * std::abs(out.value), 1e-2 * quad.rel_tol,
                                                  quad.max_subdiv);
        out.value += res.value;
        out.error += res.abs_error;
        if (!res.converged && res.abs_error > quad.rel_tol * std::abs(out.value))
            throw AccuracyError(std::string(what) + ": integral did not converge", out.value);
    }
    return out;
}

} // namespace

std::string_view to_string(CovMethod m) { return kMethodNames[static_cast<std::size_t>(m)]; }

std::optional<CovMethod> parse_cov_method(std::string_view name) {
    for (std::size_t i = 0; i < kMethodNames.size(); ++i)
        if (kMethodNames[i] == name) return static_cast<CovMethod>(i);
    return std::nullopt;
}

CovValue cov_closed_d1(const ModelParams& p, Lag lag) {
    require_curvature_free(p, "closed_d1");
    if (p.d != 1) throw WrongMethod("closed_d1", "requires d = 1");
    require_lag(lag);
    const double rho = lag.r / (std::sqrt(p.eta1) * p.xi);
    const double pre = p.eta0 / (2.0 * std::sqrt(p.eta1));
    const double dt = derived(p).dtilde * std::abs(lag.tau);
    if (dt < kLimitThreshold) return make(pre * std::exp(-rho), CovMethod::closed_d1);
    const auto [t1, t2] = erfc_pair(rho, std::sqrt(dt));
    return make(0.5 * pre * (t1 + t2), CovMethod::closed_d1);
}

CovValue cov_closed_d3(const ModelParams& p, Lag lag) {
    require_curvature_free(p, "closed_d3");
    if (p.d != 3) throw WrongMethod("closed_d3", "requires d = 3");
    require_lag(lag);
    if (lag.r == 0.0)
        throw SingularityError("closed_d3: r = 0 is outside the explicit form "
                               "(infinite variance at tau = 0; use zero_space for C(0, tau))");
    const double rho = lag.r / (std::sqrt(p.eta1) * p.xi);
    const double pre = p.eta0 * p.xi / (4.0 * pi * p.eta1 * lag.r);
    const double dt = derived(p).dtilde * std::abs(lag.tau);
    if (dt < kLimitThreshold) return make(pre * std::exp(-rho), CovMethod::closed_d3);
    const double s = std::sqrt(dt);
    // The bracket difference loses digits like 1/rho; below this the
    // zero-space value is exact to O(rho^2).
    if (rho < 1e-6 * std::min(1.0, s)) return make(zero_space_value(p, lag.tau), CovMethod::closed_d3);
    const auto [t1, t2] = erfc_pair(rho, s);
    return make(0.5 * pre * (t1 - t2), CovMethod::closed_d3);
}

CovValue cov_zero_space(const ModelParams& p, double tau) {
    require_curvature_free(p, "zero_space");
    require_lag({0.0, tau});
    if (p.d >= 2 && tau == 0.0)
        throw SingularityError("zero_space: C(0, 0) is infinite for mu = 0 in d = " + std::to_string(p.d));
    return make(zero_space_value(p, tau), CovMethod::zero_space);
}

CovValue cov_zero_time(const ModelParams& p, double r) {
    require_curvature_free(p, "zero_time");
    require_lag({r, 0.0});
    if (r == 0.0) {
        if (p.d == 1) return make(p.eta0 / (2.0 * std::sqrt(p.eta1)), CovMethod::zero_time);
        throw SingularityError("zero_time: C(0, 0) is infinite for mu = 0 in d = " + std::to_string(p.d));
    }
    const double rho = r / (p.xi * std::sqrt(p.eta1));
    const double half_d = 0.5 * p.d;
    const double pre = std::pow(2.0, half_d) * p.eta0 / std::pow(4.0 * pi * p.eta1, half_d);
    return make(pre * std::pow(rho, 1.0 - half_d) * specfun::bessel_k(half_d - 1.0, rho), CovMethod::zero_time);
}

CovValue cov_univariate_integral(const ModelParams& p, Lag lag, const QuadratureSpec& quad) {
    require_curvature_free(p, "univariate_integral");
    require_lag(lag);
    validate(quad);
    if (p.d >= 2 && lag.r == 0.0 && lag.tau == 0.0)
        throw SingularityError("univariate_integral: C(0, 0) is infinite for mu = 0 in d = " + std::to_string(p.d));

    // With u^2 = beta1 + beta2 kappa the integrand becomes
    // (2 / beta2) u^{2-d} e^{-r^2/(4u^2) - beta0 (u^2 - beta1) / beta2} per unit ln u.
    const auto dc = derived(p);
    const double b1 = dc.beta1(lag.tau);
    const double scale = dc.beta2 / dc.beta0; // eta1 xi^2
    const double r2 = lag.r * lag.r;
    auto f = [&](double u) {
        const double u2 = u * u;
        return std::pow(u, 2 - p.d) * std::exp(-r2 / (4.0 * u2) - (u2 - b1) / scale);
    };
    double w_lo = b1 > 0.0 ? 0.5 * std::log(b1) : 0.5 * std::log(scale) - 40.0;
    if (lag.r > 0.0) w_lo = std::max(w_lo, std::log(lag.r / 60.0));
    const double w_hi = 0.5 * std::log(b1 + 80.0 * scale);
    const auto res = integrate_log(f, w_lo, w_hi, quad, "univariate_integral");

    const double pre = std::exp(-dc.dtilde * std::abs(lag.tau)) / std::pow(4.0 * pi, 0.5 * p.d) * 2.0 / dc.beta2;
    CovValue out = make(pre * res.value, CovMethod::univariate_integral);
    out.est_error = pre * res.error;
    return out;
}

CovValue cov_small_mu(const ModelParams& p, Lag lag, int M, const QuadratureSpec& quad) {
    validate(p);
    require_lag(lag);
    validate(quad);
    if (!(p.eta1 > 0.0)) throw WrongMethod("small_mu_series", "requires eta1 > 0");
    if (M < 1) throw InvalidParameter("M", "truncation order must be >= 1");
    const int m_max = p.mu == 0.0 ? 0 : 2 * M;
    if (p.d >= 2 && p.mu == 0.0 && lag.r == 0.0 && lag.tau == 0.0)
        throw SingularityError("small_mu_series: C(0, 0) is infinite for mu = 0 in d = " + std::to_string(p.d));
    if (m_max > 0 && lag.r == 0.0 && lag.tau == 0.0)
        throw SingularityError("small_mu_series: the correction terms diverge at r = tau = 0");

    const auto dc = derived(p);
    const double b1 = dc.beta1(lag.tau);
    const double scale = dc.beta2 / dc.beta0;
    const double r2 = lag.r * lag.r;
    const double half_d = 0.5 * p.d;
    const double ratio = p.xi * p.xi / p.eta1; // v / u^2
    const double pre = std::exp(-dc.dtilde * std::abs(lag.tau)) / std::pow(4.0 * pi, half_d) * 2.0 / dc.beta2;

    CovValue out = make(0.0, CovMethod::small_mu_series);
    double err = 0.0;
    double prev_mag = 0.0;
    double last_mag = 0.0;
    bool growing = false;
    double coef = 1.0; // (-mu)^m / m! * (xi^2 / eta1)^m
    for (int m = 0; m <= m_max; ++m) {
        if (m > 0) coef *= -p.mu * ratio / m;
        const double a = 2.0 * m + half_d;
        auto f = [&](double u) {
            const double u2 = u * u;
            const double z = r2 / (4.0 * u2);
            const double hyp = lag.r == 0.0 ? 1.0 : specfun::hyp1f1(a, half_d, -z);
            return std::pow(u, 2 - p.d - 2 * m) * hyp * std::exp(-(u2 - b1) / scale);
        };
        double w_lo = b1 > 0.0 ? 0.5 * std::log(b1) : 0.5 * std::log(scale) - 40.0;
        if (lag.r > 0.0) w_lo = std::max(w_lo, std::log(lag.r / (2.0 * std::sqrt(700.0 + 40.0 * m))));
        const double w_hi = 0.5 * std::log(b1 + 80.0 * scale);
        const auto res = integrate_log(f, w_lo, w_hi, quad, "small_mu_series");
        const double factor = pre * coef * specfun::rising_factorial(half_d, 2 * m);
        const double term = factor * res.value;
        out.value += term;
        err += std::abs(factor) * res.error;
        prev_mag = last_mag;
        last_mag = std::abs(term);
        if (m >= 2 && m == m_max && last_mag >= prev_mag) growing = true;
    }
    out.est_error = err + (m_max > 0 ? last_mag : 0.0);
    if (p.mu > 0.2) {
        std::ostringstream os;
        os << "mu = " << p.mu << " exceeds 0.2; the small-mu expansion may be inaccurate";
        out.warnings.push_back(os.str());
    }
    if (growing) out.warnings.push_back("small-mu series terms are not decreasing at the truncation order");
    return out;
}

CovMethod auto_method(const ModelParams& params) {
    return params.d == 1 && params.mu == 0.0 ? CovMethod::closed_d1 : CovMethod::spectral_quadrature;
}

CovValue cov_evaluate(const ModelParams& params, Lag lag, CovMethod method, const QuadratureSpec& quad,
                      int small_mu_order) {
    switch (method) {
        case CovMethod::closed_d1: return cov_closed_d1(params, lag);
        case CovMethod::closed_d3: return cov_closed_d3(params, lag);
        case CovMethod::zero_space:
            if (lag.r != 0.0) throw WrongMethod("zero_space", "requires r = 0");
            return cov_zero_space(params, lag.tau);
        case CovMethod::zero_time:
            if (lag.tau != 0.0) throw WrongMethod("zero_time", "requires tau = 0");
            return cov_zero_time(params, lag.r);
        case CovMethod::univariate_integral: return cov_univariate_integral(params, lag, quad);
        case CovMethod::small_mu_series: return cov_small_mu(params, lag, small_mu_order, quad);
        case CovMethod::spectral_quadrature: return cov_spectral_numeric(params, lag, quad);
    }
    throw InvalidParameter("method", "unknown covariance method");
}

} // namespace ssrf
