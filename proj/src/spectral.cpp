// SPDX-License-Identifier: Apache-2.0
#include "ssrf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssrf/errors.hpp"

namespace ssrf {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

void validate_noise(const NoiseSpectrum& noise) {
    std::visit(Overloaded{
                   [](const noise::White&) {},
                   [](const noise::GaussianDamped& g) {
                       if (!std::isfinite(g.a) || g.a < 0.0)
                           throw InvalidParameter("noise.a", "damping length must be finite and >= 0");
                   },
                   [](const noise::Tabulated& t) {
                       if (t.points.empty()) throw InvalidParameter("noise.table", "table is empty");
                       for (std::size_t i = 0; i < t.points.size(); ++i) {
                           const auto [k, v] = t.points[i];
                           if (!std::isfinite(k) || !std::isfinite(v) || v < 0.0)
                               throw InvalidParameter("noise.table", "entries must be finite with value >= 0");
                           if (i > 0 && !(k > t.points[i - 1].first))
                               throw InvalidParameter("noise.table", "wavenumbers must be strictly ascending");
                       }
                   },
               },
               noise);
}

double noise_density(const NoiseSpectrum& noise, double k) {
    return std::visit(Overloaded{
                          [](const noise::White&) { return 1.0; },
                          [k](const noise::GaussianDamped& g) { return std::exp(-k * k * g.a * g.a); },
                          [k](const noise::Tabulated& t) {
                              const auto& pts = t.points;
                              if (k <= pts.front().first) return pts.front().second;
                              if (k >= pts.back().first) return pts.back().second;
                              auto hi = std::upper_bound(pts.begin(), pts.end(), k,
                                                         [](double x, const auto& p) { return x < p.first; });
                              auto lo = hi - 1;
                              const double w = (k - lo->first) / (hi->first - lo->first);
                              return lo->second + w * (hi->second - lo->second);
                          },
                      },
                      noise);
}

double ldecay(const ModelParams& params, double k) {
    return derived(params).dtilde * params.polynomial(k);
}

double spd_static(const ModelParams& params, double k) {
    return params.eta0 * params.xi_pow_d() / params.polynomial(k);
}

double spd_lagged(const ModelParams& params, double k, double tau) {
    return spd_static(params, k) * std::exp(-ldecay(params, k) * std::abs(tau));
}

double spd_spacetime(const ModelParams& params, double k, double omega) {
    const double dt = derived(params).dtilde;
    const double rate = dt * params.polynomial(k);
    return 2.0 * params.eta0 * params.xi_pow_d() * dt / (rate * rate + omega * omega);
}

double susceptibility_spectral(const ModelParams& params, double k, double tau) {
    if (!(tau > 0.0)) throw DomainError("susceptibility_spectral: tau must be > 0 (causal response)");
    return -(2.0 / params.noise_d) * ldecay(params, k) * spd_lagged(params, k, tau);
}

BochnerScan bochner_scan(const ModelParams& params, double k_max, int n) {
    if (n < 2) throw InvalidParameter("n", "scan needs at least 2 grid points");
    if (!(k_max > 0.0) || !std::isfinite(k_max)) throw InvalidParameter("k_max", "must be finite and > 0");

    BochnerScan scan;
    scan.report = validate(params);
    auto integrand = [&](double k) { return std::pow(k, params.d - 1) * spd_static(params, k); };

    // Positivity over the grid.
    scan.min_density = spd_static(params, 0.0);
    for (int i = 0; i < n; ++i) {
        const double k = k_max * i / (n - 1);
        const double p = params.polynomial(k);
        const double v = p > 0.0 ? spd_static(params, k) : -1.0;
        scan.min_density = std::min(scan.min_density, v);
    }
    const bool grid_positive = scan.min_density >= 0.0;

    // Trapezoid integrals up to k_max and k_max / 2 on the same spacing.
    const double h = k_max / (n - 1);
    double total = 0.0;
    double half = 0.0;
    const int n_half = (n - 1) / 2;
    for (int i = 0; i < n - 1; ++i) {
        const double seg = 0.5 * h * (integrand(i * h) + integrand((i + 1) * h));
        total += seg;
        if (i < n_half) half += seg;
    }
    scan.integral = total;
    scan.integral_half = half;
    scan.tail_exponent =
        std::log(integrand(k_max) / integrand(0.5 * k_max)) / std::log(2.0);

    // Integrable tail iff the integrand decays faster than 1/k.
    const bool converges = grid_positive && scan.tail_exponent < -1.05;
    scan.report.spectrally_positive = scan.report.spectrally_positive && grid_positive;
    scan.report.finite_variance = converges;
    std::ostringstream os;
    os << "int_0^k dk k^{d-1} spd: " << half << " (k=" << 0.5 * k_max << "), " << total << " (k=" << k_max
       << "), tail slope " << scan.tail_exponent << (converges ? " -> finite" : " -> divergent");
    scan.report.messages.push_back(os.str());
    if (!grid_positive) scan.report.messages.push_back("spectral density negative on the scan grid");
    return scan;
}

} // namespace ssrf
