// SPDX-License-Identifier: Apache-2.0
#include "ssrf/simulate.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <sstream>

#include "ssrf/errors.hpp"
#include "ssrf/philox.hpp"
#include "ssrf/spectral.hpp"

namespace ssrf {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

constexpr std::size_t kMaxValues = std::size_t{1} << 28;

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Fft {
  public:
    Fft(const GridSpec& grid, int sign) : size_(grid.points()) {
        std::lock_guard lock(planner_mutex());
        buf_ = fftw_alloc_complex(size_);
        std::array<int, 3> dims{grid.n, grid.n, grid.n};
        plan_ = fftw_plan_dft(grid.d, dims.data(), buf_, buf_, sign, FFTW_ESTIMATE);
    }
    ~Fft() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(buf_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    cplx* data() { return reinterpret_cast<cplx*>(buf_); }
    void run() { fftw_execute(plan_); }

  private:
    std::size_t size_;
    fftw_complex* buf_ = nullptr;
    fftw_plan plan_ = nullptr;
};

std::array<int, 3> unravel(const GridSpec& g, std::size_t j) {
    std::array<int, 3> c{0, 0, 0};
    for (int a = g.d - 1; a >= 0; --a) {
        c[a] = static_cast<int>(j % g.n);
        j /= g.n;
    }
    return c;
}

std::size_t ravel(const GridSpec& g, const std::array<int, 3>& c) {
    std::size_t j = 0;
    for (int a = 0; a < g.d; ++a) j = j * g.n + static_cast<std::size_t>(c[a]);
    return j;
}

std::size_t partner(const GridSpec& g, std::size_t j) {
    auto c = unravel(g, j);
    for (int a = 0; a < g.d; ++a) c[a] = (g.n - c[a]) % g.n;
    return ravel(g, c);
}

double axis_wavenumber(const GridSpec& g, int c) {
    const int m = c <= g.n / 2 ? c : c - g.n;
    return 2.0 * pi * m / g.length();
}

std::size_t lag_steps(double lag, double unit, const char* field) {
    const double q = std::round(std::abs(lag) / unit);
    if (std::abs(q * unit - std::abs(lag)) > 1e-9 * std::max(unit, std::abs(lag)))
        throw InvalidParameter(field, "lags must be integer multiples of the grid step");
    return static_cast<std::size_t>(q);
}

} // namespace

std::size_t GridSpec::points() const {
    std::size_t p = 1;
    for (int a = 0; a < d; ++a) p *= static_cast<std::size_t>(n);
    return p;
}

void validate(const GridSpec& grid) {
    if (grid.d < 1 || grid.d > 3) throw InvalidParameter("d", "spatial dimension must be 1, 2 or 3");
    if (grid.n < 8 || (grid.n & (grid.n - 1)) != 0) throw InvalidParameter("n", "must be a power of two >= 8");
    if (!(grid.spacing > 0.0) || !std::isfinite(grid.spacing)) throw InvalidParameter("spacing", "must be > 0");
}

std::span<const double> FieldGrid::snapshot(std::size_t t_index) const {
    if (t_index >= times.size()) throw InvalidParameter("t_index", "time index out of range");
    const std::size_t m = grid.points();
    return {values.data() + t_index * m, m};
}

double mode_wavenumber(const GridSpec& grid, std::size_t j) {
    const auto c = unravel(grid, j);
    double k2 = 0.0;
    for (int a = 0; a < grid.d; ++a) {
        const double k = axis_wavenumber(grid, c[a]);
        k2 += k * k;
    }
    return std::sqrt(k2);
}

FieldGrid simulate(const ModelParams& params, const GridSpec& grid, double t_end, double dt, std::uint64_t seed) {
    require_permissible(params);
    validate(grid);
    if (params.d != grid.d) throw InvalidParameter("d", "grid and model dimensions differ");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt", "must be finite and > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidParameter("t_end", "must be finite and >= 0");
    if (grid.d >= 2 && t_end > 0.0)
        throw InvalidParameter("t_end", "d >= 2 supports static snapshots only (t_end = 0)");

    const std::size_t steps = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
    const std::size_t m = grid.points();
    if ((steps + 1) > kMaxValues / m) throw InvalidParameter("t_end", "requested field exceeds the memory cap");

    FieldGrid out;
    out.grid = grid;
    out.seed = seed;
    out.params = params;
    out.times.resize(steps + 1);
    for (std::size_t s = 0; s <= steps; ++s) out.times[s] = s * dt;
    out.values.resize((steps + 1) * m);
    if (params.mu == 0.0 && grid.d >= 2) {
        std::ostringstream os;
        os << "mu = 0 in d = " << grid.d << ": the variance is finite only through the grid cutoff k_max = pi/spacing = "
           << pi / grid.spacing;
        out.warnings.push_back(os.str());
    }

    // Per-mode constants: stationary std, one-step decay and innovation std.
    const double volume = std::pow(grid.length(), grid.d);
    std::vector<double> sd(m), decay(m), innov(m);
    std::vector<std::size_t> mate(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double k = mode_wavenumber(grid, j);
        const double rate = ldecay(params, k);
        sd[j] = std::sqrt(volume * spd_static(params, k));
        decay[j] = std::exp(-rate * dt);
        innov[j] = sd[j] * std::sqrt(-std::expm1(-2.0 * rate * dt));
        mate[j] = partner(grid, j);
    }

    std::vector<cplx> modes(m);
    Fft fft(grid, FFTW_BACKWARD);
    const double norm = 1.0 / volume;
    const auto count = static_cast<std::int64_t>(m);

    for (std::size_t s = 0; s <= steps; ++s) {
#pragma omp parallel for schedule(static)
        for (std::int64_t jj = 0; jj < count; ++jj) {
            const auto j = static_cast<std::size_t>(jj);
            const std::size_t p = mate[j];
            if (p < j) continue; // filled by its partner
            const auto z = rng::normal_pair(seed, j, s);
            const double scale = s == 0 ? sd[j] : innov[j];
            const double base = s == 0 ? 0.0 : decay[j];
            if (p == j) {
                modes[j] = cplx(base * modes[j].real() + scale * z[0], 0.0);
            } else {
                modes[j] = base * modes[j] + scale * std::numbers::sqrt2 * 0.5 * cplx(z[0], z[1]);
                modes[p] = std::conj(modes[j]);
            }
        }

        std::copy(modes.begin(), modes.end(), fft.data());
        fft.run();
        const cplx* x = fft.data();
        double* row = out.values.data() + s * m;
        double sum2 = 0.0;
        double imag_max = 0.0;
        for (std::size_t l = 0; l < m; ++l) {
            row[l] = norm * x[l].real();
            sum2 += row[l] * row[l];
            imag_max = std::max(imag_max, norm * std::abs(x[l].imag()));
        }
        const double rms = std::sqrt(sum2 / m);
        if (rms > 0.0) out.imag_residue = std::max(out.imag_residue, imag_max / rms);
    }
    return out;
}

std::vector<cplx> field_modes(const FieldGrid& field, std::size_t t_index) {
    const auto snap = field.snapshot(t_index);
    Fft fft(field.grid, FFTW_FORWARD);
    std::copy(snap.begin(), snap.end(), fft.data());
    fft.run();
    const double cell = std::pow(field.grid.spacing, field.grid.d);
    std::vector<cplx> out(fft.data(), fft.data() + snap.size());
    for (auto& v : out) v *= cell;
    return out;
}

double grid_covariance(const ModelParams& params, const GridSpec& grid, double r, double tau) {
    validate(grid);
    if (params.d != grid.d) throw InvalidParameter("d", "grid and model dimensions differ");
    const std::size_t m = grid.points();
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double k = mode_wavenumber(grid, j);
        const double k0 = axis_wavenumber(grid, unravel(grid, j)[0]);
        sum += spd_lagged(params, k, tau) * std::cos(k0 * r);
    }
    return sum / std::pow(grid.length(), grid.d);
}

std::vector<EmpiricalCovEntry> empirical_cov(const FieldGrid& field, const std::vector<double>& r_lags,
                                             const std::vector<double>& t_lags) {
    const GridSpec& g = field.grid;
    validate(g);
    const std::size_t nt = field.times.size();
    const std::size_t m = g.points();
    if (nt == 0 || field.values.size() != nt * m) throw EstimationError("field has no complete snapshots");
    const double t_step = nt > 1 ? field.times[1] - field.times[0] : 0.0;

    const int blocks = std::min(16, g.n);
    const std::size_t per_slab = m / g.n; // sites with a fixed first coordinate
    if (blocks < 4) throw EstimationError("grid too small for block averaging");

    std::vector<EmpiricalCovEntry> out;
    out.reserve(r_lags.size() * t_lags.size());
    for (double r : r_lags) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidParameter("r", "spatial lag must be finite and >= 0");
        const std::size_t shift = lag_steps(r, g.spacing, "r");
        if (shift > static_cast<std::size_t>(g.n / 2)) throw EstimationError("spatial lag exceeds half the grid");
        for (double tau : t_lags) {
            if (!std::isfinite(tau)) throw InvalidParameter("tau", "time lag must be finite");
            std::size_t q = 0;
            if (tau != 0.0) {
                if (nt < 2) throw EstimationError("time lag requested from a single snapshot");
                q = lag_steps(tau, t_step, "tau");
            }
            if (q >= nt) throw EstimationError("time lag exceeds the simulated interval");
            const std::size_t origins = nt - q;

            std::vector<double> block_sum(blocks, 0.0);
            for (std::size_t t = 0; t < origins; ++t) {
                const double* x0 = field.values.data() + t * m;
                const double* x1 = field.values.data() + (t + q) * m;
                for (std::size_t l = 0; l < m; ++l) {
                    const auto c = unravel(g, l);
                    double acc = 0.0;
                    for (int a = 0; a < g.d; ++a) {
                        auto up = c;
                        auto down = c;
                        up[a] = static_cast<int>((c[a] + shift) % g.n);
                        down[a] = static_cast<int>((c[a] + g.n - shift % g.n) % g.n);
                        acc += 0.5 * (x1[ravel(g, up)] + x1[ravel(g, down)]);
                    }
                    const int b = static_cast<int>(static_cast<std::size_t>(c[0]) * blocks / g.n);
                    block_sum[b] += x0[l] * acc / g.d;
                }
            }
            const double block_count = static_cast<double>(origins) * per_slab * (g.n / blocks);
            double mean = 0.0;
            for (double& b : block_sum) {
                b /= block_count;
                mean += b;
            }
            mean /= blocks;
            double var = 0.0;
            for (double b : block_sum) var += (b - mean) * (b - mean);
            var /= (blocks - 1);

            EmpiricalCovEntry e;
            e.r = r;
            e.tau = tau;
            e.value = mean;
            e.std_error = std::sqrt(var / blocks);
            e.pairs = origins * m;
            out.push_back(e);
        }
    }
    return out;
}

ConstraintStats constraint_stats(const GridSpec& g, std::span<const double> x) {
    validate(g);
    if (x.size() != g.points()) throw InvalidParameter("values", "snapshot size does not match the grid");
    const double h = g.spacing;
    const double cell = std::pow(h, g.d);
    ConstraintStats s;
    for (std::size_t l = 0; l < x.size(); ++l) {
        const auto c = unravel(g, l);
        double lap = -2.0 * g.d * x[l];
        for (int a = 0; a < g.d; ++a) {
            auto up = c;
            auto down = c;
            up[a] = (c[a] + 1) % g.n;
            down[a] = (c[a] + g.n - 1) % g.n;
            const double xu = x[ravel(g, up)];
            const double grad = (xu - x[l]) / h;
            s.s1 += grad * grad;
            lap += xu + x[ravel(g, down)];
        }
        lap /= h * h;
        s.s0 += x[l] * x[l];
        s.s2 += lap * lap;
    }
    s.s0 *= cell;
    s.s1 *= cell;
    s.s2 *= cell;
    return s;
}

ConstraintStats constraint_stats(const FieldGrid& field, std::size_t t_index) {
    return constraint_stats(field.grid, field.snapshot(t_index));
}

ConstraintStats expected_constraints(const ModelParams& params, const GridSpec& grid) {
    validate(grid);
    require_permissible(params);
    if (params.d != grid.d) throw InvalidParameter("d", "grid and model dimensions differ");
    ConstraintStats e;
    const double h = grid.spacing;
    for (std::size_t j = 0; j < grid.points(); ++j) {
        const auto c = unravel(grid, j);
        double symbol = 0.0;
        for (int a = 0; a < grid.d; ++a) {
            const double s = 2.0 * std::sin(0.5 * axis_wavenumber(grid, c[a]) * h) / h;
            symbol += s * s;
        }
        const double spd = spd_static(params, mode_wavenumber(grid, j));
        e.s0 += spd;
        e.s1 += spd * symbol;
        e.s2 += spd * symbol * symbol;
    }
    return e;
}

} // namespace ssrf
