// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssrf/model.hpp"

namespace ssrf {

/// Periodic grid with n points of the given spacing along each of d axes.
struct GridSpec {
    int d = 1;
    int n = 1024;          ///< points per axis, a power of two >= 8
    double spacing = 0.5;

    std::size_t points() const;  ///< n^d
    double length() const { return n * spacing; }
};

void validate(const GridSpec& grid);

/// A simulated realization, values stored row-major as [time][site] with
/// the site index running fastest along the last axis.
struct FieldGrid {
    GridSpec grid;
    std::vector<double> times;
    std::vector<double> values;
    std::uint64_t seed = 0;
    ModelParams params;
    double imag_residue = 0.0;          ///< max |Im x| / rms(x) after the inverse transforms
    std::vector<std::string> warnings;

    std::span<const double> snapshot(std::size_t t_index) const;
};

/// Runs the Langevin dynamics: every Fourier mode is an Ornstein-Uhlenbeck
/// process with rate ldecay(k) and stationary variance
/// (n spacing)^d spd_static(k), advanced with its exact one-step law and
/// started from the stationary distribution. Sample times are 0, dt, ...,
/// up to t_end. d = 2, 3 support static snapshots only (t_end = 0).
///
/// The noise of mode j at step s is a Philox stream keyed by seed, so the
/// output does not depend on the number of threads.
FieldGrid simulate(const ModelParams& params, const GridSpec& grid, double t_end, double dt, std::uint64_t seed);

/// Fourier coefficients X_j = spacing^d sum_l x_l e^{-i k_j s_l} of one snapshot,
/// in FFT order.
std::vector<std::complex<double>> field_modes(const FieldGrid& field, std::size_t t_index);

/// Wavenumber magnitude of the mode with FFT-order multi-index (linear index j).
double mode_wavenumber(const GridSpec& grid, std::size_t j);

/// Covariance of the discretized model: (n spacing)^{-d} sum_j spd_static(k_j)
/// e^{-ldecay(k_j)|tau|} cos(k_j r) with r along the first axis.
double grid_covariance(const ModelParams& params, const GridSpec& grid, double r, double tau);

struct EmpiricalCovEntry {
    double r = 0.0;
    double tau = 0.0;
    double value = 0.0;
    double std_error = 0.0; ///< from spatial block averaging
    std::size_t pairs = 0;
};

/// Space-time averaged product estimator with known zero mean, periodic in
/// space, symmetrized over +-r (and averaged over the d axes). Lags must be
/// multiples of the grid spacing and of the sampling interval. Entries are
/// ordered row-major over r then tau. Throws EstimationError when a lag
/// leaves fewer than two time pairs or the grid is too small for blocking.
std::vector<EmpiricalCovEntry> empirical_cov(const FieldGrid& field, const std::vector<double>& r_lags,
                                             const std::vector<double>& t_lags);

/// Discretized constraint integrals: sum of squares, squared forward
/// differences and squared discrete Laplacian, each times spacing^d.
struct ConstraintStats {
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
};

ConstraintStats constraint_stats(const FieldGrid& field, std::size_t t_index);
ConstraintStats constraint_stats(const GridSpec& grid, std::span<const double> snapshot);

/// E[constraint_stats] for the discretized model, using the exact symbols
/// (2 sin(k spacing / 2) / spacing)^2 of the difference operators.
ConstraintStats expected_constraints(const ModelParams& params, const GridSpec& grid);

} // namespace ssrf
