// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace ssrf::stats {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0; ///< sample standard deviation / sqrt(n)
};

MeanSe mean_se(std::span<const double> x);

/// Asymptotic p-value of the two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

/// Upper tail P(X > x) of the chi-squared distribution with dof degrees of freedom.
double chi2_sf(double x, double dof);

} // namespace ssrf::stats
