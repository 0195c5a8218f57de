// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "ssrf/model.hpp"

namespace ssrf::verify {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double measured = 0.0;  ///< worst error (or statistic) driving the verdict
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    /// Parameters for the curvature-free checks; replaced by the reference
    /// set (eta0 = eta1 = 1, xi = 3, D~ = 1) when mu != 0 or eta1 <= 0. The
    /// oscillation check uses them when they are oscillatory.
    ModelParams params = ModelParams::from_dtilde(1, 1.0, 1.0, 3.0, 0.0, 1.0);
    std::vector<std::string> only;            ///< check names or ids; empty = all
    std::map<std::string, double> tolerances; ///< overrides, see tolerance_names()
    int threads = 0;                          ///< 0 = leave the OpenMP default
};

/// Check names in id order (1-based).
const std::vector<std::string>& check_names();

/// Tunable tolerance keys and their defaults.
const std::map<std::string, double>& default_tolerances();

/// Runs the selected checks in id order. Throws InvalidParameter for
/// unknown check names or tolerance keys.
std::vector<CheckResult> run(const Options& options);

} // namespace ssrf::verify
