// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssrf/model.hpp"
#include "ssrf/quadrature.hpp"

namespace ssrf::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalid = 2,
    kSingular = 3,
    kAccuracy = 4,
    kVerifyFailed = 5,
};

/// min:max:count[:log]
struct AxisGrid {
    double min = 0.0;
    double max = 0.0;
    int count = 1;
    bool log = false;

    static AxisGrid parse(const std::string& text, const std::string& field);
    std::vector<double> values() const;
};

struct RunConfig {
    std::string command; ///< eval | spectrum | simulate | verify
    ModelParams params = ModelParams::from_dtilde(1, 1.0, 1.0, 3.0, 0.0, 1.0);
    AxisGrid r_grid{0.0, 18.0, 10};
    AxisGrid tau_grid{0.0, 6.0, 10};
    AxisGrid k_grid{0.0, 2.0, 101};
    AxisGrid omega_grid{-1.0, 1.0, 101};
    std::string method = "auto";
    QuadratureSpec quad;
    int small_mu_order = 2;
    int n = 1024;
    double spacing = 0.5;
    double dt = 0.25;
    double t_end = 4.0;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string out; ///< empty: standard output (not allowed for simulate)
    int threads = 0;
    std::vector<std::string> only;
    std::map<std::string, double> check_tol;
};

/// Parses flags (and an optional --config key=value file) into a RunConfig.
/// Returns the exit code to use when parsing ends the run (help, errors).
std::optional<int> parse(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                         std::ostream& err);

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command, mapping library errors to exit codes.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse + execute.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ssrf::cli
