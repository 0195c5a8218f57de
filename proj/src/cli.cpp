// SPDX-License-Identifier: Apache-2.0
#include "ssrf/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "ssrf/covariance.hpp"
#include "ssrf/errors.hpp"
#include "ssrf/field_io.hpp"
#include "ssrf/simulate.hpp"
#include "ssrf/spectral.hpp"
#include "ssrf/verify.hpp"

namespace ssrf::cli {

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// JSON numbers must be finite; non-finite values become strings.
json jnum(double v) { return std::isfinite(v) ? json(v) : json(num(v)); }

double parse_double(const std::string& s, const std::string& field) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw InvalidParameter(field, "'" + s + "' is not a number");
    return v;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out.empty())
        out << text;
    else
        write_file_atomic(cfg.out, text);
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    std::set<std::string> seen;
    for (const auto& w : warnings)
        if (seen.insert(w).second) err << "warning: " << w << "\n";
}

} // namespace

AxisGrid AxisGrid::parse(const std::string& text, const std::string& field) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4)
        throw InvalidParameter(field, "expected min:max:count[:log], got '" + text + "'");
    AxisGrid g;
    g.min = parse_double(parts[0], field);
    g.max = parse_double(parts[1], field);
    const double count = parse_double(parts[2], field);
    if (count < 1 || count != std::floor(count) || count > 1e7)
        throw InvalidParameter(field, "count must be a positive integer");
    g.count = static_cast<int>(count);
    if (parts.size() == 4) {
        if (parts[3] != "log" && parts[3] != "lin") throw InvalidParameter(field, "spacing must be 'log' or 'lin'");
        g.log = parts[3] == "log";
    }
    if (!std::isfinite(g.min) || !std::isfinite(g.max) || g.max < g.min)
        throw InvalidParameter(field, "need finite min <= max");
    if (g.log && !(g.min > 0.0)) throw InvalidParameter(field, "log grids need min > 0");
    return g;
}

std::vector<double> AxisGrid::values() const {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        if (log)
            v[i] = min * std::pow(max / min, f);
        else if (2 * i < count)
            v[i] = min + (max - min) * f;
        else  // upper half counted down from max
            v[i] = max - (max - min) * (static_cast<double>(count - 1 - i) / (count - 1));
    }
    if (count > 1) v.back() = max;
    return v;
}

std::optional<int> parse(int argc, const char* const* argv, RunConfig& cfg, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spartan space-time random field covariances, spectra and simulation", "ssrf"};
    app.require_subcommand(1, 1);
    app.set_config("--config", "", "key=value file; command-line flags take precedence");

    int d = 1;
    double eta0 = 1.0, eta1 = 1.0, xi = 3.0, mu = 0.0, noise_d = 0.0, dtilde = 1.0;
    std::string r_grid, tau_grid, k_grid, omega_grid;
    std::vector<std::string> tols;

    app.add_option("--d", d, "spatial dimension (1, 2, 3)")->capture_default_str();
    app.add_option("--eta0", eta0, "scale coefficient")->capture_default_str();
    app.add_option("--eta1", eta1, "rigidity coefficient")->capture_default_str();
    app.add_option("--xi", xi, "characteristic length")->capture_default_str();
    app.add_option("--mu", mu, "curvature coefficient")->capture_default_str();
    auto* opt_d = app.add_option("--noise-d", noise_d, "white-noise variance D");
    auto* opt_dt = app.add_option("--dtilde", dtilde, "D / (2 xi^d eta0), instead of --noise-d (default 1)");
    opt_d->excludes(opt_dt);
    app.add_option("--r-grid", r_grid, "spatial lags min:max:count[:log]");
    app.add_option("--tau-grid", tau_grid, "time lags min:max:count[:log]");
    app.add_option("--k-grid", k_grid, "wavenumbers min:max:count[:log]");
    app.add_option("--omega-grid", omega_grid, "frequencies min:max:count[:log]");
    app.add_option("--method", cfg.method, "auto | closed_d1 | closed_d3 | zero_space | zero_time | "
                                           "univariate_integral | small_mu_series | spectral_quadrature")
        ->capture_default_str();
    app.add_option("--order", cfg.small_mu_order, "small-mu truncation M (terms up to 2M)")->capture_default_str();
    app.add_option("--kcut", cfg.quad.k_cut, "initial spectral cutoff")->capture_default_str();
    app.add_option("--rel-tol", cfg.quad.rel_tol, "quadrature relative tolerance")->capture_default_str();
    app.add_option("--n", cfg.n, "grid points per axis")->capture_default_str();
    app.add_option("--spacing", cfg.spacing, "grid spacing")->capture_default_str();
    app.add_option("--dt", cfg.dt, "time step")->capture_default_str();
    app.add_option("--t-end", cfg.t_end, "simulated time span")->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_option("--format", cfg.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", cfg.out, "output path (default: standard output)");
    app.add_option("--threads", cfg.threads, "OpenMP threads (0 = default)")->capture_default_str();
    app.add_option("--only", cfg.only, "verify: run only these checks (names or ids)")->delimiter(',');
    app.add_option("--check-tol", tols, "verify: override a tolerance, NAME=VALUE");

    app.add_subcommand("eval", "tabulate C(r, tau) over the lag grids")->fallthrough();
    app.add_subcommand("spectrum", "tabulate S(k, omega) over the k and omega grids")->fallthrough();
    app.add_subcommand("simulate", "run the Langevin simulation and write an SSTF1 field")->fallthrough();
    app.add_subcommand("verify", "run the verification checks")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInvalid;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.params = opt_d->count() > 0 ? ModelParams{d, eta0, eta1, xi, mu, noise_d}
                                        : ModelParams::from_dtilde(d, eta0, eta1, xi, mu, dtilde);
        if (!r_grid.empty()) cfg.r_grid = AxisGrid::parse(r_grid, "r-grid");
        if (!tau_grid.empty()) cfg.tau_grid = AxisGrid::parse(tau_grid, "tau-grid");
        if (!k_grid.empty()) cfg.k_grid = AxisGrid::parse(k_grid, "k-grid");
        if (!omega_grid.empty()) cfg.omega_grid = AxisGrid::parse(omega_grid, "omega-grid");
        for (const auto& t : tols) {
            const auto eq = t.find('=');
            if (eq == std::string::npos) throw InvalidParameter("check-tol", "expected NAME=VALUE, got '" + t + "'");
            cfg.check_tol[t.substr(0, eq)] = parse_double(t.substr(eq + 1), "check-tol");
        }
        if (cfg.command != "eval" && cfg.command != "verify" && !r_grid.empty())
            err << "warning: --r-grid is ignored by " << cfg.command << "\n";
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return std::nullopt;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    validate(cfg.params);
    validate(cfg.quad);
    const CovMethod method = [&] {
        if (cfg.method == "auto") return auto_method(cfg.params);
        const auto m = parse_cov_method(cfg.method);
        if (!m) throw InvalidParameter("method", "unknown method '" + cfg.method + "'");
        return *m;
    }();
    const auto rs = cfg.r_grid.values();
    const auto taus = cfg.tau_grid.values();

    std::vector<CovValue> rows(rs.size() * taus.size());
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        for (std::size_t j = 0; j < taus.size(); ++j) {
            rows[i * taus.size() + j] = cov_evaluate(cfg.params, {rs[i], taus[j]}, method, cfg.quad, cfg.small_mu_order);
            for (const auto& w : rows[i * taus.size() + j].warnings) warnings.push_back(w);
        }
    }

    std::string text;
    if (cfg.format == "csv") {
        text = "r,tau,value,method,est_error\n";
        for (std::size_t i = 0; i < rs.size(); ++i) {
            for (std::size_t j = 0; j < taus.size(); ++j) {
                const auto& v = rows[i * taus.size() + j];
                text += num(rs[i]) + "," + num(taus[j]) + "," + num(v.value) + "," + std::string(to_string(v.method)) +
                        "," + (v.est_error ? num(*v.est_error) : "") + "\n";
            }
        }
    } else {
        json arr = json::array();
        for (std::size_t i = 0; i < rs.size(); ++i) {
            for (std::size_t j = 0; j < taus.size(); ++j) {
                const auto& v = rows[i * taus.size() + j];
                arr.push_back({{"r", rs[i]},
                               {"tau", taus[j]},
                               {"value", jnum(v.value)},
                               {"method", to_string(v.method)},
                               {"est_error", v.est_error ? jnum(*v.est_error) : json(nullptr)}});
            }
        }
        text = arr.dump(2) + "\n";
    }
    emit(cfg, text, out);
    report_warnings(warnings, err);
    return kOk;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require_permissible(cfg.params);
    const auto ks = cfg.k_grid.values();
    const auto ws = cfg.omega_grid.values();
    if (ks.front() < 0.0) throw InvalidParameter("k-grid", "wavenumbers must be >= 0");
    std::string text;
    if (cfg.format == "csv") {
        text = "k,omega,S\n";
        for (double k : ks)
            for (double w : ws) text += num(k) + "," + num(w) + "," + num(spd_spacetime(cfg.params, k, w)) + "\n";
    } else {
        json arr = json::array();
        for (double k : ks)
            for (double w : ws) arr.push_back({{"k", k}, {"omega", w}, {"S", jnum(spd_spacetime(cfg.params, k, w))}});
        text = arr.dump(2) + "\n";
    }
    emit(cfg, text, out);
    return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.out.empty()) throw InvalidParameter("out", "simulate needs --out for the binary field file");
    apply_threads(cfg.threads);
    const GridSpec grid{cfg.params.d, cfg.n, cfg.spacing};
    const auto field = simulate(cfg.params, grid, cfg.t_end, cfg.dt, cfg.seed);
    write_field(cfg.out, field);

    // Sample moments over all snapshots.
    double sum2 = 0.0;
    ConstraintStats mean_stats;
    for (std::size_t t = 0; t < field.times.size(); ++t) {
        const auto s = constraint_stats(field, t);
        mean_stats.s0 += s.s0 / field.times.size();
        mean_stats.s1 += s.s1 / field.times.size();
        mean_stats.s2 += s.s2 / field.times.size();
    }
    for (double x : field.values) sum2 += x * x;
    const auto first = constraint_stats(field, 0);
    const auto expect = expected_constraints(cfg.params, grid);
    const auto blocked = empirical_cov(field, {0.0}, {0.0}).front();
    const auto report = validate(cfg.params);

    json summary;
    summary["field"] = cfg.out;
    summary["d"] = grid.d;
    summary["n"] = grid.n;
    summary["spacing"] = grid.spacing;
    summary["n_times"] = field.times.size();
    summary["dt"] = cfg.dt;
    summary["seed"] = cfg.seed;
    summary["params"] = {{"eta0", cfg.params.eta0}, {"eta1", cfg.params.eta1}, {"xi", cfg.params.xi},
                         {"mu", cfg.params.mu},     {"noise_d", cfg.params.noise_d},
                         {"dtilde", derived(cfg.params).dtilde}};
    summary["sample_variance"] = sum2 / field.values.size();
    summary["sample_variance_se"] = blocked.std_error;
    summary["analytic_variance_grid"] = grid_covariance(cfg.params, grid, 0.0, 0.0);
    if (report.finite_variance) {
        summary["analytic_variance_continuum"] = cov_spectral_numeric(cfg.params, {0.0, 0.0}).value;
    } else {
        summary["analytic_variance_continuum"] = nullptr;
    }
    summary["constraints_t0"] = {{"s0", first.s0}, {"s1", first.s1}, {"s2", first.s2}};
    summary["constraints_time_mean"] = {{"s0", mean_stats.s0}, {"s1", mean_stats.s1}, {"s2", mean_stats.s2}};
    summary["constraints_expected"] = {{"s0", expect.s0}, {"s1", expect.s1}, {"s2", expect.s2}};
    summary["imag_residue"] = field.imag_residue;
    summary["warnings"] = field.warnings;
    const std::string text = summary.dump(2) + "\n";
    write_file_atomic(cfg.out + ".summary.json", text);
    out << text;
    report_warnings(field.warnings, err);
    return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    verify::Options opt;
    opt.params = cfg.params;
    opt.only = cfg.only;
    opt.tolerances = cfg.check_tol;
    opt.threads = cfg.threads;
    const auto results = verify::run(opt);

    bool all = true;
    json checks = json::array();
    for (const auto& r : results) {
        all = all && r.passed;
        checks.push_back({{"id", r.id},
                          {"name", r.name},
                          {"passed", r.passed},
                          {"measured", jnum(r.measured)},
                          {"tolerance", jnum(r.tolerance)},
                          {"detail", r.detail},
                          {"seconds", r.seconds}});
    }
    json report = {{"passed", all}, {"checks", checks}};
    emit(cfg, report.dump(2) + "\n", out);
    return all ? kOk : kVerifyFailed;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.command == "eval") return cmd_eval(cfg, out, err);
        if (cfg.command == "spectrum") return cmd_spectrum(cfg, out, err);
        if (cfg.command == "simulate") return cmd_simulate(cfg, out, err);
        if (cfg.command == "verify") return cmd_verify(cfg, out, err);
        err << "error: unknown command '" << cfg.command << "'\n";
        return kInvalid;
    } catch (const SingularityError& e) {
        err << "error: singular configuration: " << e.what() << "\n";
        return kSingular;
    } catch (const AccuracyError& e) {
        err << "error: accuracy target not met: " << e.what() << " (partial value " << num(e.partial_value())
            << ")\n";
        return kAccuracy;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    if (const auto code = parse(argc, argv, cfg, out, err)) return *code;
    return execute(cfg, out, err);
}

} // namespace ssrf::cli
