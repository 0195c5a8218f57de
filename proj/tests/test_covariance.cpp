// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ssrf/covariance.hpp"
#include "ssrf/errors.hpp"

using namespace ssrf;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ModelParams fig2(int d) { return ModelParams::from_dtilde(d, 1.0, 1.0, 3.0, 0.0, 1.0); }

struct Point {
    double r, tau, value;
};

// 40-digit mpmath evaluations of the explicit erfc forms (eta0 = eta1 = 1, xi = 3, D~ = 1).
const Point kClosedD1[] = {
    {3.0, 1.0, 0.067133500351554656},  {9.0, 0.25, 0.024892200329402034}, {18.0, 6.0, 7.2117973315730383e-5},
    {0.3, 2.0, 0.022728915619416378},  {30.0, 0.01, 2.2699964881242426e-5},
};
const Point kClosedD3[] = {
    {3.0, 1.0, 0.0033526972569568719}, {9.0, 0.25, 0.0013201763303118172}, {18.0, 6.0, 8.2437161313125815e-7},
    {0.3, 2.0, 0.00067500490588577862}, {0.1, 0.001, 1.2207739807278471},
};

} // namespace

TEST_CASE("method names round-trip") {
    for (auto m : {CovMethod::closed_d1, CovMethod::closed_d3, CovMethod::zero_space, CovMethod::zero_time,
                   CovMethod::univariate_integral, CovMethod::small_mu_series, CovMethod::spectral_quadrature})
        CHECK(parse_cov_method(to_string(m)) == m);
    CHECK_FALSE(parse_cov_method("closed").has_value());
    CHECK(auto_method(fig2(1)) == CovMethod::closed_d1);
    CHECK(auto_method(fig2(3)) == CovMethod::spectral_quadrature);
    CHECK(auto_method(ModelParams::from_dtilde(1, 1, 1, 3, 0.1, 1)) == CovMethod::spectral_quadrature);
}

TEST_CASE("closed form d=1") {
    const auto p = fig2(1);
    CHECK(cov_closed_d1(p, {0.0, 0.0}).value == 0.5);
    CHECK(rel(cov_closed_d1(p, {3.0, 0.0}).value, 0.5 * std::exp(-1.0)) < 1e-15);
    CHECK(rel(cov_closed_d1(p, {0.0, 1.0}).value, 0.5 * 0.1572992070502851307) < 1e-14);
    for (const auto& pt : kClosedD1) CHECK(rel(cov_closed_d1(p, {pt.r, pt.tau}).value, pt.value) < 1e-13);
    CHECK(cov_closed_d1(p, {1.0, 0.0}).method == CovMethod::closed_d1);

    SUBCASE("far tails stay finite") {
        CHECK(cov_closed_d1(p, {3000.0, 1e-6}).value == 0.0);
        CHECK(cov_closed_d1(p, {1.0, 1e4}).value >= 0.0);
        CHECK(std::isfinite(cov_closed_d1(p, {600.0, 50.0}).value));
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(cov_closed_d1(fig2(3), {1.0, 0.0}), WrongMethod);
        CHECK_THROWS_AS(cov_closed_d1(ModelParams::from_dtilde(1, 1, 1, 3, 0.1, 1), {1.0, 0.0}), WrongMethod);
        CHECK_THROWS_AS(cov_closed_d1(ModelParams::from_dtilde(1, 1, -1, 3, 0.0, 1), {1.0, 0.0}), WrongMethod);
        CHECK_THROWS_AS(cov_closed_d1(p, {-1.0, 0.0}), InvalidParameter);
    }
}

TEST_CASE("closed form d=3") {
    const auto p = fig2(3);
    CHECK(rel(cov_closed_d3(p, {3.0, 0.0}).value, std::exp(-1.0) / (4.0 * pi)) < 1e-15);
    for (const auto& pt : kClosedD3) CHECK(rel(cov_closed_d3(p, {pt.r, pt.tau}).value, pt.value) < 1e-12);
    CHECK_THROWS_AS(cov_closed_d3(p, {0.0, 0.0}), SingularityError);
    CHECK_THROWS_AS(cov_closed_d3(p, {0.0, 1.0}), SingularityError);
    CHECK_THROWS_AS(cov_closed_d3(fig2(1), {1.0, 0.0}), WrongMethod);

    const double at0 = cov_closed_d3(p, {3.0, 0.0}).value;
    const double at2 = cov_closed_d3(p, {3.0, 2.0}).value;
    CHECK(at2 > 0.0);
    CHECK(at2 < at0);

    SUBCASE("r C(r, 0) approaches eta0 xi / (4 pi eta1)") {
        for (double r : {1e-2, 1e-4, 1e-8}) CHECK(rel(r * cov_closed_d3(p, {r, 0.0}).value, 3.0 / (4 * pi)) < r);
    }
    SUBCASE("tiny r at finite tau joins the zero-space value") {
        const double zs = cov_zero_space(p, 0.5).value;
        CHECK(rel(cov_closed_d3(p, {1e-9, 0.5}).value, zs) < 1e-12);
        CHECK(rel(cov_closed_d3(p, {1e-4, 0.5}).value, zs) < 1e-8);
    }
}

TEST_CASE("zero space lag") {
    CHECK(cov_zero_space(fig2(1), 0.0).value == 0.5);
    CHECK(rel(cov_zero_space(fig2(1), 1.0).value, 0.078649603525142565) < 1e-14);
    CHECK(rel(cov_zero_space(fig2(2), 0.5).value, 0.044545367310472777) < 1e-13);
    CHECK(rel(cov_zero_space(fig2(2), 1e-3).value, 0.50384789359159201) < 1e-13);
    CHECK(rel(cov_zero_space(fig2(2), 5.0).value, 9.1378459741049392e-5) < 1e-12);
    CHECK(rel(cov_zero_space(fig2(3), 0.5).value, 0.013260068980057692) < 1e-13);
    CHECK(rel(cov_zero_space(fig2(3), 1e-3).value, 1.3416029136112967) < 1e-13);
    CHECK(rel(cov_zero_space(fig2(3), 5.0).value, 1.0716782644277143e-5) < 1e-12);
    CHECK(rel(cov_zero_space(fig2(3), 100.0).value, 8.2287338420911339e-49) < 1e-11);
    CHECK(cov_zero_space(fig2(2), -0.5).value == cov_zero_space(fig2(2), 0.5).value);
    CHECK_THROWS_AS(cov_zero_space(fig2(2), 0.0), SingularityError);
    CHECK_THROWS_AS(cov_zero_space(fig2(3), 0.0), SingularityError);

    SUBCASE("logarithmic growth in d=2") {
        double prev = 0.0;
        for (double tau : {1e-1, 1e-3, 1e-5, 1e-7}) {
            const double v = cov_zero_space(fig2(2), tau).value;
            CHECK(v > prev);
            prev = v;
        }
        // -Ei(-x) = -gamma - ln x + O(x)
        const double x = 1e-7;
        CHECK(rel(cov_zero_space(fig2(2), x).value, (-0.57721566490153286 - std::log(x)) / (4 * pi)) < 1e-6);
    }
}

TEST_CASE("zero time lag") {
    CHECK(rel(cov_zero_time(fig2(1), 3.0).value, 0.5 * std::exp(-1.0)) < 1e-14);
    CHECK(rel(cov_zero_time(fig2(3), 3.0).value, std::exp(-1.0) / (4.0 * pi)) < 1e-14);
    CHECK(rel(cov_zero_time(fig2(2), 0.5).value, 0.30683869855706003) < 1e-13);
    CHECK(rel(cov_zero_time(fig2(2), 3.0).value, 0.067008120508497137) < 1e-13);
    CHECK(rel(cov_zero_time(fig2(2), 20.0).value, 9.6609247333183673e-5) < 1e-12);
    CHECK(cov_zero_time(fig2(1), 0.0).value == 0.5);
    CHECK_THROWS_AS(cov_zero_time(fig2(2), 0.0), SingularityError);
    CHECK_THROWS_AS(cov_zero_time(fig2(3), 0.0), SingularityError);

    // K0(x) ~ -ln(x/2) - gamma
    const double r = 1e-6;
    const double small = -std::log(r / 6.0) - 0.57721566490153286;
    CHECK(rel(cov_zero_time(fig2(2), r).value, small / (2.0 * pi)) < 1e-9);
}

TEST_CASE("limit recovery") {
    for (int j = 0; j < 20; ++j) {
        const double tau = 0.3 * j;
        CHECK(std::abs(cov_closed_d1(fig2(1), {0.0, tau}).value - cov_zero_space(fig2(1), tau).value) <= 1e-15);
    }
    for (int i = 1; i < 20; ++i) {
        const double r = 0.9 * i;
        CHECK(std::abs(cov_closed_d1(fig2(1), {r, 0.0}).value - cov_zero_time(fig2(1), r).value) <= 1e-15);
        CHECK(std::abs(cov_closed_d3(fig2(3), {r, 0.0}).value - cov_zero_time(fig2(3), r).value) <= 1e-15);
        // approach through tiny positive tau
        CHECK(rel(cov_closed_d1(fig2(1), {r, 1e-12}).value, cov_zero_time(fig2(1), r).value) < 1e-5);
        CHECK(rel(cov_closed_d3(fig2(3), {r, 1e-12}).value, cov_zero_time(fig2(3), r).value) < 1e-5);
    }
}

TEST_CASE("three representations agree") {
    for (int d : {1, 3}) {
        const auto p = fig2(d);
        for (int i = 0; i < 10; ++i) {
            for (int j = 0; j < 10; ++j) {
                const double r = std::max(18.0 * i / 9.0, d == 3 ? 0.1 : 0.0);
                const double tau = 6.0 * j / 9.0;
                const double closed = d == 1 ? cov_closed_d1(p, {r, tau}).value : cov_closed_d3(p, {r, tau}).value;
                const auto uni = cov_univariate_integral(p, {r, tau});
                const auto spec = cov_spectral_numeric(p, {r, tau});
                CHECK_MESSAGE(rel(uni.value, closed) < 1e-8, "d=" << d << " r=" << r << " tau=" << tau);
                CHECK_MESSAGE(rel(spec.value, closed) < 1e-8, "d=" << d << " r=" << r << " tau=" << tau);
                CHECK(*uni.est_error >= 0.0);
            }
        }
    }
    SUBCASE("d=2 has no closed form: integral against quadrature") {
        const auto p = fig2(2);
        for (Lag lag : {Lag{0.0, 0.5}, Lag{1.0, 0.0}, Lag{1.0, 0.5}, Lag{5.0, 0.0}, Lag{5.0, 2.0}})
            CHECK(rel(cov_univariate_integral(p, lag).value, cov_spectral_numeric(p, lag).value) < 1e-8);
        CHECK(rel(cov_univariate_integral(p, {0.0, 0.5}).value, cov_zero_space(p, 0.5).value) < 1e-10);
        CHECK(rel(cov_univariate_integral(p, {3.0, 0.0}).value, cov_zero_time(p, 3.0).value) < 1e-10);
        CHECK_THROWS_AS(cov_univariate_integral(p, {0.0, 0.0}), SingularityError);
    }
    CHECK_THROWS_AS(cov_univariate_integral(ModelParams::from_dtilde(1, 1, 1, 3, 0.1, 1), {1.0, 0.0}), WrongMethod);
}

TEST_CASE("evenness, boundedness and monotone decay") {
    const auto p = fig2(1);
    const double c00 = cov_closed_d1(p, {0.0, 0.0}).value;
    for (int i = 0; i <= 12; ++i) {
        const double r = 1.5 * i;
        double prev = c00 * 2.0;
        for (int j = 0; j <= 12; ++j) {
            const double tau = 0.5 * j;
            const double v = cov_closed_d1(p, {r, tau}).value;
            CHECK(v == cov_closed_d1(p, {r, -tau}).value);
            CHECK(cov_univariate_integral(p, {r, tau}).value == cov_univariate_integral(p, {r, -tau}).value);
            CHECK(std::abs(v) <= c00);
            CHECK(v <= prev);
            prev = v;
        }
    }
    const auto p3 = fig2(3);
    for (double r : {0.5, 3.0, 10.0}) {
        double prev = cov_closed_d3(p3, {r, 0.0}).value;
        for (int j = 1; j <= 12; ++j) {
            const double v = cov_closed_d3(p3, {r, 0.5 * j}).value;
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("small-mu expansion") {
    SUBCASE("mu = 0 reduces to the univariate integral") {
        for (int d = 1; d <= 3; ++d) {
            const auto p = fig2(d);
            for (Lag lag : {Lag{1.0, 0.5}, Lag{4.0, 0.0}, Lag{0.0, 2.0}}) {
                const auto s = cov_small_mu(p, lag, 2);
                CHECK(rel(s.value, cov_univariate_integral(p, lag).value) < 1e-12);
                CHECK(s.method == CovMethod::small_mu_series);
            }
        }
        CHECK(rel(cov_small_mu(fig2(1), {0.0, 0.0}, 2).value, 0.5) < 1e-10);
    }
    SUBCASE("corrected prefactor against quadrature references") {
        // mpmath spectral quadrature, d=1, eta0=eta1=1, xi=3, D~=1, r=1, tau=0.5
        const auto p05 = ModelParams::from_dtilde(1, 1.0, 1.0, 3.0, 0.05, 1.0);
        const auto p01 = ModelParams::from_dtilde(1, 1.0, 1.0, 3.0, 0.01, 1.0);
        const double v05 = cov_small_mu(p05, {1.0, 0.5}, 2).value;
        const double v01 = cov_small_mu(p01, {1.0, 0.5}, 2).value;
        CHECK(rel(v05, 0.14974723859458165) < 1e-3);
        CHECK(rel(v01, 0.15311063769916406) < 1e-4);
        // a leading factor 2 would double every term
        CHECK(rel(2.0 * v05, 0.14974723859458165) > 0.5);
    }
    SUBCASE("the correction shrinks with mu and with order") {
        const double ref = 0.15311063769916406;
        const auto p01 = ModelParams::from_dtilde(1, 1.0, 1.0, 3.0, 0.01, 1.0);
        CHECK(std::abs(cov_small_mu(p01, {1.0, 0.5}, 2).value - ref) <
              std::abs(cov_small_mu(p01, {1.0, 0.5}, 1).value - ref));
    }
    SUBCASE("d=3 against quadrature") {
        const auto p = ModelParams::from_dtilde(3, 1.0, 1.0, 3.0, 0.01, 1.0);
        const Lag lag{2.0, 0.5};
        CHECK(rel(cov_small_mu(p, lag, 2).value, cov_spectral_numeric(p, lag).value) < 1e-4);
    }
    SUBCASE("warnings and errors") {
        const auto big = ModelParams::from_dtilde(1, 1.0, 1.0, 3.0, 0.5, 1.0);
        CHECK_FALSE(cov_small_mu(big, {1.0, 0.5}, 2).warnings.empty());
        const auto p = ModelParams::from_dtilde(1, 1.0, 1.0, 3.0, 0.01, 1.0);
        CHECK(cov_small_mu(p, {1.0, 0.5}, 2).warnings.empty());
        CHECK_THROWS_AS(cov_small_mu(p, {0.0, 0.0}, 2), SingularityError);
        CHECK_THROWS_AS(cov_small_mu(p, {1.0, 0.0}, 0), InvalidParameter);
        CHECK_THROWS_AS(cov_small_mu(ModelParams::from_dtilde(1, 1, -0.1, 3, 0.01, 1), {1.0, 0.5}, 2), WrongMethod);
        REQUIRE(cov_small_mu(p, {1.0, 0.5}, 2).est_error.has_value());
    }
}

TEST_CASE("dispatch by method") {
    const auto p = fig2(1);
    CHECK(cov_evaluate(p, {3.0, 1.0}, CovMethod::closed_d1).value == cov_closed_d1(p, {3.0, 1.0}).value);
    CHECK(cov_evaluate(p, {0.0, 1.0}, CovMethod::zero_space).value == cov_zero_space(p, 1.0).value);
    CHECK(cov_evaluate(p, {3.0, 0.0}, CovMethod::zero_time).value == cov_zero_time(p, 3.0).value);
    CHECK_THROWS_AS(cov_evaluate(p, {3.0, 1.0}, CovMethod::zero_time), WrongMethod);
    CHECK_THROWS_AS(cov_evaluate(p, {3.0, 1.0}, CovMethod::zero_space), WrongMethod);
    CHECK_THROWS_AS(cov_evaluate(p, {3.0, 1.0}, CovMethod::closed_d3), WrongMethod);
}
