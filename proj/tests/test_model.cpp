// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>

#include "doctest.h"
#include "ssrf/errors.hpp"
#include "ssrf/model.hpp"

using namespace ssrf;

TEST_CASE("permissibility classification") {
    SUBCASE("curvature-free d=1 is permissible with finite variance") {
        const auto rep = validate({1, 1.0, 1.0, 3.0, 0.0, 1.0});
        CHECK(rep.spectrally_positive);
        CHECK(rep.finite_variance);
        CHECK_FALSE(rep.oscillatory);
    }
    SUBCASE("curvature-free d=3 has infinite variance") {
        const auto rep = validate({3, 1.0, 1.0, 3.0, 0.0, 1.0});
        CHECK(rep.spectrally_positive);
        CHECK_FALSE(rep.finite_variance);
    }
    SUBCASE("negative rigidity with curvature oscillates") {
        const auto rep = validate({1, 1.0, -1.0, 3.0, 1.0, 1.0});
        CHECK(rep.spectrally_positive);
        CHECK(rep.finite_variance);
        CHECK(rep.oscillatory);
    }
    SUBCASE("boundary eta1 = -2 sqrt(mu) is rejected") {
        CHECK_FALSE(validate({1, 1.0, -2.0, 1.0, 1.0, 1.0}).spectrally_positive);
        CHECK_FALSE(validate({2, 1.0, -1.0, 1.0, 0.25, 1.0}).spectrally_positive);
        CHECK(validate({2, 1.0, -0.99, 1.0, 0.25, 1.0}).spectrally_positive);
    }
    SUBCASE("mu = 0 needs eta1 > 0") {
        CHECK_FALSE(validate({1, 1.0, 0.0, 1.0, 0.0, 1.0}).spectrally_positive);
        CHECK_THROWS_AS(require_permissible({1, 1.0, 0.0, 1.0, 0.0, 1.0}), InvalidParameter);
    }
    SUBCASE("mu > 0 gives finite variance in every dimension") {
        for (int d = 1; d <= 3; ++d) CHECK(validate({d, 1.0, 0.5, 1.0, 1.0, 1.0}).finite_variance);
    }
}

TEST_CASE("invalid fields are named") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto field_of = [](const ModelParams& p) {
        try {
            validate(p);
        } catch (const InvalidParameter& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of({0, 1, 1, 1, 0, 1}) == "d");
    CHECK(field_of({4, 1, 1, 1, 0, 1}) == "d");
    CHECK(field_of({1, 0, 1, 1, 0, 1}) == "eta0");
    CHECK(field_of({1, 1, 1, -1, 0, 1}) == "xi");
    CHECK(field_of({1, 1, 1, 1, 0, 0}) == "noise_d");
    CHECK(field_of({1, 1, nan, 1, 0, 1}) == "eta1");
    CHECK(field_of({1, 1, 1, 1, -0.1, 1}) == "mu");
    CHECK(field_of({1, 1, 1, 1, std::numeric_limits<double>::infinity(), 1}) == "mu");
}

TEST_CASE("derived constants") {
    CHECK(derived({1, 1.0, 1.0, 3.0, 0.0, 6.0}).dtilde == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(derived({1, 1.0, 1.0, 3.0, 0.0, 0.5}).dtilde == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(derived({3, 2.0, 1.0, 2.0, 0.0, 32.0}).dtilde == doctest::Approx(1.0).epsilon(1e-15));

    const auto dc = derived({2, 2.0, 0.5, 3.0, 0.0, 1.0});
    CHECK(dc.beta0 == doctest::Approx(1.0 / 18.0));
    CHECK(dc.beta2 == doctest::Approx(4.5 / 18.0));
    CHECK(dc.beta1(-2.0) == doctest::Approx(dc.dtilde * 2.0 * 4.5));

    const auto p = ModelParams::from_dtilde(3, 2.0, 1.0, 2.0, 0.0, 1.0);
    CHECK(p.noise_d == doctest::Approx(32.0));
    CHECK(derived(p).dtilde == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("polynomial stays positive on a dense grid for permissible parameters") {
    for (double mu : {0.01, 0.25, 1.0, 4.0}) {
        for (double frac : {-0.999, -0.5, 0.0, 0.7}) {
            const ModelParams p{1, 1.0, 2.0 * std::sqrt(mu) * frac, 1.0, mu, 1.0};
            REQUIRE(validate(p).spectrally_positive);
            double lo = 1.0;
            for (int i = 0; i <= 100000; ++i) {
                const double x = 100.0 * i / 100000.0;
                lo = std::min(lo, 1.0 + p.eta1 * x + mu * x * x);
            }
            CHECK(lo > 0.0);
        }
    }
}

TEST_CASE("validate is pure") {
    const ModelParams p{1, 1.0, -1.0, 3.0, 1.0, 1.0};
    const auto a = validate(p);
    const auto b = validate(p);
    CHECK(a.spectrally_positive == b.spectrally_positive);
    CHECK(a.finite_variance == b.finite_variance);
    CHECK(a.oscillatory == b.oscillatory);
    CHECK(a.messages == b.messages);
}
