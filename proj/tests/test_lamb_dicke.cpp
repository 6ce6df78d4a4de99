#include <doctest.h>

#include <cmath>
#include <sstream>

#include "catqed/lamb_dicke.hpp"
#include "catqed/numerics.hpp"
#include "oracles.hpp"

using namespace catqed;

TEST_CASE("laguerre") {
    CHECK(laguerre(0, 0.3) == 1.0);
    CHECK(laguerre(0, 17.0) == 1.0);
    CHECK(laguerre(1, 0.0025) == doctest::Approx(0.9975).epsilon(1e-15));
    // series: 1 - 2x + x^2/2 at x = 0.0025
    CHECK(laguerre(2, 0.0025) == doctest::Approx(0.995003125).epsilon(1e-15));
    CHECK_THROWS_AS(laguerre(-1, 0.1), InvalidArgument);

    for (int m = 0; m <= 30; ++m) {
        for (int i = 0; i <= 100; ++i) {
            const double x = 0.01 * i;
            const double ref = testing::laguerre_series(m, x);
            CHECK(std::abs(laguerre(m, x) - ref) <= 1e-10 * std::abs(ref));
        }
    }
}

TEST_CASE("coupling constants") {
    CHECK(coupling_exact(0.05, 0) == doctest::Approx(std::exp(-0.00125)).epsilon(1e-15));
    CHECK(coupling_exact(0.05, 0) == doctest::Approx(0.9987508).epsilon(1e-7));
    CHECK(coupling_exact(0.05, 10) ==
          doctest::Approx(std::exp(-0.00125) * testing::laguerre_series(10, 0.0025)).epsilon(1e-14));
    for (int m = 0; m <= 100; ++m) {
        CHECK(std::abs(coupling_exact(1e-8, m) - 1.0) < 1e-12);
        CHECK(std::abs(coupling_ld(1e-8, m) - 1.0) < 1e-12);
    }

    CHECK(coupling_ld(0.05, 0) == doctest::Approx(0.99875).epsilon(1e-15));
    CHECK(coupling_ld(0.05, 4) == doctest::Approx(0.98875).epsilon(1e-15));
    CHECK_THROWS_AS(coupling_ld(0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(coupling_exact(-0.1, 1), InvalidArgument);

    const CouplingProfile exact{CouplingKind::Exact, 0.05};
    const CouplingProfile ld{CouplingKind::LambDicke, 0.05};
    CHECK(exact(3) == coupling_exact(0.05, 3));
    CHECK(ld(3) == coupling_ld(0.05, 3));
}

TEST_CASE("exact coupling is a cosine matrix element") {
    testing::Gen gen(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const double eta = gen.uniform(1e-4, 3.0);
        const int m = gen.integer(0, 60);
        const double v = coupling_exact(eta, m);
        CHECK(std::isfinite(v));
        CHECK(v > -1.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("Lamb-Dicke error scales as eta^4") {
    // Expansion error e^{-x/2} L_m(x) - (1 - x(1+2m)/2) = x^2 (2m^2 + 2m + 1)/8 + O(x^3).
    for (int m : {0, 5, 20}) {
        const double d1 = std::abs(coupling_exact(0.01, m) - coupling_ld(0.01, m));
        const double d2 = std::abs(coupling_exact(0.02, m) - coupling_ld(0.02, m));
        CHECK(std::log2(d2 / d1) == doctest::Approx(4.0).epsilon(0.01));
    }
    double c = 0.0;
    for (int m = 0; m <= 20; ++m) {
        for (int i = 1; i <= 30; ++i) {
            const double eta = 0.01 * i;
            const double d = std::abs(coupling_exact(eta, m) - coupling_ld(eta, m));
            c = std::max(c, d / (std::pow(eta, 4) * (1.0 + m) * (1.0 + m)));
        }
    }
    // Fitted constant over eta <= 0.3, m <= 20 (0.238); bounded well below 1.
    CHECK(c < 0.25);
    CHECK(c > 0.125);  // at least the leading coefficient 1/8 at m = 0
}

TEST_CASE("validity grid") {
    SUBCASE("small eta is within 1e-6 of 1") {
        const auto cells = validity_grid({0.01, 0.01, 0.01, 0, 10});
        REQUIRE(cells.size() == 11);
        for (const auto& c : cells) {
            CHECK_FALSE(c.flagged);
            CHECK(std::abs(c.ratio - 1.0) <= 1e-6);
        }
    }
    SUBCASE("eta -> 0 column is 1") {
        for (const auto& c : validity_grid({1e-7, 1e-7, 1e-7, 0, 30})) {
            CHECK(std::abs(c.ratio - 1.0) < 1e-12);
        }
    }
    SUBCASE("default grid flags the breakdown region instead of dividing") {
        const auto cells = validity_grid({});
        CHECK(cells.size() == 50 * 31);
        CHECK(cells.back().eta == doctest::Approx(0.5));
        CHECK(cells.back().m == 30);
        CHECK(cells.back().flagged);
        CHECK(std::isnan(cells.back().ratio));
        // the reference working point is inside the valid band
        bool found = false;
        for (const auto& c : cells) {
            if (std::abs(c.eta - 0.05) < 1e-12 && c.m == 4) {
                found = true;
                CHECK(c.valid());
            }
        }
        CHECK(found);
    }
    SUBCASE("R within +-1% for eta <= 0.1, m <= 10") {
        for (const auto& c : validity_grid({0.01, 0.1, 0.01, 0, 10})) {
            CHECK(c.valid());
        }
    }
    SUBCASE("csv") {
        std::ostringstream out;
        write_validity_csv(out, validity_grid({0.5, 0.5, 0.1, 29, 30}));
        const std::string text = out.str();
        CHECK(text.rfind("eta,m,R\n", 0) == 0);
        CHECK(text.find("0.5,30,nan\n") != std::string::npos);
    }
    CHECK_THROWS_AS(validity_grid({0.0, 0.1, 0.01, 0, 1}), InvalidArgument);
    CHECK_THROWS_AS(validity_grid({0.1, 0.05, 0.01, 0, 1}), InvalidArgument);
}
