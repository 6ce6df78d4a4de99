#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "catqed/carrier.hpp"
#include "catqed/conditional.hpp"
#include "catqed/lamb_dicke.hpp"
#include "catqed/oracle.hpp"
#include "oracles.hpp"

using namespace catqed;

namespace {

double max_diff(const ConditionalAmplitudes& amps, const CompositeState& s) {
    return max_abs_diff(amps.to_composite(), s);
}

int sign_changes(const std::vector<double>& v) {
    int n = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if ((v[i - 1] < 0.0) != (v[i] < 0.0)) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("conditional amplitudes at tau = 0") {
    const SystemParams p;
    const auto amps = amplitudes(p, 0.0);
    const auto c = coherent_amplitudes(p.alpha(), p.truncation());
    for (std::size_t m = 0; m < amps.size(); ++m) {
        CHECK(amps.a[m] == c[m]);
        CHECK(amps.b[m] == Complex{});
    }
    CHECK(std::abs(survival_norm(amps) - 1.0) < 1e-12);
    CHECK(jump_probability(p, 0.0) == 0.0);
    CHECK_THROWS_AS(amplitudes(p, -1.0), InvalidArgument);
}

TEST_CASE("lossless limit reproduces the carrier evolution") {
    const SystemParams p(0.05, 0.0, 2.0, 40);
    testing::Gen gen(8);
    for (int trial = 0; trial < 50; ++trial) {
        const double tau = gen.uniform(0.0, 40.0);
        const auto amps = amplitudes(p, tau);
        CHECK(max_diff(amps, evolve_ideal(p, tau)) < 1e-12);
        const auto c = coherent_amplitudes(p.alpha(), p.truncation());
        for (std::size_t m = 0; m < amps.size(); ++m) {
            CHECK(std::abs(std::norm(amps.a[m]) + std::norm(amps.b[m]) - std::norm(c[m])) < 1e-12);
        }
        CHECK(jump_probability(p, tau) == 0.0);
    }
}

TEST_CASE("closed form agrees with RK4 at the default working point") {
    const SystemParams p;
    const auto ref = integrate_from_coherent(p, IntegratorConfig::for_params(p, 1e-4), 3.29);
    CHECK(max_diff(amplitudes(p, 3.29), ref) < 1e-8);
}

TEST_CASE("closed form agrees with RK4 across regimes") {
    for (double gamma : {0.2, 1.0, 5.0, 12.0}) {
        for (double eta : {0.02, 0.1}) {
            const SystemParams p(eta, gamma, 1.0, 40);
            const std::vector<double> taus{0.5, 2.0, 7.5};
            const auto states = integrate_grid(p, IntegratorConfig::for_params(p, 1e-3), taus);
            for (std::size_t i = 0; i < taus.size(); ++i) {
                CHECK(max_diff(amplitudes(p, taus[i]), states[i]) < 1e-8);
            }
        }
    }
}

TEST_CASE("exceptional point Gamma = 4 lambda uses the limit branch smoothly") {
    const double lambda0 = coupling_ld(0.05, 0);
    const double gamma = 4.0 * lambda0;
    const SystemParams p(0.05, gamma, 1.0, 40);
    const auto ref = integrate_from_coherent(p, IntegratorConfig::for_params(p, 1e-3), 4.0);
    CHECK(max_diff(amplitudes(p, 4.0), ref) < 1e-8);
    for (double tau : {0.3, 2.0, 9.0}) {
        const auto at = block_factors(lambda0, gamma, tau);
        for (double rel : {1e-7, -1e-7}) {
            const auto near = block_factors(lambda0, gamma * (1.0 + rel), tau);
            CHECK(std::abs(near.first - at.first) < 1e-5);
            CHECK(std::abs(near.second - at.second) < 1e-5);
        }
        // inside the window: critically damped solution
        const double d = std::exp(-gamma * tau / 4.0);
        CHECK(std::abs(at.first - Complex{d * (1.0 + gamma * tau / 4.0), 0.0}) < 1e-12);
        CHECK(std::abs(at.second - Complex{0.0, -lambda0 * tau * d}) < 1e-12);
    }
}

TEST_CASE("strong damping at long times neither overflows nor underflows") {
    const SystemParams p(0.05, 200.0, 2.0, 40);
    const auto amps = amplitudes(p, 80.0);
    for (std::size_t m = 0; m < amps.size(); ++m) {
        CHECK(std::isfinite(amps.a[m].real()));
        CHECK(std::isfinite(amps.b[m].imag()));
    }
    // Overdamped: the slow eigenmode decays at ~ 2 lambda^2 / Gamma ~ 0.01, so weight survives.
    CHECK(survival_norm(amps) > 0.1);
}

TEST_CASE("regimes: oscillatory below the exceptional point, overdamped above") {
    const double lambda = coupling_ld(0.05, 3);
    auto re_a = [&](double gamma) {
        std::vector<double> v;
        for (int i = 0; i <= 4000; ++i) {
            v.push_back(block_factors(lambda, gamma, 0.01 * i).first.real());
        }
        return v;
    };
    CHECK(sign_changes(re_a(1.0)) >= 10);
    CHECK(sign_changes(re_a(5.0)) == 0);
    CHECK(sign_changes(re_a(12.0)) == 0);
}

TEST_CASE("jump probability") {
    const SystemParams p;
    double prev = 0.0;
    for (int i = 0; i <= 3000; ++i) {
        const double tau = 0.01 * i;
        const double pj = jump_probability(p, tau);
        CHECK(pj >= prev);
        CHECK(pj <= 1.0);
        prev = pj;
    }
    // Frozen from the RK4 oracle (dt = 1e-4, M = 40): 1 - |psi(30)|^2.
    CHECK(jump_probability(p, 30.0) == doctest::Approx(0.99999962916523).epsilon(1e-10));
    CHECK(jump_probability(p, 30.0) > 0.95);
    CHECK(jump_probability(p.with_gamma(0.0), 12.0) == 0.0);
}

TEST_CASE("survival norm") {
    const SystemParams p;
    double prev = 2.0;
    const auto states = integrate_grid(p, IntegratorConfig::for_params(p, 1e-3), {0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0});
    int i = 0;
    for (double tau : {0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0}) {
        const double s = survival_norm(p, tau);
        CHECK(s < prev);
        CHECK(s == doctest::Approx(norm_sq(states[i++])).epsilon(1e-10));
        CHECK(s + jump_probability(p, tau) == doctest::Approx(1.0).epsilon(1e-15));
        prev = s;
    }
}

TEST_CASE("post-jump state") {
    const SystemParams p;
    const auto post = post_jump_state(p, 3.29);
    CHECK(std::abs(norm_sq(post.motion) - 1.0) < 1e-12);
    CHECK(post.internal == Level::g);
    CHECK(post.cavity == 0);
    const auto composite = post.to_composite();
    CHECK(std::abs(composite.at(4, 0, Level::g) - post.motion[4]) == 0.0);

    SUBCASE("lossless jump is the ideal one-photon sector") {
        const SystemParams lossless = p.with_gamma(0.0);
        const double tau = 2.2;
        const auto post0 = post_jump_state(lossless, tau);
        const auto sector = evolve_ideal(lossless, tau).sector(1, Level::g);
        CHECK(std::abs(fidelity(post0.motion, sector) - 1.0) < 1e-12);
        const auto c = coherent_amplitudes(2.0, 40);
        MotionalState expect(40);
        for (std::size_t m = 0; m < 40; ++m) {
            expect[m] = c[m] * std::sin(coupling_ld(0.05, static_cast<int>(m)) * tau);
        }
        CHECK(std::abs(fidelity(post0.motion, expect) - 1.0) < 1e-12);
    }
    SUBCASE("normalization holds at large truncation") {
        const SystemParams big(0.05, 1.0, 2.0, 200);
        CHECK(std::abs(norm_sq(post_jump_state(big, 3.29).motion) - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(post_jump_state(p, 0.0), DegenerateState);
}

TEST_CASE("csv and json output") {
    const SystemParams p;
    std::ostringstream csv_out;
    write_jump_csv(csv_out, jump_probability_series(p, {0.0, 1.0}));
    CHECK(csv_out.str().rfind("tau,P_jump,survival_norm\n0,0,", 0) == 0);

    const auto amps = amplitudes(p, 1.5);
    std::ostringstream json_out;
    write_amplitudes_json(json_out, amps);
    const auto doc = nlohmann::json::parse(json_out.str());
    CHECK(doc["tau"].get<double>() == 1.5);
    REQUIRE(doc["a"].size() == 40);
    for (std::size_t m = 0; m < 40; ++m) {
        CHECK(doc["a"][m][0].get<double>() == amps.a[m].real());
        CHECK(doc["b"][m][1].get<double>() == amps.b[m].imag());
    }
}
