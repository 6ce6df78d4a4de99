#include "catqed/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "catqed/csv.hpp"
#include "catqed/lamb_dicke.hpp"

namespace catqed {

namespace {

constexpr double kZeroNormSq = 1e-300;
// Past this real part the damped exponentials are combined directly, which avoids
// cosh overflow and decay underflow at large Gamma tau.
constexpr double kMaxHyperbolicArg = 1.0;

}  // namespace

CompositeState ConditionalAmplitudes::to_composite() const {
    CompositeState s(a.size());
    for (std::size_t m = 0; m < a.size(); ++m) {
        s.at(m, 0, Level::e) = a[m];
        s.at(m, 1, Level::g) = b[m];
    }
    return s;
}

std::pair<Complex, Complex> block_factors(double lambda, double gamma, double tau) {
    const double disc = gamma * gamma - 16.0 * lambda * lambda;
    const double quarter = 0.25 * tau;
    const Complex minus_i{0.0, -1.0};

    if (std::abs(disc) < kExceptionalPointWindow) {
        const double t2 = tau * tau;
        const double decay = std::exp(-gamma * quarter);
        const double c_term = 1.0 + disc * t2 / 32.0;
        const double s_over_root = quarter * (1.0 + disc * t2 / 96.0);
        return {Complex{decay * (c_term + gamma * s_over_root), 0.0},
                minus_i * (4.0 * lambda * decay * s_over_root)};
    }

    const Complex root = std::sqrt(Complex{disc, 0.0});
    const Complex x = root * quarter;
    Complex damped_c;
    Complex damped_s;
    if (std::abs(x.real()) < kMaxHyperbolicArg) {
        const double decay = std::exp(-gamma * quarter);
        damped_c = decay * std::cosh(x);
        damped_s = decay * std::sinh(x);
    } else {
        const Complex up = std::exp(x - gamma * quarter);
        const Complex down = std::exp(-x - gamma * quarter);
        damped_c = 0.5 * (up + down);
        damped_s = 0.5 * (up - down);
    }
    const Complex s_over_root = damped_s / root;
    return {damped_c + gamma * s_over_root, minus_i * (4.0 * lambda) * s_over_root};
}

ConditionalAmplitudes amplitudes(const SystemParams& params, double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("tau must be finite and non-negative");
    }
    const std::size_t levels = params.truncation();
    const MotionalState c = coherent_amplitudes(params.alpha(), levels);
    ConditionalAmplitudes out;
    out.tau = tau;
    out.a.resize(levels);
    out.b.resize(levels);
    for (std::size_t m = 0; m < levels; ++m) {
        const double lambda = coupling_ld(params.eta(), static_cast<int>(m));
        const auto [fa, fb] = block_factors(lambda, params.gamma(), tau);
        out.a[m] = c[m] * fa;
        out.b[m] = c[m] * fb;
    }
    return out;
}

double survival_norm(const ConditionalAmplitudes& amps) {
    CompensatedSum acc;
    for (std::size_t m = 0; m < amps.size(); ++m) {
        acc += std::norm(amps.a[m]);
        acc += std::norm(amps.b[m]);
    }
    return acc.value();
}

double survival_norm(const SystemParams& params, double tau) {
    return survival_norm(amplitudes(params, tau));
}

double jump_probability(const SystemParams& params, double tau) {
    if (params.gamma() == 0.0 || tau == 0.0) {
        return 0.0;
    }
    return std::clamp(1.0 - survival_norm(params, tau), 0.0, 1.0);
}

PostJumpState post_jump_state(const ConditionalAmplitudes& amps) {
    MotionalState motion(amps.b);
    const double weight = norm_sq(motion);
    if (!(weight > kZeroNormSq)) {
        throw DegenerateState("no photon to detect: the one-photon sector is empty");
    }
    return {normalize(motion), Level::g, 0};
}

PostJumpState post_jump_state(const SystemParams& params, double tau) {
    if (!(tau > 0.0)) {
        throw DegenerateState("no photon to detect at tau = 0");
    }
    return post_jump_state(amplitudes(params, tau));
}

std::vector<JumpRow> jump_probability_series(const SystemParams& params, const std::vector<double>& taus) {
    std::vector<JumpRow> rows;
    rows.reserve(taus.size());
    for (const double tau : taus) {
        rows.push_back({tau, jump_probability(params, tau), survival_norm(params, tau)});
    }
    return rows;
}

void write_jump_csv(std::ostream& out, const std::vector<JumpRow>& rows) {
    out << "tau,P_jump,survival_norm\n";
    for (const auto& r : rows) {
        out << csv::number(r.tau) << ',' << csv::number(r.p_jump) << ',' << csv::number(r.survival)
            << '\n';
    }
}

void write_amplitudes_json(std::ostream& out, const ConditionalAmplitudes& amps) {
    auto to_pairs = [](const std::vector<Complex>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Complex& z : v) {
            arr.push_back({z.real(), z.imag()});
        }
        return arr;
    };
    const nlohmann::json doc = {{"tau", amps.tau}, {"a", to_pairs(amps.a)}, {"b", to_pairs(amps.b)}};
    out << doc.dump(1) << '\n';
}

}  // namespace catqed
