#include "catqed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace catqed {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

void check_config(const IntegratorConfig& config) {
    if (!(config.dt > 0.0) || config.dt > kMaxOracleStep) {
        throw InvalidArgument("oracle step dt must lie in (0, 0.01]");
    }
    if (!(config.gamma >= 0.0)) {
        throw InvalidArgument("oracle Gamma must be non-negative");
    }
}

std::uint64_t step_count(double tau, double dt) {
    const double n = std::ceil(tau / dt - 1e-9);
    if (!(n < static_cast<double>(kMaxOracleSteps))) {
        throw InvalidArgument("oracle step count overflow");
    }
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

[[noreturn]] void report_nan(std::size_t m, std::uint64_t step) {
    std::ostringstream msg;
    msg << "oracle produced a non-finite amplitude (m = " << m << ", step " << step << ")";
    throw Error(msg.str());
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// y' = f(y) for one block: a' = -i lambda b, b' = -i lambda a - (Gamma/2) b.
struct Block {
    Complex a;
    Complex b;
};

Block block_rhs(const Block& y, double lambda, double half_gamma) {
    return {kMinusI * lambda * y.b, kMinusI * lambda * y.a - half_gamma * y.b};
}

Block axpy(const Block& y, double h, const Block& k) { return {y.a + h * k.a, y.b + h * k.b}; }

void integrate_blocks(const IntegratorConfig& config, double tau, CompositeState& state) {
    const std::uint64_t steps = step_count(tau, config.dt);
    const double h = tau / static_cast<double>(steps);
    const double half_gamma = 0.5 * config.gamma;
    for (std::size_t m = 0; m < state.vib_levels(); ++m) {
        const double lambda = config.coupling(static_cast<int>(m));
        Block y{state.at(m, 0, Level::e), state.at(m, 1, Level::g)};
        for (std::uint64_t s = 0; s < steps; ++s) {
            const Block k1 = block_rhs(y, lambda, half_gamma);
            const Block k2 = block_rhs(axpy(y, 0.5 * h, k1), lambda, half_gamma);
            const Block k3 = block_rhs(axpy(y, 0.5 * h, k2), lambda, half_gamma);
            const Block k4 = block_rhs(axpy(y, h, k3), lambda, half_gamma);
            y.a += (h / 6.0) * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
            y.b += (h / 6.0) * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
        }
        if (!finite(y.a) || !finite(y.b)) {
            report_nan(m, steps);
        }
        state.at(m, 0, Level::e) = y.a;
        state.at(m, 1, Level::g) = y.b;
    }
}

// Row-major -i H_eff over the full truncated basis.
std::vector<Complex> dense_generator(const IntegratorConfig& config, std::size_t levels) {
    const std::size_t dim = levels * kBlockSize;
    std::vector<Complex> gen(dim * dim);
    auto h = [&](std::size_t row, std::size_t col) -> Complex& { return gen[row * dim + col]; };
    for (std::size_t m = 0; m < levels; ++m) {
        const double lambda = config.coupling(static_cast<int>(m));
        const std::size_t e0 = CompositeState::index(m, 0, Level::e);
        const std::size_t g1 = CompositeState::index(m, 1, Level::g);
        const std::size_t e1 = CompositeState::index(m, 1, Level::e);
        // sigma_- b^dag |m,0,e> = |m,1,g>; sigma_+ b |m,1,g> = |m,0,e>.
        h(g1, e0) += lambda;
        h(e0, g1) += lambda;
        // -i (Gamma/2) b^dag b on every one-photon state.
        h(g1, g1) += Complex{0.0, -0.5 * config.gamma};
        h(e1, e1) += Complex{0.0, -0.5 * config.gamma};
    }
    for (auto& x : gen) {
        x *= kMinusI;
    }
    return gen;
}

std::vector<Complex> matvec(const std::vector<Complex>& mat, const std::vector<Complex>& x) {
    const std::size_t dim = x.size();
    std::vector<Complex> y(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        Complex acc{};
        const Complex* row = &mat[r * dim];
        for (std::size_t c = 0; c < dim; ++c) {
            acc += row[c] * x[c];
        }
        y[r] = acc;
    }
    return y;
}

void integrate_dense(const IntegratorConfig& config, double tau, CompositeState& state) {
    const std::uint64_t steps = step_count(tau, config.dt);
    const double h = tau / static_cast<double>(steps);
    const auto gen = dense_generator(config, state.vib_levels());
    std::vector<Complex> y(state.amplitudes().begin(), state.amplitudes().end());
    const std::size_t dim = y.size();
    std::vector<Complex> tmp(dim);
    for (std::uint64_t s = 0; s < steps; ++s) {
        const auto k1 = matvec(gen, y);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        const auto k2 = matvec(gen, tmp);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        const auto k3 = matvec(gen, tmp);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
        const auto k4 = matvec(gen, tmp);
        for (std::size_t i = 0; i < dim; ++i) {
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (!finite(y[i])) {
            report_nan(i / kBlockSize, steps);
        }
    }
    std::copy(y.begin(), y.end(), state.amplitudes().begin());
}

}  // namespace

IntegratorConfig IntegratorConfig::for_params(const SystemParams& params, double dt, CouplingKind kind,
                                              IntegratorMode mode) {
    return {dt, CouplingProfile{kind, params.eta()}, params.gamma(), mode};
}

CompositeState integrate(const IntegratorConfig& config, double tau, const CompositeState& initial) {
    check_config(config);
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("oracle tau must be finite and non-negative");
    }
    for (std::size_t m = 0; m < initial.vib_levels(); ++m) {
        if (initial.at(m, 1, Level::e) != Complex{}) {
            throw InvalidArgument("oracle initial state leaves the single-excitation sector (|m,1,e>)");
        }
    }
    CompositeState state = initial;
    if (tau == 0.0) {
        return state;
    }
    if (config.mode == IntegratorMode::Dense) {
        integrate_dense(config, tau, state);
    } else {
        integrate_blocks(config, tau, state);
    }
    return state;
}

CompositeState integrate_from_coherent(const SystemParams& params, const IntegratorConfig& config, double tau) {
    const auto initial =
        CompositeState::product(coherent_amplitudes(params.alpha(), params.truncation()), 0, Level::e);
    return integrate(config, tau, initial);
}

std::vector<CompositeState> integrate_grid(const SystemParams& params, const IntegratorConfig& config,
                                           const std::vector<double>& taus) {
    std::vector<CompositeState> out;
    out.reserve(taus.size());
    CompositeState state =
        CompositeState::product(coherent_amplitudes(params.alpha(), params.truncation()), 0, Level::e);
    double now = 0.0;
    for (const double tau : taus) {
        if (tau < now) {
            throw InvalidArgument("integrate_grid needs an ascending grid starting at or after 0");
        }
        state = integrate(config, tau - now, state);
        now = tau;
        out.push_back(state);
    }
    return out;
}

CompositeState drift(const IntegratorConfig& config, const CompositeState& state) {
    CompositeState out(state.vib_levels());
    const double half_gamma = 0.5 * config.gamma;
    for (std::size_t m = 0; m < state.vib_levels(); ++m) {
        const double lambda = config.coupling(static_cast<int>(m));
        const Complex e0 = state.at(m, 0, Level::e);
        const Complex g1 = state.at(m, 1, Level::g);
        const Complex e1 = state.at(m, 1, Level::e);
        out.at(m, 0, Level::e) = kMinusI * lambda * g1;
        out.at(m, 1, Level::g) = kMinusI * lambda * e0 - half_gamma * g1;
        out.at(m, 1, Level::e) = -half_gamma * e1;
        // |m,0,g> is dark: neither the coupling nor the loss term acts on it.
    }
    return out;
}

ConvergenceReport convergence_order(const SystemParams& params, double tau, double dt) {
    auto run = [&](double h) {
        return integrate_from_coherent(params, IntegratorConfig::for_params(params, h), tau);
    };
    const CompositeState y1 = run(dt);
    const CompositeState y2 = run(0.5 * dt);
    const CompositeState y4 = run(0.25 * dt);
    const double ratio = max_abs_diff(y1, y2) / max_abs_diff(y2, y4);
    return {std::log2(ratio), ratio};
}

double max_abs_diff(const CompositeState& x, const CompositeState& y) {
    if (x.size() != y.size()) {
        throw DimensionMismatch("max_abs_diff of states with different dimensions");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        worst = std::max(worst, std::abs(x.amplitudes()[i] - y.amplitudes()[i]));
    }
    return worst;
}

}  // namespace catqed
