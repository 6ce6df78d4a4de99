#include "catqed/hilbert.hpp"

#include <cmath>
#include <sstream>

namespace catqed {

namespace {

constexpr double kZeroNormSq = 1e-300;

template <class State>
State normalize_impl(const State& x) {
    const double n2 = norm_sq(x);
    if (!(n2 > kZeroNormSq)) {
        throw DegenerateState("cannot normalize a zero vector");
    }
    State out = x;
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& a : out.amplitudes()) {
        a *= scale;
    }
    return out;
}

}  // namespace

SystemParams::SystemParams() : SystemParams(0.05, 1.0, Complex{2.0, 0.0}, 40) {}

SystemParams::SystemParams(double eta, double gamma, Complex alpha, std::size_t truncation,
                           TruncationPolicy policy, double g)
    : g_(g), eta_(eta), gamma_(gamma), alpha_(alpha), truncation_(truncation), policy_(policy) {
    if (!(g_ > 0.0) || !std::isfinite(g_)) {
        throw InvalidArgument("g must be positive and finite");
    }
    if (!(eta_ > 0.0) || !std::isfinite(eta_)) {
        throw InvalidArgument("eta must be positive and finite");
    }
    if (!(gamma_ >= 0.0) || !std::isfinite(gamma_)) {
        throw InvalidArgument("Gamma must be non-negative and finite");
    }
    if (!std::isfinite(alpha_.real()) || !std::isfinite(alpha_.imag())) {
        throw InvalidArgument("alpha must be finite");
    }
    if (truncation_ < 1) {
        throw InvalidArgument("truncation M must be at least 1");
    }
    const double load = lamb_dicke_load(eta_, alpha_);
    if (!(load < 0.5)) {
        std::ostringstream msg;
        msg << "Lamb-Dicke bound violated: eta^2 (|alpha|^2 + 6|alpha| + 9) = " << load
            << " must be < 0.5";
        throw InvalidArgument(msg.str());
    }
    const std::size_t need = recommended_truncation(alpha_);
    if (truncation_ < need) {
        std::ostringstream msg;
        msg << "truncation M = " << truncation_ << " is below the recommended " << need
            << " for |alpha| = " << std::abs(alpha_) << " (tail "
            << truncation_tail(alpha_, truncation_) << ")";
        if (policy_ == TruncationPolicy::Enforce) {
            throw InvalidArgument(msg.str());
        }
        warnings_.push_back(msg.str());
    }
}

SystemParams SystemParams::with_gamma(double gamma) const {
    return SystemParams(eta_, gamma, alpha_, truncation_, policy_, g_);
}

SystemParams SystemParams::with_truncation(std::size_t truncation) const {
    return SystemParams(eta_, gamma_, alpha_, truncation, policy_, g_);
}

std::size_t SystemParams::recommended_truncation(Complex alpha) {
    const double a = std::abs(alpha);
    return static_cast<std::size_t>(std::ceil(a * a + 8.0 * a + 20.0));
}

double SystemParams::lamb_dicke_load(double eta, Complex alpha) {
    const double a = std::abs(alpha);
    return eta * eta * (a * a + 6.0 * a + 9.0);
}

MotionalState MotionalState::fock(std::size_t m, std::size_t levels) {
    if (m >= levels) {
        throw DimensionMismatch("Fock index outside the truncated space");
    }
    MotionalState s(levels);
    s[m] = 1.0;
    return s;
}

CompositeState CompositeState::product(const MotionalState& motion, int n, Level q) {
    CompositeState s(motion.size());
    s.set_sector(n, q, motion);
    return s;
}

MotionalState CompositeState::sector(int n, Level q) const {
    MotionalState out(vib_levels());
    for (std::size_t m = 0; m < out.size(); ++m) {
        out[m] = at(m, n, q);
    }
    return out;
}

void CompositeState::set_sector(int n, Level q, const MotionalState& motion) {
    if (motion.size() != vib_levels()) {
        throw DimensionMismatch("sector size does not match the composite truncation");
    }
    for (std::size_t m = 0; m < motion.size(); ++m) {
        at(m, n, q) = motion[m];
    }
}

MotionalState coherent_amplitudes(Complex alpha, std::size_t levels) {
    if (levels < 1) {
        throw InvalidArgument("coherent_amplitudes needs at least one level");
    }
    MotionalState c(levels);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t m = 1; m < levels; ++m) {
        c[m] = c[m - 1] * alpha / std::sqrt(static_cast<double>(m));
    }
    return c;
}

double truncation_tail(Complex alpha, std::size_t levels) {
    return 1.0 - norm_sq(coherent_amplitudes(alpha, levels));
}

CompositeState annihilate_cavity(const CompositeState& state) {
    CompositeState out(state.vib_levels());
    for (std::size_t m = 0; m < state.vib_levels(); ++m) {
        out.at(m, 0, Level::g) = state.at(m, 1, Level::g);
        out.at(m, 0, Level::e) = state.at(m, 1, Level::e);
    }
    return out;
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) {
        throw DimensionMismatch("inner product of vectors with different dimensions");
    }
    CompensatedComplexSum acc;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc.value();
}

Complex inner(const MotionalState& x, const MotionalState& y) {
    return inner(x.amplitudes(), y.amplitudes());
}

Complex inner(const CompositeState& x, const CompositeState& y) {
    return inner(x.amplitudes(), y.amplitudes());
}

double norm_sq(std::span<const Complex> x) {
    CompensatedSum acc;
    for (const Complex& a : x) {
        acc += std::norm(a);
    }
    return acc.value();
}

double norm_sq(const MotionalState& x) { return norm_sq(x.amplitudes()); }
double norm_sq(const CompositeState& x) { return norm_sq(x.amplitudes()); }

MotionalState normalize(const MotionalState& x) { return normalize_impl(x); }
CompositeState normalize(const CompositeState& x) { return normalize_impl(x); }

double fidelity(const MotionalState& x, const MotionalState& y) {
    const double nx = norm_sq(x);
    const double ny = norm_sq(y);
    if (!(nx > kZeroNormSq) || !(ny > kZeroNormSq)) {
        throw DegenerateState("fidelity with a zero vector is undefined");
    }
    return std::norm(inner(x, y)) / (nx * ny);
}

}  // namespace catqed
