#pragma once

// Lossy cavity, conditioned on no photodetection. The effective Hamiltonian
//     H_eff = -i (Gamma/2) b^dag b + lambda_LD(m) (sigma_- b^dag + sigma_+ b)
// keeps m fixed and couples only |m,0,e> and |m,1,g>, so from |alpha>|0>|e>
//     |psi(tau)> = sum_m a_m(tau) |m,0,e> + b_m(tau) |m,1,g>
// with, for D = Gamma^2 - 16 lambda^2, C = cosh(sqrt(D) tau/4), S = sinh(sqrt(D) tau/4):
//     a_m = c_m e^{-Gamma tau/4} (C + Gamma S / sqrt(D))
//     b_m = -4i c_m e^{-Gamma tau/4} lambda S / sqrt(D)
// The square root is taken in complex arithmetic so D < 0 turns cosh/sinh into cos/sin.
//
// A detected photon applies b and leaves the dark state sum_m b_m |m,0,g>. Note
// the internal level after the jump is g: b maps |m,1,g> to |m,0,g>.

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "catqed/hilbert.hpp"

namespace catqed {

/// |D| below this uses the Taylor limit around the exceptional point Gamma = 4 lambda.
inline constexpr double kExceptionalPointWindow = 1e-12;

struct ConditionalAmplitudes {
    std::vector<Complex> a;  // |m,0,e>
    std::vector<Complex> b;  // |m,1,g>
    double tau = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return a.size(); }
    [[nodiscard]] CompositeState to_composite() const;
};

/// Propagator factors (a_m / c_m, b_m / c_m) of a single two-level block with coupling lambda.
std::pair<Complex, Complex> block_factors(double lambda, double gamma, double tau);

ConditionalAmplitudes amplitudes(const SystemParams& params, double tau);

/// sum_m |a_m|^2 + |b_m|^2.
double survival_norm(const ConditionalAmplitudes& amps);
double survival_norm(const SystemParams& params, double tau);

/// P(tau) = 1 - <psi(tau)|psi(tau)>: probability that at least one photon was detected in [0, tau].
double jump_probability(const SystemParams& params, double tau);

struct PostJumpState {
    MotionalState motion;  // b_m / |b|
    Level internal = Level::g;
    int cavity = 0;

    [[nodiscard]] CompositeState to_composite() const {
        return CompositeState::product(motion, cavity, internal);
    }
};

/// Motional state after a detection at tau. Throws DegenerateState if no photon can be present
/// (tau = 0, or the 1-photon sector vanishes).
PostJumpState post_jump_state(const SystemParams& params, double tau);
PostJumpState post_jump_state(const ConditionalAmplitudes& amps);

struct JumpRow {
    double tau;
    double p_jump;
    double survival;
};

std::vector<JumpRow> jump_probability_series(const SystemParams& params, const std::vector<double>& taus);

/// CSV header `tau,P_jump,survival_norm`.
void write_jump_csv(std::ostream& out, const std::vector<JumpRow>& rows);

/// {"tau": ..., "a": [[re, im], ...], "b": [[re, im], ...]}
void write_amplitudes_json(std::ostream& out, const ConditionalAmplitudes& amps);

}  // namespace catqed
