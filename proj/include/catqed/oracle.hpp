#pragma once

// Brute-force reference: fixed-step classical RK4 on i d|psi>/dtau = H_eff |psi>.
// Shares no code with the closed-form propagator beyond the coupling functions.

#include <cstdint>
#include <vector>

#include "catqed/hilbert.hpp"
#include "catqed/lamb_dicke.hpp"

namespace catqed {

enum class IntegratorMode {
    Block,  // independent 2x2 blocks (|m,0,e>, |m,1,g>)
    Dense,  // full 4M x 4M matrix-vector products; slow, for cross-checking the block layout
};

struct IntegratorConfig {
    double dt = 1e-4;
    CouplingProfile coupling;
    double gamma = 0.0;
    IntegratorMode mode = IntegratorMode::Block;

    /// eta and Gamma taken from params.
    static IntegratorConfig for_params(const SystemParams& params, double dt = 1e-4,
                                       CouplingKind kind = CouplingKind::LambDicke,
                                       IntegratorMode mode = IntegratorMode::Block);
};

inline constexpr double kMaxOracleStep = 0.01;
inline constexpr std::uint64_t kMaxOracleSteps = 1'000'000'000;

/// Integrates from `initial` over [0, tau]. The step is tau / ceil(tau / dt) <= dt so the
/// endpoint is hit exactly. The initial state must have no |m,1,e> amplitude (two excitations).
CompositeState integrate(const IntegratorConfig& config, double tau, const CompositeState& initial);

/// integrate() starting from |alpha>_v |0>_c |e>.
CompositeState integrate_from_coherent(const SystemParams& params, const IntegratorConfig& config, double tau);

/// States at each (ascending, non-negative) tau, integrating segment by segment from |alpha>|0>|e>.
std::vector<CompositeState> integrate_grid(const SystemParams& params, const IntegratorConfig& config,
                                           const std::vector<double>& taus);

/// -i H_eff |psi>.
CompositeState drift(const IntegratorConfig& config, const CompositeState& state);

struct ConvergenceReport {
    double order;        // log2(|y_h - y_h/2| / |y_h/2 - y_h/4|)
    double error_ratio;  // the ratio inside the log
};

/// Empirical RK4 order at tau from three runs (h, h/2, h/4), no reference solution needed.
ConvergenceReport convergence_order(const SystemParams& params, double tau, double dt = kMaxOracleStep);

/// max_i |x_i - y_i|.
double max_abs_diff(const CompositeState& x, const CompositeState& y);

}  // namespace catqed
