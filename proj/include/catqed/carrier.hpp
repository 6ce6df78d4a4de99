#pragma once

// Lossless (ideal-cavity) carrier dynamics from |alpha>_v |0>_c |e>.
//
// With lambda_LD(m) t = omega_eta t - m phi and phi = eta^2 t, the evolved state splits as
//     [cos(w t) Phi+ - i sin(w t) Phi-] |0,e> + [cos(w t) Phi- - i sin(w t) Phi+] |1,g>
// where Phi+- = (|alpha e^{i phi}> +- |alpha e^{-i phi}>) / 2 (not unit vectors).
// At omega_eta t_k = k pi this collapses to (-1)^k (Phi+ |0,e> + Phi- |1,g>).

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "catqed/hilbert.hpp"

namespace catqed {

enum class CatSign { plus, minus };
enum class CatNorm { raw, normalized };

struct CatSpec {
    Complex alpha{2.0, 0.0};
    double phi = 0.0;
    CatSign sign = CatSign::plus;
};

/// State at time t (units of 1/g). Unit norm up to truncation.
CompositeState evolve_ideal(const SystemParams& params, double t);

/// raw: c_m cos(m phi) (plus) or i c_m sin(m phi) (minus).
/// normalized: raw / |raw|; throws DegenerateState for the vanishing minus cat.
MotionalState cat_state(const CatSpec& spec, std::size_t levels, CatNorm norm = CatNorm::normalized);

/// phi = eta^2 t.
double cat_phase(const SystemParams& params, double t);

/// t_k solving omega_eta t_k = k pi, in 1/g units.
double tk_time(const SystemParams& params, int k);

/// evolve_ideal at t_k. Equals (-1)^k (Phi+ |0,e> + Phi- |1,g>) with phi = eta^2 t_k.
CompositeState state_at_tk(const SystemParams& params, int k);

/// Global phase relating state_at_tk to the unsigned superposition.
inline double tk_global_sign(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

struct MeasurementResult {
    MotionalState motion;  // normalized
    double probability;
};

/// Probability is relative to the input norm, so sub-normalized inputs are handled.
/// Projects onto the internal level, drops the cavity label (which must be determined
/// by the outcome), and renormalizes. Throws DegenerateState on a zero-probability outcome
/// and InvalidArgument if both cavity sectors carry weight for that level.
MeasurementResult measure_internal(const CompositeState& state, Level outcome);

/// Outcome probability without collapsing.
double level_probability(const CompositeState& state, Level outcome);

struct CarrierRow {
    double t;
    double p_e;
    double p_g;
    double fidelity_plus;   // (0,e) sector vs normalized Phi+ at phi = eta^2 t; NaN if undefined
    double fidelity_minus;  // (1,g) sector vs normalized Phi- at phi = eta^2 t; NaN if undefined
};

CarrierRow carrier_row(const SystemParams& params, double t);

/// CSV header `t,P(e),P(g),fidelity_plus,fidelity_minus`.
void write_carrier_csv(std::ostream& out, const std::vector<CarrierRow>& rows);

}  // namespace catqed
