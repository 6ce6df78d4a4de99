#include "catqed/carrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "catqed/csv.hpp"
#include "catqed/lamb_dicke.hpp"

namespace catqed {

namespace {

constexpr double kZeroProbability = 1e-300;

double safe_fidelity(const MotionalState& x, const MotionalState& y) {
    if (!(norm_sq(x) > kZeroProbability) || !(norm_sq(y) > kZeroProbability)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return fidelity(x, y);
}

}  // namespace

CompositeState evolve_ideal(const SystemParams& params, double t) {
    const std::size_t levels = params.truncation();
    const MotionalState c = coherent_amplitudes(params.alpha(), levels);
    CompositeState out(levels);
    for (std::size_t m = 0; m < levels; ++m) {
        const double theta = coupling_ld(params.eta(), static_cast<int>(m)) * t;
        out.at(m, 0, Level::e) = c[m] * std::cos(theta);
        out.at(m, 1, Level::g) = Complex{0.0, -1.0} * c[m] * std::sin(theta);
    }
    return out;
}

MotionalState cat_state(const CatSpec& spec, std::size_t levels, CatNorm norm) {
    const MotionalState c = coherent_amplitudes(spec.alpha, levels);
    MotionalState out(levels);
    for (std::size_t m = 0; m < levels; ++m) {
        const double angle = static_cast<double>(m) * spec.phi;
        out[m] = spec.sign == CatSign::plus ? c[m] * std::cos(angle)
                                            : Complex{0.0, 1.0} * c[m] * std::sin(angle);
    }
    if (norm == CatNorm::raw) {
        return out;
    }
    if (!(norm_sq(out) > kZeroProbability)) {
        throw DegenerateState(spec.sign == CatSign::minus
                                  ? "the minus cat vanishes identically at this phase (phi = 0 mod pi)"
                                  : "the plus cat vanishes identically");
    }
    return normalize(out);
}

double cat_phase(const SystemParams& params, double t) {
    return params.eta() * params.eta() * t;
}

double tk_time(const SystemParams& params, int k) {
    if (k < 1) {
        throw InvalidArgument("measurement index k must be >= 1");
    }
    return static_cast<double>(k) * kPi / (params.omega_eta() / params.g());
}

CompositeState state_at_tk(const SystemParams& params, int k) {
    return evolve_ideal(params, tk_time(params, k));
}

double level_probability(const CompositeState& state, Level outcome) {
    return norm_sq(state.sector(0, outcome)) + norm_sq(state.sector(1, outcome));
}

MeasurementResult measure_internal(const CompositeState& state, Level outcome) {
    const MotionalState n0 = state.sector(0, outcome);
    const MotionalState n1 = state.sector(1, outcome);
    const double w0 = norm_sq(n0);
    const double w1 = norm_sq(n1);
    const double p = w0 + w1;
    if (!(p > kZeroProbability)) {
        throw DegenerateState("measurement outcome has zero probability");
    }
    // The cavity label must be fixed by the internal level for the motion to be pure.
    if (std::min(w0, w1) > 1e-24 * p) {
        throw InvalidArgument("cavity sector is not determined by the internal level");
    }
    const double total = norm_sq(state);
    return {normalize(w0 >= w1 ? n0 : n1), p / total};
}

CarrierRow carrier_row(const SystemParams& params, double t) {
    const CompositeState s = evolve_ideal(params, t);
    const double phi = cat_phase(params, t);
    const MotionalState plus = cat_state({params.alpha(), phi, CatSign::plus}, params.truncation(), CatNorm::raw);
    const MotionalState minus = cat_state({params.alpha(), phi, CatSign::minus}, params.truncation(), CatNorm::raw);
    const double total = norm_sq(s);
    return {t,
            level_probability(s, Level::e) / total,
            level_probability(s, Level::g) / total,
            safe_fidelity(s.sector(0, Level::e), plus),
            safe_fidelity(s.sector(1, Level::g), minus)};
}

void write_carrier_csv(std::ostream& out, const std::vector<CarrierRow>& rows) {
    out << "t,P(e),P(g),fidelity_plus,fidelity_minus\n";
    for (const auto& r : rows) {
        out << csv::number(r.t) << ',' << csv::number(r.p_e) << ',' << csv::number(r.p_g) << ','
            << csv::number(r.fidelity_plus) << ',' << csv::number(r.fidelity_minus) << '\n';
    }
}

}  // namespace catqed
