#pragma once

// Ion-field coupling constants on the carrier resonance.
//
// Exact:      lambda(m)    = <m| cos eta(a^dag + a) |m> = e^{-eta^2/2} L_m(eta^2)
// Lamb-Dicke: lambda_LD(m) = 1 - eta^2 (1 + 2m) / 2
// Ratio:      R(eta, m)    = lambda / lambda_LD

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace catqed {

/// Laguerre polynomial L_m(x) by the three-term recurrence
/// (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
double laguerre(int m, double x);

double coupling_exact(double eta, int m);
double coupling_ld(double eta, int m);

enum class CouplingKind { Exact, LambDicke };

struct CouplingProfile {
    CouplingKind kind = CouplingKind::LambDicke;
    double eta = 0.05;

    [[nodiscard]] double operator()(int m) const {
        return kind == CouplingKind::Exact ? coupling_exact(eta, m) : coupling_ld(eta, m);
    }
};

/// Cells whose lambda_LD falls at or below this are flagged instead of divided.
inline constexpr double kMinLambdaLD = 1e-6;

/// "Valid region" band for R. The underlying criterion is qualitative (eta^2 <m> small);
/// +-1% is the threshold this library reports against.
inline constexpr double kValidRatioLow = 0.99;
inline constexpr double kValidRatioHigh = 1.01;

struct ValidityGridSpec {
    double eta_min = 0.01;
    double eta_max = 0.5;
    double eta_step = 0.01;
    int m_min = 0;
    int m_max = 30;
};

struct ValidityCell {
    double eta;
    int m;
    double ratio;  // NaN when flagged
    bool flagged;

    [[nodiscard]] bool valid() const noexcept {
        return !flagged && ratio >= kValidRatioLow && ratio <= kValidRatioHigh;
    }
};

/// R(eta, m) over the grid, eta-major. Eta values are eta_min + i * eta_step (no accumulation).
std::vector<ValidityCell> validity_grid(const ValidityGridSpec& spec);

/// CSV body with header `eta,m,R`; flagged cells print `nan`.
void write_validity_csv(std::ostream& out, const std::vector<ValidityCell>& cells);

}  // namespace catqed
