#include "catqed/lamb_dicke.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "catqed/csv.hpp"
#include "catqed/numerics.hpp"

namespace catqed {

double laguerre(int m, double x) {
    if (m < 0) {
        throw InvalidArgument("laguerre degree must be non-negative");
    }
    if (m == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double curr = 1.0 - x;
    for (int k = 1; k < m; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * curr - k * prev) / (k + 1.0);
        prev = curr;
        curr = next;
    }
    return curr;
}

double coupling_exact(double eta, int m) {
    if (!(eta > 0.0)) {
        throw InvalidArgument("eta must be positive");
    }
    const double x = eta * eta;
    return std::exp(-0.5 * x) * laguerre(m, x);
}

double coupling_ld(double eta, int m) {
    if (!(eta > 0.0)) {
        throw InvalidArgument("eta must be positive");
    }
    if (m < 0) {
        throw InvalidArgument("Fock index must be non-negative");
    }
    return 1.0 - 0.5 * eta * eta * (1.0 + 2.0 * m);
}

std::vector<ValidityCell> validity_grid(const ValidityGridSpec& spec) {
    if (!(spec.eta_min > 0.0) || !(spec.eta_step > 0.0) || spec.eta_max < spec.eta_min) {
        throw InvalidArgument("eta range must be positive with a positive step");
    }
    if (spec.m_min < 0 || spec.m_max < spec.m_min) {
        throw InvalidArgument("m range must be non-negative and ordered");
    }
    // Tolerate eta_max landing a rounding error short of a grid point.
    const auto n_eta = static_cast<std::size_t>(
        std::floor((spec.eta_max - spec.eta_min) / spec.eta_step + 1e-9)) + 1;

    std::vector<ValidityCell> cells;
    cells.reserve(n_eta * static_cast<std::size_t>(spec.m_max - spec.m_min + 1));
    for (std::size_t i = 0; i < n_eta; ++i) {
        const double eta = spec.eta_min + static_cast<double>(i) * spec.eta_step;
        for (int m = spec.m_min; m <= spec.m_max; ++m) {
            const double ld = coupling_ld(eta, m);
            if (ld <= kMinLambdaLD) {
                cells.push_back({eta, m, std::numeric_limits<double>::quiet_NaN(), true});
            } else {
                cells.push_back({eta, m, coupling_exact(eta, m) / ld, false});
            }
        }
    }
    return cells;
}

void write_validity_csv(std::ostream& out, const std::vector<ValidityCell>& cells) {
    out << "eta,m,R\n";
    for (const auto& c : cells) {
        out << csv::number(c.eta) << ',' << c.m << ',' << csv::number(c.ratio) << '\n';
    }
}

}  // namespace catqed
