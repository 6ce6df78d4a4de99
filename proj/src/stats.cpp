#include "catqed/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "catqed/conditional.hpp"
#include "catqed/csv.hpp"

namespace catqed {

PhononDistribution::PhononDistribution(std::vector<double> p) : p_(std::move(p)) {
    CompensatedSum total;
    CompensatedSum first;
    CompensatedSum second;
    for (std::size_t m = 0; m < p_.size(); ++m) {
        double& pm = p_[m];
        if (pm < 0.0) {
            if (pm < -1e-15) {
                throw InvalidArgument("negative probability in phonon distribution");
            }
            pm = 0.0;
        }
        const double md = static_cast<double>(m);
        total += pm;
        first += md * pm;
        second += md * md * pm;
    }
    if (std::abs(total.value() - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "phonon distribution sums to " << total.value() << ", expected 1";
        throw InvalidArgument(msg.str());
    }
    mean_ = first.value();
    second_moment_ = second.value();
    fano_ = mean_ > 0.0 ? second_moment_ / mean_ - mean_ : std::numeric_limits<double>::quiet_NaN();
}

PhononDistribution phonon_distribution(const MotionalState& state) {
    const double n2 = norm_sq(state);
    if (std::abs(n2 - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "phonon_distribution needs a unit-norm state, got |psi|^2 = " << n2;
        throw InvalidArgument(msg.str());
    }
    std::vector<double> p(state.size());
    for (std::size_t m = 0; m < p.size(); ++m) {
        p[m] = std::norm(state[m]) / n2;
    }
    return PhononDistribution(std::move(p));
}

Statistics classify(double fano, double tol) {
    if (fano < 1.0 - tol) {
        return Statistics::SubPoissonian;
    }
    if (fano > 1.0 + tol) {
        return Statistics::SuperPoissonian;
    }
    return Statistics::Poissonian;
}

FanoScan fano_timeseries(const SystemParams& params, const std::vector<double>& tau_grid) {
    FanoScan scan;
    scan.rows.reserve(tau_grid.size());
    for (const double tau : tau_grid) {
        if (!(tau > 0.0)) {
            scan.skipped.push_back(tau);
            continue;
        }
        try {
            const PostJumpState post = post_jump_state(params, tau);
            scan.rows.push_back({tau, phonon_distribution(post.motion).fano()});
        } catch (const DegenerateState&) {
            scan.skipped.push_back(tau);
        }
    }
    return scan;
}

int count_interior_maxima(const PhononDistribution& dist, std::size_t lo, std::size_t hi, double floor) {
    if (dist.size() == 0) {
        return 0;
    }
    hi = std::min(hi, dist.size() - 1);
    if (lo >= hi) {
        return 0;
    }
    const auto& p = dist.p();
    double scale = 0.0;
    for (std::size_t m = lo; m <= hi; ++m) {
        scale = std::max(scale, p[m]);
    }
    const double tie = 1e-12 * scale;

    // Collapse plateaus into (value, first, last) runs.
    struct Run {
        double value;
        std::size_t first;
        std::size_t last;
    };
    std::vector<Run> runs;
    for (std::size_t m = lo; m <= hi; ++m) {
        if (!runs.empty() && std::abs(p[m] - runs.back().value) <= tie) {
            runs.back().last = m;
        } else {
            runs.push_back({p[m], m, m});
        }
    }
    int count = 0;
    for (std::size_t i = 1; i + 1 < runs.size(); ++i) {
        if (runs[i - 1].value < runs[i].value && runs[i].value > runs[i + 1].value &&
            runs[i].value > floor) {
            ++count;
        }
    }
    return count;
}

void write_fano_csv(std::ostream& out, const std::vector<FanoRow>& rows) {
    out << "tau,fano\n";
    for (const auto& r : rows) {
        out << csv::number(r.tau) << ',' << csv::number(r.fano) << '\n';
    }
}

void write_distribution_csv(std::ostream& out, const PhononDistribution& dist) {
    out << "m,P_m\n";
    for (std::size_t m = 0; m < dist.size(); ++m) {
        out << m << ',' << csv::number(dist[m]) << '\n';
    }
}

}  // namespace catqed
