#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "catqed/hilbert.hpp"

namespace catqed {

class PhononDistribution {
public:
    /// From probabilities. Entries in [-1e-15, 0) are clamped to zero; the sum must be 1 +- 1e-10.
    explicit PhononDistribution(std::vector<double> p);

    [[nodiscard]] const std::vector<double>& p() const noexcept { return p_; }
    [[nodiscard]] double operator[](std::size_t m) const { return p_[m]; }
    [[nodiscard]] std::size_t size() const noexcept { return p_.size(); }

    [[nodiscard]] double mean() const noexcept { return mean_; }
    [[nodiscard]] double second_moment() const noexcept { return second_moment_; }
    /// F = <m^2>/<m> - <m>; NaN for the vacuum (mean = 0).
    [[nodiscard]] double fano() const noexcept { return fano_; }

private:
    std::vector<double> p_;
    double mean_ = 0.0;
    double second_moment_ = 0.0;
    double fano_ = 0.0;
};

/// P_m = |<m|state>|^2. Throws InvalidArgument if |state|^2 deviates from 1 by more than 1e-6.
PhononDistribution phonon_distribution(const MotionalState& state);

enum class Statistics { SubPoissonian, Poissonian, SuperPoissonian };

inline constexpr double kPoissonianTolerance = 1e-9;

Statistics classify(double fano, double tol = kPoissonianTolerance);

struct FanoRow {
    double tau;
    double fano;
};

struct FanoScan {
    std::vector<FanoRow> rows;
    std::vector<double> skipped;  // grid points with an empty one-photon sector
};

/// Fano factor of the post-jump motional state at each grid point.
FanoScan fano_timeseries(const SystemParams& params, const std::vector<double>& tau_grid);

/// Count of interior local maxima p_{m-1} < p_m > p_{m+1} with p_m > floor, for m and both
/// neighbours inside the window [lo, hi]. Runs of equal values (within 1e-12 relative) count as one
/// point, so a flat top such as Poisson(4) at m = 3, 4 is a single maximum.
int count_interior_maxima(const PhononDistribution& dist, std::size_t lo, std::size_t hi, double floor);

/// CSV header `tau,fano`.
void write_fano_csv(std::ostream& out, const std::vector<FanoRow>& rows);
/// CSV header `m,P_m`.
void write_distribution_csv(std::ostream& out, const PhononDistribution& dist);

}  // namespace catqed
