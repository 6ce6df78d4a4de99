#pragma once

// Monte Carlo wavefunction unraveling of the monitored cavity.
//
// Waiting-time sampler: draw u ~ U(0,1) and jump at the tau* solving
// survival_norm(tau*) = u. After the jump the state sum_m b_m |m,0,g> is dark
// (H_eff annihilates |m,0,g>), so a trajectory holds at most one jump.
//
// Seeding: trajectory i of an ensemble with root seed r uses the i-th output of a
// splitmix64 stream whose state starts at r (state advances by 0x9E3779B97F4A7C15
// before each mix), i.e. seed_i = splitmix64(r + i * 0x9E3779B97F4A7C15), and
// draws its uniforms from std::mt19937_64(seed_i), whose output sequence is fixed
// by the standard. Uniforms are built from the top 53 bits, not through
// std::uniform_real_distribution, so records are bit-identical across platforms.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "catqed/hilbert.hpp"

namespace catqed {

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t trajectory_seed(std::uint64_t root, std::uint64_t index) noexcept;

/// Uniform in the open interval (0, 1) from the top 53 bits of one engine draw.
double open_uniform(std::mt19937_64& engine) noexcept;

enum class Sampler {
    WaitingTime,  // inverse-CDF on the closed-form survival norm
    PerStep,      // Bernoulli jump test every dt on an RK4-propagated state
};

struct TrajectoryOptions {
    Sampler sampler = Sampler::WaitingTime;
    double bisection_tol = 1e-10;
    double step = 1e-3;  // PerStep only
};

struct TrajectoryRecord {
    std::uint64_t seed = 0;
    std::optional<double> jump_time;
    int jump_count = 0;
    CompositeState final_state;  // unit norm
    double survival_at_end = 1.0;
    /// |H_eff psi| of the collapsed state right after the jump (0 for a dark state).
    double post_jump_drift = 0.0;
};

TrajectoryRecord run_trajectory(const SystemParams& params, double tau_max, std::uint64_t seed,
                                const TrajectoryOptions& options = {});

struct EnsembleRow {
    double tau;
    double empirical_p;
    double analytic_p;
    double z;  // (empirical - analytic) / sqrt(analytic (1 - analytic) / n); 0 when both sides are exact
};

struct EnsembleResult {
    std::vector<EnsembleRow> rows;
    std::vector<TrajectoryRecord> records;
};

/// Runs n_traj trajectories to the last checkpoint and compares the empirical jump CDF with P(tau).
/// `threads` = 0 picks the hardware concurrency; results do not depend on it.
EnsembleResult ensemble_cdf(const SystemParams& params, const std::vector<double>& checkpoints,
                            std::size_t n_traj, std::uint64_t base_seed, const TrajectoryOptions& options = {},
                            unsigned threads = 0);

/// CSV header `tau,empirical_P,analytic_P,z`.
void write_ensemble_csv(std::ostream& out, const std::vector<EnsembleRow>& rows);

/// One JSON object per line: {"seed": ..., "jump_time": ... | null}.
void write_trajectories_jsonl(std::ostream& out, const std::vector<TrajectoryRecord>& records);

}  // namespace catqed
