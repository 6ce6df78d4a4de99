#include "catqed/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "catqed/conditional.hpp"
#include "catqed/csv.hpp"
#include "catqed/oracle.hpp"

namespace catqed {

namespace {

double drift_norm(const SystemParams& params, const CompositeState& state) {
    return std::sqrt(norm_sq(drift(IntegratorConfig::for_params(params), state)));
}

void collapse(const SystemParams& params, TrajectoryRecord& rec, const CompositeState& collapsed) {
    rec.final_state = collapsed;
    rec.post_jump_drift = drift_norm(params, collapsed);
    if (rec.post_jump_drift != 0.0) {
        // Not reachable from |alpha>|0>|e>: one jump always lands in the dark sector.
        throw Error("post-jump state is not dark; multi-jump trajectories are not supported");
    }
}

TrajectoryRecord waiting_time(const SystemParams& params, double tau_max, std::uint64_t seed,
                              const TrajectoryOptions& options) {
    TrajectoryRecord rec;
    rec.seed = seed;
    std::mt19937_64 engine(seed);
    const double u = open_uniform(engine);

    const double end_survival = survival_norm(params, tau_max);
    if (params.gamma() == 0.0 || end_survival > u) {
        rec.final_state = normalize(amplitudes(params, tau_max).to_composite());
        rec.survival_at_end = end_survival;
        return rec;
    }

    // survival_norm is nonincreasing, so bracket [lo, hi] with S(lo) > u >= S(hi).
    double lo = 0.0;
    double hi = tau_max;
    while (hi - lo > options.bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        if (survival_norm(params, mid) > u) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double jump = 0.5 * (lo + hi);
    rec.jump_time = jump;
    rec.jump_count = 1;
    collapse(params, rec, post_jump_state(params, jump).to_composite());
    rec.survival_at_end = 1.0;
    return rec;
}

TrajectoryRecord per_step(const SystemParams& params, double tau_max, std::uint64_t seed,
                          const TrajectoryOptions& options) {
    TrajectoryRecord rec;
    rec.seed = seed;
    std::mt19937_64 engine(seed);
    const auto config = IntegratorConfig::for_params(params, options.step);

    CompositeState psi =
        normalize(CompositeState::product(coherent_amplitudes(params.alpha(), params.truncation()), 0, Level::e));
    const auto steps = static_cast<std::uint64_t>(std::ceil(tau_max / options.step - 1e-9));
    const double h = tau_max / static_cast<double>(steps);
    double survival = 1.0;
    for (std::uint64_t s = 0; s < steps; ++s) {
        const double r = open_uniform(engine);
        const CompositeState next = integrate(config, h, psi);
        // Norm lost over the step is the jump probability in that step.
        const double kept = norm_sq(next);
        if (r < 1.0 - kept) {
            const CompositeState jumped = annihilate_cavity(next);
            if (norm_sq(jumped) > 1e-300) {
                ++rec.jump_count;
                if (!rec.jump_time) {
                    rec.jump_time = static_cast<double>(s + 1) * h;
                }
                psi = normalize(jumped);
                if (rec.jump_count == 1) {
                    collapse(params, rec, psi);
                }
                survival = 1.0;
                continue;
            }
        }
        survival *= kept;
        psi = normalize(next);
    }
    rec.final_state = psi;
    rec.survival_at_end = survival;
    return rec;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t trajectory_seed(std::uint64_t root, std::uint64_t index) noexcept {
    return splitmix64(root + index * 0x9E3779B97F4A7C15ULL);
}

double open_uniform(std::mt19937_64& engine) noexcept {
    // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1.
    const std::uint64_t k = engine() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

TrajectoryRecord run_trajectory(const SystemParams& params, double tau_max, std::uint64_t seed,
                                const TrajectoryOptions& options) {
    if (!(tau_max > 0.0) || !std::isfinite(tau_max)) {
        throw InvalidArgument("tau_max must be positive and finite");
    }
    if (options.sampler == Sampler::PerStep) {
        if (!(options.step > 0.0) || options.step > kMaxOracleStep) {
            throw InvalidArgument("per-step sampler needs a step in (0, 0.01]");
        }
        return per_step(params, tau_max, seed, options);
    }
    return waiting_time(params, tau_max, seed, options);
}

EnsembleResult ensemble_cdf(const SystemParams& params, const std::vector<double>& checkpoints,
                            std::size_t n_traj, std::uint64_t base_seed, const TrajectoryOptions& options,
                            unsigned threads) {
    if (n_traj < 100) {
        throw InvalidArgument("ensemble_cdf needs at least 100 trajectories");
    }
    if (checkpoints.empty() || !std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
        checkpoints.front() < 0.0) {
        throw InvalidArgument("checkpoints must be non-empty, ascending and non-negative");
    }
    const double tau_max = checkpoints.back();

    EnsembleResult result;
    result.records.resize(n_traj);
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_traj));
    std::vector<std::exception_ptr> failures(threads);
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n_traj; i += threads) {
                        result.records[i] =
                            run_trajectory(params, tau_max, trajectory_seed(base_seed, i), options);
                    }
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }

    std::vector<double> jumps;
    jumps.reserve(n_traj);
    for (const auto& rec : result.records) {
        if (rec.jump_time) {
            jumps.push_back(*rec.jump_time);
        }
    }
    std::sort(jumps.begin(), jumps.end());

    const double n = static_cast<double>(n_traj);
    for (const double tau : checkpoints) {
        const auto hits = std::upper_bound(jumps.begin(), jumps.end(), tau) - jumps.begin();
        const double empirical = static_cast<double>(hits) / n;
        const double analytic = jump_probability(params, tau);
        const double var = analytic * (1.0 - analytic) / n;
        double z = 0.0;
        if (var > 0.0) {
            z = (empirical - analytic) / std::sqrt(var);
        } else if (empirical != analytic) {
            z = std::numeric_limits<double>::infinity();
        }
        result.rows.push_back({tau, empirical, analytic, z});
    }
    return result;
}

void write_ensemble_csv(std::ostream& out, const std::vector<EnsembleRow>& rows) {
    out << "tau,empirical_P,analytic_P,z\n";
    for (const auto& r : rows) {
        out << csv::number(r.tau) << ',' << csv::number(r.empirical_p) << ',' << csv::number(r.analytic_p)
            << ',' << csv::number(r.z) << '\n';
    }
}

void write_trajectories_jsonl(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
    for (const auto& rec : records) {
        nlohmann::json line = {{"seed", rec.seed}};
        line["jump_time"] = rec.jump_time ? nlohmann::json(*rec.jump_time) : nlohmann::json(nullptr);
        out << line.dump() << '\n';
    }
}

}  // namespace catqed
