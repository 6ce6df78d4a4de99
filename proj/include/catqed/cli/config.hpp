#pragma once

// Run configuration: a flat `key = value` file plus command-line overrides.
//
// File syntax: one `key = value` per line, `#` starts a comment, blank lines are
// ignored. Unknown keys, duplicate keys and malformed lines are rejected.
// Flags override file values; the effective set is validated through
// SystemParams before anything is computed.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catqed/hilbert.hpp"
#include "catqed/lamb_dicke.hpp"
#include "catqed/numerics.hpp"
#include "catqed/trajectories.hpp"

namespace catqed::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Command { LdGrid, CarrierCat, JumpProb, FanoScan, PhononDist, Trajectories };

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command command);

using KeyValues = std::map<std::string, std::string>;

/// Every accepted key with its default value (reference working point: Gamma = 1, eta = 0.05, alpha = 2).
const KeyValues& default_values();

/// Keys that name output files; excluded from data-file headers so the data is path independent.
bool is_path_key(const std::string& key);

/// Parses the flat file format. Throws ConfigError on malformed lines, unknown or duplicate keys.
KeyValues parse_key_values(std::istream& in, const std::string& source = "<config>");

struct RunConfig {
    Command command = Command::PhononDist;
    SystemParams params;
    KeyValues effective;  // defaults <- file <- flags

    // Time grid for scans (tau or t, units of 1/g).
    double tau = 3.29;
    double tau_min = 0.0;
    double tau_max = 10.0;
    double tau_step = 0.01;

    ValidityGridSpec ld_grid;

    // Maxima report for phonon-dist.
    std::size_t window_lo = 0;
    std::size_t window_hi = 12;
    double floor = 1e-4;

    std::size_t n_traj = 10000;
    std::size_t checkpoints = 20;
    Sampler sampler = Sampler::WaitingTime;
    unsigned threads = 0;
    std::uint64_t seed = 20060101;

    bool verify = false;
    double oracle_dt = 1e-4;
    double verify_tol = 1e-6;

    std::string output;
    std::string amplitudes_json;
    std::string jsonl;

    /// tau_min + i * tau_step up to tau_max (inclusive within rounding).
    [[nodiscard]] std::vector<double> tau_grid() const;
    /// `checkpoints` evenly spaced points on [tau_min, tau_max].
    [[nodiscard]] std::vector<double> checkpoint_grid() const;
};

/// Merges defaults, file values and overrides, then validates. `command_override` wins over a
/// `command` key in the file; a conflicting pair is an error.
RunConfig parse_config(const KeyValues& file_values, const KeyValues& overrides,
                       std::optional<Command> command_override = std::nullopt);

/// `key=value` lines, sorted by key.
void write_effective_config(std::ostream& out, const RunConfig& config);

}  // namespace catqed::cli
