#include "catqed/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace catqed::cli {

namespace {

const std::vector<std::pair<Command, std::string>>& command_table() {
    static const std::vector<std::pair<Command, std::string>> table = {
        {Command::LdGrid, "ld-grid"},         {Command::CarrierCat, "carrier-cat"},
        {Command::JumpProb, "jump-prob"},     {Command::FanoScan, "fano-scan"},
        {Command::PhononDist, "phonon-dist"}, {Command::Trajectories, "trajectories"},
    };
    return table;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const KeyValues& kv, const std::string& key) {
    const std::string& text = kv.at(key);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ConfigError("key '" + key + "': expected a finite number, got '" + text + "'");
    }
    return value;
}

std::uint64_t to_unsigned(const KeyValues& kv, const std::string& key) {
    const std::string& text = kv.at(key);
    std::uint64_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

bool to_bool(const KeyValues& kv, const std::string& key) {
    const std::string& text = kv.at(key);
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw ConfigError("key '" + key + "': expected true/false, got '" + text + "'");
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
    for (const auto& [cmd, text] : command_table()) {
        if (text == name) {
            return cmd;
        }
    }
    return std::nullopt;
}

std::string command_name(Command command) {
    for (const auto& [cmd, text] : command_table()) {
        if (cmd == command) {
            return text;
        }
    }
    return "unknown";
}

const KeyValues& default_values() {
    static const KeyValues defaults = {
        {"command", ""},
        {"g", "1"},
        {"eta", "0.05"},
        {"gamma", "1"},
        {"alpha", "2"},
        {"alpha_im", "0"},
        {"M", "40"},
        {"truncation_policy", "enforce"},
        {"tau", "3.29"},
        {"tau_min", "0"},
        {"tau_max", "10"},
        {"tau_step", "0.01"},
        {"eta_min", "0.01"},
        {"eta_max", "0.5"},
        {"eta_step", "0.01"},
        {"m_min", "0"},
        {"m_max", "30"},
        {"window_lo", "0"},
        {"window_hi", "12"},
        {"floor", "1e-4"},
        {"n_traj", "10000"},
        {"checkpoints", "20"},
        {"sampler", "waiting-time"},
        {"threads", "0"},
        {"seed", "20060101"},
        {"verify", "false"},
        {"oracle_dt", "1e-4"},
        {"output", ""},
        {"amplitudes_json", ""},
        {"jsonl", ""},
    };
    return defaults;
}

bool is_path_key(const std::string& key) {
    return key == "output" || key == "amplitudes_json" || key == "jsonl";
}

KeyValues parse_key_values(std::istream& in, const std::string& source) {
    KeyValues out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(lineno);
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(where + ": empty key or value");
        }
        if (!default_values().contains(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
        if (!out.emplace(key, value).second) {
            throw ConfigError(where + ": duplicate key '" + key + "'");
        }
    }
    return out;
}

std::vector<double> RunConfig::tau_grid() const {
    const auto n = static_cast<std::size_t>(std::floor((tau_max - tau_min) / tau_step + 1e-9)) + 1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = tau_min + static_cast<double>(i) * tau_step;
    }
    return grid;
}

std::vector<double> RunConfig::checkpoint_grid() const {
    std::vector<double> grid(checkpoints);
    if (checkpoints == 1) {
        grid[0] = tau_max;
        return grid;
    }
    for (std::size_t i = 0; i < checkpoints; ++i) {
        grid[i] = tau_min + (tau_max - tau_min) * static_cast<double>(i) / static_cast<double>(checkpoints - 1);
    }
    return grid;
}

RunConfig parse_config(const KeyValues& file_values, const KeyValues& overrides,
                       std::optional<Command> command_override) {
    KeyValues kv = default_values();
    for (const auto* layer : {&file_values, &overrides}) {
        for (const auto& [key, value] : *layer) {
            if (!kv.contains(key)) {
                throw ConfigError("unknown key '" + key + "'");
            }
            kv[key] = value;
        }
    }

    RunConfig cfg;
    const std::string& file_command = kv.at("command");
    std::optional<Command> command;
    if (!file_command.empty()) {
        command = parse_command(file_command);
        if (!command) {
            throw ConfigError("unknown command '" + file_command + "'");
        }
    }
    if (command_override) {
        if (command && *command != *command_override) {
            throw ConfigError("conflicting commands: '" + file_command + "' in the config file vs '" +
                              command_name(*command_override) + "'");
        }
        command = command_override;
    }
    if (!command) {
        throw ConfigError("no command given");
    }
    cfg.command = *command;
    kv["command"] = command_name(cfg.command);

    TruncationPolicy policy;
    if (kv.at("truncation_policy") == "enforce") {
        policy = TruncationPolicy::Enforce;
    } else if (kv.at("truncation_policy") == "warn") {
        policy = TruncationPolicy::Warn;
    } else {
        throw ConfigError("truncation_policy must be 'enforce' or 'warn'");
    }
    const auto truncation = to_unsigned(kv, "M");
    try {
        cfg.params = SystemParams(to_double(kv, "eta"), to_double(kv, "gamma"),
                                  Complex{to_double(kv, "alpha"), to_double(kv, "alpha_im")},
                                  static_cast<std::size_t>(truncation), policy, to_double(kv, "g"));
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("invalid system parameters: ") + e.what());
    }

    cfg.tau = to_double(kv, "tau");
    cfg.tau_min = to_double(kv, "tau_min");
    cfg.tau_max = to_double(kv, "tau_max");
    cfg.tau_step = to_double(kv, "tau_step");
    if (cfg.tau < 0.0 || cfg.tau_min < 0.0 || cfg.tau_max < cfg.tau_min || !(cfg.tau_step > 0.0)) {
        throw ConfigError("time grid needs 0 <= tau_min <= tau_max, tau_step > 0 and tau >= 0");
    }

    cfg.ld_grid.eta_min = to_double(kv, "eta_min");
    cfg.ld_grid.eta_max = to_double(kv, "eta_max");
    cfg.ld_grid.eta_step = to_double(kv, "eta_step");
    cfg.ld_grid.m_min = static_cast<int>(to_unsigned(kv, "m_min"));
    cfg.ld_grid.m_max = static_cast<int>(to_unsigned(kv, "m_max"));
    if (!(cfg.ld_grid.eta_min > 0.0) || cfg.ld_grid.eta_max < cfg.ld_grid.eta_min ||
        !(cfg.ld_grid.eta_step > 0.0) || cfg.ld_grid.m_max < cfg.ld_grid.m_min) {
        throw ConfigError("Lamb-Dicke grid needs 0 < eta_min <= eta_max, eta_step > 0, m_min <= m_max");
    }

    cfg.window_lo = to_unsigned(kv, "window_lo");
    cfg.window_hi = to_unsigned(kv, "window_hi");
    cfg.floor = to_double(kv, "floor");
    if (cfg.window_hi < cfg.window_lo || cfg.window_hi >= cfg.params.truncation()) {
        throw ConfigError("maxima window must satisfy window_lo <= window_hi < M");
    }

    cfg.n_traj = to_unsigned(kv, "n_traj");
    cfg.checkpoints = to_unsigned(kv, "checkpoints");
    if (cfg.n_traj < 100) {
        throw ConfigError("n_traj must be at least 100");
    }
    if (cfg.checkpoints < 1) {
        throw ConfigError("checkpoints must be at least 1");
    }
    if (kv.at("sampler") == "waiting-time") {
        cfg.sampler = Sampler::WaitingTime;
    } else if (kv.at("sampler") == "per-step") {
        cfg.sampler = Sampler::PerStep;
    } else {
        throw ConfigError("sampler must be 'waiting-time' or 'per-step'");
    }
    cfg.threads = static_cast<unsigned>(to_unsigned(kv, "threads"));
    cfg.seed = to_unsigned(kv, "seed");

    cfg.verify = to_bool(kv, "verify");
    cfg.oracle_dt = to_double(kv, "oracle_dt");
    if (!(cfg.oracle_dt > 0.0) || cfg.oracle_dt > 0.01) {
        throw ConfigError("oracle_dt must lie in (0, 0.01]");
    }

    cfg.output = kv.at("output");
    if (cfg.output.empty()) {
        cfg.output = command_name(cfg.command) + ".csv";
        kv["output"] = cfg.output;
    }
    cfg.amplitudes_json = kv.at("amplitudes_json");
    cfg.jsonl = kv.at("jsonl");

    cfg.effective = std::move(kv);
    return cfg;
}

void write_effective_config(std::ostream& out, const RunConfig& config) {
    for (const auto& [key, value] : config.effective) {
        out << key << '=' << value << '\n';
    }
}

}  // namespace catqed::cli
