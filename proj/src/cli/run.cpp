#include "catqed/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "catqed/carrier.hpp"
#include "catqed/conditional.hpp"
#include "catqed/csv.hpp"
#include "catqed/lamb_dicke.hpp"
#include "catqed/oracle.hpp"
#include "catqed/stats.hpp"
#include "catqed/trajectories.hpp"

namespace catqed::cli {

namespace {

class IoError : public Error {
public:
    using Error::Error;
};

struct Artifacts {
    std::ostringstream data;
    std::map<std::string, std::string> extra_files;
    std::optional<double> deviation;
};

void write_header(std::ostream& out, const RunConfig& cfg) {
    csv::comment(out, std::string("catqed ") + CATQED_VERSION);
    for (const auto& [key, value] : cfg.effective) {
        if (!is_path_key(key)) {
            csv::comment(out, key + "=" + value);
        }
    }
    for (const auto& w : cfg.params.warnings()) {
        csv::comment(out, "warning: " + w);
    }
}

IntegratorConfig oracle_config(const RunConfig& cfg) {
    return IntegratorConfig::for_params(cfg.params, cfg.oracle_dt);
}

// Exact coupling by the explicit alternating series sum_k C(m,k) (-x)^k / k!, independent of the
// recurrence used by the library.
double laguerre_series(int m, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < m; ++k) {
        term *= -x * static_cast<double>(m - k) / ((k + 1.0) * (k + 1.0));
        sum += term;
    }
    return sum;
}

void run_ld_grid(const RunConfig& cfg, Artifacts& art) {
    const auto cells = validity_grid(cfg.ld_grid);
    std::size_t valid = 0;
    for (const auto& c : cells) {
        valid += c.valid() ? 1 : 0;
    }
    csv::comment(art.data, "valid cells (R in [0.99, 1.01]): " + std::to_string(valid) + " of " +
                               std::to_string(cells.size()));
    write_validity_csv(art.data, cells);
    if (cfg.verify) {
        double worst = 0.0;
        for (const auto& c : cells) {
            if (c.flagged) {
                continue;
            }
            const double x = c.eta * c.eta;
            const double ref = std::exp(-0.5 * x) * laguerre_series(c.m, x) / coupling_ld(c.eta, c.m);
            worst = std::max(worst, std::abs(c.ratio - ref));
        }
        art.deviation = worst;
    }
}

void run_carrier(const RunConfig& cfg, Artifacts& art) {
    const auto grid = cfg.tau_grid();
    std::vector<CarrierRow> rows;
    rows.reserve(grid.size());
    for (const double t : grid) {
        rows.push_back(carrier_row(cfg.params, t));
    }
    write_carrier_csv(art.data, rows);
    if (cfg.verify) {
        const auto lossless = IntegratorConfig::for_params(cfg.params.with_gamma(0.0), cfg.oracle_dt);
        const auto states = integrate_grid(cfg.params, lossless, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            worst = std::max(worst, max_abs_diff(evolve_ideal(cfg.params, grid[i]), states[i]));
        }
        art.deviation = worst;
    }
}

void run_jump_prob(const RunConfig& cfg, Artifacts& art) {
    const auto grid = cfg.tau_grid();
    const auto rows = jump_probability_series(cfg.params, grid);
    write_jump_csv(art.data, rows);
    if (cfg.verify) {
        const auto states = integrate_grid(cfg.params, oracle_config(cfg), grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            worst = std::max(worst, std::abs(rows[i].survival - norm_sq(states[i])));
        }
        art.deviation = worst;
    }
}

void run_fano_scan(const RunConfig& cfg, Artifacts& art) {
    const auto grid = cfg.tau_grid();
    const FanoScan scan = fano_timeseries(cfg.params, grid);
    for (const double tau : scan.skipped) {
        csv::comment(art.data, "skipped tau=" + csv::number(tau) + " (no photon to detect)");
    }
    write_fano_csv(art.data, scan.rows);
    if (cfg.verify) {
        std::vector<double> taus;
        for (const auto& r : scan.rows) {
            taus.push_back(r.tau);
        }
        const auto states = integrate_grid(cfg.params, oracle_config(cfg), taus);
        double worst = 0.0;
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const double f = phonon_distribution(normalize(states[i].sector(1, Level::g))).fano();
            worst = std::max(worst, std::abs(f - scan.rows[i].fano));
        }
        art.deviation = worst;
    }
}

void run_phonon_dist(const RunConfig& cfg, Artifacts& art) {
    const auto amps = amplitudes(cfg.params, cfg.tau);
    const PhononDistribution dist = phonon_distribution(post_jump_state(amps).motion);
    const int maxima = count_interior_maxima(dist, cfg.window_lo, cfg.window_hi, cfg.floor);
    csv::comment(art.data, "fano=" + csv::number(dist.fano()) + " mean=" + csv::number(dist.mean()) +
                               " interior_maxima=" + std::to_string(maxima));
    write_distribution_csv(art.data, dist);
    if (!cfg.amplitudes_json.empty()) {
        std::ostringstream json;
        write_amplitudes_json(json, amps);
        art.extra_files[cfg.amplitudes_json] = json.str();
    }
    if (cfg.verify) {
        const auto state = integrate_from_coherent(cfg.params, oracle_config(cfg), cfg.tau);
        const auto ref = phonon_distribution(normalize(state.sector(1, Level::g)));
        double worst = 0.0;
        for (std::size_t m = 0; m < dist.size(); ++m) {
            worst = std::max(worst, std::abs(dist[m] - ref[m]));
        }
        art.deviation = worst;
    }
}

void run_trajectories(const RunConfig& cfg, Artifacts& art) {
    TrajectoryOptions options;
    options.sampler = cfg.sampler;
    const auto checkpoints = cfg.checkpoint_grid();
    const EnsembleResult result = ensemble_cdf(cfg.params, checkpoints, cfg.n_traj, cfg.seed, options, cfg.threads);
    int multi = 0;
    for (const auto& rec : result.records) {
        multi += rec.jump_count > 1 ? 1 : 0;
    }
    csv::comment(art.data, "trajectories with more than one jump: " + std::to_string(multi));
    write_ensemble_csv(art.data, result.rows);
    if (!cfg.jsonl.empty()) {
        std::ostringstream lines;
        write_trajectories_jsonl(lines, result.records);
        art.extra_files[cfg.jsonl] = lines.str();
    }
    if (cfg.verify) {
        const auto states = integrate_grid(cfg.params, oracle_config(cfg), checkpoints);
        double worst = 0.0;
        for (std::size_t i = 0; i < checkpoints.size(); ++i) {
            const double oracle_p = checkpoints[i] == 0.0 ? 0.0 : 1.0 - norm_sq(states[i]);
            worst = std::max(worst, std::abs(result.rows[i].analytic_p - oracle_p));
        }
        art.deviation = worst;
    }
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::string flag_name(const std::string& key) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    return "--" + name;
}

}  // namespace

RunResult run(const RunConfig& config, std::ostream& log) {
    Artifacts art;
    write_header(art.data, config);
    switch (config.command) {
        case Command::LdGrid: run_ld_grid(config, art); break;
        case Command::CarrierCat: run_carrier(config, art); break;
        case Command::JumpProb: run_jump_prob(config, art); break;
        case Command::FanoScan: run_fano_scan(config, art); break;
        case Command::PhononDist: run_phonon_dist(config, art); break;
        case Command::Trajectories: run_trajectories(config, art); break;
    }

    RunResult result;
    result.data = art.data.str();
    result.max_deviation = art.deviation;

    std::ostringstream sidecar;
    write_effective_config(sidecar, config);
    try {
        write_file(config.output, result.data);
        write_file(config.output + ".config", sidecar.str());
        for (const auto& [path, contents] : art.extra_files) {
            write_file(path, contents);
        }
    } catch (const IoError& e) {
        log << "error: " << e.what() << '\n';
        result.exit_code = kIoFailure;
        return result;
    }
    log << "wrote " << config.output << '\n';

    if (art.deviation) {
        log << "oracle max deviation: " << csv::number(*art.deviation) << " (tolerance "
            << csv::number(config.verify_tol) << ")\n";
        if (!(*art.deviation <= config.verify_tol)) {
            log << "error: verification failed\n";
            result.exit_code = kVerificationFailed;
        }
    }
    return result;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trapped-ion cavity QED: cat states, conditional evolution and quantum jumps"};
    app.set_version_flag("--version", std::string(CATQED_VERSION));

    std::string command_text;
    std::string config_path;
    bool verify = false;
    app.add_option("command", command_text,
                   "ld-grid | carrier-cat | jump-prob | fano-scan | phonon-dist | trajectories")
        ->required();
    app.add_option("--config", config_path, "flat key = value configuration file");
    app.add_flag("--verify", verify, "diff every closed-form result against the RK4 oracle");

    std::map<std::string, std::string> flag_values;
    std::map<std::string, CLI::Option*> flag_options;
    for (const auto& [key, value] : default_values()) {
        if (key == "command" || key == "verify") {
            continue;
        }
        const std::string names = key == "output" ? "-o," + flag_name(key) : flag_name(key);
        flag_options[key] = app.add_option(names, flag_values[key], "default: " + (value.empty() ? "-" : value));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const auto command = parse_command(command_text);
    if (!command) {
        err << "error: unknown command '" << command_text << "'\n" << app.help();
        return kUsage;
    }

    try {
        KeyValues file_values;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                err << "error: cannot read config file '" << config_path << "'\n";
                return kIoFailure;
            }
            file_values = parse_key_values(in, config_path);
        }
        KeyValues overrides;
        for (const auto& [key, opt] : flag_options) {
            if (opt->count() > 0) {
                overrides[key] = flag_values[key];
            }
        }
        if (verify) {
            overrides["verify"] = "true";
        }
        const RunConfig cfg = parse_config(file_values, overrides, command);
        return run(cfg, out).exit_code;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace catqed::cli
