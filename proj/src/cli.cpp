#include "fdiq/cli.hpp"

#include "fdiq/allocation.hpp"
#include "fdiq/config.hpp"
#include "fdiq/estimator.hpp"
#include "fdiq/pilot.hpp"
#include "fdiq/sweep.hpp"
#include "fdiq/verify.hpp"
#include "format.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

namespace fdiq {

namespace {

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::string> seed;
    std::optional<std::string> trials;
    std::optional<std::string> rho;
    std::optional<std::string> snr_db;
    std::optional<std::string> n_pilot;
    std::optional<std::string> alloc;
    std::optional<std::string> workers;
    std::optional<std::string> iq_mode;
    std::vector<std::string> sets;
};

std::vector<ConfigOverride> overrides_from(const Flags& f)
{
    std::vector<ConfigOverride> ov;
    // --set first so that the dedicated flags win.
    for (const auto& s : f.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set", "expected key=value, got '" + s + "'");
        }
        ov.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    const auto add = [&](const char* key, const std::optional<std::string>& v, bool quote) {
        if (v) {
            ov.emplace_back(key, quote ? "\"" + *v + "\"" : *v);
        }
    };
    add("out", f.out, true);
    add("seed", f.seed, false);
    add("trials", f.trials, false);
    add("rho", f.rho, false);
    add("snr_db", f.snr_db, false);
    add("n_pilot", f.n_pilot, false);
    add("alloc", f.alloc, true);
    add("workers", f.workers, false);
    add("iq.mode", f.iq_mode, true);
    return ov;
}

// Writes through `emit` to the configured file or the given stream.
void with_output(const RunConfig& cfg, std::ostream& fallback, const std::function<void(std::ostream&)>& emit)
{
    if (cfg.out.empty()) {
        emit(fallback);
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
        throw ConfigError("out", "cannot open '" + cfg.out + "' for writing");
    }
    emit(file);
}

PilotMatrix pilot_from(const RunConfig& cfg)
{
    switch (cfg.pilot_kind) {
    case PilotKind::hadamard:
        if (cfg.n_pilot != 4) {
            throw ConfigError("pilot.kind", "the Hadamard construction needs n_pilot = 4");
        }
        return build_pilot_hadamard4(cfg.pilot_p_source, cfg.pilot_p_relay);
    case PilotKind::dft:
        return build_pilot_dft(cfg.n_pilot, cfg.pilot_p_source, cfg.pilot_p_relay, cfg.pilot_columns);
    case PilotKind::conjugate_pair:
        return build_pilot_conjugate_pair(cfg.n_pilot, cfg.pilot_p_source, cfg.pilot_p_relay);
    }
    throw std::logic_error("unhandled pilot kind");
}

void run_mse(const RunConfig& cfg, std::ostream& os)
{
    const NodeIqProfile profile = cfg.iq.coefficients();
    const SnrPoint gamma = SnrPoint::from_db(cfg.snr_db);
    const PowerSplit split = power_for_snr(gamma, cfg.rho, profile, cfg.sigma_v2, cfg.alloc);
    const double analytic = sum_mse_policy(cfg.alloc, cfg.rho, gamma, profile, cfg.n_pilot);

    os << "rho,snr_db,policy,p_source,p_relay,sum_mse_analytic,sum_mse_empirical,trials,seed\n";
    os << format_double(cfg.rho) << ',' << format_double(cfg.snr_db) << ',' << to_string(cfg.alloc) << ','
       << format_double(split.p_source) << ',' << format_double(split.p_relay) << ',' << format_double(analytic)
       << ',';
    if (cfg.trials > 0) {
        const PilotMatrix x = build_pilot_optimal(cfg.n_pilot, split.p_source, split.p_relay);
        MonteCarloOptions opts;
        opts.channel = cfg.channel;
        opts.subcarrier = cfg.subcarrier;
        opts.workers = cfg.workers;
        os << format_double(empirical_sum_mse(x, ScaleB(cfg.rho), profile, cfg.sigma_v2, cfg.trials, cfg.seed, opts));
    }
    os << ',' << cfg.trials << ',' << cfg.seed << '\n';
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Pilot design and power allocation toolkit for full-duplex OFDM relays with IQ imbalance", "fdiq"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags flags;
    app.add_option("--config", flags.config, "JSON configuration file")->type_name("PATH");
    app.add_option("--out", flags.out, "Write results to this file instead of stdout")->type_name("PATH");
    app.add_option("--seed", flags.seed, "Master seed (u64)")->type_name("U64");
    app.add_option("--trials", flags.trials, "Monte Carlo trials per point (0 = analytic only)")->type_name("N");
    app.add_option("--rho", flags.rho, "Residual self-interference ratio")->type_name("F");
    app.add_option("--snr-db", flags.snr_db, "Received SNR in dB")->type_name("F");
    app.add_option("--np", flags.n_pilot, "Number of pilot OFDM symbols")->type_name("N");
    app.add_option("--alloc", flags.alloc, "Power allocation policy (opa|epa)")->type_name("opa|epa");
    app.add_option("--workers", flags.workers, "Worker threads (0 = machine parallelism)")->type_name("N");
    app.add_option("--iq-mode", flags.iq_mode, "dB to linear amplitude mapping (deviation|ratio)")->type_name("deviation|ratio");
    app.add_option("--set", flags.sets, "Override any config leaf: dotted.key=value (repeatable)")->type_name("KEY=VALUE");

    auto* pilot_cmd = app.add_subcommand("pilot", "Emit a pilot matrix as CSV");
    auto* sweep_cmd = app.add_subcommand("sweep", "Sum-MSE sweep over rho or SNR");
    auto* figure_cmd = app.add_subcommand("figure", "Reproduce the dataset behind one figure (2..7)");
    int figure_id = 0;
    figure_cmd->add_option("--id", figure_id, "Figure number")->required()->type_name("2..7");
    auto* verify_cmd = app.add_subcommand("verify", "Check the closed forms against numerical oracles");
    std::string suite_name = "all";
    verify_cmd->add_option("--suite", suite_name, "Check group (default all)")->type_name("kkt|pilot|power|rho|lemma1|convexity|all");
    auto* mse_cmd = app.add_subcommand("mse", "Single-point analytic and empirical Sum-MSE");
    auto* config_cmd = app.add_subcommand("config", "Print the default configuration document");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        const RunConfig cfg = parse_config(flags.config, overrides_from(flags));

        if (config_cmd->parsed()) {
            out << default_config_json() << '\n';
            return kExitOk;
        }
        if (pilot_cmd->parsed()) {
            const PilotMatrix x = pilot_from(cfg);
            with_output(cfg, out, [&](std::ostream& os) { write_pilot_csv(os, x); });
            return kExitOk;
        }
        if (sweep_cmd->parsed()) {
            const SweepResult result = run_sweep(cfg.sweep_config());
            with_output(cfg, out, [&](std::ostream& os) { write_sweep_csv(os, result); });
            return kExitOk;
        }
        if (figure_cmd->parsed()) {
            if (figure_id < 2 || figure_id > 7) {
                err << "error: --id must be in 2..7\n";
                return kExitUsage;
            }
            FigureOverrides o;
            o.trials = cfg.trials;
            o.seed = cfg.seed;
            o.sigma_v2 = cfg.sigma_v2;
            o.mode = cfg.iq.tx_source.mode;
            o.workers = cfg.workers;
            o.n_pilot = cfg.n_pilot;
            if (!cfg.sweep_values.empty()) {
                o.axis_values = cfg.sweep_values;
            }
            const FigureData fig = reproduce_figure(figure_id, o);
            with_output(cfg, out, [&](std::ostream& os) { write_figure_csv(os, fig); });
            return kExitOk;
        }
        if (verify_cmd->parsed()) {
            const auto checks = run_verification(parse_suite(suite_name), cfg.seed);
            bool ok = true;
            with_output(cfg, out, [&](std::ostream& os) { print_checks(os, checks); });
            for (const auto& c : checks) {
                ok = ok && c.passed;
            }
            return ok ? kExitOk : kExitVerifyFailed;
        }
        if (mse_cmd->parsed()) {
            with_output(cfg, out, [&](std::ostream& os) { run_mse(cfg, os); });
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    err << app.help();
    return kExitUsage;
}

} // namespace fdiq
