// Command-line front end: reads a configuration, runs one sweep and writes
// `<out>.csv` plus `<out>.csv.meta`.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mnoma/channel.hpp"
#include "mnoma/config_io.hpp"
#include "mnoma/csv.hpp"
#include "mnoma/experiments.hpp"
#include "mnoma/rates.hpp"
#include "mnoma/verify.hpp"

namespace fs = std::filesystem;
using namespace mnoma;

namespace {

struct CommonOptions {
    std::optional<std::string> config_path;
    std::vector<std::string> overrides;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<unsigned> workers;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_out = true) {
    cmd->add_option("-c,--config", o.config_path, "key = value configuration file")
        ->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", o.overrides, "override, e.g. --set tx_power_dbm=40 (repeatable)");
    if (with_out) {
        cmd->add_option("-o,--out", o.out_path,
                        "CSV output path (default: $MNOMA_OUT_DIR or ./results, named by sweep kind)");
    }
    cmd->add_option("--seed", o.seed, "RNG seed (overrides rng_seed)");
    cmd->add_option("-n,--trials", o.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("-j,--workers", o.workers, "worker threads; results do not depend on this")
        ->check(CLI::Range(1U, 1024U));
}

ParsedConfig load(const CommonOptions& o) {
    std::optional<fs::path> path;
    if (o.config_path) {
        path = fs::path(*o.config_path);
    }
    ParsedConfig parsed = parse_config_file(path, o.overrides);
    if (o.seed) {
        parsed.spec.config.rng_seed = *o.seed;
        parsed.explicit_keys.insert("rng_seed");
    }
    if (o.trials) {
        parsed.spec.trials = *o.trials;
        parsed.explicit_keys.insert("trials");
    }
    if (o.workers) {
        parsed.spec.workers = *o.workers;
    }
    return parsed;
}

// Chooses the sweep kind: an explicit selector wins, then a kind from the
// configuration if it belongs to this subcommand, then the family default.
SweepKind pick_kind(const ParsedConfig& parsed, std::optional<SweepKind> selected,
                    std::initializer_list<SweepKind> family) {
    if (selected) {
        return *selected;
    }
    if (parsed.has("kind")) {
        for (SweepKind k : family) {
            if (k == parsed.spec.kind) {
                return k;
            }
        }
    }
    return *family.begin();
}

fs::path default_out(const SweepSpec& spec) {
    fs::path dir = "results";
    if (const char* env = std::getenv("MNOMA_OUT_DIR"); env != nullptr && *env != '\0') {
        dir = env;
    }
    return dir / (std::string(to_string(spec.kind)) + ".csv");
}

void print_summary(const fs::path& out, const SweepResult& result) {
    std::cout << to_string(result.kind) << ": " << result.rows.size() << " rows -> "
              << out.string() << "\n";
    for (const auto& [k, v] : result.metadata) {
        if (k.rfind("max_gap", 0) == 0 || k.rfind("trial0", 0) == 0) {
            std::cout << "  " << k << " = " << v << "\n";
        }
    }
}

int run_sweep_command(const CommonOptions& o, const ParsedConfig& parsed, SweepKind kind,
                      const std::string& command) {
    SweepSpec spec = parsed.spec;
    spec.kind = kind;
    resolve_defaults(spec);
    const SweepResult result = run_sweep(spec);
    const fs::path out = o.out_path ? fs::path(*o.out_path) : default_out(spec);
    write_outputs(out, spec, result, command);
    print_summary(out, result);
    return 0;
}

int run_gap(const CommonOptions& o, std::size_t points, const std::string& command) {
    const ParsedConfig parsed = load(o);
    SystemConfig cfg = parsed.spec.config;
    cfg.users_per_cluster = 2;
    const ClusterRealization cl = draw_cluster(cfg, parsed.spec.cluster_index, trial_seed(cfg, 0));
    const std::vector<double> gains = cl.snr_gains();
    const double formula = two_user_gap_maximizer(gains[0]);

    SweepResult result;
    result.kind = SweepKind::split_sweep_2user;
    const double step = 1.0 / static_cast<double>(points - 1);
    std::size_t best = 0;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double w = std::min(1.0, static_cast<double>(i) * step);
        const double g = two_user_gap(gains, w);
        if (g > best_gap) {
            best_gap = g;
            best = i;
        }
        if (o.out_path) {
            result.rows.push_back({w, std::nullopt, "gap_2user", "sum_rate_gap", g, 0.0, 1});
        }
    }
    const double argmax = static_cast<double>(best) * step;
    const bool match = std::abs(argmax - formula) <= step * (1.0 + 1e-9);
    std::cout << "strong-user SNR gain     " << format_number(gains[0]) << "\n"
              << "weak-user SNR gain       " << format_number(gains[1]) << "\n"
              << "closed-form maximizer    " << format_number(formula) << "\n"
              << "grid argmax (step " << format_number(step) << ")  " << format_number(argmax)
              << "\n"
              << "gap at closed form       " << format_number(two_user_gap(gains, formula))
              << " bps/Hz\n"
              << "gap at grid argmax       " << format_number(best_gap) << " bps/Hz\n"
              << (match ? "match within one grid step\n" : "MISMATCH beyond one grid step\n");
    if (o.out_path) {
        result.metadata = {{"build", build_tag()},
                           {"closed_form_maximizer", format_number(formula)},
                           {"grid_argmax", format_number(argmax)}};
        write_outputs(*o.out_path, parsed.spec, result, command);
    }
    return match ? 0 : 1;
}

int run_verify_command(const CommonOptions& o) {
    const ParsedConfig parsed = load(o);
    VerifyOptions options;
    options.config = parsed.spec.config;
    options.seed = parsed.spec.config.rng_seed;
    options.trials = o.trials ? static_cast<std::size_t>(*o.trials) : 1000;
    const VerifyReport report = run_verify(options);
    std::cout << "verify: " << options.trials << " randomized instances, seed " << options.seed
              << "\n";
    print_report(std::cout, report);
    return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::string command;
    for (int i = 0; i < argc; ++i) {
        command += (i ? " " : "") + std::string(i == 0 ? "mnoma" : argv[i]);
    }

    CLI::App app{"MIMO-NOMA vs MIMO-OMA capacity and admission simulator"};
    app.set_version_flag("--version", build_tag());
    app.require_subcommand(1);

    CommonOptions o;
    int users = 0;
    std::string vs;
    std::string thresholds;
    std::size_t gap_points = 10001;

    auto* split = app.add_subcommand("sweep-split", "sum rate vs power split (2 or 3 users)");
    add_common(split, o);
    split->add_option("--users", users, "2: Omega1 curve, 3: (Omega1, Omega2') surface")
        ->check(CLI::IsMember({2, 3}));

    auto* power = app.add_subcommand("sweep-power", "sum rate vs transmit power, few draws");
    add_common(power, o);
    auto* ergodic = app.add_subcommand("ergodic", "ergodic sum rate vs transmit power");
    add_common(ergodic, o);

    auto* fairness = app.add_subcommand("fairness", "Jain index vs power split");
    add_common(fairness, o);
    fairness->add_option("--users", users, "2: curve, 3: surface")->check(CLI::IsMember({2, 3}));

    auto* gap = app.add_subcommand("gap", "two-user gap maximizer: closed form vs grid search");
    add_common(gap, o);
    gap->add_option("--points", gap_points, "grid points on [0, 1]")->check(CLI::Range(3, 10000001));

    auto* admission = app.add_subcommand("admission", "greedy admission statistics");
    add_common(admission, o);
    admission->add_option("--vs", vs, "x axis: target SINR or number of requesting users")
        ->check(CLI::IsMember({"sinr", "requesting"}));

    auto* oracle = app.add_subcommand("oracle-compare", "greedy vs exhaustive admission");
    add_common(oracle, o);
    oracle->add_option("--thresholds", thresholds, "equal targets or per-user mixed targets")
        ->check(CLI::IsMember({"equal", "mixed"}));

    auto* verify = app.add_subcommand("verify", "randomized invariant suite");
    add_common(verify, o, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            return run_verify_command(o);
        }
        if (gap->parsed()) {
            return run_gap(o, gap_points, command);
        }
        ParsedConfig parsed = load(o);
        std::optional<SweepKind> selected;
        SweepKind kind{};
        if (split->parsed()) {
            if (users != 0) {
                selected = users == 2 ? SweepKind::split_sweep_2user : SweepKind::split_sweep_3user;
            }
            kind = pick_kind(parsed, selected,
                             {SweepKind::split_sweep_2user, SweepKind::split_sweep_3user});
        } else if (power->parsed()) {
            kind = SweepKind::power_sweep;
            if (!parsed.has("trials")) {
                parsed.spec.trials = 1;
            }
        } else if (ergodic->parsed()) {
            kind = SweepKind::ergodic_power_sweep;
        } else if (fairness->parsed()) {
            if (users != 0) {
                selected = users == 2 ? SweepKind::fairness_2user : SweepKind::fairness_3user;
            }
            kind = pick_kind(parsed, selected, {SweepKind::fairness_2user, SweepKind::fairness_3user});
        } else if (admission->parsed()) {
            if (!vs.empty()) {
                selected = vs == "sinr" ? SweepKind::admission_vs_sinr
                                        : SweepKind::admission_vs_requesting;
            }
            kind = pick_kind(parsed, selected,
                             {SweepKind::admission_vs_sinr, SweepKind::admission_vs_requesting});
        } else {
            if (!thresholds.empty()) {
                selected = thresholds == "equal" ? SweepKind::oracle_compare_equal
                                                 : SweepKind::oracle_compare_mixed;
            }
            kind = pick_kind(parsed, selected,
                             {SweepKind::oracle_compare_equal, SweepKind::oracle_compare_mixed});
        }
        return run_sweep_command(o, parsed, kind, command);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
