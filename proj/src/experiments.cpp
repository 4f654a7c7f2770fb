#include "mnoma/experiments.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <span>
#include <thread>

#include "mnoma/admission.hpp"
#include "mnoma/channel.hpp"
#include "mnoma/rates.hpp"

#ifndef MNOMA_VERSION
#define MNOMA_VERSION "0.0.0"
#endif
#ifndef MNOMA_GIT_TAG
#define MNOMA_GIT_TAG "unknown"
#endif

namespace mnoma {

namespace {

constexpr std::array<std::pair<SweepKind, std::string_view>, 10> kKindNames{{
    {SweepKind::split_sweep_2user, "split_sweep_2user"},
    {SweepKind::split_sweep_3user, "split_sweep_3user"},
    {SweepKind::power_sweep, "power_sweep"},
    {SweepKind::ergodic_power_sweep, "ergodic_power_sweep"},
    {SweepKind::fairness_2user, "fairness_2user"},
    {SweepKind::fairness_3user, "fairness_3user"},
    {SweepKind::admission_vs_sinr, "admission_vs_sinr"},
    {SweepKind::admission_vs_requesting, "admission_vs_requesting"},
    {SweepKind::oracle_compare_equal, "oracle_compare_equal"},
    {SweepKind::oracle_compare_mixed, "oracle_compare_mixed"},
}};

// Trials are computed in fixed-size blocks; inside a block they run on any
// worker, and the block is then folded into the statistics in trial order.
// The block size does not depend on the worker count.
constexpr std::size_t kTrialBlock = 64;

std::string label_number(double x) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

std::vector<double> range_inclusive(double start, double step, double stop) {
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(start + static_cast<double>(i) * step);
    }
    return out;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    const unsigned width = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    if (width <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(width);
    std::vector<std::thread> pool;
    pool.reserve(width);
    for (unsigned w = 0; w < width; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += width) {
                    fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

using TrialFn = std::function<void(std::size_t trial, std::span<double> out)>;

std::vector<RunningStat> accumulate_trials(std::size_t trials, unsigned workers, std::size_t width,
                                           const TrialFn& fn) {
    std::vector<RunningStat> stats(width);
    std::vector<double> buffer;
    for (std::size_t start = 0; start < trials; start += kTrialBlock) {
        const std::size_t n = std::min(kTrialBlock, trials - start);
        buffer.assign(n * width, 0.0);
        parallel_for(n, workers, [&](std::size_t i) {
            fn(start + i, std::span<double>(buffer.data() + i * width, width));
        });
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < width; ++k) {
                stats[k].add(buffer[i * width + k]);
            }
        }
    }
    return stats;
}

SweepRow make_row(double point, std::optional<double> point2, std::string scheme,
                  std::string metric, const RunningStat& stat) {
    return SweepRow{point,       point2, std::move(scheme), std::move(metric), stat.mean(),
                    stat.stderr_mean(), stat.count()};
}

void check_unit_grid(const std::vector<double>& grid, const char* field) {
    for (double x : grid) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw ConfigError(std::string(field) + ": split grid values must lie in [0, 1]");
        }
    }
}

SystemConfig with_users(SystemConfig config, int users) {
    config.users_per_cluster = users;
    return config;
}

std::vector<std::pair<std::string, std::string>> base_metadata(const SweepSpec& spec) {
    return {
        {"kind", std::string(to_string(spec.kind))},
        {"build", build_tag()},
        {"rng_seed", std::to_string(spec.config.rng_seed)},
        {"trials", std::to_string(spec.trials)},
        {"oma_dof_split", "sum-rate optimal (lambda proportional to Omega*Xi)"},
    };
}

// Three-user split on the (Omega1, Omega2') surface: Omega2 = Omega2' (1 - Omega1),
// the third user takes the rest.
PowerSplit surface_split(double omega1, double omega2_scaled) {
    const double rest = 1.0 - omega1;
    const double second = omega2_scaled * rest;
    return PowerSplit({omega1, second, std::max(0.0, rest - second)});
}

std::vector<double> top(const std::vector<double>& gains, std::size_t n) {
    return {gains.begin(), gains.begin() + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace

std::string_view to_string(SweepKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

std::optional<SweepKind> parse_sweep_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::string build_tag() { return std::string("mnoma ") + MNOMA_VERSION + " (" + MNOMA_GIT_TAG + ")"; }

void RunningStat::add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

double RunningStat::stderr_mean() const {
    if (n_ < 2) {
        return 0.0;
    }
    const double var = std::max(0.0, m2_ / static_cast<double>(n_ - 1));
    return std::sqrt(var / static_cast<double>(n_));
}

std::vector<SweepRow> SweepResult::select(std::string_view scheme, std::string_view metric) const {
    std::vector<SweepRow> out;
    for (const auto& r : rows) {
        if (r.scheme == scheme && r.metric == metric) {
            out.push_back(r);
        }
    }
    return out;
}

std::optional<std::string> SweepResult::meta(std::string_view key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) {
            return v;
        }
    }
    return std::nullopt;
}

std::uint64_t trial_seed(const SystemConfig& config, std::size_t trial) {
    return mix_seed({config.rng_seed, static_cast<std::uint64_t>(trial)});
}

void SweepSpec::validate() const {
    config.validate();
    if (trials < 1) {
        throw ConfigError("trials: must be >= 1");
    }
    if (grid.empty()) {
        throw ConfigError("grid: must not be empty");
    }
    if (cluster_index < 0 || cluster_index >= config.tx_antennas) {
        throw ConfigError("cluster_index: must lie in [0, tx_antennas)");
    }
    if (!(omega1 >= 0.0 && omega1 <= 1.0)) {
        throw ConfigError("omega1: must lie in [0, 1]");
    }
    if (!(theta_last >= 0.0 && theta_last <= 1.0)) {
        throw ConfigError("theta_last: must lie in [0, 1]");
    }
    if (requesting_users < 1) {
        throw ConfigError("requesting_users: must be >= 1");
    }
    if (workers < 1) {
        throw ConfigError("workers: must be >= 1");
    }
    if (power_levels_dbm.empty()) {
        throw ConfigError("power_levels_dbm: must not be empty");
    }
    if (sinr_levels_db.empty()) {
        throw ConfigError("sinr_levels_db: must not be empty");
    }
    if (mixed_sinr_db.empty()) {
        throw ConfigError("mixed_sinr_db: must not be empty");
    }
    switch (kind) {
        case SweepKind::split_sweep_2user:
        case SweepKind::fairness_2user:
            check_unit_grid(grid, "grid");
            break;
        case SweepKind::split_sweep_3user:
        case SweepKind::fairness_3user:
            check_unit_grid(grid, "grid");
            if (grid2.empty()) {
                throw ConfigError("grid2: must not be empty for surface sweeps");
            }
            check_unit_grid(grid2, "grid2");
            break;
        case SweepKind::admission_vs_requesting:
            for (double x : grid) {
                if (!(x >= 1.0) || x != std::floor(x) || x > 64.0) {
                    throw ConfigError("grid: requesting-user counts must be integers in [1, 64]");
                }
            }
            break;
        case SweepKind::oracle_compare_equal:
        case SweepKind::oracle_compare_mixed:
            if (static_cast<std::size_t>(requesting_users) > exhaustive_cap) {
                throw ConfigError("requesting_users: exceeds exhaustive_cap");
            }
            break;
        default:
            break;
    }
}

void resolve_defaults(SweepSpec& spec) {
    if (spec.grid.empty()) {
        switch (spec.kind) {
            case SweepKind::split_sweep_2user:
            case SweepKind::fairness_2user:
                spec.grid = range_inclusive(0.0, 0.01, 1.0);
                break;
            case SweepKind::split_sweep_3user:
            case SweepKind::fairness_3user:
                spec.grid = range_inclusive(0.0, 0.01, 0.99);
                break;
            case SweepKind::power_sweep:
            case SweepKind::ergodic_power_sweep:
                spec.grid = range_inclusive(0.0, 5.0, 50.0);
                break;
            case SweepKind::admission_vs_sinr:
                spec.grid = range_inclusive(0.0, 2.5, 20.0);
                break;
            case SweepKind::admission_vs_requesting:
                spec.grid = range_inclusive(2.0, 1.0, 12.0);
                break;
            case SweepKind::oracle_compare_equal:
            case SweepKind::oracle_compare_mixed:
                spec.grid = range_inclusive(20.0, 5.0, 50.0);
                break;
        }
    }
    if (spec.grid2.empty() &&
        (spec.kind == SweepKind::split_sweep_3user || spec.kind == SweepKind::fairness_3user)) {
        spec.grid2 = range_inclusive(0.0, 0.01, 1.0);
    }
}

SweepResult run_split_sweep(const SweepSpec& spec) {
    if (spec.kind != SweepKind::split_sweep_2user && spec.kind != SweepKind::split_sweep_3user) {
        throw std::invalid_argument("run_split_sweep: not a split sweep");
    }
    spec.validate();
    const SystemConfig cfg = with_users(spec.config, 3);
    SweepResult result;
    result.kind = spec.kind;
    result.metadata = base_metadata(spec);
    const auto trials = static_cast<std::size_t>(spec.trials);

    auto realization = [&](std::size_t trial) {
        return draw_cluster(cfg, spec.cluster_index, trial_seed(cfg, trial)).snr_gains();
    };

    if (spec.kind == SweepKind::split_sweep_2user) {
        constexpr std::size_t kWidth = 6;
        const std::size_t points = spec.grid.size();
        auto stats = accumulate_trials(
            trials, spec.workers, points * kWidth, [&](std::size_t trial, std::span<double> out) {
                const std::vector<double> gains3 = realization(trial);
                const std::vector<double> gains2 = top(gains3, 2);
                for (std::size_t p = 0; p < points; ++p) {
                    const double w = spec.grid[p];
                    const PowerSplit two({w, 1.0 - w});
                    const PowerSplit three({w, (1.0 - w) / 2.0, (1.0 - w) / 2.0});
                    double* o = out.data() + p * kWidth;
                    o[0] = noma_sum_rate(gains2, two);
                    o[1] = oma_sum_rate(gains2, two, oma_optimal_dof(gains2, two));
                    o[2] = o[0] - o[1];
                    o[3] = noma_sum_rate(gains3, three);
                    o[4] = oma_sum_rate(gains3, three, oma_optimal_dof(gains3, three));
                    o[5] = o[3] - o[4];
                }
            });
        static const std::array<std::pair<const char*, const char*>, kWidth> kNames{{
            {"noma_2user", "sum_rate"},
            {"oma_2user", "sum_rate"},
            {"gap_2user", "sum_rate_gap"},
            {"noma_3user", "sum_rate"},
            {"oma_3user", "sum_rate"},
            {"gap_3user", "sum_rate_gap"},
        }};
        for (std::size_t k = 0; k < kWidth; ++k) {
            for (std::size_t p = 0; p < points; ++p) {
                result.rows.push_back(make_row(spec.grid[p], std::nullopt, kNames[k].first,
                                               kNames[k].second, stats[p * kWidth + k]));
            }
        }
        for (std::size_t k : {std::size_t{2}, std::size_t{5}}) {
            std::size_t best = 0;
            for (std::size_t p = 1; p < points; ++p) {
                if (stats[p * kWidth + k].mean() > stats[best * kWidth + k].mean()) {
                    best = p;
                }
            }
            const std::string tag = k == 2 ? "2user" : "3user";
            result.metadata.emplace_back("max_gap_" + tag + "_omega1", label_number(spec.grid[best]));
            result.metadata.emplace_back("max_gap_" + tag + "_bps_hz",
                                         label_number(stats[best * kWidth + k].mean()));
        }
        const std::vector<double> first = realization(0);
        result.metadata.emplace_back("trial0_strong_snr_gain", label_number(first[0]));
        result.metadata.emplace_back("trial0_gap_maximizer",
                                     label_number(two_user_gap_maximizer(first[0])));
        result.metadata.emplace_back("three_user_split", "(omega1, (1-omega1)/2, (1-omega1)/2)");
        return result;
    }

    result.two_dimensional = true;
    constexpr std::size_t kWidth = 3;
    const std::size_t n1 = spec.grid.size();
    const std::size_t n2 = spec.grid2.size();
    auto stats = accumulate_trials(
        trials, spec.workers, n1 * n2 * kWidth, [&](std::size_t trial, std::span<double> out) {
            const std::vector<double> gains = realization(trial);
            for (std::size_t i = 0; i < n1; ++i) {
                for (std::size_t j = 0; j < n2; ++j) {
                    const PowerSplit split = surface_split(spec.grid[i], spec.grid2[j]);
                    double* o = out.data() + (i * n2 + j) * kWidth;
                    o[0] = noma_sum_rate(gains, split);
                    o[1] = oma_sum_rate(gains, split, oma_optimal_dof(gains, split));
                    o[2] = o[0] - o[1];
                }
            }
        });
    static const std::array<std::pair<const char*, const char*>, kWidth> kNames{{
        {"noma_3user", "sum_rate"},
        {"oma_3user", "sum_rate"},
        {"gap_3user", "sum_rate_gap"},
    }};
    std::size_t best = 0;
    for (std::size_t k = 0; k < kWidth; ++k) {
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t j = 0; j < n2; ++j) {
                const std::size_t cell = i * n2 + j;
                result.rows.push_back(make_row(spec.grid[i], spec.grid2[j], kNames[k].first,
                                               kNames[k].second, stats[cell * kWidth + k]));
                if (k == 2 && stats[cell * kWidth + 2].mean() > stats[best * kWidth + 2].mean()) {
                    best = cell;
                }
            }
        }
    }
    result.metadata.emplace_back("max_gap_omega1", label_number(spec.grid[best / n2]));
    result.metadata.emplace_back("max_gap_omega2_scaled", label_number(spec.grid2[best % n2]));
    result.metadata.emplace_back("max_gap_bps_hz", label_number(stats[best * kWidth + 2].mean()));
    result.metadata.emplace_back("three_user_split",
                                 "(omega1, omega2' (1-omega1), (1-omega1)(1-omega2'))");
    return result;
}

SweepResult run_ergodic_sweep(const SweepSpec& spec) {
    if (spec.kind != SweepKind::power_sweep && spec.kind != SweepKind::ergodic_power_sweep) {
        throw std::invalid_argument("run_ergodic_sweep: not a power sweep");
    }
    spec.validate();
    const SystemConfig cfg = with_users(spec.config, 3);
    const PowerSplit two({spec.omega1, 1.0 - spec.omega1});
    const PowerSplit three = dominated_split(two, spec.theta_last);

    constexpr std::size_t kWidth = 7;
    const std::size_t points = spec.grid.size();
    auto stats = accumulate_trials(
        static_cast<std::size_t>(spec.trials), spec.workers, points * kWidth,
        [&](std::size_t trial, std::span<double> out) {
            const ClusterRealization cluster =
                draw_cluster(cfg, spec.cluster_index, trial_seed(cfg, trial));
            for (std::size_t p = 0; p < points; ++p) {
                const std::vector<double> gains3 = cluster.snr_gains(cfg.rho_at(spec.grid[p]));
                const std::vector<double> gains2 = top(gains3, 2);
                double* o = out.data() + p * kWidth;
                o[0] = noma_sum_rate(gains2, two);
                o[1] = oma_sum_upper_bound(gains2, two);
                o[2] = noma_sum_rate(gains3, three);
                o[3] = oma_sum_upper_bound(gains3, three);
                o[4] = o[0] - o[1];
                o[5] = o[2] - o[3];
                o[6] = o[0] - o[2];
            }
        });
    static const std::array<std::pair<const char*, const char*>, kWidth> kNames{{
        {"noma_2user", "sum_rate"},
        {"oma_2user", "sum_rate"},
        {"noma_3user", "sum_rate"},
        {"oma_3user", "sum_rate"},
        {"gap_2user", "sum_rate_gap"},
        {"gap_3user", "sum_rate_gap"},
        {"noma_2user_minus_3user", "sum_rate_gap"},
    }};
    SweepResult result;
    result.kind = spec.kind;
    result.metadata = base_metadata(spec);
    result.metadata.emplace_back("two_user_split", "(" + label_number(two[0]) + ", " +
                                                        label_number(two[1]) + ")");
    result.metadata.emplace_back("three_user_split",
                                 "(" + label_number(three[0]) + ", " + label_number(three[1]) +
                                     ", " + label_number(three[2]) + ")");
    for (std::size_t k = 0; k < kWidth; ++k) {
        for (std::size_t p = 0; p < points; ++p) {
            result.rows.push_back(make_row(spec.grid[p], std::nullopt, kNames[k].first,
                                           kNames[k].second, stats[p * kWidth + k]));
        }
    }
    return result;
}

SweepResult run_fairness_sweep(const SweepSpec& spec) {
    if (spec.kind != SweepKind::fairness_2user && spec.kind != SweepKind::fairness_3user) {
        throw std::invalid_argument("run_fairness_sweep: not a fairness sweep");
    }
    spec.validate();
    const bool surface = spec.kind == SweepKind::fairness_3user;
    const SystemConfig cfg = with_users(spec.config, surface ? 3 : 2);
    const std::vector<double> axis2 = surface ? spec.grid2 : std::vector<double>{0.0};
    const std::size_t n1 = spec.grid.size();
    const std::size_t n2 = axis2.size();

    constexpr std::size_t kWidth = 4;
    auto stats = accumulate_trials(
        static_cast<std::size_t>(spec.trials), spec.workers, n1 * n2 * kWidth,
        [&](std::size_t trial, std::span<double> out) {
            const std::vector<double> gains =
                draw_cluster(cfg, spec.cluster_index, trial_seed(cfg, trial)).snr_gains();
            for (std::size_t i = 0; i < n1; ++i) {
                for (std::size_t j = 0; j < n2; ++j) {
                    const double w = spec.grid[i];
                    const PowerSplit split =
                        surface ? surface_split(w, axis2[j]) : PowerSplit({w, 1.0 - w});
                    const double noma = noma_report(gains, split).jain_index;
                    const double oma = oma_report(gains, split).jain_index;
                    double* o = out.data() + (i * n2 + j) * kWidth;
                    o[0] = noma;
                    o[1] = oma;
                    o[2] = noma - oma;
                    o[3] = noma >= oma - 1e-12 ? 1.0 : 0.0;
                }
            }
        });
    const std::string users = surface ? "3user" : "2user";
    const std::array<std::pair<std::string, std::string>, kWidth> names{{
        {"noma_" + users, "jain_index"},
        {"oma_" + users, "jain_index"},
        {"gap_" + users, "jain_index_gap"},
        {"gap_" + users, "noma_not_below_oma_fraction"},
    }};
    SweepResult result;
    result.kind = spec.kind;
    result.two_dimensional = surface;
    result.metadata = base_metadata(spec);
    for (std::size_t k = 0; k < kWidth; ++k) {
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t j = 0; j < n2; ++j) {
                const std::size_t cell = i * n2 + j;
                result.rows.push_back(make_row(spec.grid[i],
                                               surface ? std::optional<double>(axis2[j]) : std::nullopt,
                                               names[k].first, names[k].second,
                                               stats[cell * kWidth + k]));
            }
        }
    }
    return result;
}

SweepResult run_admission_sweep(const SweepSpec& spec) {
    if (spec.kind != SweepKind::admission_vs_sinr && spec.kind != SweepKind::admission_vs_requesting) {
        throw std::invalid_argument("run_admission_sweep: not an admission sweep");
    }
    spec.validate();
    SweepResult result;
    result.kind = spec.kind;
    result.metadata = base_metadata(spec);
    const std::size_t points = spec.grid.size();
    const auto trials = static_cast<std::size_t>(spec.trials);

    if (spec.kind == SweepKind::admission_vs_sinr) {
        const SystemConfig cfg = with_users(spec.config, std::max(2, spec.requesting_users));
        const std::size_t powers = spec.power_levels_dbm.size();
        const std::size_t width = powers * points * 2;
        auto stats = accumulate_trials(trials, spec.workers, width, [&](std::size_t trial,
                                                                        std::span<double> out) {
            const ClusterRealization cluster =
                draw_cluster(cfg, spec.cluster_index, trial_seed(cfg, trial));
            for (std::size_t s = 0; s < powers; ++s) {
                std::vector<double> gains = cluster.snr_gains(cfg.rho_at(spec.power_levels_dbm[s]));
                gains.resize(static_cast<std::size_t>(spec.requesting_users));
                for (std::size_t p = 0; p < points; ++p) {
                    const std::vector<double> thresholds_db(gains.size(), spec.grid[p]);
                    const AdmissionResult r =
                        greedy_admit(AdmissionInstance::from_db(gains, thresholds_db));
                    out[(s * points + p) * 2] = static_cast<double>(r.admitted_count);
                    out[(s * points + p) * 2 + 1] = r.sum_rate_bps_hz;
                }
            }
        });
        for (std::size_t s = 0; s < powers; ++s) {
            const std::string scheme = "greedy_" + label_number(spec.power_levels_dbm[s]) + "dBm";
            for (std::size_t m = 0; m < 2; ++m) {
                for (std::size_t p = 0; p < points; ++p) {
                    result.rows.push_back(make_row(spec.grid[p], std::nullopt, scheme,
                                                   m == 0 ? "admitted_users" : "sum_rate",
                                                   stats[(s * points + p) * 2 + m]));
                }
            }
        }
        result.metadata.emplace_back("requesting_users", std::to_string(spec.requesting_users));
        return result;
    }

    // Nested populations: the first n drawn users form the n-user request,
    // so the same trial is reused across the whole grid.
    const int pool = std::max(2, static_cast<int>(*std::max_element(spec.grid.begin(), spec.grid.end())));
    const SystemConfig cfg = with_users(spec.config, pool);
    std::vector<std::pair<double, double>> series;
    for (double p : spec.power_levels_dbm) {
        for (double s : spec.sinr_levels_db) {
            series.emplace_back(p, s);
        }
    }
    const std::size_t width = series.size() * points * 2;
    auto stats = accumulate_trials(trials, spec.workers, width, [&](std::size_t trial,
                                                                    std::span<double> out) {
        const ClusterRealization cluster =
            draw_cluster(cfg, spec.cluster_index, trial_seed(cfg, trial));
        for (std::size_t s = 0; s < series.size(); ++s) {
            const std::vector<double> all = cluster.snr_gains(cfg.rho_at(series[s].first));
            for (std::size_t p = 0; p < points; ++p) {
                const auto n = static_cast<std::size_t>(spec.grid[p]);
                std::vector<double> gains;
                for (std::size_t u = 0; u < all.size(); ++u) {
                    if (cluster.original_index[u] < n) {
                        gains.push_back(all[u]);
                    }
                }
                const std::vector<double> thresholds_db(gains.size(), series[s].second);
                const AdmissionResult r = greedy_admit(AdmissionInstance::from_db(gains, thresholds_db));
                out[(s * points + p) * 2] = static_cast<double>(r.admitted_count);
                out[(s * points + p) * 2 + 1] = r.sum_rate_bps_hz;
            }
        }
    });
    for (std::size_t s = 0; s < series.size(); ++s) {
        const std::string scheme = "greedy_" + label_number(series[s].first) + "dBm_" +
                                   label_number(series[s].second) + "dB";
        for (std::size_t m = 0; m < 2; ++m) {
            for (std::size_t p = 0; p < points; ++p) {
                result.rows.push_back(make_row(spec.grid[p], std::nullopt, scheme,
                                               m == 0 ? "admitted_users" : "sum_rate",
                                               stats[(s * points + p) * 2 + m]));
            }
        }
    }
    return result;
}

SweepResult run_oracle_compare(const SweepSpec& spec) {
    if (spec.kind != SweepKind::oracle_compare_equal && spec.kind != SweepKind::oracle_compare_mixed) {
        throw std::invalid_argument("run_oracle_compare: not an oracle comparison");
    }
    spec.validate();
    const bool mixed = spec.kind == SweepKind::oracle_compare_mixed;
    const auto users = static_cast<std::size_t>(spec.requesting_users);
    const SystemConfig cfg = with_users(spec.config, std::max(2, spec.requesting_users));
    const std::vector<double> levels = mixed ? std::vector<double>{0.0} : spec.sinr_levels_db;
    const std::size_t points = spec.grid.size();
    const std::size_t series = levels.size();

    // greedy count, greedy rate, exhaustive count, exhaustive rate,
    // count gap, rate gap, mismatch / condition indicator, condition-violation indicator
    constexpr std::size_t kWidth = 8;
    auto stats = accumulate_trials(
        static_cast<std::size_t>(spec.trials), spec.workers, series * points * kWidth,
        [&](std::size_t trial, std::span<double> out) {
            const std::uint64_t seed = trial_seed(cfg, trial);
            const ClusterRealization cluster = draw_cluster(cfg, spec.cluster_index, seed);
            std::vector<double> drawn_db(cluster.users());
            if (mixed) {
                std::mt19937_64 rng(mix_seed({seed, 0x5349'4e52ULL}));
                std::uniform_int_distribution<std::size_t> pick(0, spec.mixed_sinr_db.size() - 1);
                for (double& t : drawn_db) {
                    t = spec.mixed_sinr_db[pick(rng)];
                }
            }
            for (std::size_t s = 0; s < series; ++s) {
                for (std::size_t p = 0; p < points; ++p) {
                    std::vector<double> gains = cluster.snr_gains(cfg.rho_at(spec.grid[p]));
                    gains.resize(users);
                    std::vector<double> thresholds_db(users, levels[s]);
                    if (mixed) {
                        for (std::size_t u = 0; u < users; ++u) {
                            thresholds_db[u] = drawn_db[cluster.original_index[u]];
                        }
                    }
                    const AdmissionInstance inst = AdmissionInstance::from_db(gains, thresholds_db);
                    const AdmissionResult g = greedy_admit(inst);
                    const AdmissionResult e = exhaustive_admit(inst, spec.exhaustive_cap);
                    double* o = out.data() + (s * points + p) * kWidth;
                    o[0] = static_cast<double>(g.admitted_count);
                    o[1] = g.sum_rate_bps_hz;
                    o[2] = static_cast<double>(e.admitted_count);
                    o[3] = e.sum_rate_bps_hz;
                    o[4] = o[2] - o[0];
                    o[5] = o[3] - o[1];
                    const bool same = g.admitted_count == e.admitted_count &&
                                      std::abs(o[5]) <= 1e-12 * std::max(1.0, o[3]);
                    if (mixed) {
                        const bool cond = theorem3_condition_holds(inst, g.admitted_count);
                        o[6] = cond ? 1.0 : 0.0;
                        o[7] = cond && g.admitted_count != e.admitted_count ? 1.0 : 0.0;
                    } else {
                        o[6] = same ? 0.0 : 1.0;
                        o[7] = 0.0;
                    }
                }
            }
        });

    SweepResult result;
    result.kind = spec.kind;
    result.metadata = base_metadata(spec);
    result.metadata.emplace_back("requesting_users", std::to_string(spec.requesting_users));
    if (mixed) {
        std::string choices;
        for (double t : spec.mixed_sinr_db) {
            choices += (choices.empty() ? "" : ",") + label_number(t);
        }
        result.metadata.emplace_back("mixed_sinr_db", choices);
    }
    for (std::size_t s = 0; s < series; ++s) {
        const std::string suffix = mixed ? "" : "_" + label_number(levels[s]) + "dB";
        auto at = [&](std::size_t p, std::size_t k) -> const RunningStat& {
            return stats[(s * points + p) * kWidth + k];
        };
        auto emit = [&](const std::string& scheme, const char* metric, std::size_t k) {
            for (std::size_t p = 0; p < points; ++p) {
                result.rows.push_back(make_row(spec.grid[p], std::nullopt, scheme, metric, at(p, k)));
            }
        };
        emit("greedy" + suffix, "admitted_users", 0);
        emit("greedy" + suffix, "sum_rate", 1);
        emit("exhaustive" + suffix, "admitted_users", 2);
        emit("exhaustive" + suffix, "sum_rate", 3);
        emit("gap" + suffix, "count_gap", 4);
        emit("gap" + suffix, "sum_rate_gap", 5);
        for (std::size_t p = 0; p < points; ++p) {
            const RunningStat& gap = at(p, 5);
            const double denom = at(p, 3).mean();
            SweepRow row = make_row(spec.grid[p], std::nullopt, "gap" + suffix, "sum_rate_rel_gap", gap);
            row.mean = denom > 0.0 ? gap.mean() / denom : 0.0;
            row.stderr_mean = denom > 0.0 ? gap.stderr_mean() / denom : 0.0;
            result.rows.push_back(row);
        }
        if (mixed) {
            emit("gap" + suffix, "ordering_condition_fraction", 6);
            emit("gap" + suffix, "ordering_condition_violation_fraction", 7);
        } else {
            emit("gap" + suffix, "mismatch_fraction", 6);
        }
    }
    return result;
}

SweepResult run_sweep(SweepSpec spec) {
    resolve_defaults(spec);
    switch (spec.kind) {
        case SweepKind::split_sweep_2user:
        case SweepKind::split_sweep_3user:
            return run_split_sweep(spec);
        case SweepKind::power_sweep:
        case SweepKind::ergodic_power_sweep:
            return run_ergodic_sweep(spec);
        case SweepKind::fairness_2user:
        case SweepKind::fairness_3user:
            return run_fairness_sweep(spec);
        case SweepKind::admission_vs_sinr:
        case SweepKind::admission_vs_requesting:
            return run_admission_sweep(spec);
        case SweepKind::oracle_compare_equal:
        case SweepKind::oracle_compare_mixed:
            return run_oracle_compare(spec);
    }
    throw std::invalid_argument("run_sweep: unknown kind");
}

}  // namespace mnoma
