#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mnoma/config.hpp"

namespace mnoma {

enum class SweepKind {
    split_sweep_2user,       // sum rate vs Omega1, 2 users and 3 users (equal remainder)
    split_sweep_3user,       // sum-rate surface over (Omega1, Omega2')
    power_sweep,             // sum rate vs transmit power on few realizations
    ergodic_power_sweep,     // same, averaged over many realizations
    fairness_2user,          // Jain index vs Omega1
    fairness_3user,          // Jain index surface over (Omega1, Omega2')
    admission_vs_sinr,       // admitted users vs target SINR, per power level
    admission_vs_requesting, // admitted users vs requesting users
    oracle_compare_equal,    // greedy vs exhaustive, equal thresholds
    oracle_compare_mixed,    // greedy vs exhaustive, thresholds drawn per user
};

std::string_view to_string(SweepKind kind);
std::optional<SweepKind> parse_sweep_kind(std::string_view name);

/// Everything needed to reproduce one sweep.
struct SweepSpec {
    SweepKind kind = SweepKind::split_sweep_2user;
    std::vector<double> grid;   // sweep points; kind-specific default when empty
    std::vector<double> grid2;  // Omega2' axis of the 3-user surfaces
    int trials = 1000;
    SystemConfig config;
    int cluster_index = 0;

    // Fixed splits of the power sweeps: (omega1, 1 - omega1) for two users;
    // the third user takes theta_last and the others are scaled by
    // (1 - theta_last).
    double omega1 = 0.3;
    double theta_last = 0.2;

    std::vector<double> power_levels_dbm{30.0, 40.0, 50.0};
    std::vector<double> sinr_levels_db{5.0};
    std::vector<double> mixed_sinr_db{5.0, 10.0, 15.0};
    int requesting_users = 8;
    std::size_t exhaustive_cap = 12;
    unsigned workers = 1;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Fills kind-dependent defaults (grids) left empty.
void resolve_defaults(SweepSpec& spec);

struct SweepRow {
    double point = 0.0;
    std::optional<double> point2;
    std::string scheme;
    std::string metric;
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t trials = 0;
};

struct SweepResult {
    SweepKind kind = SweepKind::split_sweep_2user;
    bool two_dimensional = false;
    std::vector<SweepRow> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    /// Rows matching scheme and metric, in emission order.
    std::vector<SweepRow> select(std::string_view scheme, std::string_view metric) const;
    std::optional<std::string> meta(std::string_view key) const;
};

/// Mean and standard error of a sample, accumulated in a fixed order.
class RunningStat {
public:
    void add(double x);
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double stderr_mean() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

std::uint64_t trial_seed(const SystemConfig& config, std::size_t trial);

SweepResult run_split_sweep(const SweepSpec& spec);
SweepResult run_ergodic_sweep(const SweepSpec& spec);
SweepResult run_fairness_sweep(const SweepSpec& spec);
SweepResult run_admission_sweep(const SweepSpec& spec);
SweepResult run_oracle_compare(const SweepSpec& spec);

/// Dispatches on spec.kind after filling defaults.
SweepResult run_sweep(SweepSpec spec);

std::string build_tag();

}  // namespace mnoma
