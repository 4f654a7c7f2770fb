#include "mnoma/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "mnoma/admission.hpp"
#include "mnoma/channel.hpp"
#include "mnoma/rates.hpp"

namespace mnoma {

namespace {

enum Property : std::size_t {
    kZeroForcing,
    kSicOrder,
    kOmaBound,
    kOmaOptimalAttains,
    kNomaDominates,
    kNomaLowerBound,
    kGapMaximizer,
    kClusterGrowth,
    kClosedFormPower,
    kThresholdTight,
    kEqualThresholdOracle,
    kOrderingConditionOracle,
    kMonotoneInPower,
    kPropertyCount
};

const char* const kNames[kPropertyCount][2] = {
    {"zero_forcing", "detection vectors are unit norm and null the other cluster columns"},
    {"sic_order", "stronger users can decode every weaker user's message"},
    {"oma_upper_bound", "random OMA splits never beat the closed-form bound"},
    {"oma_optimal_split", "proportional split attains the closed-form bound"},
    {"noma_dominates_oma", "NOMA sum rate >= best OMA sum rate"},
    {"noma_lower_bound", "NOMA sum rate >= log2(1 + sum of Omega*Xi)"},
    {"gap_maximizer", "grid argmax of the two-user gap matches the closed form"},
    {"cluster_growth", "adding a user under dominated splits never raises the sum rate"},
    {"closed_form_power", "product form equals the greedy running power sum"},
    {"threshold_tight", "admitted users sit exactly on their target within the budget"},
    {"equal_threshold_oracle", "equal targets: greedy matches exhaustive search"},
    {"ordering_condition_oracle", "ordering condition holds: greedy count matches exhaustive"},
    {"monotone_in_power", "more transmit power never admits fewer users"},
};

class Tally {
public:
    Tally() : outcomes_(kPropertyCount) {
        for (std::size_t p = 0; p < kPropertyCount; ++p) {
            outcomes_[p].name = kNames[p][0];
            outcomes_[p].description = kNames[p][1];
            outcomes_[p].worst = -std::numeric_limits<double>::infinity();
        }
    }

    // `violation` > 0 means the property failed on this instance.
    void record(Property p, double violation, std::size_t trial) {
        auto& o = outcomes_[p];
        ++o.checked;
        o.worst = std::max(o.worst, violation);
        if (violation > 0.0 || std::isnan(violation)) {
            if (o.failed++ == 0) {
                std::ostringstream msg;
                msg << "trial " << trial << ", excess " << violation;
                o.first_failure = msg.str();
            }
        }
    }

    std::vector<PropertyOutcome> take() && { return std::move(outcomes_); }

private:
    std::vector<PropertyOutcome> outcomes_;
};

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& x : w) {
        x = e(rng);
        sum += x;
    }
    for (double& x : w) {
        x /= sum;
    }
    // Push any rounding residue onto the largest entry so the sum is 1.
    double total = 0.0;
    for (double x : w) {
        total += x;
    }
    *std::max_element(w.begin(), w.end()) += 1.0 - total;
    return w;
}

SystemConfig with_users(SystemConfig c, int users) {
    c.tx_antennas = 3;
    c.rx_antennas = 3;
    c.users_per_cluster = users;
    return c;
}

void check_zero_forcing(const ClusterRealization& cl, Tally& t, std::size_t trial) {
    const int m = cl.cluster_index;
    for (std::size_t u = 0; u < cl.users(); ++u) {
        const auto& v = cl.detection_vectors[u];
        const Eigen::MatrixXcd hp = cl.channels[u] * cl.precoder;
        const double scale = std::max(hp.norm(), 1e-300);
        double excess = std::abs(v.norm() - 1.0) - 1e-12;
        for (int k = 0; k < hp.cols(); ++k) {
            if (k == m) {
                continue;
            }
            const double leak = std::abs(v.dot(hp.col(k)));
            excess = std::max(excess, leak - 1e-10);
            excess = std::max(excess, leak / scale - 1e-10);
        }
        t.record(kZeroForcing, excess, trial);
    }
}

void check_rates(const std::vector<double>& gains, const PowerSplit& split, std::size_t samples,
                 std::mt19937_64& rng, Tally& t, std::size_t trial) {
    t.record(kSicOrder, sic_feasibility_check(gains, split).feasible ? -1.0 : 1.0, trial);

    const double bound = oma_sum_upper_bound(gains, split);
    double best_sampled = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
        const DofSplit dof(random_simplex(rng, gains.size()));
        best_sampled = std::max(best_sampled, oma_sum_rate(gains, split, dof));
    }
    t.record(kOmaBound, best_sampled - bound - 1e-9, trial);
    const double optimal = oma_sum_rate(gains, split, oma_optimal_dof(gains, split));
    t.record(kOmaOptimalAttains, std::abs(optimal - bound) - 1e-9, trial);

    const double noma = noma_sum_rate(gains, split);
    t.record(kNomaDominates, optimal - noma - 1e-9, trial);
    t.record(kNomaLowerBound, bound - noma - 1e-9, trial);
}

void check_gap(const std::vector<double>& gains, std::size_t points, Tally& t, std::size_t trial) {
    const std::vector<double> pair{gains[0], gains[1]};
    const double step = 1.0 / static_cast<double>(points - 1);
    std::size_t best = 0;
    double best_gap = -std::numeric_limits<double>::infinity();
    double most_negative = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double g = two_user_gap(pair, std::min(1.0, static_cast<double>(i) * step));
        most_negative = std::min(most_negative, g);
        if (g > best_gap) {
            best_gap = g;
            best = i;
        }
    }
    const double formula = two_user_gap_maximizer(gains[0]);
    const double miss = std::abs(static_cast<double>(best) * step - formula) - step * (1.0 + 1e-9);
    t.record(kGapMaximizer, std::max(miss, -most_negative - 1e-12), trial);
}

void check_growth(const std::vector<double>& gains, std::mt19937_64& rng, Tally& t,
                  std::size_t trial) {
    const std::size_t l = gains.size() - 1;
    const PowerSplit incumbent(random_simplex(rng, l));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> theta(l + 1);
    double used = 0.0;
    for (std::size_t k = 0; k < l; ++k) {
        theta[k] = incumbent[k] * u(rng);
        used += theta[k];
    }
    theta[l] = std::max(0.0, 1.0 - used);
    const RateDelta d = cluster_size_rate_delta(gains, incumbent, PowerSplit(std::move(theta)));
    double excess = d.direct - 1e-12;
    for (double f : {d.lambda1, d.lambda2, d.lambda3}) {
        excess = std::max(excess, f - 1.0 - 1e-12);
    }
    excess = std::max(excess, std::abs(d.direct - d.factored) - 1e-9);
    t.record(kClusterGrowth, excess, trial);
}

void check_admission(const AdmissionInstance& inst, Tally& t, std::size_t trial) {
    const AdmissionResult g = greedy_admit(inst);
    double running = 0.0;
    for (double p : g.power_coefficients) {
        running += p;
    }
    t.record(kClosedFormPower,
             std::abs(cumulative_power_closed_form(inst, g.admitted_count) - running) - 1e-12, trial);

    double excess = running - 1.0 - 1e-12;
    for (std::size_t k = 0; k < g.admitted_count; ++k) {
        const double rel = std::abs(g.achieved_sinrs[k] - inst.thresholds[k]) / inst.thresholds[k];
        excess = std::max(excess, rel - 1e-9);
    }
    t.record(kThresholdTight, excess, trial);
}

double oracle_mismatch(const AdmissionInstance& inst, bool compare_rates) {
    const AdmissionResult g = greedy_admit(inst);
    const AdmissionResult e = exhaustive_admit(inst, inst.users());
    if (g.admitted_count != e.admitted_count) {
        return 1.0;
    }
    if (compare_rates) {
        const double diff = std::abs(g.sum_rate_bps_hz - e.sum_rate_bps_hz);
        return diff - 1e-12 * std::max(1.0, e.sum_rate_bps_hz);
    }
    return -1.0;
}

}  // namespace

bool VerifyReport::all_passed() const {
    return std::all_of(properties.begin(), properties.end(),
                       [](const PropertyOutcome& p) { return p.passed(); });
}

const PropertyOutcome* VerifyReport::find(const std::string& name) const {
    for (const auto& p : properties) {
        if (p.name == name) {
            return &p;
        }
    }
    return nullptr;
}

VerifyReport run_verify(const VerifyOptions& options) {
    options.config.validate();
    if (options.gap_grid_points < 3 || options.admission_users < 2 ||
        options.admission_users > 16) {
        throw std::invalid_argument("run_verify: bad grid or admission size");
    }
    Tally tally;
    const std::vector<double> mixed_db{5.0, 10.0, 15.0};
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        std::mt19937_64 rng(mix_seed({options.seed, trial, 0x7665'7269ULL}));
        std::uniform_int_distribution<int> users_dist(2, 6);
        std::uniform_real_distribution<double> power_dist(20.0, 50.0);
        std::uniform_int_distribution<int> cluster_dist(0, 2);

        const int users = users_dist(rng);
        const SystemConfig cfg = with_users(options.config, users);
        const std::uint64_t draw_seed = rng();
        const ClusterRealization cl = draw_cluster(cfg, cluster_dist(rng), draw_seed);
        const std::vector<double> gains = cl.snr_gains(cfg.rho_at(power_dist(rng)));

        check_zero_forcing(cl, tally, trial);
        check_rates(gains, PowerSplit(random_simplex(rng, gains.size())), options.dof_samples, rng,
                    tally, trial);
        check_gap(gains, options.gap_grid_points, tally, trial);
        check_growth(gains, rng, tally, trial);

        // Admission instances: one draw, equal and mixed targets.
        const SystemConfig acfg = with_users(options.config, options.admission_users);
        const ClusterRealization acl = draw_cluster(acfg, 0, rng());
        const double p_low = power_dist(rng);
        const double p_high = p_low + std::uniform_real_distribution<double>(0.0, 10.0)(rng);
        const std::vector<double> agains = acl.snr_gains(acfg.rho_at(p_low));
        const auto n = agains.size();

        const double equal_db = std::uniform_real_distribution<double>(0.0, 20.0)(rng);
        const AdmissionInstance equal =
            AdmissionInstance::from_db(agains, std::vector<double>(n, equal_db));
        std::vector<double> mixed(n);
        std::uniform_int_distribution<std::size_t> pick(0, mixed_db.size() - 1);
        for (double& x : mixed) {
            x = mixed_db[pick(rng)];
        }
        const AdmissionInstance varied = AdmissionInstance::from_db(agains, mixed);

        check_admission(equal, tally, trial);
        check_admission(varied, tally, trial);
        tally.record(kEqualThresholdOracle, oracle_mismatch(equal, true), trial);
        const std::size_t greedy_count = greedy_admit(varied).admitted_count;
        if (theorem3_condition_holds(varied, greedy_count)) {
            tally.record(kOrderingConditionOracle, oracle_mismatch(varied, false), trial);
        }

        const AdmissionInstance louder =
            AdmissionInstance::from_db(acl.snr_gains(acfg.rho_at(p_high)), mixed);
        const double drop = static_cast<double>(greedy_count) -
                            static_cast<double>(greedy_admit(louder).admitted_count);
        tally.record(kMonotoneInPower, drop > 0.0 ? drop : -1.0, trial);
    }
    VerifyReport report;
    report.properties = std::move(tally).take();
    return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
    std::size_t width = 0;
    for (const auto& p : report.properties) {
        width = std::max(width, p.name.size());
    }
    for (const auto& p : report.properties) {
        out << (p.passed() ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width))
            << p.name << std::right << "  " << std::setw(7) << (p.checked - p.failed) << '/'
            << std::left << std::setw(7) << p.checked << std::right << "  " << p.description;
        if (!p.passed()) {
            out << "  [first failure: " << p.first_failure << "]";
        }
        out << '\n';
    }
    std::size_t failed = 0;
    for (const auto& p : report.properties) {
        failed += p.passed() ? 0 : 1;
    }
    out << (report.properties.size() - failed) << " of " << report.properties.size()
        << " properties passed\n";
}

}  // namespace mnoma
