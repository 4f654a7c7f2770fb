// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here and are not tuned to the data.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "mnoma/admission.hpp"
#include "mnoma/channel.hpp"
#include "mnoma/experiments.hpp"
#include "mnoma/rates.hpp"

#ifndef MNOMA_CLI_PATH
#error "MNOMA_CLI_PATH must point at the command-line binary"
#endif

using namespace mnoma;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double x, int precision = 4) {
    std::ostringstream s;
    s.precision(precision);
    s << x;
    return s.str();
}

std::vector<double> simplex(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(n);
    double s = 0.0;
    for (double& x : w) {
        s += (x = e(rng));
    }
    for (double& x : w) {
        x /= s;
    }
    double t = 0.0;
    for (double x : w) {
        t += x;
    }
    *std::max_element(w.begin(), w.end()) += 1.0 - t;
    return w;
}

// Sorted SNR gains of one channel draw at a random transmit power.
std::vector<double> drawn_gains(std::uint64_t seed, int users, std::mt19937_64& rng,
                                double min_dbm = 0.0, double max_dbm = 50.0) {
    SystemConfig c;
    c.users_per_cluster = users;
    const ClusterRealization cl = draw_cluster(c, static_cast<int>(seed % 3), seed);
    return cl.snr_gains(c.rho_at(std::uniform_real_distribution<double>(min_dbm, max_dbm)(rng)));
}

Outcome c1_dominance() {
    std::mt19937_64 rng(101);
    const std::size_t pairs = 100000;
    std::size_t violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < pairs; ++t) {
        const int users = 2 + static_cast<int>(t % 5);
        const auto g = drawn_gains(mix_seed({1, t}), users, rng);
        const PowerSplit w(simplex(rng, g.size()));
        const double slack = noma_sum_rate(g, w) - oma_sum_rate(g, w, oma_optimal_dof(g, w));
        worst = std::min(worst, slack);
        violations += slack < -1e-9 ? 1 : 0;
    }
    return {violations == 0, std::to_string(pairs) + " pairs, L in 2..6, violations " +
                                 std::to_string(violations) + ", min slack " + fmt(worst)};
}

Outcome c2_oma_bound() {
    std::mt19937_64 rng(202);
    const std::size_t instances = 200;
    const std::size_t samples = 10000;
    std::size_t above = 0;
    std::size_t not_attained = 0;
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_attain = 0.0;
    for (std::size_t t = 0; t < instances; ++t) {
        const auto g = drawn_gains(mix_seed({2, t}), 2 + static_cast<int>(t % 5), rng);
        const PowerSplit w(simplex(rng, g.size()));
        const double bound = oma_sum_upper_bound(g, w);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < samples; ++s) {
            best = std::max(best, oma_sum_rate(g, w, DofSplit(simplex(rng, g.size()))));
        }
        worst_excess = std::max(worst_excess, best - bound);
        above += best > bound + 1e-9 ? 1 : 0;
        const double attain = std::abs(oma_sum_rate(g, w, oma_optimal_dof(g, w)) - bound);
        worst_attain = std::max(worst_attain, attain);
        not_attained += attain > 1e-9 ? 1 : 0;
    }
    return {above == 0 && not_attained == 0,
            std::to_string(instances) + " instances x " + std::to_string(samples) +
                " splits; max(sampled - bound) " + fmt(worst_excess) + ", max |optimal - bound| " +
                fmt(worst_attain)};
}

Outcome c3_gap_maximizer() {
    std::mt19937_64 rng(303);
    const std::size_t instances = 1000;
    const std::size_t points = 10001;
    const double step = 1.0 / static_cast<double>(points - 1);
    std::size_t misses = 0;
    double worst = 0.0;
    for (std::size_t t = 0; t < instances; ++t) {
        const auto g = drawn_gains(mix_seed({3, t}), 2, rng, 20.0, 50.0);
        std::size_t best = 0;
        double best_gap = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points; ++i) {
            const double gap = two_user_gap(g, std::min(1.0, static_cast<double>(i) * step));
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        const double miss = std::abs(static_cast<double>(best) * step - two_user_gap_maximizer(g[0]));
        worst = std::max(worst, miss);
        misses += miss > step * (1.0 + 1e-9) ? 1 : 0;
    }
    const double quoted = two_user_gap_maximizer(321.0);
    const bool quoted_ok = std::abs(quoted - 0.0528) <= 1e-3 && std::abs(quoted - 0.053) <= 1e-3;
    return {misses == 0 && quoted_ok,
            std::to_string(instances) + " instances, 10^4-point grid, max |argmax - formula| " +
                fmt(worst) + " (step " + fmt(step) + "); x=321 gives " + fmt(quoted, 6)};
}

Outcome c4_monotonicity() {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t instances = 100000;
    std::size_t bad_delta = 0;
    std::size_t bad_factor = 0;
    std::size_t bad_agree = 0;
    double max_delta = -std::numeric_limits<double>::infinity();
    double max_factor = 0.0;
    double max_disagree = 0.0;
    for (std::size_t t = 0; t < instances; ++t) {
        const std::size_t l = 1 + t % 5;
        const auto g = drawn_gains(mix_seed({4, t}), static_cast<int>(l + 1), rng);
        const PowerSplit inc(simplex(rng, l));
        std::vector<double> theta(l + 1);
        double used = 0.0;
        for (std::size_t k = 0; k < l; ++k) {
            used += (theta[k] = inc[k] * u(rng));
        }
        theta[l] = std::max(0.0, 1.0 - used);
        const RateDelta d = cluster_size_rate_delta(g, inc, PowerSplit(std::move(theta)));
        max_delta = std::max(max_delta, d.direct);
        bad_delta += d.direct > 1e-12 ? 1 : 0;
        const double f = std::max({d.lambda1, d.lambda2, d.lambda3});
        max_factor = std::max(max_factor, f);
        bad_factor += f > 1.0 + 1e-12 ? 1 : 0;
        const double dis = std::abs(d.direct - d.factored);
        max_disagree = std::max(max_disagree, dis);
        bad_agree += dis > 1e-9 ? 1 : 0;
    }
    return {bad_delta == 0 && bad_factor == 0 && bad_agree == 0,
            std::to_string(instances) + " instances; max delta " + fmt(max_delta) +
                ", max factor " + fmt(max_factor, 15) + ", max |direct - factored| " +
                fmt(max_disagree)};
}

Outcome c5_sic() {
    std::mt19937_64 rng(505);
    const std::size_t instances = 100000;
    std::size_t violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < instances; ++t) {
        const auto g = drawn_gains(mix_seed({5, t}), 2 + static_cast<int>(t % 5), rng);
        const SicCheck c = sic_feasibility_check(g, PowerSplit(simplex(rng, g.size())));
        violations += c.feasible ? 0 : 1;
        for (const auto& m : c.margins) {
            worst = std::min(worst, m.margin);
        }
    }
    return {violations == 0, std::to_string(instances) + " sorted instances, violations " +
                                 std::to_string(violations) + ", min margin " + fmt(worst)};
}

Outcome c6_admission_oracle() {
    std::ostringstream detail;
    bool pass = true;

    SweepSpec eq;
    eq.kind = SweepKind::oracle_compare_equal;
    eq.trials = 1000;
    eq.grid = {30.0, 35.0, 40.0, 45.0, 50.0};
    eq.sinr_levels_db = {5.0, 10.0, 15.0};
    eq.requesting_users = 8;
    const SweepResult r_eq = run_sweep(eq);
    double worst_mismatch = 0.0;
    for (double s : eq.sinr_levels_db) {
        for (const auto& row : r_eq.select("gap_" + fmt(s) + "dB", "mismatch_fraction")) {
            worst_mismatch = std::max(worst_mismatch, row.mean);
        }
    }
    const bool equal_ok = worst_mismatch == 0.0;
    detail << "equal targets: mismatch fraction " << fmt(worst_mismatch) << (equal_ok ? " ok" : " FAIL");

    SweepSpec mx = eq;
    mx.kind = SweepKind::oracle_compare_mixed;
    mx.mixed_sinr_db = {5.0, 10.0, 15.0};
    const SweepResult r_mx = run_sweep(mx);
    const auto cond = r_mx.select("gap", "ordering_condition_fraction");
    const auto viol = r_mx.select("gap", "ordering_condition_violation_fraction");
    double cond_cases = 0.0;
    double viol_cases = 0.0;
    for (std::size_t i = 0; i < cond.size(); ++i) {
        cond_cases += cond[i].mean * static_cast<double>(cond[i].trials);
        viol_cases += viol[i].mean * static_cast<double>(viol[i].trials);
    }
    const bool cond_ok = viol_cases == 0.0;
    detail << "; ordering condition held on " << fmt(cond_cases) << " instances, count mismatches "
           << fmt(viol_cases) << (cond_ok ? " ok" : " FAIL");

    const auto count_gap = r_mx.select("gap", "count_gap");
    const auto rel_gap = r_mx.select("gap", "sum_rate_rel_gap");
    double worst_count = 0.0;
    double worst_rel = 0.0;
    double min_count = 0.0;
    for (std::size_t i = 0; i < count_gap.size(); ++i) {
        worst_count = std::max(worst_count, count_gap[i].mean);
        min_count = std::min(min_count, count_gap[i].mean);
        worst_rel = std::max(worst_rel, std::abs(rel_gap[i].mean));
    }
    const bool mixed_ok = worst_count <= 0.5 && worst_rel <= 0.05 && min_count >= 0.0;
    detail << "; mixed 5/10/15 dB over 30..50 dBm: max mean count gap " << fmt(worst_count)
           << " (<= 0.5), max relative sum-rate gap " << fmt(100.0 * worst_rel) << "% (<= 5%)"
           << (mixed_ok ? " ok" : " FAIL");
    pass = equal_ok && cond_ok && mixed_ok;
    return {pass, detail.str()};
}

Outcome c7_closed_form() {
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> db(0.0, 20.0);
    const std::size_t instances = 100000;
    std::size_t bad = 0;
    double worst = 0.0;
    for (std::size_t t = 0; t < instances; ++t) {
        const int users = 2 + static_cast<int>(t % 9);
        const auto g = drawn_gains(mix_seed({7, t}), users, rng, 20.0, 50.0);
        std::vector<double> th(g.size());
        const double common = db(rng);
        for (double& x : th) {
            x = t % 2 == 0 ? common : db(rng);
        }
        const AdmissionInstance inst = AdmissionInstance::from_db(g, th);
        const AdmissionResult r = greedy_admit(inst);
        double running = 0.0;
        for (double p : r.power_coefficients) {
            running += p;
        }
        const double diff = std::abs(cumulative_power_closed_form(inst, r.admitted_count) - running);
        worst = std::max(worst, diff);
        bad += diff > 1e-12 ? 1 : 0;
    }
    return {bad == 0, std::to_string(instances) + " instances, max |closed form - running sum| " +
                          fmt(worst)};
}

bool non_increasing(const std::vector<SweepRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].mean > rows[i - 1].mean) {
            return false;
        }
    }
    return true;
}

bool non_decreasing(const std::vector<SweepRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].mean < rows[i - 1].mean) {
            return false;
        }
    }
    return true;
}

Outcome c8_admission_levels() {
    SweepSpec s;
    s.kind = SweepKind::admission_vs_sinr;
    s.trials = 1000;
    s.requesting_users = 8;
    s.power_levels_dbm = {30.0, 40.0, 50.0};
    s.grid = {0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0};
    const SweepResult r = run_sweep(s);
    std::vector<std::vector<SweepRow>> series;
    for (double p : s.power_levels_dbm) {
        series.push_back(r.select("greedy_" + fmt(p) + "dBm", "admitted_users"));
    }
    const double at30 = series[0][2].mean;
    const double at50 = series[2][2].mean;
    const bool levels = at30 >= 3.0 && at30 <= 5.0 && at50 >= 5.5 && at50 <= 7.5;

    bool sinr_trend = true;
    for (const auto& rows : series) {
        sinr_trend = sinr_trend && non_increasing(rows);
    }
    bool power_trend = true;
    for (std::size_t p = 1; p < series.size(); ++p) {
        for (std::size_t i = 0; i < s.grid.size(); ++i) {
            power_trend = power_trend && series[p][i].mean >= series[p - 1][i].mean;
        }
    }

    SweepSpec q = s;
    q.kind = SweepKind::admission_vs_requesting;
    q.grid = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    q.sinr_levels_db = {5.0};
    const SweepResult rq = run_sweep(q);
    bool requesting_trend = true;
    for (double p : q.power_levels_dbm) {
        requesting_trend =
            requesting_trend && non_decreasing(rq.select("greedy_" + fmt(p) + "dBm_5dB", "admitted_users"));
    }
    std::ostringstream d;
    d << "5 dB target, L=8, 1000 trials: mean admitted " << fmt(at30) << " at 30 dBm (3..5), "
      << fmt(series[1][2].mean) << " at 40 dBm, " << fmt(at50) << " at 50 dBm (5.5..7.5); trends: sinr "
      << (sinr_trend ? "ok" : "FAIL") << ", power " << (power_trend ? "ok" : "FAIL")
      << ", requesting " << (requesting_trend ? "ok" : "FAIL");
    return {levels && sinr_trend && power_trend && requesting_trend, d.str()};
}

Outcome c9_zero_forcing() {
    SystemConfig c;
    c.users_per_cluster = 2;
    std::size_t bad = 0;
    std::size_t vectors = 0;
    double worst_norm = 0.0;
    double worst_leak = 0.0;
    double worst_rel = 0.0;
    for (std::uint64_t t = 0; t < 10000; ++t) {
        const ClusterRealization cl = draw_cluster(c, static_cast<int>(t % 3), mix_seed({9, t}));
        for (std::size_t u = 0; u < cl.users(); ++u) {
            ++vectors;
            const auto& v = cl.detection_vectors[u];
            const Eigen::MatrixXcd hp = cl.channels[u] * cl.precoder;
            const double norm_err = std::abs(v.norm() - 1.0);
            double leak = 0.0;
            for (int k = 0; k < hp.cols(); ++k) {
                if (k != cl.cluster_index) {
                    leak = std::max(leak, std::abs(v.dot(hp.col(k))));
                }
            }
            worst_norm = std::max(worst_norm, norm_err);
            // Path loss makes absolute leakage tiny; relative leakage is the
            // meaningful numerical check.
            const double rel = leak / hp.norm();
            worst_leak = std::max(worst_leak, leak);
            worst_rel = std::max(worst_rel, rel);
            bad += norm_err > 1e-12 || leak >= 1e-10 || rel >= 1e-10 ? 1 : 0;
        }
    }
    return {bad == 0, std::to_string(vectors) + " detection vectors (M=N=3), max | |v| - 1 | " +
                          fmt(worst_norm) + ", max leakage " + fmt(worst_leak) +
                          " (relative to |HP| " + fmt(worst_rel) + ")"};
}

Outcome c10_fairness() {
    std::ostringstream d;
    bool pass = true;
    for (SweepKind kind : {SweepKind::fairness_2user, SweepKind::fairness_3user}) {
        SweepSpec s;
        s.kind = kind;
        s.trials = kind == SweepKind::fairness_2user ? 1000 : 200;
        resolve_defaults(s);
        const SweepResult r = run_sweep(s);
        const std::string users = kind == SweepKind::fairness_2user ? "2user" : "3user";
        const auto gap = r.select("gap_" + users, "jain_index_gap");
        const auto frac = r.select("gap_" + users, "noma_not_below_oma_fraction");
        std::size_t below = 0;
        double worst = 0.0;
        double worst_point = 0.0;
        double min_frac = 1.0;
        for (std::size_t i = 0; i < gap.size(); ++i) {
            if (gap[i].mean < 0.0) {
                ++below;
                if (gap[i].mean < worst) {
                    worst = gap[i].mean;
                    worst_point = gap[i].point;
                }
            }
            min_frac = std::min(min_frac, frac[i].mean);
        }
        pass = pass && below == 0;
        d << (users == "2user" ? "" : "; ") << users << ": mean NOMA JFI below OMA at " << below << " of "
          << gap.size() << " points (worst " << fmt(worst) << " at Omega1=" << fmt(worst_point)
          << "), lowest per-draw dominance rate " << fmt(min_frac);
    }
    return {pass, d.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome c11_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("mnoma_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::vector<std::string> commands{
        "sweep-split -n 60",
        "sweep-split --users 3 -n 5 --set grid=0:0.1:0.9 --set grid2=0:0.1:1",
        "sweep-power",
        "ergodic -n 200",
        "fairness -n 40",
        "fairness --users 3 -n 5 --set grid=0:0.1:0.9 --set grid2=0:0.1:1",
        "admission --vs sinr -n 200",
        "admission --vs requesting -n 200",
        "oracle-compare --thresholds equal -n 100",
        "oracle-compare --thresholds mixed -n 100",
        "gap --points 2001",
    };
    std::size_t identical = 0;
    std::string failures;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::vector<std::string> outputs;
        for (const char* workers : {"1", "4", "1", "3"}) {
            const fs::path out = dir / ("run" + std::to_string(i) + "_" + std::to_string(outputs.size()) + ".csv");
            const std::string cmd = std::string(MNOMA_CLI_PATH) + " " + commands[i] + " --seed 11 -j " +
                                    workers + " -o " + out.string() + " > /dev/null 2>&1";
            const int status = std::system(cmd.c_str());
            outputs.push_back(status == 0 ? slurp(out) : std::string());
        }
        const bool same = !outputs[0].empty() &&
                          std::all_of(outputs.begin(), outputs.end(),
                                      [&](const std::string& o) { return o == outputs[0]; });
        identical += same ? 1 : 0;
        if (!same) {
            failures += " [" + commands[i] + "]";
        }
    }
    fs::remove_all(dir);
    return {identical == commands.size(),
            std::to_string(identical) + "/" + std::to_string(commands.size()) +
                " CLI invocations byte-identical across 4 runs (workers 1,4,1,3)" + failures};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"C1  NOMA >= OMA at the optimal split", c1_dominance},
        {"C2  OMA closed-form bound is tight", c2_oma_bound},
        {"C3  two-user gap maximizer", c3_gap_maximizer},
        {"C4  adding a user lowers the sum rate", c4_monotonicity},
        {"C5  SIC feasibility under the gain order", c5_sic},
        {"C6  greedy vs exhaustive admission", c6_admission_oracle},
        {"C7  closed-form cumulative power", c7_closed_form},
        {"C8  admitted-user levels and trends", c8_admission_levels},
        {"C9  zero-forcing detection vectors", c9_zero_forcing},
        {"C10 NOMA fairness dominates OMA", c10_fairness},
        {"C11 CLI output is deterministic", c11_determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << " | " << o.detail << " | " << fmt(secs, 3)
                  << " s" << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
