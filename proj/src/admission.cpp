#include "mnoma/admission.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "mnoma/config.hpp"
#include "mnoma/rates.hpp"

namespace mnoma {

namespace {

constexpr double kRateTieTol = 1e-12;

double sum_rate_of(std::span<const double> sinrs) {
    double sum = 0.0;
    for (double s : sinrs) {
        sum += log2_1p(s);
    }
    return sum;
}

// Threshold-tight allocation over `members` (indices in gain order). Returns
// false as soon as a member does not fit.
bool allocate_subset(const AdmissionInstance& inst, std::span<const std::size_t> members,
                     std::vector<double>& power) {
    std::fill(power.begin(), power.end(), 0.0);
    double used = 0.0;
    for (std::size_t k : members) {
        const double need = inst.thresholds[k] * used + inst.thresholds[k] / inst.gains[k];
        if (need > 1.0 - used) {
            return false;
        }
        power[k] = need;
        used += need;
    }
    return true;
}

AdmissionResult finish(const AdmissionInstance& inst, std::vector<double> power) {
    AdmissionResult r;
    const std::size_t n = inst.users();
    r.admitted.assign(n, false);
    double used = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (power[k] > 0.0) {
            r.admitted[k] = true;
            ++r.admitted_count;
        }
        used += power[k];
    }
    r.residual_power = std::max(0.0, 1.0 - used);
    r.achieved_sinrs = achieved_sinrs(inst.gains, power);
    r.sum_rate_bps_hz = sum_rate_of(r.achieved_sinrs);
    r.power_coefficients = std::move(power);
    return r;
}

}  // namespace

void AdmissionInstance::validate() const {
    if (gains.size() != thresholds.size()) {
        throw std::invalid_argument("admission instance: gains and thresholds differ in length");
    }
    for (std::size_t k = 0; k < gains.size(); ++k) {
        if (!(gains[k] >= 0.0) || !std::isfinite(gains[k])) {
            throw std::invalid_argument("admission instance: gain " + std::to_string(k) +
                                        " must be finite and nonnegative");
        }
        if (!(thresholds[k] > 0.0) || !std::isfinite(thresholds[k])) {
            throw std::invalid_argument("admission instance: threshold " + std::to_string(k) +
                                        " must be positive");
        }
    }
    if (!std::is_sorted(gains.begin(), gains.end(), std::greater<>())) {
        throw std::invalid_argument("admission instance: gains must be non-increasing");
    }
}

AdmissionInstance AdmissionInstance::from_db(std::vector<double> gains,
                                             std::span<const double> thresholds_db) {
    AdmissionInstance inst;
    inst.gains = std::move(gains);
    inst.thresholds.reserve(thresholds_db.size());
    for (double db : thresholds_db) {
        inst.thresholds.push_back(db_to_linear(db));
    }
    inst.validate();
    return inst;
}

std::vector<double> achieved_sinrs(std::span<const double> gains, std::span<const double> power) {
    std::vector<double> out(gains.size(), 0.0);
    double stronger = 0.0;
    for (std::size_t k = 0; k < gains.size(); ++k) {
        if (power[k] > 0.0) {
            out[k] = power[k] * gains[k] / (1.0 + gains[k] * stronger);
        }
        stronger += power[k];
    }
    return out;
}

AdmissionResult greedy_admit(const AdmissionInstance& instance, OpCounter* ops) {
    instance.validate();
    const std::size_t n = instance.users();
    std::vector<double> power(n, 0.0);
    OpCounter local;
    double used = 0.0;  // running power sum
    for (std::size_t k = 0; k < n; ++k) {
        const double gamma = instance.thresholds[k];
        const double need = gamma * used + gamma / instance.gains[k];
        local.multiplications += 1;
        local.divisions += 1;
        local.additions += 1;
        const double left = 1.0 - used;
        local.additions += 1;
        local.comparisons += 1;
        if (need > left) {
            break;
        }
        power[k] = need;
        used += need;
        local.additions += 1;
    }
    if (ops != nullptr) {
        *ops = local;
    }
    return finish(instance, std::move(power));
}

double cumulative_power_closed_form(const AdmissionInstance& instance, std::size_t count) {
    if (count > instance.users()) {
        throw std::invalid_argument("cumulative_power_closed_form: count exceeds users");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        double growth = 1.0;
        for (std::size_t i = k + 1; i < count; ++i) {
            growth *= instance.thresholds[i] + 1.0;
        }
        total += instance.thresholds[k] / instance.gains[k] * growth;
    }
    return total;
}

AdmissionResult exhaustive_admit(const AdmissionInstance& instance, std::size_t cap) {
    instance.validate();
    const std::size_t n = instance.users();
    if (n > cap) {
        throw std::invalid_argument("exhaustive_admit: " + std::to_string(n) +
                                    " users exceed the enumeration cap of " + std::to_string(cap));
    }
    if (n >= 63) {
        throw std::invalid_argument("exhaustive_admit: too many users to enumerate");
    }

    std::vector<double> power(n, 0.0);
    std::vector<double> best_power(n, 0.0);
    std::vector<std::size_t> best_members;
    double best_rate = 0.0;
    std::vector<std::size_t> members;
    members.reserve(n);

    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        members.clear();
        for (std::size_t k = 0; k < n; ++k) {
            if ((mask >> k) & 1U) {
                members.push_back(k);
            }
        }
        if (members.size() < best_members.size()) {
            continue;
        }
        if (!allocate_subset(instance, members, power)) {
            continue;
        }
        const double rate = sum_rate_of(achieved_sinrs(instance.gains, power));
        bool better = false;
        if (members.size() > best_members.size()) {
            better = true;
        } else if (rate > best_rate + kRateTieTol) {
            better = true;
        } else if (std::abs(rate - best_rate) <= kRateTieTol) {
            better = std::lexicographical_compare(members.begin(), members.end(),
                                                  best_members.begin(), best_members.end());
        }
        if (better) {
            best_members = members;
            best_rate = rate;
            best_power = power;
        }
    }
    return finish(instance, std::move(best_power));
}

bool theorem3_condition_holds(const AdmissionInstance& instance, std::size_t greedy_count) {
    instance.validate();
    const std::size_t n = instance.users();
    if (greedy_count > n) {
        throw std::invalid_argument("theorem3_condition_holds: count exceeds users");
    }
    for (std::size_t k = 1; k < greedy_count; ++k) {
        const double prev = instance.thresholds[k - 1] / instance.gains[k - 1];
        const double cur = instance.thresholds[k] / instance.gains[k];
        if (prev > cur) {
            return false;
        }
    }
    if (greedy_count == 0 || greedy_count == n) {
        return true;
    }
    const double max_admitted = *std::max_element(instance.thresholds.begin(),
                                                  instance.thresholds.begin() + greedy_count);
    const double min_rejected = *std::min_element(instance.thresholds.begin() + greedy_count,
                                                  instance.thresholds.end());
    return max_admitted <= min_rejected;
}

}  // namespace mnoma
