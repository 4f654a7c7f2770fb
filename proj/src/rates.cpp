#include "mnoma/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mnoma {

namespace {

constexpr double kSplitSumTol = 1e-12;
constexpr double kFullPowerTol = 1e-9;

void check_gains(std::span<const double> gains, const PowerSplit& split) {
    if (gains.size() != split.size()) {
        throw std::invalid_argument("gain and power split sizes differ");
    }
}

void check_user(std::span<const double> gains, std::size_t user) {
    if (user >= gains.size()) {
        throw std::out_of_range("user index " + std::to_string(user) + " out of range");
    }
}

bool is_sorted_descending(std::span<const double> gains) {
    return std::is_sorted(gains.begin(), gains.end(), std::greater<>());
}

}  // namespace

PowerSplit::PowerSplit(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
    double sum = 0.0;
    for (double c : coefficients_) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw std::invalid_argument("power coefficient outside [0, 1]");
        }
        sum += c;
    }
    if (sum > 1.0 + kSplitSumTol) {
        throw std::invalid_argument("power coefficients sum to more than 1");
    }
}

double PowerSplit::total() const {
    return std::accumulate(coefficients_.begin(), coefficients_.end(), 0.0);
}

DofSplit::DofSplit(std::vector<double> fractions) : fractions_(std::move(fractions)) {
    double sum = 0.0;
    for (double f : fractions_) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw std::invalid_argument("degree-of-freedom fraction outside [0, 1]");
        }
        sum += f;
    }
    if (std::abs(sum - 1.0) > kSplitSumTol) {
        throw std::invalid_argument("degree-of-freedom fractions must sum to 1");
    }
}

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

double noma_user_rate(std::span<const double> gains, const PowerSplit& split, std::size_t user) {
    check_gains(gains, split);
    check_user(gains, user);
    if (split[user] == 0.0) {
        return 0.0;
    }
    double stronger = 0.0;
    for (std::size_t k = 0; k < user; ++k) {
        stronger += split[k];
    }
    const double g = gains[user];
    return log2_1p(split[user] * g / (1.0 + g * stronger));
}

double oma_user_rate(std::span<const double> gains, const PowerSplit& split, const DofSplit& dof,
                     std::size_t user) {
    check_gains(gains, split);
    check_user(gains, user);
    if (dof.size() != gains.size()) {
        throw std::invalid_argument("gain and degree-of-freedom split sizes differ");
    }
    const double lambda = dof[user];
    if (lambda == 0.0) {
        return 0.0;
    }
    return lambda * log2_1p(split[user] * gains[user] / lambda);
}

double noma_sum_rate(std::span<const double> gains, const PowerSplit& split) {
    check_gains(gains, split);
    double sum = 0.0;
    double stronger = 0.0;
    for (std::size_t l = 0; l < gains.size(); ++l) {
        if (split[l] > 0.0) {
            sum += log2_1p(split[l] * gains[l] / (1.0 + gains[l] * stronger));
        }
        stronger += split[l];
    }
    return sum;
}

double oma_sum_rate(std::span<const double> gains, const PowerSplit& split, const DofSplit& dof) {
    double sum = 0.0;
    for (std::size_t l = 0; l < gains.size(); ++l) {
        sum += oma_user_rate(gains, split, dof, l);
    }
    return sum;
}

DofSplit oma_optimal_dof(std::span<const double> gains, const PowerSplit& split) {
    check_gains(gains, split);
    const std::size_t n = gains.size();
    if (n == 0) {
        throw std::invalid_argument("oma_optimal_dof: empty cluster");
    }
    std::vector<double> lambda(n);
    double total = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        lambda[l] = split[l] * gains[l];
        total += lambda[l];
    }
    if (!(total > 0.0)) {
        std::fill(lambda.begin(), lambda.end(), 1.0 / static_cast<double>(n));
    } else {
        for (double& x : lambda) {
            x /= total;
        }
    }
    return DofSplit(std::move(lambda));
}

double oma_sum_upper_bound(std::span<const double> gains, const PowerSplit& split) {
    check_gains(gains, split);
    double total = 0.0;
    for (std::size_t l = 0; l < gains.size(); ++l) {
        total += split[l] * gains[l];
    }
    return log2_1p(total);
}

namespace {

RateReport make_report(std::vector<double> rates) {
    RateReport r;
    r.sum_bps_hz = std::accumulate(rates.begin(), rates.end(), 0.0);
    r.jain_index = jain_index(rates);
    r.per_user_bps_hz = std::move(rates);
    return r;
}

}  // namespace

RateReport noma_report(std::span<const double> gains, const PowerSplit& split) {
    std::vector<double> rates(gains.size());
    for (std::size_t l = 0; l < gains.size(); ++l) {
        rates[l] = noma_user_rate(gains, split, l);
    }
    return make_report(std::move(rates));
}

RateReport oma_report(std::span<const double> gains, const PowerSplit& split) {
    const DofSplit dof = oma_optimal_dof(gains, split);
    std::vector<double> rates(gains.size());
    for (std::size_t l = 0; l < gains.size(); ++l) {
        rates[l] = oma_user_rate(gains, split, dof, l);
    }
    return make_report(std::move(rates));
}

SicCheck sic_feasibility_check(std::span<const double> gains, const PowerSplit& split) {
    check_gains(gains, split);
    SicCheck out;
    const std::size_t n = gains.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + split[i];
    }
    // Rate of user k's message when decoded with gain g, treating the
    // stronger users' signals as noise.
    auto rate_at = [&](std::size_t k, double g) {
        return log2_1p(split[k] * g / (1.0 + g * prefix[k]));
    };
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t k = l + 1; k < n; ++k) {
            const double margin = rate_at(k, gains[l]) - rate_at(k, gains[k]);
            out.margins.push_back({l, k, margin});
            if (margin < -1e-12) {
                out.feasible = false;
            }
        }
    }
    return out;
}

double two_user_gap_maximizer(double strong_snr_gain) {
    if (!(strong_snr_gain > 0.0) || !std::isfinite(strong_snr_gain)) {
        throw std::invalid_argument("two_user_gap_maximizer: SNR gain must be positive and finite");
    }
    // (sqrt(x + 1) - 1) / x rewritten without cancellation.
    return 1.0 / (1.0 + std::sqrt(1.0 + strong_snr_gain));
}

double two_user_gap(std::span<const double> gains, double omega1) {
    if (gains.size() != 2) {
        throw std::invalid_argument("two_user_gap: expects exactly two users");
    }
    if (!(omega1 >= 0.0 && omega1 <= 1.0)) {
        throw std::invalid_argument("two_user_gap: omega1 outside [0, 1]");
    }
    const PowerSplit split({omega1, 1.0 - omega1});
    return noma_sum_rate(gains, split) - oma_sum_upper_bound(gains, split);
}

RateDelta cluster_size_rate_delta(std::span<const double> gains, const PowerSplit& incumbent,
                                  const PowerSplit& joined) {
    const std::size_t l = incumbent.size();
    if (l == 0 || joined.size() != l + 1 || gains.size() != l + 1) {
        throw std::invalid_argument(
            "cluster_size_rate_delta: needs l incumbent and l+1 joined coefficients and gains");
    }
    if (!is_sorted_descending(gains)) {
        throw std::invalid_argument("cluster_size_rate_delta: gains must be non-increasing");
    }
    if (std::abs(incumbent.total() - 1.0) > kFullPowerTol ||
        std::abs(joined.total() - 1.0) > kFullPowerTol) {
        throw std::invalid_argument("cluster_size_rate_delta: both splits must use full power");
    }
    for (std::size_t k = 0; k < l; ++k) {
        if (joined[k] > incumbent[k] + kSplitSumTol) {
            throw std::invalid_argument(
                "cluster_size_rate_delta: joined coefficient exceeds incumbent coefficient for user " +
                std::to_string(k));
        }
    }

    RateDelta out;
    out.direct = noma_sum_rate(gains, joined) - noma_sum_rate(gains.first(l), incumbent);

    // Cumulative powers, 1-based: theta_cum[k] = Theta_1 + ... + Theta_k.
    std::vector<double> theta_cum(l + 2, 0.0);
    std::vector<double> omega_cum(l + 1, 0.0);
    for (std::size_t k = 1; k <= l + 1; ++k) {
        theta_cum[k] = theta_cum[k - 1] + joined[k - 1];
    }
    for (std::size_t k = 1; k <= l; ++k) {
        omega_cum[k] = omega_cum[k - 1] + incumbent[k - 1];
    }
    auto xi = [&](std::size_t k) { return gains[k - 1]; };
    // Pair of ratios for cut point k: how user k and user `next` see the
    // cumulative power of the first k users under both splits.
    auto pair = [&](std::size_t k, std::size_t next, double next_theta_cum) {
        return (1.0 + theta_cum[k] * xi(k)) / (1.0 + omega_cum[k] * xi(k)) *
               (1.0 + next_theta_cum * xi(next)) / (1.0 + theta_cum[k] * xi(next));
    };

    if (l == 1) {
        out.lambda1 = pair(1, 2, theta_cum[2]);
    } else {
        out.lambda1 = (1.0 + theta_cum[1] * xi(1)) / (1.0 + omega_cum[1] * xi(1)) *
                      (1.0 + omega_cum[1] * xi(2)) / (1.0 + theta_cum[1] * xi(2));
        for (std::size_t k = 2; k + 1 <= l; ++k) {
            out.lambda2 *= (1.0 + theta_cum[k] * xi(k)) / (1.0 + omega_cum[k] * xi(k)) *
                           (1.0 + omega_cum[k] * xi(k + 1)) / (1.0 + theta_cum[k] * xi(k + 1));
        }
        out.lambda3 = pair(l, l + 1, theta_cum[l + 1]);
    }
    out.factored = std::log2(out.lambda1 * out.lambda2 * out.lambda3);
    return out;
}

PowerSplit dominated_split(const PowerSplit& incumbent, double theta_last) {
    if (!(theta_last >= 0.0 && theta_last <= 1.0)) {
        throw std::invalid_argument("dominated_split: theta_last outside [0, 1]");
    }
    std::vector<double> theta(incumbent.size() + 1);
    for (std::size_t k = 0; k < incumbent.size(); ++k) {
        theta[k] = incumbent[k] * (1.0 - theta_last);
    }
    theta.back() = theta_last;
    return PowerSplit(std::move(theta));
}

double jain_index(std::span<const double> rates) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double r : rates) {
        sum += r;
        sum_sq += r * r;
    }
    if (rates.empty() || !(sum_sq > 0.0)) {
        throw std::invalid_argument("jain_index: needs at least one positive rate");
    }
    return sum * sum / (static_cast<double>(rates.size()) * sum_sq);
}

}  // namespace mnoma
