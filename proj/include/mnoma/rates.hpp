#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mnoma {

// Gains passed to the rate functions are SNR gains: rho * |v^H H p|^2,
// sorted in non-increasing order. Rates are spectral efficiencies in bps/Hz.

/// Fractions of the cluster power, aligned with the gain order.
/// Each entry lies in [0, 1] and the total is at most 1 (+1e-12).
class PowerSplit {
public:
    PowerSplit() = default;
    explicit PowerSplit(std::vector<double> coefficients);

    std::size_t size() const { return coefficients_.size(); }
    double operator[](std::size_t i) const { return coefficients_[i]; }
    std::span<const double> values() const { return coefficients_; }
    double total() const;

private:
    std::vector<double> coefficients_;
};

/// Orthogonal degree-of-freedom fractions; entries in [0, 1] summing to 1.
class DofSplit {
public:
    DofSplit() = default;
    explicit DofSplit(std::vector<double> fractions);

    std::size_t size() const { return fractions_.size(); }
    double operator[](std::size_t i) const { return fractions_[i]; }
    std::span<const double> values() const { return fractions_; }

private:
    std::vector<double> fractions_;
};

struct RateReport {
    std::vector<double> per_user_bps_hz;
    double sum_bps_hz = 0.0;
    double jain_index = 0.0;
};

/// log2(1 + x), accurate for small x.
double log2_1p(double x);

double noma_user_rate(std::span<const double> gains, const PowerSplit& split, std::size_t user);

/// lambda * log2(1 + Omega*Xi / lambda); zero when lambda is zero.
double oma_user_rate(std::span<const double> gains, const PowerSplit& split, const DofSplit& dof,
                     std::size_t user);

double noma_sum_rate(std::span<const double> gains, const PowerSplit& split);
double oma_sum_rate(std::span<const double> gains, const PowerSplit& split, const DofSplit& dof);

/// lambda_l proportional to Omega_l * Xi_l. Falls back to a uniform split
/// when every product is zero.
DofSplit oma_optimal_dof(std::span<const double> gains, const PowerSplit& split);

/// log2(1 + sum_l Omega_l Xi_l); attained by oma_optimal_dof.
double oma_sum_upper_bound(std::span<const double> gains, const PowerSplit& split);

RateReport noma_report(std::span<const double> gains, const PowerSplit& split);
/// OMA rates at the sum-rate-optimal degree-of-freedom split.
RateReport oma_report(std::span<const double> gains, const PowerSplit& split);

struct SicMargin {
    std::size_t decoder;  // user l doing the cancellation
    std::size_t target;   // weaker user k > l whose signal is cancelled
    double margin;        // rate of k's message at l minus k's own rate
};

struct SicCheck {
    bool feasible = true;
    std::vector<SicMargin> margins;
};

/// Checks that every user can decode the messages of all weaker users before
/// its own. Holds automatically when the gains are sorted.
SicCheck sic_feasibility_check(std::span<const double> gains, const PowerSplit& split);

/// Power fraction of the stronger user that maximises the NOMA-over-OMA sum
/// rate gap of a two-user cluster. Depends only on the stronger user's SNR
/// gain and lies in (0, 0.5). Throws std::invalid_argument for gain <= 0.
double two_user_gap_maximizer(double strong_snr_gain);

/// NOMA sum rate minus the OMA upper bound for two users with split
/// (omega1, 1 - omega1).
double two_user_gap(std::span<const double> gains, double omega1);

struct RateDelta {
    double direct = 0.0;    // S(l+1) - S(l) from the two sum rates
    double factored = 0.0;  // log2(lambda1 * lambda2 * lambda3)
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double lambda3 = 1.0;
};

/// Change in NOMA sum rate when an (l+1)-th, weakest user joins a cluster of
/// l users. `gains` holds the l+1 gains; `incumbent` (Omega, l entries) and
/// `joined` (Theta, l+1 entries) must each sum to 1 with Theta_k <= Omega_k.
///
/// For l = 1 the first-user and last-user factor pairs coincide; the whole
/// product is reported as lambda1 and lambda3 is 1.
RateDelta cluster_size_rate_delta(std::span<const double> gains, const PowerSplit& incumbent,
                                  const PowerSplit& joined);

/// Theta_k = Omega_k (1 - theta_last) for k <= l, Theta_{l+1} = theta_last.
PowerSplit dominated_split(const PowerSplit& incumbent, double theta_last);

/// (sum r)^2 / (n sum r^2). Throws std::invalid_argument if no rate is positive.
double jain_index(std::span<const double> rates);

}  // namespace mnoma
