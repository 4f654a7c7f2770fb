#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mnoma {

/// Users of one cluster requesting admission.
///
/// `gains` are SNR gains (rho * G_k) in non-increasing order; `thresholds`
/// are linear SINR targets aligned with the same order.
struct AdmissionInstance {
    std::vector<double> gains;
    std::vector<double> thresholds;

    /// Validates ordering and positivity. Throws std::invalid_argument.
    void validate() const;
    std::size_t users() const { return gains.size(); }

    /// Builds an instance from thresholds given in dB.
    static AdmissionInstance from_db(std::vector<double> gains,
                                     std::span<const double> thresholds_db);
};

struct AdmissionResult {
    std::size_t admitted_count = 0;
    std::vector<bool> admitted;             // per user, gain order
    std::vector<double> power_coefficients; // zero for rejected users
    double residual_power = 1.0;
    double sum_rate_bps_hz = 0.0;
    std::vector<double> achieved_sinrs;     // zero for rejected users
};

/// Arithmetic operations spent by greedy_admit; used to check that the
/// scheme does constant work per user.
struct OpCounter {
    std::size_t additions = 0;
    std::size_t multiplications = 0;
    std::size_t divisions = 0;
    std::size_t comparisons = 0;

    std::size_t arithmetic() const { return additions + multiplications + divisions; }
};

/// Sequential threshold-tight admission in gain order.
///
/// User k receives exactly the power that brings its SINR to Gamma_k given
/// the power already handed to stronger users. Admission stops at the first
/// user that does not fit in the remaining budget; that user and every
/// weaker one get zero power and the remainder stays unallocated.
AdmissionResult greedy_admit(const AdmissionInstance& instance, OpCounter* ops = nullptr);

/// Total power needed to admit the first `count` users, evaluated from the
/// non-recursive product form.
double cumulative_power_closed_form(const AdmissionInstance& instance, std::size_t count);

inline constexpr std::size_t kDefaultExhaustiveCap = 12;

/// Enumerates every subset, allocating power threshold-tight in gain order
/// inside the subset. Picks the largest feasible subset, then the highest sum
/// rate, then (rates equal within 1e-12) the lexicographically smallest
/// index set. Throws std::invalid_argument when users exceed `cap`.
AdmissionResult exhaustive_admit(const AdmissionInstance& instance,
                                 std::size_t cap = kDefaultExhaustiveCap);

/// The threshold-ordering condition under which sequential admission is
/// claimed to admit the maximum number of users: Gamma_k / G_k
/// non-decreasing over the admitted users, and no admitted threshold above
/// any rejected one.
bool theorem3_condition_holds(const AdmissionInstance& instance, std::size_t greedy_count);

/// SINR of each user under `power`, counting only stronger users' power as
/// interference.
std::vector<double> achieved_sinrs(std::span<const double> gains, std::span<const double> power);

}  // namespace mnoma
