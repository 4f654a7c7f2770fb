#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "mnoma/config.hpp"

namespace mnoma {

/// No unit-norm combiner can null the interference columns while keeping a
/// nonzero projection of the user's own column.
class DegenerateChannel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kNullSpaceRelTol = 1e-10;

/// Counter-based seed mixing (splitmix64 finalizer folded over the inputs).
/// The same inputs always give the same seed, independent of call order
/// elsewhere, so trials can be evaluated on any worker.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

/// One channel draw for the L users of a cluster.
///
/// All per-user vectors are stored in descending effective-gain order;
/// original_index maps each sorted slot back to the order in which the users
/// were drawn.
struct ClusterRealization {
    int cluster_index = 0;
    std::vector<Eigen::MatrixXcd> channels;           // N x M each
    Eigen::MatrixXcd precoder;                        // M x M identity
    std::vector<Eigen::VectorXcd> detection_vectors;  // unit norm, length N
    std::vector<double> effective_gains;              // |v^H H p_m|^2, non-increasing
    std::vector<std::size_t> original_index;
    std::vector<double> distances_km;
    double rho = 0.0;

    std::size_t users() const { return effective_gains.size(); }

    /// rho * effective gain for every user, i.e. the received SNR at full power.
    std::vector<double> snr_gains() const;
    std::vector<double> snr_gains(double rho_override) const;
};

/// Combiner for column `own_column` of `channel`: the unit vector in the
/// orthogonal complement of the remaining columns that maximises the
/// projection of the own column (maximum-ratio combining inside the null
/// space).
///
/// Throws DegenerateChannel when the null space is empty or the own column
/// has no component in it, and std::invalid_argument on bad shapes.
Eigen::VectorXcd compute_detection_vector(const Eigen::MatrixXcd& channel, int own_column);

/// Draws the L user channels of one cluster.
///
/// Entries are i.i.d. CN(0,1) scaled by the amplitude path loss of a distance
/// drawn uniformly in the configured annulus. Deterministic in
/// (config, cluster_index, trial_seed).
ClusterRealization draw_cluster(const SystemConfig& config, int cluster_index,
                                std::uint64_t trial_seed);

}  // namespace mnoma
