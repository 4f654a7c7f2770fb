#include "mnoma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace mnoma {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t state = 0x6a09e667f3bcc908ULL;
    for (std::uint64_t p : parts) {
        state = splitmix64(state ^ splitmix64(p));
    }
    return state;
}

std::vector<double> ClusterRealization::snr_gains() const { return snr_gains(rho); }

std::vector<double> ClusterRealization::snr_gains(double rho_override) const {
    std::vector<double> out(effective_gains.size());
    std::transform(effective_gains.begin(), effective_gains.end(), out.begin(),
                   [rho_override](double g) { return rho_override * g; });
    return out;
}

Eigen::VectorXcd compute_detection_vector(const Eigen::MatrixXcd& channel, int own_column) {
    const Eigen::Index n = channel.rows();
    const Eigen::Index m = channel.cols();
    if (n == 0 || m == 0) {
        throw std::invalid_argument("compute_detection_vector: empty channel matrix");
    }
    if (own_column < 0 || own_column >= m) {
        throw std::invalid_argument("compute_detection_vector: column index " +
                                    std::to_string(own_column) + " out of range");
    }
    if (n < m) {
        throw std::invalid_argument("compute_detection_vector: needs rx antennas >= tx antennas");
    }

    const Eigen::VectorXcd own = channel.col(own_column);

    Eigen::MatrixXcd basis;  // orthonormal basis of the interference null space
    if (m == 1) {
        basis = Eigen::MatrixXcd::Identity(n, n);
    } else {
        Eigen::MatrixXcd interference(n, m - 1);
        for (Eigen::Index k = 0, c = 0; k < m; ++k) {
            if (k != own_column) {
                interference.col(c++) = channel.col(k);
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(interference, Eigen::ComputeFullU);
        const Eigen::VectorXd& sv = svd.singularValues();
        const double largest = sv.size() > 0 ? sv(0) : 0.0;
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            if (sv(i) > kNullSpaceRelTol * largest) {
                ++rank;
            }
        }
        if (rank >= n) {
            throw DegenerateChannel("interference columns span the receive space");
        }
        basis = svd.matrixU().rightCols(n - rank);
    }

    const Eigen::VectorXcd projected = basis.adjoint() * own;
    const double norm = projected.norm();
    if (!(norm > 0.0) || norm <= 1e-14 * own.norm()) {
        throw DegenerateChannel("own column has no component outside the interference span");
    }
    return basis * (projected / norm);
}

ClusterRealization draw_cluster(const SystemConfig& config, int cluster_index,
                                std::uint64_t trial_seed) {
    config.validate();
    const int m = config.tx_antennas;
    const int n = config.rx_antennas;
    const int users = config.users_per_cluster;
    if (cluster_index < 0 || cluster_index >= m) {
        throw std::invalid_argument("draw_cluster: cluster_index must be in [0, tx_antennas)");
    }

    std::mt19937_64 rng(mix_seed({trial_seed, static_cast<std::uint64_t>(cluster_index)}));
    std::uniform_real_distribution<double> distance(config.cell_radius_min_km,
                                                    config.cell_radius_max_km);
    // CN(0,1): real and imaginary parts each carry half the variance.
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));

    std::vector<Eigen::MatrixXcd> channels(users);
    std::vector<double> distances(users);
    for (int u = 0; u < users; ++u) {
        distances[u] = distance(rng);
        const double amplitude = std::pow(10.0, -config.pathloss_db(distances[u]) / 20.0);
        Eigen::MatrixXcd h(n, m);
        for (int c = 0; c < m; ++c) {
            for (int r = 0; r < n; ++r) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                h(r, c) = amplitude * std::complex<double>(re, im);
            }
        }
        channels[u] = std::move(h);
    }

    const Eigen::MatrixXcd precoder = Eigen::MatrixXcd::Identity(m, m);
    std::vector<Eigen::VectorXcd> detection(users);
    std::vector<double> gains(users);
    for (int u = 0; u < users; ++u) {
        detection[u] = compute_detection_vector(channels[u] * precoder, cluster_index);
        const std::complex<double> amp =
            detection[u].dot(channels[u] * precoder.col(cluster_index));  // v^H H p_m
        gains[u] = std::norm(amp);
    }

    std::vector<std::size_t> order(users);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });

    ClusterRealization out;
    out.cluster_index = cluster_index;
    out.precoder = precoder;
    out.rho = config.rho();
    for (std::size_t idx : order) {
        out.channels.push_back(std::move(channels[idx]));
        out.detection_vectors.push_back(std::move(detection[idx]));
        out.effective_gains.push_back(gains[idx]);
        out.distances_km.push_back(distances[idx]);
        out.original_index.push_back(idx);
    }
    return out;
}

}  // namespace mnoma
