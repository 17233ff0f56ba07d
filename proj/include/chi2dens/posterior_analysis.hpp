#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "chi2dens/kl_basis.hpp"
#include "chi2dens/random.hpp"
#include "chi2dens/spherical_hmc.hpp"

namespace chi2dens {

inline constexpr int kDefaultGridResolution1d = 512;
inline constexpr int kDefaultGridResolution2d = 128;

/// Equispaced nodes including the endpoints: `resolution` points in 1D,
/// resolution x resolution in 2D (first coordinate varies slowest).
[[nodiscard]] Eigen::MatrixXd uniform_grid(int dim, int resolution);

/// Density values of each stored draw at each node.
struct DensityGrid {
    Eigen::MatrixXd nodes;   ///< M x dim
    Eigen::MatrixXd values;  ///< draws x M
};

/// Throws ConfigError for an empty chain.
[[nodiscard]] DensityGrid evaluate_draws(const Chain& chain, const BasisSpec& basis, const Eigen::MatrixXd& nodes);

/// Per-node mean and quantiles.
struct SummaryTable {
    std::vector<double> probabilities;
    Eigen::VectorXd mean;       ///< M
    Eigen::MatrixXd quantiles;  ///< probabilities.size() x M
};

/// Linear interpolation between order statistics: h = (n - 1) p.
[[nodiscard]] double interpolated_quantile(std::vector<double>& values, double p);

/// Summaries of a draws x M value matrix. Throws ConfigError for an empty
/// quantile list, probabilities outside [0,1] or zero draws.
[[nodiscard]] SummaryTable pointwise_summary(const Eigen::MatrixXd& values, const std::vector<double>& probabilities);

/// Same summaries computed directly from the chain in blocks of nodes, so only
/// draws x block values are held at once.
[[nodiscard]] SummaryTable summarize_chain(const Chain& chain, const BasisSpec& basis, const Eigen::MatrixXd& nodes,
                                           const std::vector<double>& probabilities, std::size_t block = 256);

/// (sum_b |c_b| sup|phi_b|)^2, an upper bound on q^2 over the domain.
[[nodiscard]] double rejection_envelope(const Eigen::VectorXd& coeffs, const BasisSpec& basis);

/// Exact draws from q^2 by rejection against the uniform proposal.
[[nodiscard]] Eigen::MatrixXd sample_from_draw(const Eigen::VectorXd& coeffs, const BasisSpec& basis,
                                               std::size_t count, Rng& rng);

/// Posterior predictive draws (count x dim, unit coordinates): each picks a
/// stored draw uniformly at random and samples from its density.
[[nodiscard]] Eigen::MatrixXd predictive_sample(const Chain& chain, const BasisSpec& basis, std::size_t count,
                                                Rng& rng);

}  // namespace chi2dens
