#pragma once

// Synthetic point patterns on the unit interval and square.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "chi2dens/random.hpp"

namespace chi2dens {

struct GaussianComponent {
    double weight = 1.0;
    double mean[2] = {0.5, 0.5};
    double sd[2] = {0.1, 0.1};
};

/// n x 1 draws from beta(a, b).
[[nodiscard]] Eigen::MatrixXd sample_beta(double a, double b, std::size_t n, Rng& rng);

/// n x 2 draws from a mixture of axis-aligned Gaussians restricted to the unit
/// square (rejection).
[[nodiscard]] Eigen::MatrixXd sample_trunc_gauss_mixture_2d(const std::vector<GaussianComponent>& components,
                                                            std::size_t n, Rng& rng);

/// Uniform angle, radius r0 plus Gaussian noise; draws outside the square are
/// rejected and redrawn.
[[nodiscard]] Eigen::MatrixXd sample_noisy_circle_2d(double cx, double cy, double r0, double noise,
                                                     std::size_t n, Rng& rng);

/// Clustered pattern: `parents` uniform centres, each point a Gaussian
/// displacement of a uniformly chosen centre, kept inside the square.
[[nodiscard]] Eigen::MatrixXd sample_bramble_like_2d(int parents, double spread, std::size_t n, Rng& rng);

/// Dispatch by name (beta, trunc_gauss_mixture_2d, noisy_circle_2d,
/// bramble_like_2d). Missing parameters take the defaults listed in the README.
/// Throws ConfigError for unknown names or invalid parameters.
[[nodiscard]] Eigen::MatrixXd generate_synthetic(const std::string& name, const nlohmann::json& params,
                                                 std::size_t n, std::uint64_t seed);

/// True density of a named generator at a unit-domain point, where it has a
/// closed form (beta only); otherwise throws ConfigError.
[[nodiscard]] double synthetic_density(const std::string& name, const nlohmann::json& params, double x);

}  // namespace chi2dens
