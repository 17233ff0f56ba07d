#pragma once

// Spherical Hamiltonian Monte Carlo on S^{B-1}.
//
// The Hamiltonian H(q, v) = -log pi(q) + |v|^2 / 2 is split into a potential
// part, simulated by a tangent-projected velocity kick, and a kinetic part,
// simulated exactly by great-circle flow. The target density is taken with
// respect to the surface measure of the embedded sphere, so no chart-volume
// correction term enters H.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chi2dens/chi2_model.hpp"
#include "chi2dens/dataset.hpp"
#include "chi2dens/kl_basis.hpp"
#include "chi2dens/random.hpp"
#include "chi2dens/sphere_geometry.hpp"

namespace chi2dens {

struct ChainConfig {
    double step_size = 0.01;
    int leapfrog_steps = 20;
    int iterations = 2000;
    int burn_in = 1000;
    int thin = 1;
    std::uint64_t seed = 20171114;
    double newton_tolerance = 1e-8;
    int newton_max_iterations = 100;

    /// Throws ConfigError unless 0 <= burn_in < iterations, step_size > 0,
    /// leapfrog_steps >= 1 and thin >= 1.
    void validate() const;

    /// Number of draws run_chain() keeps.
    [[nodiscard]] std::size_t stored_draws() const;
};

/// Standard normal in R^B projected onto the tangent space at q.
[[nodiscard]] TangentVector sample_tangent_velocity(const SpherePoint& q, Rng& rng);

struct Trajectory {
    SpherePoint position;
    TangentVector velocity;
};

/// L steps of: half kick with the projected gradient, geodesic flow for time
/// eps, half kick. Returns nullopt if the gradient is singular along the way.
[[nodiscard]] std::optional<Trajectory> integrate_trajectory(const SpherePoint& q, const TangentVector& v,
                                                             double step_size, int steps,
                                                             const TargetDensity& target);

struct ChainState {
    SpherePoint position;
    double log_density;
};

struct StepResult {
    ChainState state;
    bool accepted = false;
    double delta_h = 0.0;      ///< H(proposal) - H(current); +inf for forced rejections
    double accept_prob = 0.0;
};

/// One Metropolis-corrected trajectory from `current`.
[[nodiscard]] StepResult hmc_step(const ChainState& current, const ChainConfig& config,
                                  const TargetDensity& target, Rng& rng);

struct Chain {
    std::vector<Eigen::VectorXd> draws;  ///< unit coefficient vectors
    std::vector<int> iteration;          ///< 0-based iteration index of each stored draw
    std::vector<double> log_post_trace;  ///< log posterior of each stored draw
    double accept_rate = 0.0;
    std::optional<NewtonReport> newton;  ///< present when the chain was Newton-initialized
    std::vector<std::string> warnings;

    [[nodiscard]] std::size_t size() const noexcept { return draws.size(); }
};

/// Runs a chain on an arbitrary target. When `init` is absent and `objective`
/// is given, the start is the Newton maximizer from the constant mode e_0.
[[nodiscard]] Chain run_chain(const TargetDensity& target, const ChainConfig& config,
                              const std::optional<SpherePoint>& init,
                              const SphereObjective* objective = nullptr);

/// Builds the design matrix for `data`, Newton-initializes (unless `init`) and
/// samples the chi-square process posterior.
[[nodiscard]] Chain run_chain(const Dataset& data, const BasisSpec& basis, const ChainConfig& config,
                              const std::optional<SpherePoint>& init = std::nullopt);

}  // namespace chi2dens
