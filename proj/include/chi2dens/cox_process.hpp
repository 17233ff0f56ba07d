#pragma once

// Cox process with intensity mu(s) = M p(s). Because the likelihood factors
// into a Poisson term in M and the density likelihood in q, the total mass M
// has an exact Gamma posterior independent of q, and intensity draws are
// products of independent mass and density draws.
//
// Note that the mass posterior depends on the data only through the event
// count N, so a well-informed prior on M matters.

#include <cstddef>

#include <Eigen/Dense>

#include "chi2dens/posterior_analysis.hpp"
#include "chi2dens/random.hpp"

namespace chi2dens {

/// Gamma(shape a, rate b).
struct GammaPrior {
    double a = 1.0;
    double b = 1.0;

    GammaPrior() = default;
    /// Throws ConfigError unless a > 0 and b > 0.
    GammaPrior(double a, double b);

    [[nodiscard]] double mean() const noexcept { return a / b; }
    [[nodiscard]] double variance() const noexcept { return a / (b * b); }
};

/// Gamma(a + N, b + 1), the update for N events on a unit-measure window.
[[nodiscard]] GammaPrior mass_posterior(const GammaPrior& prior, std::size_t event_count);

[[nodiscard]] double sample_gamma(const GammaPrior& dist, Rng& rng);

struct IntensityDraws {
    Eigen::VectorXd mass;    ///< one M per stored density draw
    Eigen::MatrixXd values;  ///< draws x nodes, M_d * p_d(node)
};

/// Multiplies each stored density draw (on `nodes`) by an independent draw of M
/// from the mass posterior.
[[nodiscard]] IntensityDraws intensity_draws(const Chain& chain, const BasisSpec& basis, const GammaPrior& prior,
                                             std::size_t event_count, const Eigen::MatrixXd& nodes, Rng& rng);

}  // namespace chi2dens
