#include "chi2dens/cox_process.hpp"

#include <cmath>

#include <boost/random/gamma_distribution.hpp>

#include "chi2dens/error.hpp"

namespace chi2dens {

GammaPrior::GammaPrior(double a_, double b_) : a(a_), b(b_) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("Gamma shape must be positive");
    if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("Gamma rate must be positive");
}

GammaPrior mass_posterior(const GammaPrior& prior, std::size_t event_count) {
    return GammaPrior(prior.a + static_cast<double>(event_count), prior.b + 1.0);
}

double sample_gamma(const GammaPrior& dist, Rng& rng) {
    // boost parameterizes by scale
    boost::random::gamma_distribution<double> gamma(dist.a, 1.0 / dist.b);
    return gamma(rng);
}

IntensityDraws intensity_draws(const Chain& chain, const BasisSpec& basis, const GammaPrior& prior,
                               std::size_t event_count, const Eigen::MatrixXd& nodes, Rng& rng) {
    const GammaPrior posterior = mass_posterior(prior, event_count);
    DensityGrid density = evaluate_draws(chain, basis, nodes);
    IntensityDraws out;
    out.mass.resize(density.values.rows());
    for (Eigen::Index d = 0; d < density.values.rows(); ++d) out.mass[d] = sample_gamma(posterior, rng);
    out.values = out.mass.asDiagonal() * density.values;
    return out;
}

}  // namespace chi2dens
