#include "chi2dens/spherical_hmc.hpp"

#include <cmath>
#include <limits>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace chi2dens {

void ChainConfig::validate() const {
    if (!(step_size > 0.0) || !std::isfinite(step_size)) throw ConfigError("step_size must be positive");
    if (leapfrog_steps < 1) throw ConfigError("leapfrog_steps must be at least 1");
    if (iterations < 1) throw ConfigError("iterations must be positive");
    if (burn_in < 0 || burn_in >= iterations) throw ConfigError("burn_in must satisfy 0 <= burn_in < iterations");
    if (thin < 1) throw ConfigError("thin must be at least 1");
    if (!(newton_tolerance > 0.0)) throw ConfigError("newton_tolerance must be positive");
    if (newton_max_iterations < 0) throw ConfigError("newton_max_iterations must be non-negative");
}

std::size_t ChainConfig::stored_draws() const {
    const int kept = iterations - burn_in;
    return static_cast<std::size_t>((kept + thin - 1) / thin);
}

TangentVector sample_tangent_velocity(const SpherePoint& q, Rng& rng) {
    boost::random::normal_distribution<double> normal;
    Eigen::VectorXd w(q.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = normal(rng);
    return project_to_tangent(q, w);
}

std::optional<Trajectory> integrate_trajectory(const SpherePoint& q, const TangentVector& v, double step_size,
                                               int steps, const TargetDensity& target) {
    const double half = 0.5 * step_size;
    SpherePoint position = q;
    Eigen::VectorXd velocity = v.coords();
    Eigen::VectorXd grad;
    try {
        grad = project_to_tangent(position, target.gradient(position.coords())).coords();
        for (int l = 0; l < steps; ++l) {
            velocity += half * grad;
            GeodesicState moved = geodesic_flow(position, TangentVector::trusted(velocity), step_size);
            position = std::move(moved.position);
            velocity = project_to_tangent(position, moved.velocity.coords()).coords();
            grad = project_to_tangent(position, target.gradient(position.coords())).coords();
            velocity += half * grad;
        }
    } catch (const NumericError&) {
        return std::nullopt;
    }
    if (!velocity.allFinite()) return std::nullopt;
    return Trajectory{std::move(position), TangentVector::trusted(std::move(velocity))};
}

StepResult hmc_step(const ChainState& current, const ChainConfig& config, const TargetDensity& target, Rng& rng) {
    boost::random::uniform_01<double> uniform;
    const TangentVector v0 = sample_tangent_velocity(current.position, rng);
    const double u = uniform(rng);
    const double h0 = -current.log_density + 0.5 * v0.coords().squaredNorm();

    StepResult rejected{current, false, std::numeric_limits<double>::infinity(), 0.0};
    auto traj = integrate_trajectory(current.position, v0, config.step_size, config.leapfrog_steps, target);
    if (!traj) return rejected;

    double proposal_log_density = 0.0;
    try {
        proposal_log_density = target.log_density(traj->position.coords());
    } catch (const NumericError&) {
        return rejected;
    }
    if (!std::isfinite(proposal_log_density)) return rejected;

    const double h1 = -proposal_log_density + 0.5 * traj->velocity.coords().squaredNorm();
    const double delta_h = h1 - h0;
    if (std::isnan(delta_h)) return rejected;
    const double accept_prob = delta_h <= 0.0 ? 1.0 : std::exp(-delta_h);
    rejected.delta_h = delta_h;
    rejected.accept_prob = accept_prob;
    if (u < accept_prob) {
        return {{std::move(traj->position), proposal_log_density}, true, delta_h, accept_prob};
    }
    return rejected;
}

Chain run_chain(const TargetDensity& target, const ChainConfig& config, const std::optional<SpherePoint>& init,
                const SphereObjective* objective) {
    config.validate();
    Chain chain;
    const std::size_t dim = target.dimension();
    if (dim == 0) throw ConfigError("target has no coefficients");

    SpherePoint start = SpherePoint::basis_vector(dim, 0);
    if (init) {
        if (static_cast<std::size_t>(init->size()) != dim) throw ConfigError("initial point has the wrong dimension");
        start = *init;
    } else if (objective != nullptr) {
        try {
            NewtonReport report =
                newton_optimize(*objective, start, config.newton_tolerance, config.newton_max_iterations);
            if (!report.converged) {
                chain.warnings.push_back("Newton initialization stopped after " + std::to_string(report.iterations) +
                                         " iterations with tangent gradient norm " +
                                         std::to_string(report.tangent_gradient_norm));
            }
            start = report.point;
            chain.newton = std::move(report);
        } catch (const OptimizationError& e) {
            chain.warnings.push_back(std::string("Newton initialization failed, starting from the constant mode: ") +
                                     e.what());
        }
    }

    double start_log_density = target.log_density(start.coords());
    if (!std::isfinite(start_log_density)) {
        chain.warnings.push_back("initial point has zero posterior density; starting from the constant mode");
        start = SpherePoint::basis_vector(dim, 0);
        start_log_density = target.log_density(start.coords());
        if (!std::isfinite(start_log_density)) throw NumericError("constant-mode start has zero posterior density");
    }

    Rng rng = make_rng(config.seed);
    ChainState state{std::move(start), start_log_density};
    const std::size_t expected = config.stored_draws();
    chain.draws.reserve(expected);
    chain.iteration.reserve(expected);
    chain.log_post_trace.reserve(expected);
    long accepted = 0;
    for (int it = 0; it < config.iterations; ++it) {
        StepResult step = hmc_step(state, config, target, rng);
        accepted += step.accepted ? 1 : 0;
        state = std::move(step.state);
        if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0) {
            chain.draws.push_back(state.position.coords());
            chain.iteration.push_back(it);
            chain.log_post_trace.push_back(state.log_density);
        }
    }
    chain.accept_rate = static_cast<double>(accepted) / config.iterations;
    return chain;
}

Chain run_chain(const Dataset& data, const BasisSpec& basis, const ChainConfig& config,
                const std::optional<SpherePoint>& init) {
    if (data.size() > 0 && data.dim() != basis.dim()) throw ConfigError("dataset and basis dimensions differ");
    const DesignMatrix design = build_design_matrix(basis, data);
    const Chi2Posterior posterior(design, basis.eigenvalues());
    const SphereObjective objective = posterior.objective();
    return run_chain(posterior, config, init, &objective);
}

}  // namespace chi2dens
