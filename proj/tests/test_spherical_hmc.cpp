#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chi2dens/spherical_hmc.hpp"
#include "oracles.hpp"

using namespace chi2dens;

namespace {

struct UniformTarget final : TargetDensity {
    explicit UniformTarget(std::size_t b) : b_(b) {}
    [[nodiscard]] std::size_t dimension() const override { return b_; }
    [[nodiscard]] double log_density(const Eigen::VectorXd&) const override { return 0.0; }
    [[nodiscard]] Eigen::VectorXd gradient(const Eigen::VectorXd&) const override {
        return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b_));
    }

private:
    std::size_t b_;
};

struct ThrowingTarget final : TargetDensity {
    [[nodiscard]] std::size_t dimension() const override { return 4; }
    [[nodiscard]] double log_density(const Eigen::VectorXd&) const override { return 0.0; }
    [[nodiscard]] Eigen::VectorXd gradient(const Eigen::VectorXd&) const override {
        throw GradientSingularityError("vanishing square-root density", 0);
    }
};

struct Problem {
    BasisSpec basis;
    DesignMatrix design;
    Chi2Posterior posterior;

    Problem(int max_index, int n, std::uint64_t seed)
        : basis(MaternHyper(0.5, 0.5, 0.8, 1), max_index),
          design(build_design_matrix(basis, beta_points(n, seed))),
          posterior(design, basis.eigenvalues()) {}

    static Eigen::MatrixXd beta_points(int n, std::uint64_t seed) {
        std::mt19937_64 gen(seed);
        std::gamma_distribution<double> g(2.0, 1.0);
        Eigen::MatrixXd pts(n, 1);
        for (int i = 0; i < n; ++i) {
            const double a = g(gen);
            const double b = g(gen);
            pts(i, 0) = a / (a + b);
        }
        return pts;
    }

    [[nodiscard]] SpherePoint mode() const {
        return newton_optimize(posterior.objective(), SpherePoint::basis_vector(basis.size(), 0), 1e-10, 100).point;
    }
};

double hamiltonian(const TargetDensity& target, const SpherePoint& q, const TangentVector& v) {
    return -target.log_density(q.coords()) + 0.5 * v.coords().squaredNorm();
}

}  // namespace

TEST_CASE("tangent velocity sampling") {
    Rng rng = make_rng(5);
    const SpherePoint q = SpherePoint::normalized(Eigen::VectorXd::LinSpaced(6, 1.0, 6.0));
    Eigen::VectorXd second = Eigen::VectorXd::Zero(6);
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) {
        const TangentVector v = sample_tangent_velocity(q, rng);
        CHECK(std::abs(v.coords().dot(q.coords())) <= 1e-13);
        second += v.coords().cwiseProduct(v.coords());
    }
    second /= draws;
    // projected standard normal: covariance I - q q^T
    for (Eigen::Index j = 0; j < 6; ++j) CHECK(std::abs(second[j] - (1.0 - q[j] * q[j])) <= 0.02);

    Rng a = make_rng(9);
    Rng b = make_rng(9);
    CHECK(sample_tangent_velocity(q, a).coords() == sample_tangent_velocity(q, b).coords());
}

TEST_CASE("leapfrog trajectory") {
    SUBCASE("flat target keeps speed and traces a great circle") {
        const UniformTarget flat(5);
        Rng rng = make_rng(2);
        const SpherePoint q = SpherePoint::basis_vector(5, 0);
        const TangentVector v = sample_tangent_velocity(q, rng);
        const auto traj = integrate_trajectory(q, v, 0.05, 40, flat);
        REQUIRE(traj);
        CHECK(std::abs(traj->velocity.coords().norm() - v.coords().norm()) <= 1e-12);
        const GeodesicState exact = geodesic_flow(q, v, 2.0);
        CHECK((traj->position.coords() - exact.position.coords()).norm() <= 1e-12);
    }

    SUBCASE("reversible") {
        const Problem p(30, 200, 7);
        Rng rng = make_rng(3);
        const SpherePoint q = p.mode();
        const TangentVector v = sample_tangent_velocity(q, rng);
        const auto forward = integrate_trajectory(q, v, 0.005, 25, p.posterior);
        REQUIRE(forward);
        const auto back = integrate_trajectory(forward->position, -forward->velocity, 0.005, 25, p.posterior);
        REQUIRE(back);
        CHECK((back->position.coords() - q.coords()).norm() <= 1e-8);
        CHECK((back->velocity.coords() + v.coords()).norm() <= 1e-8);
    }

    SUBCASE("energy error is second order in the step size") {
        const Problem p(30, 1000, 11);
        Rng rng = make_rng(4);
        const SpherePoint q = p.mode();
        const TangentVector v = sample_tangent_velocity(q, rng);
        const double h0 = hamiltonian(p.posterior, q, v);
        std::vector<double> errors;
        for (double eps : {4e-4, 2e-4, 1e-4}) {
            const int steps = static_cast<int>(std::lround(0.02 / eps));
            const auto traj = integrate_trajectory(q, v, eps, steps, p.posterior);
            REQUIRE(traj);
            errors.push_back(std::abs(hamiltonian(p.posterior, traj->position, traj->velocity) - h0));
        }
        CHECK(errors[0] <= 0.05);
        CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.25));
        CHECK(errors[1] / errors[2] == doctest::Approx(4.0).epsilon(0.25));
    }

    SUBCASE("singular gradient aborts the trajectory") {
        const ThrowingTarget bad;
        Rng rng = make_rng(1);
        const SpherePoint q = SpherePoint::basis_vector(4, 0);
        CHECK_FALSE(integrate_trajectory(q, sample_tangent_velocity(q, rng), 0.1, 3, bad).has_value());
    }
}

TEST_CASE("Metropolis step") {
    ChainConfig config;
    config.leapfrog_steps = 10;

    SUBCASE("flat target always accepts") {
        const UniformTarget flat(7);
        Rng rng = make_rng(8);
        ChainState state{SpherePoint::basis_vector(7, 3), 0.0};
        config.step_size = 0.3;
        for (int k = 0; k < 200; ++k) {
            const StepResult r = hmc_step(state, config, flat, rng);
            CHECK(r.accepted);
            CHECK(r.accept_prob == doctest::Approx(1.0).epsilon(1e-12));
            state = r.state;
        }
    }

    SUBCASE("tiny steps are almost always accepted") {
        const Problem p(30, 500, 13);
        Rng rng = make_rng(6);
        const SpherePoint q = p.mode();
        ChainState state{q, p.posterior.log_density(q.coords())};
        config.step_size = 1e-8;
        for (int k = 0; k < 100; ++k) {
            const StepResult r = hmc_step(state, config, p.posterior, rng);
            CHECK(r.accept_prob >= 1.0 - 1e-6);
            state = r.state;
        }
    }

    SUBCASE("singular proposals are rejected") {
        const ThrowingTarget bad;
        Rng rng = make_rng(1);
        const ChainState state{SpherePoint::basis_vector(4, 0), 0.0};
        const StepResult r = hmc_step(state, config, bad, rng);
        CHECK_FALSE(r.accepted);
        CHECK(r.accept_prob == 0.0);
        CHECK(std::isinf(r.delta_h));
        CHECK(r.state.position.coords() == state.position.coords());
    }
}

TEST_CASE("chain bookkeeping") {
    ChainConfig bad;
    bad.burn_in = bad.iterations;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ChainConfig{};
    bad.thin = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    const Problem p(10, 100, 17);
    ChainConfig config;
    config.iterations = 1000;
    config.burn_in = 500;
    config.thin = 5;
    config.step_size = 0.05;
    config.leapfrog_steps = 5;
    CHECK(config.stored_draws() == 100);
    const Dataset data = Dataset::from_unit(Problem::beta_points(100, 17));
    const Chain chain = run_chain(data, p.basis, config);
    REQUIRE(chain.size() == 100);
    CHECK(chain.iteration.front() == 500);
    CHECK(chain.iteration.back() == 995);
    REQUIRE(chain.newton);
    CHECK(chain.newton->converged);
    CHECK(chain.accept_rate > 0.0);
    for (std::size_t k = 0; k < chain.size(); ++k) {
        CHECK(std::abs(chain.draws[k].norm() - 1.0) <= 1e-12);
        CHECK(chain.log_post_trace[k] == doctest::Approx(p.posterior.log_density(chain.draws[k])).epsilon(1e-12));
    }

    const Chain again = run_chain(data, p.basis, config);
    for (std::size_t k = 0; k < chain.size(); ++k) CHECK(again.draws[k] == chain.draws[k]);
    config.seed += 1;
    const Chain other = run_chain(data, p.basis, config);
    CHECK(other.draws.back() != chain.draws.back());
}

TEST_CASE("prior-only chain reproduces Bingham moments") {
    // Three modes, no data: density exp(-sum q_b^2 / (2 lambda_b^2)) on S^2.
    const BasisSpec basis(MaternHyper(1.0, 0.5, 0.8, 1), 2);
    const Eigen::VectorXd& l2 = basis.eigenvalues();
    const DesignMatrix empty = build_design_matrix(basis, Eigen::MatrixXd(0, 1));
    const Chi2Posterior prior(empty, l2);

    // q = (cos t, sin t cos u, sin t sin u) on a midpoint grid
    const int grid = 1500;
    Eigen::Vector3d moment = Eigen::Vector3d::Zero();
    double mass = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double t = std::numbers::pi * (i + 0.5) / grid;
        for (int j = 0; j < grid; ++j) {
            const double u = 2.0 * std::numbers::pi * (j + 0.5) / grid;
            const Eigen::Vector3d q(std::cos(t), std::sin(t) * std::cos(u), std::sin(t) * std::sin(u));
            const double w = std::sin(t) * std::exp(-0.5 * (q.array().square() / l2.array()).sum());
            moment += w * q.cwiseProduct(q);
            mass += w;
        }
    }
    moment /= mass;

    ChainConfig config;
    config.iterations = 41000;
    config.burn_in = 1000;
    config.step_size = 0.1;
    config.leapfrog_steps = 10;
    config.seed = 77;
    const Chain chain = run_chain(prior, config, SpherePoint::basis_vector(3, 0));
    CHECK(chain.accept_rate > 0.5);
    for (Eigen::Index b = 0; b < 3; ++b) {
        std::vector<double> sq;
        std::vector<double> first;
        for (const auto& d : chain.draws) {
            sq.push_back(d[b] * d[b]);
            first.push_back(d[b]);
        }
        double mean_sq = 0.0;
        for (double v : sq) mean_sq += v;
        mean_sq /= static_cast<double>(sq.size());
        CHECK(std::abs(mean_sq - moment[b]) <= 4.0 * oracles::batch_means_se(sq));
        if (b > 0) {
            double mean = 0.0;
            for (double v : first) mean += v;
            mean /= static_cast<double>(first.size());
            CHECK(std::abs(mean) <= 4.0 * oracles::batch_means_se(first));
        }
    }
}
