#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chi2dens/fisher_checks.hpp"
#include "oracles.hpp"

using namespace chi2dens;

namespace {

DensityFunction uniform_density(int level = 256) {
    return DensityFunction([](std::span<const double>) { return 1.0; }, 1, level);
}

DensityFunction linear_density(int level = 256) {
    return DensityFunction([](std::span<const double> x) { return 2.0 * x[0]; }, 1, level);
}

TangentFunction cosine_tangent(int i) {
    return TangentFunction([i](std::span<const double> x) { return oracles::cosine_mode(i, x[0]); }, 1);
}

// zero-mean and vanishing at 0, so phi^2 / (2x) stays a polynomial
TangentFunction vanishing_tangent() {
    return TangentFunction([](std::span<const double> x) { return x[0] * (2.0 - 3.0 * x[0]); }, 1);
}

}  // namespace

TEST_CASE("density and tangent validation") {
    CHECK_THROWS_AS(DensityFunction([](std::span<const double>) { return 2.0; }, 1, 64), ConfigError);
    CHECK_THROWS_AS(DensityFunction([](std::span<const double> x) { return 4.0 * x[0] - 1.0; }, 1, 64), ConfigError);
    CHECK_THROWS_AS(TangentFunction([](std::span<const double>) { return 1.0; }, 1), ConfigError);
    CHECK_NOTHROW(TangentFunction([](std::span<const double> x) { return x[0] - 0.5; }, 1));
}

TEST_CASE("Fisher metric") {
    const DensityFunction flat = uniform_density();
    CHECK(fisher_metric(flat, cosine_tangent(1), cosine_tangent(1)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(fisher_metric(flat, cosine_tangent(2), cosine_tangent(5))) <= 1e-10);

    // integral of x (2 - 3x)^2 / 2 over [0,1] = 1/8
    const DensityFunction linear = linear_density();
    CHECK(std::abs(fisher_metric(linear, vanishing_tangent(), vanishing_tangent()) - 0.125) <= 1e-12);
    const double coarse = fisher_metric(linear_density(16), vanishing_tangent(), vanishing_tangent());
    const double fine = fisher_metric(linear_density(512), vanishing_tangent(), vanishing_tangent());
    CHECK(std::abs(coarse - fine) <= 1e-8);

    SUBCASE("symmetric and bilinear") {
        const TangentFunction a = cosine_tangent(1);
        const TangentFunction b = vanishing_tangent();
        const TangentFunction scaled([](std::span<const double> x) { return -2.5 * x[0] * (2.0 - 3.0 * x[0]); }, 1);
        CHECK(std::abs(fisher_metric(linear, a, b) - fisher_metric(linear, b, a)) <= 1e-10);
        CHECK(std::abs(fisher_metric(linear, scaled, a) + 2.5 * fisher_metric(linear, b, a)) <= 1e-10);
    }

    SUBCASE("vanishing density is a singular metric") {
        const DensityFunction half(
            [](std::span<const double> x) { return x[0] > 0.5 ? 2.0 : 0.0; }, 1, 64);
        try {
            (void)fisher_metric(half, cosine_tangent(1), cosine_tangent(1));
            FAIL("expected a singular metric");
        } catch (const SingularMetricError& e) {
            CHECK(half(half.grid().node(e.node())) == 0.0);
        }
    }
}

TEST_CASE("isometry with the L2 sphere") {
    const DensityFunction linear = linear_density();
    CHECK(isometry_residual(linear, vanishing_tangent(), vanishing_tangent()) <= 1e-15);
    CHECK(isometry_residual(linear, vanishing_tangent(), cosine_tangent(1)) <= 1e-14);
    CHECK(isometry_residual(linear, vanishing_tangent(), vanishing_tangent(), 200) <= 1e-8);
    CHECK(isometry_residual(uniform_density(), cosine_tangent(3), cosine_tangent(3)) <= 1e-12);
}

TEST_CASE("density geodesics") {
    const DensityFunction flat = uniform_density();
    const TangentFunction f = cosine_tangent(1);
    const DensityFunction start = density_geodesic(flat, f, 0.0);
    const DensityFunction half_turn = density_geodesic(flat, f, std::numbers::pi);
    const DensityFunction quarter = density_geodesic(flat, f, std::numbers::pi / 4.0);
    CHECK(std::abs(quarter.integral() - 1.0) <= 1e-8);
    for (double x = 0.0; x <= 1.0; x += 0.01) {
        const double p[1] = {x};
        CHECK(std::abs(start(p) - 1.0) <= 1e-12);
        CHECK(std::abs(half_turn(p) - 1.0) <= 1e-12);
        // (cos t + sin t sqrt2 cos(pi x))^2
        const double expected = std::pow(std::cos(std::numbers::pi / 4) +
                                             std::sin(std::numbers::pi / 4) * oracles::cosine_mode(1, x),
                                         2);
        CHECK(std::abs(quarter(p) - expected) <= 1e-12);
    }

    SUBCASE("non-uniform base stays a density") {
        const DensityFunction linear = linear_density();
        for (double t : {0.3, 1.0, 2.2}) {
            const DensityFunction pt = density_geodesic(linear, vanishing_tangent(), t);
            CHECK(std::abs(pt.integral() - 1.0) <= 1e-6);
            for (std::size_t m = 0; m < pt.grid().size(); ++m) CHECK(pt(pt.grid().node(m)) >= 0.0);
        }
    }
}

TEST_CASE("truncated geodesics converge") {
    const ConvergenceReport none = geodesic_convergence_trial(128, 128, 4);
    CHECK(none.max_f <= 1e-24);

    const auto table = geodesic_convergence_table(512, {10, 20, 40, 80}, 2017);
    for (const auto& report : table) {
        CHECK(report.bound_violations == 0);
        for (double value : report.f) CHECK(std::abs(value - report.f0) <= 1e-10);
        CHECK(report.integral_f == doctest::Approx(3.0 * report.f0).epsilon(1e-9));
    }
    for (std::size_t k = 1; k < table.size(); ++k) CHECK(table[k].integral_f < table[k - 1].integral_f);
    CHECK(table[2].integral_f < table[0].integral_f);

    SUBCASE("regression pins for seed 2017") {
        CHECK(table[0].integral_f == doctest::Approx(3.13884050646).epsilon(1e-9));
        CHECK(table[1].integral_f == doctest::Approx(0.737906278984).epsilon(1e-9));
        CHECK(table[2].integral_f == doctest::Approx(0.315678865971).epsilon(1e-9));
        CHECK(table[3].integral_f == doctest::Approx(0.137600694049).epsilon(1e-9));
    }

    SUBCASE("slower flows respect the exponential bound") {
        for (double speed : {0.25, 0.6, 0.95}) {
            const ConvergenceReport r = geodesic_convergence_trial(256, 12, 99, 5.0, speed);
            CHECK(r.bound_violations == 0);
        }
    }

    CHECK_THROWS_AS((void)geodesic_convergence_trial(64, 1, 1), ConfigError);
    CHECK_THROWS_AS((void)geodesic_convergence_trial(64, 65, 1), ConfigError);
}
