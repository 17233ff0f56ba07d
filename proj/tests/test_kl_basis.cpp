#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "chi2dens/dataset.hpp"
#include "chi2dens/error.hpp"
#include "chi2dens/kl_basis.hpp"
#include "oracles.hpp"

using namespace chi2dens;

namespace {

double eval1(int i, double x) {
    const double p[1] = {x};
    return eigenfunction({i, 0}, p);
}

}  // namespace

TEST_CASE("eigenvalue matches the Matern spectrum") {
    CHECK(eigenvalue(MaternHyper(0.5, 1.0, 1.0, 1), {0, 0}) == doctest::Approx(0.25).epsilon(1e-15));
    // mpmath at 40 digits
    CHECK(eigenvalue(MaternHyper(1.0, 0.5, 0.8, 1), {2, 0}) ==
          doctest::Approx(0.05230455600042944084).epsilon(1e-14));
    CHECK(eigenvalue(MaternHyper(0.9, 0.1, 1.1, 2), {0, 0}) ==
          doctest::Approx(10.19729583553275440443).epsilon(1e-14));
    const double expected = 0.81 * std::pow(0.1 + std::numbers::pi * std::numbers::pi * 5.0, -1.1);
    CHECK(eigenvalue(MaternHyper(0.9, 0.1, 1.1, 2), {1, 2}) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("hyperparameters are validated at construction") {
    CHECK_THROWS_AS(MaternHyper(0.0, 1.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(MaternHyper(1.0, -1.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(MaternHyper(1.0, 1.0, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(MaternHyper(1.0, 1.0, 1.0, 3), ConfigError);
}

TEST_CASE("eigenfunction values") {
    CHECK(eval1(1, 0.0) == doctest::Approx(std::numbers::sqrt2));
    CHECK(std::abs(eval1(1, 0.5)) < 1e-15);
    CHECK(eval1(0, 0.73) == 1.0);
    const double x2[2] = {0.0, 0.4};
    CHECK(eigenfunction({1, 0}, x2) == doctest::Approx(std::numbers::sqrt2));
    const double y2[2] = {0.3, 0.7};
    CHECK(eigenfunction({2, 3}, y2) ==
          doctest::Approx(oracles::cosine_mode(2, 0.3) * oracles::cosine_mode(3, 0.7)).epsilon(1e-15));
}

TEST_CASE("eigenfunction domain errors name the coordinate") {
    CHECK_NOTHROW(eval1(3, 1.0 + 5e-13));
    CHECK_NOTHROW(eval1(3, -5e-13));
    const double bad[2] = {0.5, 1.1};
    try {
        (void)eigenfunction({1, 1}, bad);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(e.coordinate() == 1);
    }
}

TEST_CASE("basis spec layout") {
    const BasisSpec one(MaternHyper(0.5, 0.5, 0.8, 1), 30);
    CHECK(one.size() == 31);
    for (std::size_t b = 1; b < one.size(); ++b) {
        CHECK(one.eigenvalues()[static_cast<Eigen::Index>(b)] < one.eigenvalues()[static_cast<Eigen::Index>(b - 1)]);
    }
    const BasisSpec two(MaternHyper(0.9, 0.1, 1.1, 2), 5);
    REQUIRE(two.size() == 36);
    CHECK(two.indices().front() == MultiIndex{0, 0});
    CHECK(two.indices()[1] == MultiIndex{0, 1});
    CHECK(two.indices()[6] == MultiIndex{1, 0});
    for (std::size_t a = 0; a < two.size(); ++a) {
        for (std::size_t b = 0; b < two.size(); ++b) {
            const auto& ia = two.indices()[a];
            const auto& ib = two.indices()[b];
            if (ia.i1 * ia.i1 + ia.i2 * ia.i2 < ib.i1 * ib.i1 + ib.i2 * ib.i2) {
                CHECK(two.eigenvalues()[static_cast<Eigen::Index>(a)] > two.eigenvalues()[static_cast<Eigen::Index>(b)]);
            }
        }
    }
    CHECK((two.eigenvalues().array() > 0.0).all());
}

TEST_CASE("tail sums of the spectrum shrink as the truncation grows") {
    const MaternHyper hyper(0.5, 0.5, 0.8, 1);
    double previous = std::numeric_limits<double>::infinity();
    for (int i : {10, 20, 40}) {
        double tail = 0.0;
        for (int k = i; k <= 2 * i; ++k) tail += eigenvalue(hyper, {k, 0});
        CHECK(tail < previous);
        previous = tail;
    }
}

TEST_CASE("design matrix") {
    const BasisSpec spec(MaternHyper(0.5, 1.0, 1.0, 1), 1);
    Eigen::MatrixXd single(1, 1);
    single << 0.5;
    const DesignMatrix dm = build_design_matrix(spec, Dataset::from_unit(single));
    CHECK(dm.values()(0, 0) == 1.0);
    CHECK(std::abs(dm.values()(0, 1)) < 1e-15);

    const DesignMatrix empty = build_design_matrix(spec, Eigen::MatrixXd(0, 1));
    CHECK(empty.point_count() == 0);
    CHECK(empty.basis_size() == 2);

    SUBCASE("entrywise re-evaluation") {
        const BasisSpec five(MaternHyper(0.5, 1.0, 1.0, 1), 4);
        std::mt19937_64 gen(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Eigen::MatrixXd pts(3, 1);
        for (int n = 0; n < 3; ++n) pts(n, 0) = u(gen);
        const DesignMatrix m = build_design_matrix(five, pts);
        for (int n = 0; n < 3; ++n)
            for (int b = 0; b < 5; ++b) CHECK(m.values()(n, b) == doctest::Approx(oracles::cosine_mode(b, pts(n, 0))).epsilon(1e-14));
    }

    SUBCASE("shuffled rows permute identically") {
        const BasisSpec two(MaternHyper(0.9, 0.1, 1.1, 2), 3);
        std::mt19937_64 gen(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Eigen::MatrixXd pts(20, 2);
        for (int n = 0; n < 20; ++n) pts.row(n) << u(gen), u(gen);
        std::vector<int> perm(20);
        for (int n = 0; n < 20; ++n) perm[static_cast<std::size_t>(n)] = n;
        std::shuffle(perm.begin(), perm.end(), gen);
        Eigen::MatrixXd shuffled(20, 2);
        for (int n = 0; n < 20; ++n) shuffled.row(n) = pts.row(perm[static_cast<std::size_t>(n)]);
        const DesignMatrix a = build_design_matrix(two, pts);
        const DesignMatrix b = build_design_matrix(two, shuffled);
        for (int n = 0; n < 20; ++n) CHECK(b.values().row(n) == a.values().row(perm[static_cast<std::size_t>(n)]));
    }

    SUBCASE("out-of-domain row is reported") {
        Eigen::MatrixXd pts(3, 1);
        pts << 0.1, 0.2, 1.5;
        CHECK_THROWS_WITH_AS((void)build_design_matrix(spec, pts), doctest::Contains("row 2"), DomainError);
    }

    SUBCASE("entries are bounded by the sup norms") {
        const BasisSpec two(MaternHyper(0.9, 0.1, 1.1, 2), 5);
        const DesignMatrix m = build_design_matrix(two, quadrature_grid(2, 16).nodes);
        CHECK(m.values().allFinite());
        CHECK(m.values().cwiseAbs().maxCoeff() <= 2.0 + 1e-15);
    }
}

TEST_CASE("quadrature grid") {
    const QuadratureGrid two = quadrature_grid(1, 2);
    CHECK(two.weights.sum() == doctest::Approx(1.0).epsilon(1e-15));
    const QuadratureGrid eight = quadrature_grid(1, 8);
    const double x2 = eight.integrate([](std::span<const double> x) { return x[0] * x[0]; });
    CHECK(std::abs(x2 - 1.0 / 3.0) < 1e-14);
    const QuadratureGrid fine = quadrature_grid(1, 64);
    const double cross = fine.integrate([](std::span<const double> x) {
        return oracles::cosine_mode(3, x[0]) * oracles::cosine_mode(5, x[0]);
    });
    CHECK(std::abs(cross) < 1e-10);
    for (int level : {2, 3, 17, 64, 256}) {
        CHECK(std::abs(quadrature_grid(1, level).weights.sum() - 1.0) < 1e-14);
    }
    CHECK(std::abs(quadrature_grid(2, 64).weights.sum() - 1.0) < 1e-14);
    // degree 2n-1 exactness on a high-order monomial
    const double x9 = quadrature_grid(1, 5).integrate([](std::span<const double> x) { return std::pow(x[0], 9); });
    CHECK(std::abs(x9 - 0.1) < 1e-14);
    CHECK_THROWS_AS((void)quadrature_grid(1, 1), ConfigError);
}

TEST_CASE("basis orthonormality") {
    const BasisSpec one(MaternHyper(0.5, 0.5, 0.8, 1), 30);
    CHECK(orthonormality_residual(one, quadrature_grid(1, 256)) <= 1e-8);
    const BasisSpec two(MaternHyper(0.9, 0.1, 1.1, 2), 5);
    CHECK(orthonormality_residual(two, quadrature_grid(2, 64)) <= 1e-8);
}
