#include <doctest.h>

#include <cmath>

#include "chi2dens/error.hpp"
#include "chi2dens/synthetic.hpp"
#include "oracles.hpp"

using namespace chi2dens;
using nlohmann::json;

TEST_CASE("beta generator") {
    const Eigen::MatrixXd flat = generate_synthetic("beta", {{"a", 1.0}, {"b", 1.0}}, 10000, 3);
    std::vector<double> v(flat.data(), flat.data() + flat.rows());
    CHECK(oracles::ks_pvalue(oracles::ks_statistic(v, [](double x) { return x; }), v.size()) > 0.01);

    const Eigen::MatrixXd sym = generate_synthetic("beta", {{"a", 2.0}, {"b", 2.0}}, 100000, 4);
    // beta(2,2) variance is 1/20
    CHECK(std::abs(sym.mean() - 0.5) <= 3.0 * std::sqrt(0.05 / 100000.0));

    const Eigen::MatrixXd skew = generate_synthetic("beta", {{"a", 5.0}, {"b", 2.0}}, 20000, 5);
    std::vector<double> s(skew.data(), skew.data() + skew.rows());
    const double d = oracles::ks_statistic(s, [](double x) { return x * x * x * x * x * (6.0 - 5.0 * x); });
    CHECK(oracles::ks_pvalue(d, s.size()) > 0.01);

    CHECK(synthetic_density("beta", {{"a", 2.0}, {"b", 2.0}}, 0.5) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(synthetic_density("beta", {{"a", 2.0}, {"b", 2.0}}, 0.0) == 0.0);
    CHECK(synthetic_density("beta", {{"a", 0.5}, {"b", 0.5}}, 0.0) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS((void)generate_synthetic("beta", {{"a", -1.0}}, 10, 1), ConfigError);
}

TEST_CASE("noisy circle") {
    const std::size_t n = 10000;
    const Eigen::MatrixXd pts = generate_synthetic("noisy_circle_2d", json::object(), n, 6);
    REQUIRE(pts.cols() == 2);
    const Eigen::ArrayXd r = ((pts.col(0).array() - 0.5).square() + (pts.col(1).array() - 0.5).square()).sqrt();
    // r0 = 0.3 sits well inside the square, so no folding or rejection is visible
    CHECK(std::abs(r.mean() - 0.3) <= 4.0 * 0.03 / std::sqrt(static_cast<double>(n)));
    CHECK(std::sqrt((r - r.mean()).square().mean()) == doctest::Approx(0.03).epsilon(0.05));

    const Eigen::MatrixXd corner = generate_synthetic("noisy_circle_2d", {{"cx", 0.1}, {"cy", 0.1}}, 2000, 7);
    CHECK(corner.minCoeff() >= 0.0);
    CHECK(corner.maxCoeff() <= 1.0);
}

TEST_CASE("clustered and mixture patterns stay in the square") {
    for (const char* name : {"trunc_gauss_mixture_2d", "bramble_like_2d"}) {
        const Eigen::MatrixXd pts = generate_synthetic(name, json::object(), 5000, 8);
        CHECK(pts.rows() == 5000);
        CHECK(pts.minCoeff() >= 0.0);
        CHECK(pts.maxCoeff() <= 1.0);
    }
    const json one = {{"components", {{{"weight", 1.0}, {"mean", {0.5, 0.5}}, {"sd", {0.01, 0.02}}}}}};
    const Eigen::MatrixXd tight = generate_synthetic("trunc_gauss_mixture_2d", one, 20000, 9);
    CHECK(std::abs(tight.col(0).mean() - 0.5) <= 4.0 * 0.01 / std::sqrt(20000.0));
    CHECK(std::abs(tight.col(1).mean() - 0.5) <= 4.0 * 0.02 / std::sqrt(20000.0));
    CHECK_THROWS_AS((void)generate_synthetic("trunc_gauss_mixture_2d",
                                             {{"components", {{{"weight", 1.0}, {"mean", {0.5, 0.5}}, {"sd", {0.0, 1.0}}}}}},
                                             10, 1),
                    ConfigError);
}

TEST_CASE("generators are deterministic per seed") {
    CHECK(generate_synthetic("bramble_like_2d", json::object(), 100, 11) ==
          generate_synthetic("bramble_like_2d", json::object(), 100, 11));
    CHECK(generate_synthetic("beta", json::object(), 100, 11) != generate_synthetic("beta", json::object(), 100, 12));
    CHECK_THROWS_AS((void)generate_synthetic("bramble", json::object(), 10, 1), ConfigError);
}
