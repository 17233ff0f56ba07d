#pragma once

// Numerical checks of the nonparametric Fisher geometry: the Fisher metric on
// densities, its isometry with the L2 sphere of square-root densities, density
// geodesics, and convergence of truncated sphere geodesics as the truncation
// grows.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chi2dens/error.hpp"
#include "chi2dens/kl_basis.hpp"

namespace chi2dens {

using PointFunction = std::function<double(std::span<const double>)>;

/// Raised when the density is (numerically) zero at a quadrature node.
class SingularMetricError : public NumericError {
public:
    SingularMetricError(const std::string& what, std::size_t node) : NumericError(what), node_(node) {}
    [[nodiscard]] std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// Density below this at a node makes the Fisher metric singular.
inline constexpr double kMetricFloor = 1e-12;

/// Probability density on [0,1]^dim bundled with the quadrature used to
/// integrate against it.
class DensityFunction {
public:
    /// Throws ConfigError if the quadrature integral is not within 1e-6 of 1 or
    /// the density is negative at a node.
    DensityFunction(PointFunction evaluator, int dim, int level);

    [[nodiscard]] double operator()(std::span<const double> x) const { return evaluator_(x); }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int level() const noexcept { return level_; }
    [[nodiscard]] const QuadratureGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] double integral() const;

private:
    PointFunction evaluator_;
    int dim_;
    int level_;
    QuadratureGrid grid_;
};

/// Tangent vector to the space of densities: a function with zero integral.
class TangentFunction {
public:
    /// Throws ConfigError if |integral| > 1e-8 on a `level` Gauss-Legendre grid.
    TangentFunction(PointFunction evaluator, int dim, int level = kDefaultQuadratureLevel1d);

    [[nodiscard]] double operator()(std::span<const double> x) const { return evaluator_(x); }
    [[nodiscard]] int dim() const noexcept { return dim_; }

private:
    PointFunction evaluator_;
    int dim_;
};

/// integral of phi psi / p on the density's quadrature grid.
[[nodiscard]] double fisher_metric(const DensityFunction& p, const TangentFunction& phi, const TangentFunction& psi);

/// |g_F(phi, psi)_p - <phi / sqrt(p), psi / sqrt(p)>_{L2}|. The L2 side uses the
/// same grid unless `l2_level` selects a different one.
[[nodiscard]] double isometry_residual(const DensityFunction& p, const TangentFunction& phi,
                                       const TangentFunction& psi, std::optional<int> l2_level = std::nullopt);

/// Density geodesic from p0 in direction f, computed on the unit L2 sphere:
/// q_t = sqrt(p0) cos t + u sin t with u = f / (2 sqrt(p0)) scaled to unit norm,
/// and p_t = q_t^2.
[[nodiscard]] DensityFunction density_geodesic(const DensityFunction& p0, const TangentFunction& f, double t);

struct ConvergenceReport {
    int truncation = 0;
    double f0 = 0.0;
    double max_f = 0.0;
    double integral_f = 0.0;
    int bound_violations = 0;
    std::vector<double> times;
    std::vector<double> f;
};

inline constexpr int kDefaultAmbientDimension = 512;
inline constexpr int kConvergenceGridPoints = 201;
inline constexpr double kDefaultConvergenceHorizon = 3.0;

/// Compares the geodesic through a random (q0, v0) on S^{ambient-1} with the
/// geodesic through its truncation to the first `truncation` coordinates.
///
/// Coefficients are independent N(0, i^-2.2) (i = 1-based position), normalized;
/// the velocity has Euclidean norm `speed`. f(t) = |q_t - q^I_t|^2 +
/// |qdot_t - qdot^I_t|^2 on 201 equispaced times in [0, horizon]; the integral
/// uses the trapezoid rule. A bound violation is a grid time where
/// f(t) > f(0) exp(t (1 - speed^2)) + 1e-9.
/// Throws NumericError if a truncated vector has zero norm.
[[nodiscard]] ConvergenceReport geodesic_convergence_trial(int ambient, int truncation, std::uint64_t seed,
                                                           double horizon = kDefaultConvergenceHorizon,
                                                           double speed = 1.0);

[[nodiscard]] std::vector<ConvergenceReport> geodesic_convergence_table(int ambient,
                                                                        const std::vector<int>& truncations,
                                                                        std::uint64_t seed,
                                                                        double horizon = kDefaultConvergenceHorizon);

}  // namespace chi2dens
