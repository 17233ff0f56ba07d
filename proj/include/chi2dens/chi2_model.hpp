#pragma once

// The chi-square process density model: p = q^2 with q = sum_b c_b phi_b and the
// coefficient vector c constrained to the unit sphere, so p integrates to one.

#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "chi2dens/error.hpp"
#include "chi2dens/kl_basis.hpp"
#include "chi2dens/sphere_geometry.hpp"

namespace chi2dens {

/// |q(x_n)| below this makes the log-likelihood -infinity.
inline constexpr double kLogFloor = 1e-300;
/// |q(x_n)| below this makes the gradient singular.
inline constexpr double kGradientFloor = 1e-12;

/// The gradient blew up because q(x_n) is (numerically) zero at observation n.
class GradientSingularityError : public NumericError {
public:
    GradientSingularityError(const std::string& what, std::size_t point)
        : NumericError(what), point_(point) {}
    [[nodiscard]] std::size_t point() const noexcept { return point_; }

private:
    std::size_t point_;
};

/// Square-root density: unit coefficient vector over a basis.
class SqrtDensityState {
public:
    /// Throws ConfigError if the coefficient count differs from the basis size.
    SqrtDensityState(SpherePoint coeffs, const BasisSpec& basis);

    [[nodiscard]] const SpherePoint& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] const BasisSpec& basis() const noexcept { return *basis_; }

private:
    SpherePoint coeffs_;
    const BasisSpec* basis_;
};

/// sum_b c_b phi_b(x); may be negative.
[[nodiscard]] double eval_sqrt_density(const SqrtDensityState& state, std::span<const double> x);

/// Square of eval_sqrt_density().
[[nodiscard]] double eval_density(const SqrtDensityState& state, std::span<const double> x);

/// 2 sum_n log|q(x_n)| - 1/2 sum_b c_b^2 / lambda_b^2, or -infinity when some
/// |q(x_n)| < 1e-300. Throws NumericError on non-finite input.
[[nodiscard]] double log_posterior(const Eigen::VectorXd& coeffs, const DesignMatrix& design,
                                   const Eigen::VectorXd& eigenvalues);

/// 2 sum_n log|q(x_n)| with the same -infinity policy.
[[nodiscard]] double log_likelihood_only(const Eigen::VectorXd& coeffs, const DesignMatrix& design);

/// -1/2 sum_b c_b^2 / lambda_b^2.
[[nodiscard]] double log_prior(const Eigen::VectorXd& coeffs, const Eigen::VectorXd& eigenvalues);

/// Ambient gradient: 2 sum_n Phi(n, j) / q(x_n) - c_j / lambda_j^2.
/// Throws GradientSingularityError when some |q(x_n)| < 1e-12.
[[nodiscard]] Eigen::VectorXd log_posterior_grad(const Eigen::VectorXd& coeffs, const DesignMatrix& design,
                                                 const Eigen::VectorXd& eigenvalues);

/// Ambient Hessian: -2 sum_n Phi_n Phi_n^T / q(x_n)^2 - diag(1 / lambda^2).
[[nodiscard]] Eigen::MatrixXd log_posterior_hessian(const Eigen::VectorXd& coeffs, const DesignMatrix& design,
                                                    const Eigen::VectorXd& eigenvalues);

/// Unnormalized log-density on the sphere, as seen by the sampler.
class TargetDensity {
public:
    virtual ~TargetDensity() = default;
    [[nodiscard]] virtual std::size_t dimension() const = 0;
    [[nodiscard]] virtual double log_density(const Eigen::VectorXd& q) const = 0;
    /// Ambient gradient; throws NumericError (typically GradientSingularityError)
    /// where it does not exist.
    [[nodiscard]] virtual Eigen::VectorXd gradient(const Eigen::VectorXd& q) const = 0;
};

/// Posterior of the chi-square process model for a fixed design matrix.
class Chi2Posterior final : public TargetDensity {
public:
    Chi2Posterior(const DesignMatrix& design, const Eigen::VectorXd& eigenvalues);

    [[nodiscard]] std::size_t dimension() const override { return static_cast<std::size_t>(eigenvalues_->size()); }
    [[nodiscard]] double log_density(const Eigen::VectorXd& q) const override;
    [[nodiscard]] Eigen::VectorXd gradient(const Eigen::VectorXd& q) const override;
    [[nodiscard]] Eigen::MatrixXd hessian(const Eigen::VectorXd& q) const;

    /// Adapter for newton_optimize().
    [[nodiscard]] SphereObjective objective() const;

private:
    const DesignMatrix* design_;
    const Eigen::VectorXd* eigenvalues_;
};

}  // namespace chi2dens
