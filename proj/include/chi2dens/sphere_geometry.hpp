#pragma once

// Geometry of the unit sphere S^{B-1} embedded in R^B: tangent projection,
// closed-form great-circle flow, the Riemannian Hessian and Newton's method.

#include <cstddef>
#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "chi2dens/error.hpp"

namespace chi2dens {

inline constexpr double kSphereTolerance = 1e-10;

/// Unit vector in R^B.
class SpherePoint {
public:
    /// Throws NumericError if |‖coords‖ - 1| > 1e-10.
    explicit SpherePoint(Eigen::VectorXd coords);

    /// Divides by the norm; throws NumericError for a zero or non-finite vector.
    static SpherePoint normalized(const Eigen::VectorXd& v);

    /// Standard basis vector e_k in R^size.
    static SpherePoint basis_vector(std::size_t size, std::size_t k);

    [[nodiscard]] const Eigen::VectorXd& coords() const noexcept { return coords_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return coords_.size(); }
    [[nodiscard]] double operator[](Eigen::Index i) const { return coords_[i]; }

private:
    struct Trusted {};
    SpherePoint(Eigen::VectorXd coords, Trusted) : coords_(std::move(coords)) {}
    friend SpherePoint renormalized(Eigen::VectorXd v);

    Eigen::VectorXd coords_;
};

/// Velocity in the tangent space of some SpherePoint.
class TangentVector {
public:
    TangentVector() = default;
    /// Throws NumericError unless |<coords, base>| <= 1e-10 * max(1, ‖coords‖).
    TangentVector(const SpherePoint& base, Eigen::VectorXd coords);

    /// No orthogonality check; for values produced by the flow itself.
    static TangentVector trusted(Eigen::VectorXd coords) {
        TangentVector v;
        v.coords_ = std::move(coords);
        return v;
    }

    [[nodiscard]] const Eigen::VectorXd& coords() const noexcept { return coords_; }
    [[nodiscard]] double norm() const { return coords_.norm(); }
    [[nodiscard]] TangentVector operator-() const { return trusted(-coords_); }

private:
    Eigen::VectorXd coords_;
};

/// w - q <q, w>.
[[nodiscard]] TangentVector project_to_tangent(const SpherePoint& q, const Eigen::VectorXd& w);

struct GeodesicState {
    SpherePoint position;
    TangentVector velocity;
};

/// Great circle through q with initial velocity v, evaluated at time t.
/// The position is renormalized to unit length; a zero velocity is a fixed point.
[[nodiscard]] GeodesicState geodesic_flow(const SpherePoint& q, const TangentVector& v, double t);

/// Riemannian Hessian of F on the sphere in ambient coordinates:
/// F_qq - (F_q . q) I. Throws NumericError if F_hess is not symmetric.
[[nodiscard]] Eigen::MatrixXd directional_hessian(const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess,
                                                  const SpherePoint& q);

/// Orthonormal basis (B x (B-1)) of the tangent space at q.
[[nodiscard]] Eigen::MatrixXd tangent_basis(const SpherePoint& q);

/// Objective maximized by the Newton routines.
struct SphereObjective {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

enum class NewtonStepKind { Stationary, Newton, Ridge, GradientFallback, Stalled };

struct NewtonStepResult {
    SpherePoint point;
    NewtonStepKind kind = NewtonStepKind::Newton;
    double ridge = 0.0;  ///< regularization added to the Hessian, if any
};

/// One Newton iteration towards a maximizer of F on the sphere.
///
/// The Newton velocity solves the Hessian system on the tangent space at q and
/// is followed along the geodesic for unit time. If the system is not negative
/// definite or the step does not increase F, a ridge delta*I (delta = 1e-8,
/// x10 per retry) is added; if that also fails, a backtracking projected-gradient
/// geodesic step is taken. Returns q unchanged at a critical point
/// (tangent gradient norm <= 1e-12).
[[nodiscard]] NewtonStepResult newton_step(const SpherePoint& q, const Eigen::VectorXd& grad,
                                           const Eigen::MatrixXd& hess,
                                           const std::function<double(const Eigen::VectorXd&)>& value);

/// Overload without the objective: no acceptance test, pure Newton update
/// (with ridge only when the tangent system cannot be factorized).
[[nodiscard]] SpherePoint newton_step(const SpherePoint& q, const Eigen::VectorXd& grad,
                                      const Eigen::MatrixXd& hess);

struct NewtonReport {
    SpherePoint point;
    int iterations = 0;
    double tangent_gradient_norm = 0.0;
    double value = 0.0;
    bool converged = false;
    int fallback_steps = 0;
};

/// Thrown when the objective becomes non-finite; carries the last valid iterate.
class OptimizationError : public NumericError {
public:
    OptimizationError(const std::string& what, SpherePoint last) : NumericError(what), last_(std::move(last)) {}
    [[nodiscard]] const SpherePoint& last_iterate() const noexcept { return last_; }

private:
    SpherePoint last_;
};

/// Iterates newton_step until the tangent gradient norm is <= tol or max_iter
/// iterations have run.
[[nodiscard]] NewtonReport newton_optimize(const SphereObjective& objective, const SpherePoint& q0, double tol,
                                           int max_iter);

}  // namespace chi2dens
