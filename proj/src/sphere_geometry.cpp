#include "chi2dens/sphere_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace chi2dens {

SpherePoint renormalized(Eigen::VectorXd v) {
    const double n = v.norm();
    v /= n;
    return SpherePoint(std::move(v), SpherePoint::Trusted{});
}

SpherePoint::SpherePoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
    if (!coords_.allFinite()) throw NumericError("sphere point has non-finite coordinates");
    const double n = coords_.norm();
    if (std::abs(n - 1.0) > kSphereTolerance) {
        throw NumericError("sphere point has norm " + std::to_string(n) + ", expected 1");
    }
}

SpherePoint SpherePoint::normalized(const Eigen::VectorXd& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericError("cannot normalize a zero or non-finite vector");
    return SpherePoint(v / n, Trusted{});
}

SpherePoint SpherePoint::basis_vector(std::size_t size, std::size_t k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size));
    e[static_cast<Eigen::Index>(k)] = 1.0;
    return SpherePoint(std::move(e), Trusted{});
}

TangentVector::TangentVector(const SpherePoint& base, Eigen::VectorXd coords) : coords_(std::move(coords)) {
    if (coords_.size() != base.size()) throw NumericError("tangent vector dimension mismatch");
    const double dot = coords_.dot(base.coords());
    if (std::abs(dot) > kSphereTolerance * std::max(1.0, coords_.norm())) {
        throw NumericError("vector is not tangent: <v, q> = " + std::to_string(dot));
    }
}

TangentVector project_to_tangent(const SpherePoint& q, const Eigen::VectorXd& w) {
    if (w.size() != q.size()) throw NumericError("tangent projection dimension mismatch");
    return TangentVector::trusted(w - q.coords() * q.coords().dot(w));
}

GeodesicState geodesic_flow(const SpherePoint& q, const TangentVector& v, double t) {
    const double speed = v.norm();
    if (speed == 0.0) return {q, v};
    const double c = std::cos(speed * t);
    const double s = std::sin(speed * t);
    Eigen::VectorXd position = q.coords() * c + v.coords() * (s / speed);
    Eigen::VectorXd velocity = q.coords() * (-speed * s) + v.coords() * c;
    return {renormalized(std::move(position)), TangentVector::trusted(std::move(velocity))};
}

Eigen::MatrixXd directional_hessian(const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess,
                                    const SpherePoint& q) {
    if (hess.rows() != q.size() || hess.cols() != q.size() || grad.size() != q.size()) {
        throw NumericError("Hessian dimensions do not match the sphere point");
    }
    const double scale = std::max(1.0, hess.cwiseAbs().maxCoeff());
    if ((hess - hess.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw NumericError("Hessian is not symmetric");
    }
    Eigen::MatrixXd out = hess;
    out.diagonal().array() -= grad.dot(q.coords());
    return out;
}

Eigen::MatrixXd tangent_basis(const SpherePoint& q) {
    const Eigen::Index b = q.size();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(q.coords());
    const Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(b, b);
    return full.rightCols(b - 1);
}

namespace {

constexpr double kStationaryGradient = 1e-12;
constexpr double kInitialRidge = 1e-8;
constexpr double kRidgeGrowth = 10.0;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

bool not_worse(double candidate, double current) {
    // Accept changes at rounding level so converged iterates are not rejected.
    return candidate >= current - 1e-13 * std::max(1.0, std::abs(current));
}

double checked_value(const std::function<double(const Eigen::VectorXd&)>& value, const Eigen::VectorXd& x) {
    const double v = value(x);
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
        throw NumericError("objective returned a non-finite value");
    }
    return v;  // -inf is a legal "infinitely bad" value
}

}  // namespace

NewtonStepResult newton_step(const SpherePoint& q, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess,
                             const std::function<double(const Eigen::VectorXd&)>& value) {
    if (!grad.allFinite() || !hess.allFinite()) throw NumericError("non-finite gradient or Hessian in Newton step");
    const TangentVector tangent_grad = project_to_tangent(q, grad);
    const double gnorm = tangent_grad.norm();
    if (gnorm <= kStationaryGradient) return {q, NewtonStepKind::Stationary, 0.0};

    const double current = checked_value(value, q.coords());
    const Eigen::MatrixXd basis = tangent_basis(q);
    const Eigen::MatrixXd riem = directional_hessian(grad, hess, q);
    // Maximization: the reduced system -H_r y = g_r must be positive definite.
    const Eigen::MatrixXd neg_reduced = -(basis.transpose() * riem * basis);
    const Eigen::VectorXd reduced_grad = basis.transpose() * grad;
    const double ridge_cap = 1e8 * std::max(1.0, neg_reduced.cwiseAbs().maxCoeff());

    double ridge = 0.0;
    while (ridge <= ridge_cap) {
        Eigen::MatrixXd system = neg_reduced;
        system.diagonal().array() += ridge;
        Eigen::LLT<Eigen::MatrixXd> llt(system);
        if (llt.info() == Eigen::Success) {
            const Eigen::VectorXd y = llt.solve(reduced_grad);
            if (y.allFinite()) {
                const TangentVector velocity = project_to_tangent(q, basis * y);
                SpherePoint candidate = geodesic_flow(q, velocity, 1.0).position;
                if (not_worse(checked_value(value, candidate.coords()), current)) {
                    return {std::move(candidate), ridge == 0.0 ? NewtonStepKind::Newton : NewtonStepKind::Ridge,
                            ridge};
                }
            }
        }
        ridge = ridge == 0.0 ? kInitialRidge : ridge * kRidgeGrowth;
    }

    // Projected-gradient geodesic step with Armijo backtracking.
    const TangentVector direction = TangentVector::trusted(tangent_grad.coords() / gnorm);
    double angle = std::numbers::pi / 4.0;
    for (int k = 0; k < kMaxBacktracks; ++k, angle *= 0.5) {
        SpherePoint candidate = geodesic_flow(q, direction, angle).position;
        const double v = checked_value(value, candidate.coords());
        if (v >= current + kArmijo * angle * gnorm) {
            return {std::move(candidate), NewtonStepKind::GradientFallback, 0.0};
        }
    }
    return {q, NewtonStepKind::Stalled, 0.0};
}

SpherePoint newton_step(const SpherePoint& q, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess) {
    if (!grad.allFinite() || !hess.allFinite()) throw NumericError("non-finite gradient or Hessian in Newton step");
    const TangentVector tangent_grad = project_to_tangent(q, grad);
    if (tangent_grad.norm() <= kStationaryGradient) return q;
    const Eigen::MatrixXd basis = tangent_basis(q);
    const Eigen::MatrixXd reduced = basis.transpose() * directional_hessian(grad, hess, q) * basis;
    const Eigen::VectorXd reduced_grad = basis.transpose() * grad;
    const double ridge_cap = 1e8 * std::max(1.0, reduced.cwiseAbs().maxCoeff());
    for (double ridge = 0.0; ridge <= ridge_cap; ridge = ridge == 0.0 ? kInitialRidge : ridge * kRidgeGrowth) {
        // Ridge shifts towards the maximization side (H - delta I).
        Eigen::MatrixXd system = reduced;
        system.diagonal().array() -= ridge;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
        if (ldlt.info() != Eigen::Success) continue;
        const Eigen::VectorXd d = ldlt.vectorD();
        if ((d.array().abs() <= 1e-14 * std::max(1.0, d.cwiseAbs().maxCoeff())).any()) continue;
        const Eigen::VectorXd y = ldlt.solve(-reduced_grad);
        if (!y.allFinite()) continue;
        return geodesic_flow(q, project_to_tangent(q, basis * y), 1.0).position;
    }
    throw NumericError("Newton system could not be factorized");
}

NewtonReport newton_optimize(const SphereObjective& objective, const SpherePoint& q0, double tol, int max_iter) {
    if (!(tol > 0.0)) throw ConfigError("Newton tolerance must be positive");
    if (max_iter < 0) throw ConfigError("Newton iteration limit must be non-negative");
    NewtonReport report{q0};
    SpherePoint q = q0;
    for (int iter = 0;; ++iter) {
        Eigen::VectorXd grad;
        double value = 0.0;
        try {
            value = objective.value(q.coords());
            grad = objective.gradient(q.coords());
        } catch (const NumericError& e) {
            throw OptimizationError(std::string("objective failed during Newton iteration: ") + e.what(), q);
        }
        if (!std::isfinite(value) || !grad.allFinite()) {
            throw OptimizationError("objective returned a non-finite value", q);
        }
        report.point = q;
        report.value = value;
        report.iterations = iter;
        report.tangent_gradient_norm = project_to_tangent(q, grad).norm();
        if (report.tangent_gradient_norm <= tol) {
            report.converged = true;
            return report;
        }
        if (iter >= max_iter) return report;

        NewtonStepResult step{q};
        try {
            const Eigen::MatrixXd hess = objective.hessian(q.coords());
            step = newton_step(q, grad, hess, objective.value);
        } catch (const NumericError& e) {
            throw OptimizationError(std::string("Newton step failed: ") + e.what(), q);
        }
        if (step.kind == NewtonStepKind::GradientFallback) ++report.fallback_steps;
        if (step.kind == NewtonStepKind::Stalled || step.kind == NewtonStepKind::Stationary) {
            report.iterations = iter + 1;
            return report;
        }
        q = std::move(step.point);
    }
}

}  // namespace chi2dens
