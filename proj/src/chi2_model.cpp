#include "chi2dens/chi2_model.hpp"

#include <cmath>

namespace chi2dens {

namespace {

void check_shapes(const Eigen::VectorXd& coeffs, const DesignMatrix& design) {
    if (design.point_count() > 0 && static_cast<Eigen::Index>(design.basis_size()) != coeffs.size()) {
        throw ConfigError("coefficient count " + std::to_string(coeffs.size()) +
                          " does not match design matrix width " + std::to_string(design.basis_size()));
    }
    if (!coeffs.allFinite()) throw NumericError("non-finite coefficient");
}

}  // namespace

SqrtDensityState::SqrtDensityState(SpherePoint coeffs, const BasisSpec& basis)
    : coeffs_(std::move(coeffs)), basis_(&basis) {
    if (static_cast<std::size_t>(coeffs_.size()) != basis.size()) {
        throw ConfigError("coefficient count does not match the basis size");
    }
}

double eval_sqrt_density(const SqrtDensityState& state, std::span<const double> x) {
    return state.basis().evaluate(x).dot(state.coeffs().coords());
}

double eval_density(const SqrtDensityState& state, std::span<const double> x) {
    const double q = eval_sqrt_density(state, x);
    return q * q;
}

double log_prior(const Eigen::VectorXd& coeffs, const Eigen::VectorXd& eigenvalues) {
    if (coeffs.size() != eigenvalues.size()) throw ConfigError("coefficient and eigenvalue counts differ");
    return -0.5 * (coeffs.array().square() / eigenvalues.array()).sum();
}

double log_likelihood_only(const Eigen::VectorXd& coeffs, const DesignMatrix& design) {
    check_shapes(coeffs, design);
    const auto& phi = design.values();
    double total = 0.0;
    for (Eigen::Index n = 0; n < phi.rows(); ++n) {
        const double q = phi.row(n).dot(coeffs);
        const double a = std::abs(q);
        if (a < kLogFloor) return -std::numeric_limits<double>::infinity();
        total += std::log(a);
    }
    return 2.0 * total;
}

double log_posterior(const Eigen::VectorXd& coeffs, const DesignMatrix& design, const Eigen::VectorXd& eigenvalues) {
    const double prior = log_prior(coeffs, eigenvalues);
    return log_likelihood_only(coeffs, design) + prior;
}

Eigen::VectorXd log_posterior_grad(const Eigen::VectorXd& coeffs, const DesignMatrix& design,
                                   const Eigen::VectorXd& eigenvalues) {
    check_shapes(coeffs, design);
    if (coeffs.size() != eigenvalues.size()) throw ConfigError("coefficient and eigenvalue counts differ");
    const auto& phi = design.values();
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(coeffs.size());
    for (Eigen::Index n = 0; n < phi.rows(); ++n) {
        const auto row = phi.row(n);
        const double q = row.dot(coeffs);
        if (std::abs(q) < kGradientFloor) {
            throw GradientSingularityError("square-root density vanishes at observation " + std::to_string(n),
                                           static_cast<std::size_t>(n));
        }
        grad.noalias() += row.transpose() / q;
    }
    grad *= 2.0;
    grad.array() -= coeffs.array() / eigenvalues.array();
    return grad;
}

Eigen::MatrixXd log_posterior_hessian(const Eigen::VectorXd& coeffs, const DesignMatrix& design,
                                      const Eigen::VectorXd& eigenvalues) {
    check_shapes(coeffs, design);
    const auto& phi = design.values();
    Eigen::VectorXd inv_q(phi.rows());
    for (Eigen::Index n = 0; n < phi.rows(); ++n) {
        const double q = phi.row(n).dot(coeffs);
        if (std::abs(q) < kGradientFloor) {
            throw GradientSingularityError("square-root density vanishes at observation " + std::to_string(n),
                                           static_cast<std::size_t>(n));
        }
        inv_q[n] = 1.0 / q;
    }
    const RowMatrix scaled = inv_q.asDiagonal() * phi;
    Eigen::MatrixXd hess = -2.0 * (scaled.transpose() * scaled);
    hess.diagonal().array() -= eigenvalues.array().inverse();
    return hess;
}

Chi2Posterior::Chi2Posterior(const DesignMatrix& design, const Eigen::VectorXd& eigenvalues)
    : design_(&design), eigenvalues_(&eigenvalues) {
    if (design.point_count() > 0 && static_cast<Eigen::Index>(design.basis_size()) != eigenvalues.size()) {
        throw ConfigError("design matrix width does not match the number of eigenvalues");
    }
}

double Chi2Posterior::log_density(const Eigen::VectorXd& q) const {
    return log_posterior(q, *design_, *eigenvalues_);
}

Eigen::VectorXd Chi2Posterior::gradient(const Eigen::VectorXd& q) const {
    return log_posterior_grad(q, *design_, *eigenvalues_);
}

Eigen::MatrixXd Chi2Posterior::hessian(const Eigen::VectorXd& q) const {
    return log_posterior_hessian(q, *design_, *eigenvalues_);
}

SphereObjective Chi2Posterior::objective() const {
    return {[this](const Eigen::VectorXd& q) { return log_density(q); },
            [this](const Eigen::VectorXd& q) { return gradient(q); },
            [this](const Eigen::VectorXd& q) { return hessian(q); }};
}

}  // namespace chi2dens
