#include "chi2dens/kl_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chi2dens/dataset.hpp"
#include "chi2dens/error.hpp"

namespace chi2dens {

namespace {

constexpr double kPi = std::numbers::pi;

double axis_value(int i, double x) noexcept {
    return i == 0 ? 1.0 : std::numbers::sqrt2 * std::cos(kPi * i * x);
}

}  // namespace

MaternHyper::MaternHyper(double sigma_, double alpha_, double s_, int dim_)
    : sigma(sigma_), alpha(alpha_), s(s_), dim(dim_) {
    validate();
}

void MaternHyper::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("Matern sigma must be positive");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("Matern alpha must be positive");
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("Matern smoothness s must be positive");
    if (dim != 1 && dim != 2) throw ConfigError("dimension must be 1 or 2, got " + std::to_string(dim));
}

double eigenvalue(const MaternHyper& hyper, const MultiIndex& index) {
    if (index.i1 < 0 || index.i2 < 0) throw ConfigError("basis index components must be non-negative");
    const double freq2 = static_cast<double>(index.i1) * index.i1 +
                         (hyper.dim == 2 ? static_cast<double>(index.i2) * index.i2 : 0.0);
    return hyper.sigma * hyper.sigma * std::pow(hyper.alpha + kPi * kPi * freq2, -hyper.s);
}

double axis_normalizer(int i) noexcept { return i == 0 ? 1.0 : std::numbers::sqrt2; }

double eigenfunction_sup(const MultiIndex& index, int dim) noexcept {
    return dim == 1 ? axis_normalizer(index.i1) : axis_normalizer(index.i1) * axis_normalizer(index.i2);
}

void check_in_unit_domain(std::span<const double> x) {
    for (std::size_t d = 0; d < x.size(); ++d) {
        if (!(x[d] >= -kDomainTolerance && x[d] <= 1.0 + kDomainTolerance)) {
            throw DomainError("coordinate " + std::to_string(d) + " = " + std::to_string(x[d]) +
                                  " lies outside [0,1]",
                              d);
        }
    }
}

double eigenfunction_unchecked(const MultiIndex& index, std::span<const double> x) noexcept {
    if (x.size() == 1) return axis_value(index.i1, x[0]);
    return axis_value(index.i1, x[0]) * axis_value(index.i2, x[1]);
}

double eigenfunction(const MultiIndex& index, std::span<const double> x) {
    if (x.size() != 1 && x.size() != 2) throw ConfigError("points must have 1 or 2 coordinates");
    check_in_unit_domain(x);
    return eigenfunction_unchecked(index, x);
}

BasisSpec::BasisSpec(const MaternHyper& hyper, int max_index) : hyper_(hyper), max_index_(max_index) {
    hyper_.validate();
    if (max_index < 0) throw ConfigError("truncation index must be non-negative");
    if (hyper_.dim == 1) {
        for (int i = 0; i <= max_index; ++i) indices_.push_back({i, 0});
    } else {
        for (int i1 = 0; i1 <= max_index; ++i1)
            for (int i2 = 0; i2 <= max_index; ++i2) indices_.push_back({i1, i2});
    }
    eigenvalues_.resize(static_cast<Eigen::Index>(indices_.size()));
    for (std::size_t b = 0; b < indices_.size(); ++b) {
        eigenvalues_[static_cast<Eigen::Index>(b)] = eigenvalue(hyper_, indices_[b]);
    }
    if (!(eigenvalues_.array() > 0.0).all()) {
        throw NumericError("prior eigenvalue underflowed to zero; reduce the truncation index");
    }
}

Eigen::VectorXd BasisSpec::evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim()) throw ConfigError("point dimension does not match the basis");
    check_in_unit_domain(x);
    Eigen::VectorXd row(static_cast<Eigen::Index>(size()));
    for (std::size_t b = 0; b < size(); ++b) {
        row[static_cast<Eigen::Index>(b)] = eigenfunction_unchecked(indices_[b], x);
    }
    return row;
}

Eigen::VectorXd BasisSpec::sup_bounds() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
    for (std::size_t b = 0; b < size(); ++b) {
        out[static_cast<Eigen::Index>(b)] = eigenfunction_sup(indices_[b], dim());
    }
    return out;
}

DesignMatrix build_design_matrix(const BasisSpec& spec, const Eigen::MatrixXd& points) {
    if (points.rows() > 0 && points.cols() != spec.dim()) {
        throw ConfigError("data dimension does not match the basis dimension");
    }
    const auto n_points = points.rows();
    const auto n_basis = static_cast<Eigen::Index>(spec.size());
    RowMatrix values(n_points, n_basis);
    std::vector<double> x(static_cast<std::size_t>(spec.dim()));
    for (Eigen::Index n = 0; n < n_points; ++n) {
        for (int d = 0; d < spec.dim(); ++d) x[static_cast<std::size_t>(d)] = points(n, d);
        try {
            check_in_unit_domain(x);
        } catch (const DomainError& e) {
            throw DomainError("row " + std::to_string(n) + ": " + e.what(), e.coordinate());
        }
        for (Eigen::Index b = 0; b < n_basis; ++b) {
            values(n, b) = eigenfunction_unchecked(spec.indices()[static_cast<std::size_t>(b)], x);
        }
    }
    return DesignMatrix(std::move(values));
}

DesignMatrix build_design_matrix(const BasisSpec& spec, const Dataset& data) {
    return build_design_matrix(spec, data.points());
}

std::span<const double> QuadratureGrid::node(std::size_t m) const {
    const auto dim = static_cast<std::size_t>(nodes.cols());
    return {flat_.data() + m * dim, dim};
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, refined by Newton on P_n.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        nodes[lo] = -x;
        nodes[hi] = x;
        weights[lo] = w;
        weights[hi] = w;
    }
    if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

QuadratureGrid quadrature_grid(int dim, int level) {
    if (level < 2) throw ConfigError("quadrature level must be at least 2");
    if (dim != 1 && dim != 2) throw ConfigError("quadrature dimension must be 1 or 2");
    std::vector<double> x;
    std::vector<double> w;
    gauss_legendre(level, x, w);
    for (auto& v : x) v = 0.5 * (v + 1.0);
    for (auto& v : w) v *= 0.5;

    QuadratureGrid grid;
    const auto n = static_cast<Eigen::Index>(level);
    if (dim == 1) {
        grid.nodes.resize(n, 1);
        grid.weights.resize(n);
        for (Eigen::Index m = 0; m < n; ++m) {
            grid.nodes(m, 0) = x[static_cast<std::size_t>(m)];
            grid.weights[m] = w[static_cast<std::size_t>(m)];
        }
    } else {
        grid.nodes.resize(n * n, 2);
        grid.weights.resize(n * n);
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = 0; b < n; ++b) {
                const Eigen::Index m = a * n + b;
                grid.nodes(m, 0) = x[static_cast<std::size_t>(a)];
                grid.nodes(m, 1) = x[static_cast<std::size_t>(b)];
                grid.weights[m] = w[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(b)];
            }
        }
    }
    grid.flat_.resize(static_cast<std::size_t>(grid.nodes.size()));
    for (Eigen::Index m = 0; m < grid.nodes.rows(); ++m)
        for (Eigen::Index d = 0; d < grid.nodes.cols(); ++d)
            grid.flat_[static_cast<std::size_t>(m * grid.nodes.cols() + d)] = grid.nodes(m, d);
    return grid;
}

double orthonormality_residual(const BasisSpec& spec, const QuadratureGrid& grid) {
    const DesignMatrix phi = build_design_matrix(spec, grid.nodes);
    // Gram = Phi^T W Phi
    const Eigen::MatrixXd weighted = grid.weights.asDiagonal() * phi.values();
    const Eigen::MatrixXd gram = phi.values().transpose() * weighted;
    const Eigen::MatrixXd residual = gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
    return residual.cwiseAbs().maxCoeff();
}

}  // namespace chi2dens
