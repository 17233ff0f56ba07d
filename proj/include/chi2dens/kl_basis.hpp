#pragma once

// Karhunen-Loeve eigen-pairs of the Matern covariance operator
// K = sigma^2 (alpha - Laplacian)^(-s) on the unit interval and unit square
// (Neumann cosine eigenfunctions), plus the quadrature used to check them.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace chi2dens {

class Dataset;

/// Boundary slack used whenever a point is validated against [0,1]^dim.
inline constexpr double kDomainTolerance = 1e-12;

struct MaternHyper {
    double sigma = 0.5;
    double alpha = 1.0;
    double s = 1.0;
    int dim = 1;

    MaternHyper() = default;
    /// Throws ConfigError unless sigma, alpha, s > 0 and dim is 1 or 2.
    MaternHyper(double sigma, double alpha, double s, int dim);

    void validate() const;
};

/// Frequency index of a basis element. In 1D only `i1` is used.
struct MultiIndex {
    int i1 = 0;
    int i2 = 0;

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// sigma^2 (alpha + pi^2 |i|^2)^(-s).
[[nodiscard]] double eigenvalue(const MaternHyper& hyper, const MultiIndex& index);

/// Per-axis normalizer: 1 for the constant mode, sqrt(2) otherwise.
[[nodiscard]] double axis_normalizer(int i) noexcept;

/// sup |phi_index| over the domain.
[[nodiscard]] double eigenfunction_sup(const MultiIndex& index, int dim) noexcept;

/// L2-orthonormal cosine eigenfunction. The dimension is taken from x.size().
/// Throws DomainError if a coordinate leaves [0,1] by more than the tolerance.
[[nodiscard]] double eigenfunction(const MultiIndex& index, std::span<const double> x);

/// Same as eigenfunction() without domain validation.
[[nodiscard]] double eigenfunction_unchecked(const MultiIndex& index, std::span<const double> x) noexcept;

/// Throws DomainError naming the first offending coordinate.
void check_in_unit_domain(std::span<const double> x);

/// Truncated basis: indices and prior variances lambda_i^2.
///
/// 1D holds i = 0..max_index; 2D holds every pair 0 <= i1, i2 <= max_index in
/// lexicographic order, so the coefficient layout is stable across runs.
class BasisSpec {
public:
    BasisSpec(const MaternHyper& hyper, int max_index);

    [[nodiscard]] const MaternHyper& hyper() const noexcept { return hyper_; }
    [[nodiscard]] int dim() const noexcept { return hyper_.dim; }
    [[nodiscard]] int max_index() const noexcept { return max_index_; }
    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
    [[nodiscard]] const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

    /// Row of all basis values at x.
    [[nodiscard]] Eigen::VectorXd evaluate(std::span<const double> x) const;

    /// Coordinate-wise sup bound of each basis element (1 or sqrt(2) per axis).
    [[nodiscard]] Eigen::VectorXd sup_bounds() const;

private:
    MaternHyper hyper_;
    int max_index_;
    std::vector<MultiIndex> indices_;
    Eigen::VectorXd eigenvalues_;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Eigenfunction values at the observations, one row per point.
class DesignMatrix {
public:
    DesignMatrix() = default;
    explicit DesignMatrix(RowMatrix values) : values_(std::move(values)) {}

    [[nodiscard]] const RowMatrix& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t point_count() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    [[nodiscard]] std::size_t basis_size() const noexcept { return static_cast<std::size_t>(values_.cols()); }

private:
    RowMatrix values_;
};

/// Throws DomainError (message carries the row) when a point is outside the domain.
[[nodiscard]] DesignMatrix build_design_matrix(const BasisSpec& spec, const Dataset& data);

/// Same, from a raw N x dim point matrix already in unit coordinates.
[[nodiscard]] DesignMatrix build_design_matrix(const BasisSpec& spec, const Eigen::MatrixXd& points);

/// Gauss-Legendre rule on [0,1]^dim (tensor product in 2D).
struct QuadratureGrid {
    Eigen::MatrixXd nodes;   ///< M x dim
    Eigen::VectorXd weights; ///< M

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(weights.size()); }
    [[nodiscard]] std::span<const double> node(std::size_t m) const;

    /// Sum of w_m f(x_m).
    template <typename F>
    [[nodiscard]] double integrate(F&& f) const {
        double total = 0.0;
        for (std::size_t m = 0; m < size(); ++m) {
            total += weights[static_cast<Eigen::Index>(m)] * f(node(m));
        }
        return total;
    }

private:
    // row-major copy of nodes for span access
    std::vector<double> flat_;
    friend QuadratureGrid quadrature_grid(int dim, int level);
};

inline constexpr int kDefaultQuadratureLevel1d = 256;
inline constexpr int kDefaultQuadratureLevel2d = 64;

/// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// `level` nodes per axis; throws ConfigError if level < 2 or dim not in {1,2}.
[[nodiscard]] QuadratureGrid quadrature_grid(int dim, int level);

/// Largest |<phi_a, phi_b> - delta_ab| over all pairs of the basis.
[[nodiscard]] double orthonormality_residual(const BasisSpec& spec, const QuadratureGrid& grid);

}  // namespace chi2dens
