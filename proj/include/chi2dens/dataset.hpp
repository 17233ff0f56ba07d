#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace chi2dens {

/// raw = offset + scale * unit on one axis.
struct AxisMap {
    double offset = 0.0;
    double scale = 1.0;

    [[nodiscard]] double to_raw(double unit) const noexcept { return offset + scale * unit; }
    [[nodiscard]] double to_unit(double raw) const noexcept { return (raw - offset) / scale; }
};

/// Padding applied when mapping raw data onto the unit domain, so the extreme
/// observations land on delta and 1 - delta instead of the boundary.
inline constexpr double kRescalePadding = 1e-6;

/// Observations in unit coordinates together with the affine map back to the
/// coordinates they were recorded in.
class Dataset {
public:
    /// Points already in [0,1]^dim (identity map). Throws DomainError otherwise.
    static Dataset from_unit(Eigen::MatrixXd points);

    /// Rescales raw points (N x dim) onto [delta, 1 - delta]^dim per axis.
    /// Throws ConfigError for fewer than two points or a zero-width axis.
    static Dataset from_raw(const Eigen::MatrixXd& raw_points, double delta = kRescalePadding);

    /// Explicit construction; validates every invariant.
    Dataset(Eigen::MatrixXd unit_points, std::vector<AxisMap> rescale,
            std::vector<double> raw_min, std::vector<double> raw_max);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(points_.cols()); }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
    [[nodiscard]] const Eigen::MatrixXd& points() const noexcept { return points_; }
    [[nodiscard]] const std::vector<AxisMap>& rescale() const noexcept { return rescale_; }
    [[nodiscard]] const std::vector<double>& raw_min() const noexcept { return raw_min_; }
    [[nodiscard]] const std::vector<double>& raw_max() const noexcept { return raw_max_; }

    [[nodiscard]] std::vector<double> point(std::size_t n) const;

    [[nodiscard]] std::vector<double> to_raw(std::span<const double> unit) const;
    [[nodiscard]] std::vector<double> to_unit(std::span<const double> raw) const;

    /// Product of the per-axis scales; raw density = unit density / jacobian.
    [[nodiscard]] double jacobian() const noexcept;

private:
    Dataset() = default;
    void validate() const;

    Eigen::MatrixXd points_;
    std::vector<AxisMap> rescale_;
    std::vector<double> raw_min_;
    std::vector<double> raw_max_;
};

}  // namespace chi2dens
