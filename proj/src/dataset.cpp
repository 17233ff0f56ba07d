#include "chi2dens/dataset.hpp"

#include <cmath>
#include <string>

#include "chi2dens/error.hpp"
#include "chi2dens/kl_basis.hpp"

namespace chi2dens {

Dataset Dataset::from_unit(Eigen::MatrixXd points) {
    Dataset data;
    const auto dim = static_cast<std::size_t>(points.cols());
    data.rescale_.assign(dim, AxisMap{});
    data.raw_min_.assign(dim, 0.0);
    data.raw_max_.assign(dim, 1.0);
    for (Eigen::Index d = 0; d < points.cols() && points.rows() > 0; ++d) {
        data.raw_min_[static_cast<std::size_t>(d)] = points.col(d).minCoeff();
        data.raw_max_[static_cast<std::size_t>(d)] = points.col(d).maxCoeff();
    }
    data.points_ = std::move(points);
    data.validate();
    return data;
}

Dataset Dataset::from_raw(const Eigen::MatrixXd& raw_points, double delta) {
    if (raw_points.rows() < 2) {
        throw ConfigError("insufficient data: at least two points are required, got " +
                          std::to_string(raw_points.rows()));
    }
    if (!(delta >= 0.0 && delta < 0.5)) {
        throw ConfigError("rescale padding must lie in [0, 0.5)");
    }
    if (!raw_points.allFinite()) {
        throw NumericError("non-finite coordinate in raw data");
    }
    Dataset data;
    const auto dim = static_cast<std::size_t>(raw_points.cols());
    data.rescale_.resize(dim);
    data.raw_min_.resize(dim);
    data.raw_max_.resize(dim);
    data.points_.resize(raw_points.rows(), raw_points.cols());
    for (std::size_t d = 0; d < dim; ++d) {
        const auto col = raw_points.col(static_cast<Eigen::Index>(d));
        const double lo = col.minCoeff();
        const double hi = col.maxCoeff();
        if (!(hi > lo)) {
            throw ConfigError("axis " + std::to_string(d) + " has zero width; cannot rescale");
        }
        const double scale = (hi - lo) / (1.0 - 2.0 * delta);
        const AxisMap map{lo - delta * scale, scale};
        data.rescale_[d] = map;
        data.raw_min_[d] = lo;
        data.raw_max_[d] = hi;
        for (Eigen::Index n = 0; n < raw_points.rows(); ++n) {
            data.points_(n, static_cast<Eigen::Index>(d)) = map.to_unit(col[n]);
        }
    }
    data.validate();
    return data;
}

Dataset::Dataset(Eigen::MatrixXd unit_points, std::vector<AxisMap> rescale,
                 std::vector<double> raw_min, std::vector<double> raw_max)
    : points_(std::move(unit_points)),
      rescale_(std::move(rescale)),
      raw_min_(std::move(raw_min)),
      raw_max_(std::move(raw_max)) {
    validate();
}

void Dataset::validate() const {
    const auto dim = static_cast<std::size_t>(points_.cols());
    if (dim != 1 && dim != 2) {
        throw ConfigError("dataset dimension must be 1 or 2, got " + std::to_string(dim));
    }
    if (rescale_.size() != dim || raw_min_.size() != dim || raw_max_.size() != dim) {
        throw ConfigError("rescale map does not match the dataset dimension");
    }
    for (const auto& map : rescale_) {
        if (!(map.scale > 0.0) || !std::isfinite(map.offset) || !std::isfinite(map.scale)) {
            throw ConfigError("rescale scale must be positive and finite");
        }
    }
    for (Eigen::Index n = 0; n < points_.rows(); ++n) {
        for (Eigen::Index d = 0; d < points_.cols(); ++d) {
            const double v = points_(n, d);
            if (!(v >= -kDomainTolerance && v <= 1.0 + kDomainTolerance)) {
                throw DomainError("point " + std::to_string(n) + " coordinate " + std::to_string(d) +
                                      " = " + std::to_string(v) + " lies outside [0,1]",
                                  static_cast<std::size_t>(d));
            }
        }
    }
}

std::vector<double> Dataset::point(std::size_t n) const {
    std::vector<double> out(static_cast<std::size_t>(points_.cols()));
    for (Eigen::Index d = 0; d < points_.cols(); ++d) {
        out[static_cast<std::size_t>(d)] = points_(static_cast<Eigen::Index>(n), d);
    }
    return out;
}

std::vector<double> Dataset::to_raw(std::span<const double> unit) const {
    std::vector<double> out(unit.size());
    for (std::size_t d = 0; d < unit.size(); ++d) out[d] = rescale_.at(d).to_raw(unit[d]);
    return out;
}

std::vector<double> Dataset::to_unit(std::span<const double> raw) const {
    std::vector<double> out(raw.size());
    for (std::size_t d = 0; d < raw.size(); ++d) out[d] = rescale_.at(d).to_unit(raw[d]);
    return out;
}

double Dataset::jacobian() const noexcept {
    double j = 1.0;
    for (const auto& map : rescale_) j *= map.scale;
    return j;
}

}  // namespace chi2dens
