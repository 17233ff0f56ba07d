#include "chi2dens/fisher_checks.hpp"

#include <cmath>
#include <memory>

#include <boost/random/normal_distribution.hpp>

#include "chi2dens/random.hpp"
#include "chi2dens/sphere_geometry.hpp"

namespace chi2dens {

DensityFunction::DensityFunction(PointFunction evaluator, int dim, int level)
    : evaluator_(std::move(evaluator)), dim_(dim), level_(level), grid_(quadrature_grid(dim, level)) {
    for (std::size_t m = 0; m < grid_.size(); ++m) {
        if (!(evaluator_(grid_.node(m)) >= 0.0)) {
            throw ConfigError("density is negative or undefined at quadrature node " + std::to_string(m));
        }
    }
    const double total = integral();
    if (std::abs(total - 1.0) > 1e-6) {
        throw ConfigError("density integrates to " + std::to_string(total) + ", expected 1");
    }
}

double DensityFunction::integral() const {
    return grid_.integrate([this](std::span<const double> x) { return evaluator_(x); });
}

TangentFunction::TangentFunction(PointFunction evaluator, int dim, int level)
    : evaluator_(std::move(evaluator)), dim_(dim) {
    const QuadratureGrid grid = quadrature_grid(dim, level);
    const double total = grid.integrate([this](std::span<const double> x) { return evaluator_(x); });
    if (std::abs(total) > 1e-8) {
        throw ConfigError("tangent function integrates to " + std::to_string(total) + ", expected 0");
    }
}

namespace {

double checked_density(const DensityFunction& p, std::size_t m) {
    const double value = p(p.grid().node(m));
    if (!(value >= kMetricFloor)) {
        throw SingularMetricError("density " + std::to_string(value) + " at quadrature node " + std::to_string(m) +
                                      " makes the Fisher metric singular",
                                  m);
    }
    return value;
}

void check_dims(const DensityFunction& p, const TangentFunction& phi, const TangentFunction& psi) {
    if (phi.dim() != p.dim() || psi.dim() != p.dim()) throw ConfigError("density and tangent dimensions differ");
}

}  // namespace

double fisher_metric(const DensityFunction& p, const TangentFunction& phi, const TangentFunction& psi) {
    check_dims(p, phi, psi);
    const auto& grid = p.grid();
    double total = 0.0;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const auto x = grid.node(m);
        total += grid.weights[static_cast<Eigen::Index>(m)] * phi(x) * psi(x) / checked_density(p, m);
    }
    return total;
}

double isometry_residual(const DensityFunction& p, const TangentFunction& phi, const TangentFunction& psi,
                         std::optional<int> l2_level) {
    const double metric = fisher_metric(p, phi, psi);
    double l2 = 0.0;
    if (!l2_level || *l2_level == p.level()) {
        const auto& grid = p.grid();
        for (std::size_t m = 0; m < grid.size(); ++m) {
            const auto x = grid.node(m);
            const double root = std::sqrt(checked_density(p, m));
            l2 += grid.weights[static_cast<Eigen::Index>(m)] * (phi(x) / root) * (psi(x) / root);
        }
    } else {
        const QuadratureGrid grid = quadrature_grid(p.dim(), *l2_level);
        for (std::size_t m = 0; m < grid.size(); ++m) {
            const auto x = grid.node(m);
            const double density = p(x);
            if (!(density >= kMetricFloor)) {
                throw SingularMetricError("density vanishes at L2 quadrature node " + std::to_string(m), m);
            }
            const double root = std::sqrt(density);
            l2 += grid.weights[static_cast<Eigen::Index>(m)] * (phi(x) / root) * (psi(x) / root);
        }
    }
    return std::abs(metric - l2);
}

DensityFunction density_geodesic(const DensityFunction& p0, const TangentFunction& f, double t) {
    if (f.dim() != p0.dim()) throw ConfigError("density and tangent dimensions differ");
    const auto& grid = p0.grid();
    double norm2 = 0.0;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const auto x = grid.node(m);
        const double u = f(x) / (2.0 * std::sqrt(checked_density(p0, m)));
        norm2 += grid.weights[static_cast<Eigen::Index>(m)] * u * u;
    }
    if (!(norm2 > 0.0)) throw NumericError("geodesic direction has zero norm");
    const double inv_norm = 1.0 / std::sqrt(norm2);
    const double c = std::cos(t);
    const double s = std::sin(t);
    // The evaluator owns copies of p0 and f so the result outlives its inputs.
    auto base = std::make_shared<DensityFunction>(p0);
    auto direction = std::make_shared<TangentFunction>(f);
    PointFunction evaluator = [base, direction, inv_norm, c, s](std::span<const double> x) {
        const double root = std::sqrt((*base)(x));
        const double u = root > 0.0 ? (*direction)(x) / (2.0 * root) * inv_norm : 0.0;
        const double q = root * c + u * s;
        return q * q;
    };
    return DensityFunction(std::move(evaluator), p0.dim(), p0.level());
}

ConvergenceReport geodesic_convergence_trial(int ambient, int truncation, std::uint64_t seed, double horizon,
                                             double speed) {
    if (truncation < 2 || truncation > ambient) throw ConfigError("truncation must satisfy 2 <= I <= ambient");
    if (!(horizon > 0.0)) throw ConfigError("time horizon must be positive");
    if (!(speed > 0.0)) throw ConfigError("speed must be positive");

    Rng rng = make_rng(seed);
    boost::random::normal_distribution<double> normal;
    const auto n = static_cast<Eigen::Index>(ambient);
    Eigen::VectorXd raw_q(n);
    Eigen::VectorXd raw_v(n);
    for (Eigen::Index i = 0; i < n; ++i) raw_q[i] = normal(rng) * std::pow(static_cast<double>(i + 1), -1.1);
    for (Eigen::Index i = 0; i < n; ++i) raw_v[i] = normal(rng) * std::pow(static_cast<double>(i + 1), -1.1);

    const SpherePoint q0 = SpherePoint::normalized(raw_q);
    Eigen::VectorXd v0 = project_to_tangent(q0, raw_v).coords();
    v0 *= speed / v0.norm();

    const auto k = static_cast<Eigen::Index>(truncation);
    const Eigen::VectorXd head_q = q0.coords().head(k);
    if (!(head_q.norm() > 0.0)) throw NumericError("degenerate truncation: truncated position has zero norm");
    const SpherePoint q0_trunc = SpherePoint::normalized(head_q);
    const Eigen::VectorXd tilde_v = project_to_tangent(q0_trunc, v0.head(k)).coords();
    if (!(tilde_v.norm() > 0.0)) throw NumericError("degenerate truncation: truncated velocity has zero norm");
    const TangentVector v0_trunc = TangentVector::trusted(tilde_v * (v0.norm() / tilde_v.norm()));
    const TangentVector v0_full = TangentVector::trusted(v0);

    ConvergenceReport report;
    report.truncation = truncation;
    report.times.resize(kConvergenceGridPoints);
    report.f.resize(kConvergenceGridPoints);
    const double rate = 1.0 - speed * speed;
    for (int g = 0; g < kConvergenceGridPoints; ++g) {
        const double t = horizon * g / (kConvergenceGridPoints - 1);
        const GeodesicState full = geodesic_flow(q0, v0_full, t);
        const GeodesicState part = geodesic_flow(q0_trunc, v0_trunc, t);
        Eigen::VectorXd dq = full.position.coords();
        Eigen::VectorXd dv = full.velocity.coords();
        dq.head(k) -= part.position.coords();
        dv.head(k) -= part.velocity.coords();
        const double value = dq.squaredNorm() + dv.squaredNorm();
        report.times[static_cast<std::size_t>(g)] = t;
        report.f[static_cast<std::size_t>(g)] = value;
    }
    report.f0 = report.f.front();
    report.max_f = 0.0;
    for (std::size_t g = 0; g < report.f.size(); ++g) {
        report.max_f = std::max(report.max_f, report.f[g]);
        if (report.f[g] > report.f0 * std::exp(report.times[g] * rate) + 1e-9) ++report.bound_violations;
        if (g > 0) {
            report.integral_f += 0.5 * (report.times[g] - report.times[g - 1]) * (report.f[g] + report.f[g - 1]);
        }
    }
    return report;
}

std::vector<ConvergenceReport> geodesic_convergence_table(int ambient, const std::vector<int>& truncations,
                                                          std::uint64_t seed, double horizon) {
    std::vector<ConvergenceReport> out;
    out.reserve(truncations.size());
    for (int truncation : truncations) out.push_back(geodesic_convergence_trial(ambient, truncation, seed, horizon));
    return out;
}

}  // namespace chi2dens
