#include "chi2dens/posterior_analysis.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "chi2dens/error.hpp"

namespace chi2dens {

Eigen::MatrixXd uniform_grid(int dim, int resolution) {
    if (resolution < 2) throw ConfigError("grid resolution must be at least 2");
    const Eigen::VectorXd axis = Eigen::VectorXd::LinSpaced(resolution, 0.0, 1.0);
    if (dim == 1) return axis;
    if (dim != 2) throw ConfigError("grid dimension must be 1 or 2");
    Eigen::MatrixXd nodes(static_cast<Eigen::Index>(resolution) * resolution, 2);
    for (int a = 0; a < resolution; ++a) {
        for (int b = 0; b < resolution; ++b) {
            nodes(a * resolution + b, 0) = axis[a];
            nodes(a * resolution + b, 1) = axis[b];
        }
    }
    return nodes;
}

namespace {

Eigen::MatrixXd coefficient_matrix(const Chain& chain, const BasisSpec& basis) {
    if (chain.draws.empty()) throw ConfigError("chain has no stored draws");
    Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(chain.size()));
    for (std::size_t d = 0; d < chain.size(); ++d) {
        if (static_cast<std::size_t>(chain.draws[d].size()) != basis.size()) {
            throw ConfigError("draw " + std::to_string(d) + " does not match the basis size");
        }
        coeffs.col(static_cast<Eigen::Index>(d)) = chain.draws[d];
    }
    return coeffs;
}

void check_probabilities(const std::vector<double>& probabilities) {
    if (probabilities.empty()) throw ConfigError("quantile list is empty");
    for (double p : probabilities) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("quantile probabilities must lie in [0,1]");
    }
}

void summarize_block(const Eigen::MatrixXd& block_values, Eigen::Index offset,
                     const std::vector<double>& probabilities, SummaryTable& table) {
    std::vector<double> column(static_cast<std::size_t>(block_values.rows()));
    for (Eigen::Index m = 0; m < block_values.cols(); ++m) {
        // fixed draw order keeps the mean reproducible
        double sum = 0.0;
        for (Eigen::Index d = 0; d < block_values.rows(); ++d) {
            column[static_cast<std::size_t>(d)] = block_values(d, m);
            sum += block_values(d, m);
        }
        table.mean[offset + m] = sum / static_cast<double>(block_values.rows());
        for (std::size_t k = 0; k < probabilities.size(); ++k) {
            table.quantiles(static_cast<Eigen::Index>(k), offset + m) = interpolated_quantile(column, probabilities[k]);
        }
    }
}

}  // namespace

DensityGrid evaluate_draws(const Chain& chain, const BasisSpec& basis, const Eigen::MatrixXd& nodes) {
    const Eigen::MatrixXd coeffs = coefficient_matrix(chain, basis);
    const DesignMatrix phi = build_design_matrix(basis, nodes);
    DensityGrid grid;
    grid.nodes = nodes;
    grid.values = (phi.values() * coeffs).transpose().array().square();
    return grid;
}

double interpolated_quantile(std::vector<double>& values, double p) {
    if (values.empty()) throw ConfigError("cannot take a quantile of no values");
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
    const double lower = values[lo];
    if (hi == lo) return lower;
    const double upper = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
    return lower + (h - static_cast<double>(lo)) * (upper - lower);
}

SummaryTable pointwise_summary(const Eigen::MatrixXd& values, const std::vector<double>& probabilities) {
    check_probabilities(probabilities);
    if (values.rows() == 0) throw ConfigError("no draws to summarize");
    SummaryTable table;
    table.probabilities = probabilities;
    table.mean.resize(values.cols());
    table.quantiles.resize(static_cast<Eigen::Index>(probabilities.size()), values.cols());
    summarize_block(values, 0, probabilities, table);
    return table;
}

SummaryTable summarize_chain(const Chain& chain, const BasisSpec& basis, const Eigen::MatrixXd& nodes,
                             const std::vector<double>& probabilities, std::size_t block) {
    check_probabilities(probabilities);
    const Eigen::MatrixXd coeffs = coefficient_matrix(chain, basis);
    if (block == 0) block = 1;
    SummaryTable table;
    table.probabilities = probabilities;
    table.mean.resize(nodes.rows());
    table.quantiles.resize(static_cast<Eigen::Index>(probabilities.size()), nodes.rows());
    for (Eigen::Index start = 0; start < nodes.rows(); start += static_cast<Eigen::Index>(block)) {
        const Eigen::Index len = std::min<Eigen::Index>(static_cast<Eigen::Index>(block), nodes.rows() - start);
        const DesignMatrix phi = build_design_matrix(basis, Eigen::MatrixXd(nodes.middleRows(start, len)));
        const Eigen::MatrixXd values = (phi.values() * coeffs).transpose().array().square();
        summarize_block(values, start, probabilities, table);
    }
    return table;
}

double rejection_envelope(const Eigen::VectorXd& coeffs, const BasisSpec& basis) {
    const double bound = coeffs.cwiseAbs().dot(basis.sup_bounds());
    return bound * bound;
}

Eigen::MatrixXd sample_from_draw(const Eigen::VectorXd& coeffs, const BasisSpec& basis, std::size_t count, Rng& rng) {
    if (static_cast<std::size_t>(coeffs.size()) != basis.size()) throw ConfigError("coefficients do not match basis");
    boost::random::uniform_01<double> uniform;
    const double envelope = rejection_envelope(coeffs, basis);
    const int dim = basis.dim();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(count), dim);
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (std::size_t k = 0; k < count; ++k) {
        for (;;) {
            for (auto& c : x) c = uniform(rng);
            const double q = basis.evaluate(x).dot(coeffs);
            if (uniform(rng) * envelope <= q * q) break;
        }
        for (int d = 0; d < dim; ++d) out(static_cast<Eigen::Index>(k), d) = x[static_cast<std::size_t>(d)];
    }
    return out;
}

Eigen::MatrixXd predictive_sample(const Chain& chain, const BasisSpec& basis, std::size_t count, Rng& rng) {
    if (chain.draws.empty()) throw ConfigError("chain has no stored draws");
    boost::random::uniform_int_distribution<std::size_t> pick(0, chain.size() - 1);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(count), basis.dim());
    for (std::size_t k = 0; k < count; ++k) {
        const auto& coeffs = chain.draws[pick(rng)];
        out.row(static_cast<Eigen::Index>(k)) = sample_from_draw(coeffs, basis, 1, rng).row(0);
    }
    return out;
}

}  // namespace chi2dens
