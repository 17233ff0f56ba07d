#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code path it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

/// Classical RK4 on q'' = -|q'|^2 q, written as a first-order system.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> rk4_sphere_geodesic(Eigen::VectorXd q, Eigen::VectorXd v,
                                                                       double t_end, double h) {
    auto accel = [](const Eigen::VectorXd& pos, const Eigen::VectorXd& vel) -> Eigen::VectorXd {
        return -vel.squaredNorm() * pos;
    };
    const long steps = std::lround(t_end / h);
    for (long k = 0; k < steps; ++k) {
        const Eigen::VectorXd k1q = v;
        const Eigen::VectorXd k1v = accel(q, v);
        const Eigen::VectorXd k2q = v + 0.5 * h * k1v;
        const Eigen::VectorXd k2v = accel(q + 0.5 * h * k1q, v + 0.5 * h * k1v);
        const Eigen::VectorXd k3q = v + 0.5 * h * k2v;
        const Eigen::VectorXd k3v = accel(q + 0.5 * h * k2q, v + 0.5 * h * k2v);
        const Eigen::VectorXd k4q = v + h * k3v;
        const Eigen::VectorXd k4v = accel(q + h * k3q, v + h * k3v);
        q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return {q, v};
}

/// Central-difference gradient of f at x.
inline Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        Eigen::VectorXd plus = x;
        Eigen::VectorXd minus = x;
        plus[j] += h;
        minus[j] -= h;
        g[j] = (f(plus) - f(minus)) / (2.0 * h);
    }
    return g;
}

/// Unit eigenvector of the largest eigenvalue of a symmetric matrix.
inline Eigen::VectorXd top_eigenvector(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    return solver.eigenvectors().col(a.rows() - 1);
}

/// Asymptotic Kolmogorov-Smirnov p-value for statistic d with n samples.
inline double ks_pvalue(double d, std::size_t n) {
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

/// One-sample KS statistic against a continuous CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Batch-means standard error of the mean of a correlated series.
inline double batch_means_se(const std::vector<double>& xs, std::size_t batches = 50) {
    const std::size_t len = xs.size() / batches;
    std::vector<double> means(batches, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
        for (std::size_t i = 0; i < len; ++i) means[b] += xs[b * len + i];
        means[b] /= static_cast<double>(len);
    }
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(batches);
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= static_cast<double>(batches - 1);
    return std::sqrt(var / static_cast<double>(batches));
}

/// beta(2,2) density.
inline double beta22_pdf(double x) { return 6.0 * x * (1.0 - x); }

/// Plain cosine basis value written out independently of the library.
inline double cosine_mode(int i, double x) {
    return i == 0 ? 1.0 : std::sqrt(2.0) * std::cos(std::numbers::pi * i * x);
}

}  // namespace oracles
