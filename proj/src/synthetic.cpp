#include "chi2dens/synthetic.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/random/beta_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "chi2dens/error.hpp"

namespace chi2dens {
namespace {

constexpr int kMaxRejections = 1000000;

bool inside(double x, double y) { return x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0; }

double param(const nlohmann::json& params, const char* key, double fallback) {
    if (!params.is_object() || !params.contains(key)) return fallback;
    if (!params.at(key).is_number()) throw ConfigError(std::string("parameter '") + key + "' must be a number");
    return params.at(key).get<double>();
}

std::vector<GaussianComponent> default_mixture() {
    return {{0.5, {0.3, 0.3}, {0.1, 0.1}}, {0.3, {0.7, 0.65}, {0.08, 0.12}}, {0.2, {0.25, 0.8}, {0.06, 0.06}}};
}

std::vector<GaussianComponent> parse_mixture(const nlohmann::json& params) {
    if (!params.is_object() || !params.contains("components")) return default_mixture();
    std::vector<GaussianComponent> out;
    try {
        for (const auto& c : params.at("components")) {
            GaussianComponent g;
            g.weight = c.at("weight").get<double>();
            for (int k = 0; k < 2; ++k) {
                g.mean[k] = c.at("mean").at(static_cast<std::size_t>(k)).get<double>();
                g.sd[k] = c.at("sd").at(static_cast<std::size_t>(k)).get<double>();
            }
            out.push_back(g);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid mixture components: ") + e.what());
    }
    return out;
}

}  // namespace

Eigen::MatrixXd sample_beta(double a, double b, std::size_t n, Rng& rng) {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("beta parameters must be positive");
    boost::random::beta_distribution<double> dist(a, b);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), 1);
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, 0) = dist(rng);
    return out;
}

Eigen::MatrixXd sample_trunc_gauss_mixture_2d(const std::vector<GaussianComponent>& components, std::size_t n,
                                              Rng& rng) {
    if (components.empty()) throw ConfigError("mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.weight > 0.0) || !(c.sd[0] > 0.0) || !(c.sd[1] > 0.0))
            throw ConfigError("mixture weights and standard deviations must be positive");
        total += c.weight;
    }
    boost::random::uniform_01<double> unif;
    boost::random::normal_distribution<double> normal;
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxRejections) throw ConfigError("mixture has negligible mass inside the unit square");
            double u = unif(rng) * total;
            std::size_t k = 0;
            while (k + 1 < components.size() && u >= components[k].weight) u -= components[k++].weight;
            const auto& c = components[k];
            const double x = c.mean[0] + c.sd[0] * normal(rng);
            const double y = c.mean[1] + c.sd[1] * normal(rng);
            if (inside(x, y)) {
                out.row(i) << x, y;
                break;
            }
        }
    }
    return out;
}

Eigen::MatrixXd sample_noisy_circle_2d(double cx, double cy, double r0, double noise, std::size_t n, Rng& rng) {
    if (!(r0 > 0.0) || !(noise >= 0.0)) throw ConfigError("circle radius must be positive and noise non-negative");
    if (!inside(cx, cy)) throw ConfigError("circle centre must lie in the unit square");
    boost::random::uniform_01<double> unif;
    boost::random::normal_distribution<double> normal;
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxRejections) throw ConfigError("circle lies almost entirely outside the unit square");
            const double theta = 2.0 * std::numbers::pi * unif(rng);
            const double r = r0 + noise * normal(rng);
            const double x = cx + r * std::cos(theta);
            const double y = cy + r * std::sin(theta);
            if (inside(x, y)) {
                out.row(i) << x, y;
                break;
            }
        }
    }
    return out;
}

Eigen::MatrixXd sample_bramble_like_2d(int parents, double spread, std::size_t n, Rng& rng) {
    if (parents < 1 || !(spread > 0.0)) throw ConfigError("bramble_like_2d needs parents >= 1 and spread > 0");
    boost::random::uniform_01<double> unif;
    boost::random::normal_distribution<double> normal;
    Eigen::MatrixXd centres(parents, 2);
    for (int p = 0; p < parents; ++p) centres.row(p) << unif(rng), unif(rng);
    boost::random::uniform_int_distribution<int> pick(0, parents - 1);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (;;) {
            const int p = pick(rng);
            const double x = centres(p, 0) + spread * normal(rng);
            const double y = centres(p, 1) + spread * normal(rng);
            if (inside(x, y)) {
                out.row(i) << x, y;
                break;
            }
        }
    }
    return out;
}

Eigen::MatrixXd generate_synthetic(const std::string& name, const nlohmann::json& params, std::size_t n,
                                   std::uint64_t seed) {
    Rng rng = make_rng(seed);
    if (name == "beta") return sample_beta(param(params, "a", 2.0), param(params, "b", 2.0), n, rng);
    if (name == "trunc_gauss_mixture_2d") return sample_trunc_gauss_mixture_2d(parse_mixture(params), n, rng);
    if (name == "noisy_circle_2d") {
        return sample_noisy_circle_2d(param(params, "cx", 0.5), param(params, "cy", 0.5), param(params, "r0", 0.3),
                                      param(params, "noise", 0.03), n, rng);
    }
    if (name == "bramble_like_2d") {
        return sample_bramble_like_2d(static_cast<int>(param(params, "parents", 25)), param(params, "spread", 0.04),
                                      n, rng);
    }
    throw ConfigError("unknown generator '" + name + "'");
}

double synthetic_density(const std::string& name, const nlohmann::json& params, double x) {
    if (name != "beta") throw ConfigError("no closed-form density for generator '" + name + "'");
    const double a = param(params, "a", 2.0);
    const double b = param(params, "b", 2.0);
    if (x <= 0.0 || x >= 1.0) {
        if ((x <= 0.0 && a < 1.0) || (x >= 1.0 && b < 1.0)) return std::numeric_limits<double>::infinity();
        if ((x <= 0.0 && a > 1.0) || (x >= 1.0 && b > 1.0)) return 0.0;
    }
    return boost::math::ibeta_derivative(a, b, x);
}

}  // namespace chi2dens
