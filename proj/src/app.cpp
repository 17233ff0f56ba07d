#include "chi2dens/app.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <set>
#include <thread>

#include "chi2dens/chi2_model.hpp"
#include "chi2dens/fisher_checks.hpp"
#include "chi2dens/io.hpp"
#include "chi2dens/posterior_analysis.hpp"
#include "chi2dens/sphere_geometry.hpp"
#include "chi2dens/synthetic.hpp"

namespace chi2dens {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& item : j.items())
        if (!known.contains(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

template <typename T>
void read_key(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

std::string quantile_name(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "q%g", p);
    return buf;
}

std::vector<std::string> coordinate_names(int dim, const char* suffix) {
    std::vector<std::string> names{std::string("x") + suffix};
    if (dim == 2) names.push_back(std::string("y") + suffix);
    return names;
}

double jacobian_of(const std::vector<AxisMap>& maps) {
    double j = 1.0;
    for (const auto& m : maps) j *= m.scale;
    return j;
}

Eigen::MatrixXd to_raw(const Eigen::MatrixXd& unit, const std::vector<AxisMap>& maps) {
    Eigen::MatrixXd raw(unit.rows(), unit.cols());
    for (Eigen::Index c = 0; c < unit.cols(); ++c)
        for (Eigen::Index r = 0; r < unit.rows(); ++r) raw(r, c) = maps[static_cast<std::size_t>(c)].to_raw(unit(r, c));
    return raw;
}

Chain pool(const std::vector<Chain>& chains) {
    Chain all;
    for (const auto& c : chains) {
        all.draws.insert(all.draws.end(), c.draws.begin(), c.draws.end());
        all.iteration.insert(all.iteration.end(), c.iteration.begin(), c.iteration.end());
        all.log_post_trace.insert(all.log_post_trace.end(), c.log_post_trace.begin(), c.log_post_trace.end());
    }
    return all;
}

struct SavedRun {
    json manifest;
    BasisSpec basis;
    std::vector<AxisMap> rescale;
    std::vector<Chain> chains;
    std::size_t points = 0;
};

SavedRun load_run(const std::filesystem::path& dir) {
    json manifest = read_json(dir / "manifest.json");
    try {
        BasisSpec basis = basis_from_json(manifest.at("basis"));
        std::vector<AxisMap> rescale = rescale_from_json(manifest.at("data").at("rescale"));
        std::vector<Chain> chains;
        for (const auto& c : manifest.at("chains")) chains.push_back(read_chain_csv(dir / c.at("file").get<std::string>()));
        for (const auto& c : chains) {
            for (const auto& d : c.draws)
                if (static_cast<std::size_t>(d.size()) != basis.size())
                    throw IoError("chain width does not match the basis in " + (dir / "manifest.json").string());
        }
        const auto points = manifest.at("data").at("points").get<std::size_t>();
        return {std::move(manifest), std::move(basis), std::move(rescale), std::move(chains), points};
    } catch (const json::exception& e) {
        throw IoError("malformed manifest in " + dir.string() + ": " + e.what());
    }
}

ordered_json base_manifest(const RunConfig& config, const std::string& command) {
    return {{"artifact", kArtifactName},
            {"version", kArtifactVersion},
            {"command", command},
            {"config_hash", config.hash()},
            {"seed", config.chain.seed},
            {"config", config.to_json()}};
}

/// Writes summary.csv (and optionally draws_grid.csv); returns the column layouts.
ordered_json write_summaries(const RunConfig& config, const std::filesystem::path& dir, const Chain& all,
                             const BasisSpec& basis, const std::vector<AxisMap>& rescale) {
    const int dim = basis.dim();
    const Eigen::MatrixXd nodes = uniform_grid(dim, config.resolution());
    const SummaryTable table = summarize_chain(all, basis, nodes, config.quantiles);
    const double jac = jacobian_of(rescale);
    const auto q = static_cast<Eigen::Index>(config.quantiles.size());

    std::vector<std::string> header = coordinate_names(dim, "");
    for (const auto& n : coordinate_names(dim, "_raw")) header.push_back(n);
    header.emplace_back("mean");
    for (double p : config.quantiles) header.push_back(quantile_name(p));
    header.emplace_back("mean_raw");
    for (double p : config.quantiles) header.push_back(quantile_name(p) + "_raw");

    Eigen::MatrixXd out(nodes.rows(), 2 * dim + 2 * (q + 1));
    out.leftCols(dim) = nodes;
    out.middleCols(dim, dim) = to_raw(nodes, rescale);
    out.col(2 * dim) = table.mean;
    out.middleCols(2 * dim + 1, q) = table.quantiles.transpose();
    out.col(2 * dim + 1 + q) = table.mean / jac;
    out.middleCols(2 * dim + 2 + q, q) = table.quantiles.transpose() / jac;
    write_csv(dir / "summary.csv", header, out);

    ordered_json files;
    files["summary.csv"] = {{"columns", header},
                            {"rows", "one per grid node, first coordinate slowest"},
                            {"density", "unit-domain columns integrate to 1 over [0,1]^dim; _raw columns over the raw box"}};
    if (config.write_draw_grid) {
        const DensityGrid grid = evaluate_draws(all, basis, nodes);
        std::vector<std::string> cols;
        for (Eigen::Index m = 0; m < nodes.rows(); ++m) cols.push_back("node_" + std::to_string(m));
        write_csv(dir / "draws_grid.csv", cols, grid.values);
        files["draws_grid.csv"] = {{"columns", "node_<m>, unit-domain density of each stored draw at grid node m"},
                                   {"rows", "one per stored draw, chains concatenated in order"}};
    }
    return files;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
    reject_unknown(j, {"data", "basis", "chain", "chains", "threads", "grid_resolution", "quadrature_level", "quantiles",
                       "write_draw_grid", "predict", "cox", "output"},
                   "config");
    RunConfig c;
    if (j.contains("data")) {
        const json& d = j.at("data");
        reject_unknown(d, {"path", "dim", "generator", "params", "n", "seed"}, "data");
        read_key(d, "path", c.data.path);
        read_key(d, "dim", c.data.dim);
        read_key(d, "generator", c.data.generator);
        if (d.contains("params")) c.data.params = d.at("params");
        read_key(d, "n", c.data.n);
        read_key(d, "seed", c.data.seed);
    }
    if (j.contains("basis")) {
        const json& b = j.at("basis");
        reject_unknown(b, {"sigma", "alpha", "s", "max_index"}, "basis");
        read_key(b, "sigma", c.sigma);
        read_key(b, "alpha", c.alpha);
        read_key(b, "s", c.s);
        read_key(b, "max_index", c.max_index);
    }
    if (j.contains("chain")) {
        const json& h = j.at("chain");
        reject_unknown(h, {"step_size", "leapfrog_steps", "iterations", "burn_in", "thin", "seed", "newton_tolerance",
                           "newton_max_iterations"},
                       "chain");
        read_key(h, "step_size", c.chain.step_size);
        read_key(h, "leapfrog_steps", c.chain.leapfrog_steps);
        read_key(h, "iterations", c.chain.iterations);
        read_key(h, "burn_in", c.chain.burn_in);
        read_key(h, "thin", c.chain.thin);
        read_key(h, "seed", c.chain.seed);
        read_key(h, "newton_tolerance", c.chain.newton_tolerance);
        read_key(h, "newton_max_iterations", c.chain.newton_max_iterations);
    }
    read_key(j, "chains", c.chains);
    read_key(j, "threads", c.threads);
    read_key(j, "grid_resolution", c.grid_resolution);
    read_key(j, "quadrature_level", c.quadrature_level);
    read_key(j, "quantiles", c.quantiles);
    read_key(j, "write_draw_grid", c.write_draw_grid);
    if (j.contains("predict")) {
        reject_unknown(j.at("predict"), {"count"}, "predict");
        read_key(j.at("predict"), "count", c.predict_count);
    }
    if (j.contains("cox")) {
        reject_unknown(j.at("cox"), {"a", "b"}, "cox");
        double a = c.cox_prior.a;
        double b = c.cox_prior.b;
        read_key(j.at("cox"), "a", a);
        read_key(j.at("cox"), "b", b);
        c.cox_prior = GammaPrior(a, b);
    }
    std::string out = c.output.string();
    read_key(j, "output", out);
    c.output = out;
    return c;
}

ordered_json RunConfig::to_json() const {
    ordered_json d;
    if (!data.path.empty()) {
        d = {{"path", data.path}, {"dim", data.dim}};
    } else {
        d = {{"generator", data.generator}, {"params", data.params}, {"n", data.n}, {"seed", data.seed}};
    }
    return {{"data", d},
            {"basis", {{"sigma", sigma}, {"alpha", alpha}, {"s", s}, {"max_index", max_index}}},
            {"chain",
             {{"step_size", chain.step_size},
              {"leapfrog_steps", chain.leapfrog_steps},
              {"iterations", chain.iterations},
              {"burn_in", chain.burn_in},
              {"thin", chain.thin},
              {"seed", chain.seed},
              {"newton_tolerance", chain.newton_tolerance},
              {"newton_max_iterations", chain.newton_max_iterations}}},
            {"chains", chains},
            {"threads", threads},
            {"grid_resolution", resolution()},
            {"quadrature_level", quadrature_level},
            {"quantiles", quantiles},
            {"write_draw_grid", write_draw_grid},
            {"predict", {{"count", predict_count}}},
            {"cox", {{"a", cox_prior.a}, {"b", cox_prior.b}}},
            {"output", output.string()}};
}

void RunConfig::validate() const {
    if (data.path.empty() && data.generator.empty()) throw ConfigError("data needs either a path or a generator");
    if (data.dim != 1 && data.dim != 2) throw ConfigError("data.dim must be 1 or 2");
    (void)MaternHyper(sigma, alpha, s, data.dim);
    if (max_index < 0) throw ConfigError("basis.max_index must be non-negative");
    chain.validate();
    if (chains < 1) throw ConfigError("chains must be at least 1");
    if (threads < 0) throw ConfigError("threads must be non-negative");
    if (grid_resolution != 0 && grid_resolution < 2) throw ConfigError("grid_resolution must be at least 2");
    if (quadrature_level != 0 && quadrature_level < 2) throw ConfigError("quadrature_level must be at least 2");
    if (quantiles.empty()) throw ConfigError("quantiles must not be empty");
    for (double p : quantiles)
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("quantiles must lie in [0, 1]");
}

int RunConfig::resolution() const noexcept {
    if (grid_resolution != 0) return grid_resolution;
    return data.dim == 2 ? kDefaultGridResolution2d : kDefaultGridResolution1d;
}

std::string RunConfig::hash() const { return fnv1a_hex(to_json().dump()); }

Dataset load_data(const DataSource& source) {
    if (!source.path.empty() && !std::filesystem::exists(source.path))
        throw IoError("data file " + source.path + " does not exist");
    if (!source.path.empty()) return ingest_csv(source.path, source.dim);
    Eigen::MatrixXd points = generate_synthetic(source.generator, source.params, source.n, source.seed);
    if (points.cols() != source.dim)
        throw ConfigError("generator '" + source.generator + "' produces " + std::to_string(points.cols()) +
                          "-dimensional points but data.dim is " + std::to_string(source.dim));
    return Dataset::from_unit(std::move(points));
}

BasisSpec make_basis(const RunConfig& config) {
    return BasisSpec(MaternHyper(config.sigma, config.alpha, config.s, config.data.dim), config.max_index);
}

std::filesystem::path resolve_output(const std::filesystem::path& out) {
    if (out.is_absolute()) return out;
    if (const char* root = std::getenv(kOutputRootVariable); root != nullptr && *root != '\0')
        return std::filesystem::path(root) / out;
    return out;
}

FitResult run_fit(const RunConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const Dataset data = load_data(config.data);
    const BasisSpec basis = make_basis(config);
    const DesignMatrix design = build_design_matrix(basis, data);
    const Chi2Posterior posterior(design, basis.eigenvalues());
    const SphereObjective objective = posterior.objective();

    FitResult result;
    result.chains.resize(static_cast<std::size_t>(config.chains));
    std::vector<std::exception_ptr> failures(result.chains.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k = next++; k < result.chains.size(); k = next++) {
            try {
                ChainConfig cc = config.chain;
                cc.seed = config.chain.seed + k;
                result.chains[k] = run_chain(posterior, cc, std::nullopt, &objective);
            } catch (...) {
                failures[k] = std::current_exception();
            }
        }
    };
    unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                           : static_cast<unsigned>(config.threads);
    workers = std::min<unsigned>(workers, static_cast<unsigned>(config.chains));
    std::vector<std::thread> helpers;
    for (unsigned w = 1; w < workers; ++w) helpers.emplace_back(worker);
    worker();
    for (auto& t : helpers) t.join();
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    const std::filesystem::path dir = resolve_output(config.output);
    ordered_json chains = ordered_json::array();
    std::vector<std::string> chain_columns{"iteration", "log_posterior"};
    for (std::size_t b = 0; b < basis.size(); ++b) chain_columns.push_back("q_" + std::to_string(b));
    ordered_json files;
    for (std::size_t k = 0; k < result.chains.size(); ++k) {
        const Chain& c = result.chains[k];
        const std::string file = "chain_" + std::to_string(k) + ".csv";
        write_chain_csv(dir / file, c);
        ordered_json entry = {{"file", file},
                              {"seed", config.chain.seed + k},
                              {"stored_draws", c.size()},
                              {"accept_rate", c.accept_rate},
                              {"warnings", c.warnings}};
        if (c.newton) entry["newton"] = newton_to_json(*c.newton);
        chains.push_back(std::move(entry));
        files[file] = {{"columns", chain_columns}, {"rows", "one per stored draw"}};
    }
    const ordered_json summaries = write_summaries(config, dir, pool(result.chains), basis, data.rescale());
    for (const auto& [name, layout] : summaries.items()) files[name] = layout;
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ordered_json manifest = base_manifest(config, "fit");
    manifest["wall_time_seconds"] = result.wall_seconds;
    manifest["data"] = {{"source", config.data.path.empty() ? config.data.generator : config.data.path},
                        {"points", data.size()},
                        {"dim", data.dim()},
                        {"rescale", rescale_to_json(data)}};
    manifest["basis"] = basis_to_json(basis);
    manifest["chains"] = chains;
    manifest["files"] = files;
    result.manifest = dir / "manifest.json";
    write_json(result.manifest, manifest);
    return result;
}

void run_summarize(const RunConfig& config) {
    config.validate();
    const std::filesystem::path dir = resolve_output(config.output);
    const SavedRun run = load_run(dir);
    const auto start = std::chrono::steady_clock::now();
    ordered_json manifest = base_manifest(config, "summarize");
    manifest["files"] = write_summaries(config, dir, pool(run.chains), run.basis, run.rescale);
    manifest["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(dir / "summarize_manifest.json", manifest);
}

void run_predict(const RunConfig& config) {
    config.validate();
    const std::filesystem::path dir = resolve_output(config.output);
    const SavedRun run = load_run(dir);
    Rng rng = make_rng(config.chain.seed, 1);
    const Eigen::MatrixXd unit = predictive_sample(pool(run.chains), run.basis, config.predict_count, rng);
    const int dim = run.basis.dim();
    std::vector<std::string> header = coordinate_names(dim, "");
    for (const auto& n : coordinate_names(dim, "_raw")) header.push_back(n);
    Eigen::MatrixXd out(unit.rows(), 2 * dim);
    out << unit, to_raw(unit, run.rescale);
    write_csv(dir / "predictive.csv", header, out);
    ordered_json manifest = base_manifest(config, "predict");
    manifest["files"] = {{"predictive.csv", {{"columns", header}, {"rows", "one per predictive draw"}}}};
    write_json(dir / "predict_manifest.json", manifest);
}

void run_cox(const RunConfig& config) {
    config.validate();
    const std::filesystem::path dir = resolve_output(config.output);
    const SavedRun run = load_run(dir);
    Rng rng = make_rng(config.chain.seed, 2);
    const int dim = run.basis.dim();
    const Eigen::MatrixXd nodes = uniform_grid(dim, config.resolution());
    const IntensityDraws draws =
        intensity_draws(pool(run.chains), run.basis, config.cox_prior, run.points, nodes, rng);
    // per unit of raw measure, so the raw-domain integral is M
    const Eigen::MatrixXd raw_values = draws.values / jacobian_of(run.rescale);
    const SummaryTable table = pointwise_summary(raw_values, config.quantiles);
    const auto q = static_cast<Eigen::Index>(config.quantiles.size());

    std::vector<std::string> header = coordinate_names(dim, "");
    for (const auto& n : coordinate_names(dim, "_raw")) header.push_back(n);
    header.emplace_back("mean_raw");
    for (double p : config.quantiles) header.push_back(quantile_name(p) + "_raw");
    Eigen::MatrixXd out(nodes.rows(), 2 * dim + 1 + q);
    out.leftCols(dim) = nodes;
    out.middleCols(dim, dim) = to_raw(nodes, run.rescale);
    out.col(2 * dim) = table.mean;
    out.rightCols(q) = table.quantiles.transpose();
    write_csv(dir / "intensity.csv", header, out);
    write_csv(dir / "mass.csv", {"mass"}, draws.mass);

    const GammaPrior post = mass_posterior(config.cox_prior, run.points);
    ordered_json manifest = base_manifest(config, "cox");
    manifest["event_count"] = run.points;
    manifest["mass_posterior"] = {{"a", post.a}, {"b", post.b}, {"mean", post.mean()}, {"variance", post.variance()}};
    manifest["note"] = "the mass posterior depends on the data only through the event count";
    manifest["files"] = {{"intensity.csv", {{"columns", header}, {"rows", "one per grid node, first coordinate slowest"}}},
                         {"mass.csv", {{"columns", {"mass"}}, {"rows", "one per stored density draw"}}}};
    write_json(dir / "cox_manifest.json", manifest);
}

bool run_verify(const RunConfig& config) {
    const std::filesystem::path dir = resolve_output(config.output);
    struct Check {
        std::string name;
        double value;
        double threshold;
    };
    std::vector<Check> checks;

    checks.push_back({"orthonormality_1d_I30",
                      orthonormality_residual(BasisSpec(MaternHyper(0.5, 0.5, 0.8, 1), 30),
                                              quadrature_grid(1, config.quadrature_level ? config.quadrature_level
                                                                                         : kDefaultQuadratureLevel1d)),
                      1e-8});
    checks.push_back({"orthonormality_2d_I5",
                      orthonormality_residual(BasisSpec(MaternHyper(0.9, 0.1, 1.1, 2), 5),
                                              quadrature_grid(2, config.quadrature_level ? config.quadrature_level
                                                                                         : kDefaultQuadratureLevel2d)),
                      1e-8});

    const DensityFunction linear([](std::span<const double> x) { return 2.0 * x[0]; }, 1,
                                 config.quadrature_level ? config.quadrature_level : kDefaultQuadratureLevel1d);
    const TangentFunction bump([](std::span<const double> x) { return x[0] * (2.0 - 3.0 * x[0]); }, 1);
    const TangentFunction wave([](std::span<const double> x) { return std::sqrt(2.0) * std::cos(std::numbers::pi * x[0]); }, 1);
    checks.push_back({"isometry_residual", std::max(isometry_residual(linear, bump, bump),
                                                    isometry_residual(linear, bump, wave)),
                      1e-12});

    // closed-form great circle: norm and speed over t in [0, 10]
    Rng rng = make_rng(config.chain.seed, 3);
    const SpherePoint q0 = SpherePoint::normalized(Eigen::VectorXd::LinSpaced(16, -1.0, 2.0));
    const TangentVector v0 = sample_tangent_velocity(q0, rng);
    double drift = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        const GeodesicState g = geodesic_flow(q0, v0, 0.01 * k);
        drift = std::max({drift, std::abs(g.position.coords().norm() - 1.0),
                          std::abs(g.velocity.coords().norm() - v0.coords().norm())});
    }
    checks.push_back({"geodesic_invariants", drift, 1e-10});

    const std::vector<int> truncations{10, 20, 40, 80};
    const auto table = geodesic_convergence_table(512, truncations, config.chain.seed);
    double flatness = 0.0;
    double violations = 0.0;
    double monotone = 0.0;
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(table.size()), 5);
    for (std::size_t k = 0; k < table.size(); ++k) {
        const auto& r = table[k];
        for (double f : r.f) flatness = std::max(flatness, std::abs(f - r.f0));
        violations += static_cast<double>(r.bound_violations);
        if (k > 0 && !(r.integral_f < table[k - 1].integral_f)) monotone += 1.0;
        rows.row(static_cast<Eigen::Index>(k)) << r.truncation, r.f0, r.max_f, r.integral_f,
            static_cast<double>(r.bound_violations);
    }
    write_csv(dir / "convergence.csv", {"I", "f0", "max_f", "integral_f", "bound_violations"}, rows);
    checks.push_back({"unit_speed_f_constant", flatness, 1e-10});
    checks.push_back({"exponential_bound_violations", violations, 0.0});
    checks.push_back({"integral_f_non_monotone_steps", monotone, 0.0});

    bool all = true;
    {
        std::filesystem::create_directories(dir);
        std::FILE* f = std::fopen((dir / "verify.csv").string().c_str(), "wb");
        if (f == nullptr) throw IoError("cannot open " + (dir / "verify.csv").string() + " for writing");
        std::fprintf(f, "check,value,threshold,pass\n");
        for (const auto& c : checks) {
            const bool pass = c.value <= c.threshold;
            all = all && pass;
            std::fprintf(f, "%s,%.17g,%.17g,%d\n", c.name.c_str(), c.value, c.threshold, pass ? 1 : 0);
        }
        if (std::fclose(f) != 0) throw IoError("write failed for " + (dir / "verify.csv").string());
    }
    ordered_json manifest = base_manifest(config, "verify");
    manifest["passed"] = all;
    manifest["files"] = {{"verify.csv", {{"columns", {"check", "value", "threshold", "pass"}}}},
                         {"convergence.csv", {{"columns", {"I", "f0", "max_f", "integral_f", "bound_violations"}}}}};
    write_json(dir / "verify_manifest.json", manifest);
    return all;
}

void run_generate(const RunConfig& config) {
    if (config.data.generator.empty()) throw ConfigError("generate needs data.generator");
    const Eigen::MatrixXd points =
        generate_synthetic(config.data.generator, config.data.params, config.data.n, config.data.seed);
    const std::filesystem::path dir = resolve_output(config.output);
    const auto header = coordinate_names(static_cast<int>(points.cols()), "");
    write_csv(dir / "data.csv", header, points);
    ordered_json manifest = base_manifest(config, "generate");
    manifest["files"] = {{"data.csv", {{"columns", header}, {"rows", "one per generated point"}}}};
    write_json(dir / "generate_manifest.json", manifest);
}

int exit_code_for(const std::exception& e) noexcept {
    if (dynamic_cast<const IoError*>(&e) != nullptr) return 3;
    if (dynamic_cast<const ConfigError*>(&e) != nullptr) return 1;
    if (dynamic_cast<const json::exception*>(&e) != nullptr) return 1;
    return 2;
}

ordered_json error_json(const std::string& command, const std::exception& e) {
    std::string kind = "error";
    if (dynamic_cast<const IoError*>(&e) != nullptr) kind = "io";
    else if (dynamic_cast<const ConfigError*>(&e) != nullptr) kind = "config";
    else if (dynamic_cast<const DomainError*>(&e) != nullptr) kind = "domain";
    else if (dynamic_cast<const NumericError*>(&e) != nullptr) kind = "numeric";
    ordered_json j = {{"command", command}, {"kind", kind}, {"message", e.what()}, {"exit_code", exit_code_for(e)}};
    if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
        j["row"] = p->row();
        j["column"] = p->column();
    }
    return j;
}

}  // namespace chi2dens
