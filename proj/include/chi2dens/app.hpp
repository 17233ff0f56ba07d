#pragma once

// End-to-end runs: configuration, data loading and the subcommands behind the
// command-line tool. Every subcommand writes its artifacts under
// RunConfig::output together with a JSON manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chi2dens/cox_process.hpp"
#include "chi2dens/dataset.hpp"
#include "chi2dens/kl_basis.hpp"
#include "chi2dens/spherical_hmc.hpp"

namespace chi2dens {

inline constexpr const char* kArtifactName = "chi2dens";
inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kOutputRootVariable = "CHI2DENS_OUTPUT_ROOT";

struct DataSource {
    std::string path;       ///< CSV of raw observations; empty when a generator is used
    int dim = 1;
    std::string generator;  ///< see generate_synthetic()
    nlohmann::json params = nlohmann::json::object();
    std::size_t n = 1000;
    std::uint64_t seed = 1;
};

struct RunConfig {
    DataSource data;
    double sigma = 0.5;
    double alpha = 1.0;
    double s = 1.0;
    int max_index = 30;
    ChainConfig chain;
    int chains = 1;
    int threads = 1;  ///< worker threads for parallel chains; 0 means one per core
    int grid_resolution = 0;  ///< 0 picks 512 in 1D and 128 per axis in 2D
    int quadrature_level = 0;  ///< Gauss-Legendre nodes per axis for verify; 0 picks 256 in 1D and 64 in 2D
    std::vector<double> quantiles{0.025, 0.25, 0.5, 0.75, 0.975};
    bool write_draw_grid = false;
    std::size_t predict_count = 1000;
    GammaPrior cox_prior;
    std::filesystem::path output = "chi2dens_out";

    /// Unknown keys are rejected so that typos do not silently fall back to
    /// defaults.
    static RunConfig from_json(const nlohmann::json& j);
    [[nodiscard]] nlohmann::ordered_json to_json() const;

    /// Throws ConfigError on the first invalid field. Data files are checked
    /// when they are loaded, so post-fit commands need only the saved run.
    void validate() const;

    [[nodiscard]] int resolution() const noexcept;
    [[nodiscard]] std::string hash() const;
};

/// Reads or generates the observations named by the config.
[[nodiscard]] Dataset load_data(const DataSource& source);

[[nodiscard]] BasisSpec make_basis(const RunConfig& config);

/// Resolves a relative output directory against $CHI2DENS_OUTPUT_ROOT when set.
[[nodiscard]] std::filesystem::path resolve_output(const std::filesystem::path& out);

struct FitResult {
    std::vector<Chain> chains;
    std::filesystem::path manifest;
    double wall_seconds = 0.0;
};

/// Newton-initialized chains plus summaries. Writes chain_<k>.csv,
/// summary.csv and manifest.json.
FitResult run_fit(const RunConfig& config);

/// Recomputes summary.csv (and draws_grid.csv when requested) from the chains
/// of an earlier fit in config.output.
void run_summarize(const RunConfig& config);

/// Writes predictive.csv: posterior predictive draws in unit and raw
/// coordinates.
void run_predict(const RunConfig& config);

/// Writes intensity.csv (raw-coordinate intensity summaries) and mass.csv.
void run_cox(const RunConfig& config);

/// Runs the numerical self-checks, writes verify.csv and convergence.csv and
/// returns true when every check passed.
bool run_verify(const RunConfig& config);

/// Writes data.csv from the configured generator.
void run_generate(const RunConfig& config);

/// 0 success, 1 usage or configuration, 2 numerical failure, 3 I/O.
[[nodiscard]] int exit_code_for(const std::exception& e) noexcept;

/// Machine-readable description of a failure.
[[nodiscard]] nlohmann::ordered_json error_json(const std::string& command, const std::exception& e);

}  // namespace chi2dens
