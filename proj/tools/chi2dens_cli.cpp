// chi2dens: fit, summarize and sample chi-square process density posteriors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chi2dens/app.hpp"
#include "chi2dens/io.hpp"

using nlohmann::json;

namespace {

struct Options {
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out;
    std::optional<std::string> data;
    std::optional<int> dim;
};

// key.path=value, value parsed as JSON when possible
void apply_set(json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw chi2dens::ConfigError("--set expects key=value, got '" + assignment + "'");
    std::string pointer = "/" + assignment.substr(0, eq);
    for (char& c : pointer)
        if (c == '.') c = '/';
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    j[json::json_pointer(pointer)] = value;
}

chi2dens::RunConfig build_config(const Options& o) {
    json j = json::object();
    if (!o.config_path.empty()) j = chi2dens::read_json(o.config_path);
    for (const auto& s : o.sets) apply_set(j, s);
    if (o.seed) j["chain"]["seed"] = *o.seed;
    if (o.threads) j["threads"] = *o.threads;
    if (o.out) j["output"] = *o.out;
    if (o.data) j["data"]["path"] = *o.data;
    if (o.dim) j["data"]["dim"] = *o.dim;
    return chi2dens::RunConfig::from_json(j);
}

void report_error(const std::string& command, const Options& o, const std::exception& e) {
    const auto err = chi2dens::error_json(command, e);
    std::cerr << err.dump() << '\n';
    try {
        std::filesystem::path dir = o.out ? std::filesystem::path(*o.out) : std::filesystem::path("chi2dens_out");
        if (!o.out && !o.config_path.empty()) {
            const json j = chi2dens::read_json(o.config_path);
            if (j.contains("output")) dir = j.at("output").get<std::string>();
        }
        chi2dens::write_json(chi2dens::resolve_output(dir) / "error.json", err);
    } catch (...) {
        // the error has already gone to stderr
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian density estimation with chi-square process priors"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config_path, "JSON run configuration");
    app.add_option("--set", o.sets, "override a config key, e.g. chain.iterations=500");
    app.add_option("--seed", o.seed, "chain seed (chain.seed)");
    app.add_option("--threads", o.threads, "worker threads for parallel chains (0: one per core)");
    app.add_option("--out", o.out, std::string("output directory, relative to $") + chi2dens::kOutputRootVariable);
    app.add_option("--data", o.data, "CSV of raw observations (data.path)");
    app.add_option("--dim", o.dim, "number of data columns to use (data.dim)");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"fit", "Newton-initialize and run the sampler, then write summaries"},
        {"summarize", "recompute density summaries from a finished fit"},
        {"predict", "draw from the posterior predictive"},
        {"cox", "intensity summaries for a Cox process"},
        {"verify", "numerical self-checks"},
        {"generate", "write a synthetic data set"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const chi2dens::RunConfig config = build_config(o);
        const auto dir = chi2dens::resolve_output(config.output);
        if (command == "fit") {
            const auto result = chi2dens::run_fit(config);
            for (std::size_t k = 0; k < result.chains.size(); ++k) {
                const auto& c = result.chains[k];
                std::printf("chain %zu: %zu draws, acceptance %.3f\n", k, c.size(), c.accept_rate);
                for (const auto& w : c.warnings) std::printf("  warning: %s\n", w.c_str());
            }
            std::printf("wrote %s (%.2f s)\n", result.manifest.string().c_str(), result.wall_seconds);
        } else if (command == "summarize") {
            chi2dens::run_summarize(config);
            std::printf("wrote %s\n", (dir / "summary.csv").string().c_str());
        } else if (command == "predict") {
            chi2dens::run_predict(config);
            std::printf("wrote %s\n", (dir / "predictive.csv").string().c_str());
        } else if (command == "cox") {
            chi2dens::run_cox(config);
            std::printf("wrote %s\n", (dir / "intensity.csv").string().c_str());
        } else if (command == "verify") {
            const bool ok = chi2dens::run_verify(config);
            std::printf("%s: %s\n", (dir / "verify.csv").string().c_str(), ok ? "all checks passed" : "FAILED");
            return ok ? 0 : 2;
        } else if (command == "generate") {
            chi2dens::run_generate(config);
            std::printf("wrote %s\n", (dir / "data.csv").string().c_str());
        }
    } catch (const std::exception& e) {
        report_error(command, o, e);
        return chi2dens::exit_code_for(e);
    }
    return 0;
}
