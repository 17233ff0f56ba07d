#pragma once

// CSV and JSON plumbing for datasets, chains and summaries.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "chi2dens/dataset.hpp"
#include "chi2dens/error.hpp"
#include "chi2dens/kl_basis.hpp"
#include "chi2dens/spherical_hmc.hpp"

namespace chi2dens {

/// Malformed CSV cell. Row and column are 1-based and count the header line.
class ParseError : public IoError {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : IoError(what), row_(row), column_(column) {}
    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

struct CsvTable {
    std::vector<std::string> header;  ///< empty when the first row was numeric
    Eigen::MatrixXd values;
};

/// Reads a numeric CSV. A first row with any non-numeric cell is taken as a
/// header. Blank lines are skipped; every data row must have the same width.
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

/// Reads `dim` columns of raw observations and rescales them into the unit
/// domain (see Dataset::from_raw).
[[nodiscard]] Dataset ingest_csv(const std::filesystem::path& path, int dim,
                                 double padding = kRescalePadding);

/// Writes values with %.17g so that reading them back is exact.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& values);

/// Columns: iteration, log_posterior, q_0 .. q_{B-1}.
void write_chain_csv(const std::filesystem::path& path, const Chain& chain);
[[nodiscard]] Chain read_chain_csv(const std::filesystem::path& path);

[[nodiscard]] nlohmann::ordered_json basis_to_json(const BasisSpec& basis);
[[nodiscard]] BasisSpec basis_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::ordered_json rescale_to_json(const Dataset& data);
/// Inverse of rescale_to_json; returns per-axis maps.
[[nodiscard]] std::vector<AxisMap> rescale_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::ordered_json newton_to_json(const NewtonReport& report);

/// 64-bit FNV-1a of the text, as 16 hex digits.
[[nodiscard]] std::string fnv1a_hex(const std::string& text);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);
[[nodiscard]] nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace chi2dens
