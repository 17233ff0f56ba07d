#include "chi2dens/io.hpp"

#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace chi2dens {
namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        const auto first = cell.find_first_not_of(" \t\r\"");
        const auto last = cell.find_last_not_of(" \t\r\"");
        cells.push_back(first == std::string::npos ? std::string() : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size() && errno != ERANGE;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    CsvTable table;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto cells = split_line(line);
        std::vector<double> row(cells.size());
        bool numeric = true;
        std::size_t bad_column = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_double(cells[c], row[c])) {
                numeric = false;
                bad_column = c + 1;
                break;
            }
        }
        if (first) {
            first = false;
            width = cells.size();
            if (!numeric) {
                table.header = cells;
                continue;
            }
        }
        if (!numeric) {
            throw ParseError(path.string() + ": non-numeric value '" + cells[bad_column - 1] + "' at row " +
                                 std::to_string(line_no) + ", column " + std::to_string(bad_column),
                             line_no, bad_column);
        }
        if (cells.size() != width) {
            throw ParseError(path.string() + ": row " + std::to_string(line_no) + " has " +
                                 std::to_string(cells.size()) + " columns, expected " + std::to_string(width),
                             line_no, std::min(cells.size(), width) + 1);
        }
        rows.push_back(std::move(row));
    }
    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c)
            table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return table;
}

Dataset ingest_csv(const std::filesystem::path& path, int dim, double padding) {
    if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");
    const CsvTable table = read_csv(path);
    if (table.values.cols() < dim) {
        throw ConfigError(path.string() + " has " + std::to_string(table.values.cols()) + " columns, need " +
                          std::to_string(dim));
    }
    if (table.values.rows() < 2) throw ConfigError(path.string() + ": insufficient data, need at least 2 points");
    return Dataset::from_raw(table.values.leftCols(dim), padding);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& values) {
    if (!header.empty() && static_cast<Eigen::Index>(header.size()) != values.cols())
        throw ConfigError("header width does not match the value matrix");
    std::ofstream out = open_for_write(path);
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    if (!header.empty()) out << '\n';
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) out << (c ? "," : "") << format_double(values(r, c));
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

void write_chain_csv(const std::filesystem::path& path, const Chain& chain) {
    std::ofstream out = open_for_write(path);
    const Eigen::Index b = chain.draws.empty() ? 0 : chain.draws.front().size();
    out << "iteration,log_posterior";
    for (Eigen::Index j = 0; j < b; ++j) out << ",q_" << j;
    out << '\n';
    for (std::size_t k = 0; k < chain.size(); ++k) {
        out << chain.iteration[k] << ',' << format_double(chain.log_post_trace[k]);
        for (Eigen::Index j = 0; j < b; ++j) out << ',' << format_double(chain.draws[k][j]);
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

Chain read_chain_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    if (table.values.cols() < 3) throw IoError(path.string() + " is not a chain file");
    Chain chain;
    const Eigen::Index b = table.values.cols() - 2;
    for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
        chain.iteration.push_back(static_cast<int>(table.values(r, 0)));
        chain.log_post_trace.push_back(table.values(r, 1));
        chain.draws.emplace_back(table.values.row(r).tail(b).transpose());
    }
    return chain;
}

nlohmann::ordered_json basis_to_json(const BasisSpec& basis) {
    const MaternHyper& h = basis.hyper();
    return {{"sigma", h.sigma}, {"alpha", h.alpha}, {"s", h.s}, {"dim", h.dim}, {"max_index", basis.max_index()}};
}

BasisSpec basis_from_json(const nlohmann::json& j) {
    try {
        return BasisSpec(MaternHyper(j.at("sigma").get<double>(), j.at("alpha").get<double>(),
                                     j.at("s").get<double>(), j.at("dim").get<int>()),
                         j.at("max_index").get<int>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid basis description: ") + e.what());
    }
}

nlohmann::ordered_json rescale_to_json(const Dataset& data) {
    nlohmann::ordered_json axes = nlohmann::ordered_json::array();
    for (int d = 0; d < data.dim(); ++d) {
        const auto k = static_cast<std::size_t>(d);
        axes.push_back({{"offset", data.rescale()[k].offset},
                        {"scale", data.rescale()[k].scale},
                        {"raw_min", data.raw_min()[k]},
                        {"raw_max", data.raw_max()[k]}});
    }
    return axes;
}

std::vector<AxisMap> rescale_from_json(const nlohmann::json& j) {
    std::vector<AxisMap> maps;
    try {
        for (const auto& axis : j) maps.push_back({axis.at("offset").get<double>(), axis.at("scale").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid rescale description: ") + e.what());
    }
    return maps;
}

nlohmann::ordered_json newton_to_json(const NewtonReport& report) {
    return {{"iterations", report.iterations},
            {"converged", report.converged},
            {"tangent_gradient_norm", report.tangent_gradient_norm},
            {"log_posterior", report.value},
            {"fallback_steps", report.fallback_steps}};
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out = open_for_write(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

}  // namespace chi2dens
