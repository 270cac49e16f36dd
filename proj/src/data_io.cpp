#include "sfr/data_io.hpp"

#include "sfr/stats.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace sfr {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '"') {
            if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else {
                quoted = !quoted;
            }
        } else if (c == delimiter && !quoted) {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

bool is_na_token(const std::string& cell) {
    static const std::set<std::string> tokens = {"", "NA", "N/A", "n/a", "na", "NaN", "nan", "NAN",
                                                 "null", "NULL", "None", "."};
    return tokens.contains(cell);
}

enum class CellKind { Number, Missing, Invalid };

CellKind parse_cell(const std::string& cell, double& value) {
    if (is_na_token(cell)) return CellKind::Missing;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) return CellKind::Invalid;
    return std::isfinite(value) ? CellKind::Number : CellKind::Missing;
}

void validate(const CsvSchema& schema) {
    if (schema.outcome_column.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no outcome column given");
    }
    if (schema.feature_columns.empty()) {
        throw Error(ErrorCode::InvalidArgument, "at least one feature column is required");
    }
    if (std::find(schema.feature_columns.begin(), schema.feature_columns.end(), schema.outcome_column) !=
        schema.feature_columns.end()) {
        throw Error(ErrorCode::InvalidArgument,
                    "outcome column '" + schema.outcome_column + "' is also listed as a feature");
    }
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

LoadedDataset read_csv(std::istream& in, const CsvSchema& schema, bool add_intercept) {
    validate(schema);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    if (schema.has_header) {
        if (!std::getline(in, line)) {
            throw Error(ErrorCode::EmptyAfterNaDrop, "input is empty");
        }
        ++line_no;
        header = split_line(line, schema.delimiter);
    }

    std::vector<std::string> wanted{schema.outcome_column};
    wanted.insert(wanted.end(), schema.feature_columns.begin(), schema.feature_columns.end());
    std::vector<std::size_t> positions;
    std::size_t width = header.size();

    auto resolve = [&](std::size_t columns) {
        if (!schema.has_header) {
            header.clear();
            for (std::size_t i = 0; i < columns; ++i) header.push_back(std::to_string(i));
        }
        width = header.size();
        for (const auto& name : wanted) {
            const auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end()) {
                throw Error(ErrorCode::MissingColumn, "column '" + name + "' not found");
            }
            positions.push_back(static_cast<std::size_t>(it - header.begin()));
        }
    };
    if (schema.has_header) resolve(header.size());

    std::vector<double> values;  // row-major, wanted.size() per row
    std::vector<std::size_t> dropped;
    std::size_t rows_read = 0;
    std::vector<double> row(wanted.size());
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line, schema.delimiter);
        if (positions.empty()) resolve(cells.size());
        if (cells.size() != width) {
            throw CsvCellError(ErrorCode::NonNumericCell, line_no, "",
                               "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                   " fields, expected " + std::to_string(width));
        }
        ++rows_read;
        bool missing = false;
        for (std::size_t j = 0; j < wanted.size(); ++j) {
            const auto& cell = cells[positions[j]];
            switch (parse_cell(cell, row[j])) {
                case CellKind::Number:
                    break;
                case CellKind::Missing:
                    if (schema.na_policy == NaPolicy::DropRows) {
                        missing = true;
                        break;
                    }
                    [[fallthrough]];
                case CellKind::Invalid:
                    throw CsvCellError(ErrorCode::NonNumericCell, line_no, wanted[j],
                                       "non-numeric cell '" + cell + "' at line " + std::to_string(line_no) +
                                           ", column '" + wanted[j] + "'");
            }
        }
        if (missing) {
            dropped.push_back(line_no);
            continue;
        }
        values.insert(values.end(), row.begin(), row.end());
    }
    if (positions.empty() && !schema.has_header) {
        throw Error(ErrorCode::EmptyAfterNaDrop, "input has no data rows");
    }
    const std::size_t kept = values.size() / wanted.size();
    if (kept == 0) {
        throw Error(ErrorCode::EmptyAfterNaDrop, "no rows left after dropping missing values");
    }
    const auto n = static_cast<Eigen::Index>(kept);
    const auto p = static_cast<Eigen::Index>(schema.feature_columns.size());
    Eigen::VectorXd y(n);
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * wanted.size();
        y(i) = values[base];
        for (Eigen::Index j = 0; j < p; ++j) x(i, j) = values[base + 1 + static_cast<std::size_t>(j)];
    }
    return LoadedDataset{Dataset(std::move(y), std::move(x), schema.feature_columns, add_intercept,
                                 schema.outcome_column),
                         rows_read, std::move(dropped)};
}

LoadedDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema, bool add_intercept) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    }
    return read_csv(in, schema, add_intercept);
}

void write_csv(std::ostream& out, const Dataset& data) {
    out << data.outcome_name();
    for (const auto& name : data.feature_names()) out << ',' << name;
    out << '\n';
    for (Eigen::Index i = 0; i < data.y().size(); ++i) {
        out << format_number(data.y()(i));
        for (Eigen::Index j = 0; j < data.x().cols(); ++j) out << ',' << format_number(data.x()(i, j));
        out << '\n';
    }
}

std::vector<ColumnSummary> describe(const Dataset& data) {
    std::vector<ColumnSummary> out;
    auto summarize = [&](const std::string& name, const Eigen::VectorXd& column) {
        std::vector<double> v(column.data(), column.data() + column.size());
        std::sort(v.begin(), v.end());
        ColumnSummary s;
        s.name = name;
        s.count = v.size();
        s.min = v.front();
        s.max = v.back();
        if (s.min == s.max) {
            s.mean = s.min;
            s.std = 0.0;
        } else {
            s.mean = mean(v);
            s.std = v.size() >= 2 ? sample_sd(v) : 0.0;
        }
        s.q25 = interpolated_quantile(v, 0.25);
        s.q50 = interpolated_quantile(v, 0.50);
        s.q75 = interpolated_quantile(v, 0.75);
        out.push_back(std::move(s));
    };
    summarize(data.outcome_name(), data.y());
    for (Eigen::Index j = 0; j < data.x().cols(); ++j) {
        summarize(data.feature_names()[static_cast<std::size_t>(j)], data.x().col(j));
    }
    return out;
}

}  // namespace sfr
