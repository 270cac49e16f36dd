#pragma once

#include "sfr/dataset.hpp"
#include "sfr/error.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sfr {

enum class NaPolicy { Reject, DropRows };

/// Maps CSV columns onto a Dataset. Without a header row, columns are named
/// by their zero-based position ("0", "1", ...).
struct CsvSchema {
    std::string outcome_column;
    std::vector<std::string> feature_columns;
    char delimiter = ',';
    bool has_header = true;
    NaPolicy na_policy = NaPolicy::Reject;
};

/// A cell that could not be parsed. `line` is the 1-based physical line in
/// the file (the header is line 1).
class CsvCellError : public Error {
public:
    CsvCellError(ErrorCode code, std::size_t line, std::string column, const std::string& message)
        : Error(code, message), line_(line), column_(std::move(column)) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::string column_;
};

struct LoadedDataset {
    Dataset dataset;
    std::size_t rows_read = 0;
    std::vector<std::size_t> dropped_lines;  ///< 1-based lines removed under NaPolicy::DropRows
};

/// Throws Error(InvalidArgument) for a bad schema, Error(IoError) when the
/// file cannot be read, Error(MissingColumn), CsvCellError(NonNumericCell)
/// and Error(EmptyAfterNaDrop).
[[nodiscard]] LoadedDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema,
                                     bool add_intercept = true);
[[nodiscard]] LoadedDataset read_csv(std::istream& in, const CsvSchema& schema, bool add_intercept = true);

/// Writes outcome then feature columns with a header row.
void write_csv(std::ostream& out, const Dataset& data);

/// Shortest decimal string that round-trips to the same double.
[[nodiscard]] std::string format_number(double value);

struct ColumnSummary {
    std::string name;
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;  ///< sample standard deviation
    double min = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double max = 0.0;
};

/// Outcome first, then each feature. Quartiles interpolate linearly between
/// order statistics.
[[nodiscard]] std::vector<ColumnSummary> describe(const Dataset& data);

}  // namespace sfr
