#pragma once

#include "predtest/regression.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace predtest {

/// Raw time-ordered columns read from a CSV file.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns; ///< one entry per header name

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    /// Index of a named column; throws ColumnMissing.
    std::size_t column_index(const std::string& name) const;
};

/// Comma separated, '.' decimal, header row required. Empty or
/// non-numeric cells raise CsvParseError naming the row and column.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Pairs y_t with x_{t-1}: the first row of y and the last row of the
/// predictors are dropped. Throws TooFewRows when fewer than p + 3
/// observations remain.
RegressionData lagged_regression(const CsvTable& table, const std::string& y_column,
                                 const std::vector<std::string>& x_columns);

} // namespace predtest
