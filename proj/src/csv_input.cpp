#include "predtest/csv_input.hpp"

#include "predtest/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace predtest {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

} // namespace

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    fail(ErrorCode::ColumnMissing, "column '" + name + "' not found in header");
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) {
        fail(ErrorCode::CsvParseError, "input is empty; a header row is required");
    }
    // Tolerate a UTF-8 byte order mark.
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    table.header = split_row(line);
    table.columns.resize(table.header.size());

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() != table.header.size()) {
            fail(ErrorCode::CsvParseError, "row " + std::to_string(row) + " has " +
                                               std::to_string(cells.size()) + " fields, expected " +
                                               std::to_string(table.header.size()));
        }
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const std::string& text = cells[j];
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
                fail(ErrorCode::CsvParseError, "row " + std::to_string(row) + ", column '" +
                                                   table.header[j] + "': missing or non-numeric value");
            }
            table.columns[j].push_back(value);
        }
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::FileNotFound, "cannot open '" + path + "'");
    }
    return read_csv(in);
}

RegressionData lagged_regression(const CsvTable& table, const std::string& y_column,
                                 const std::vector<std::string>& x_columns) {
    if (x_columns.empty()) {
        fail(ErrorCode::InvalidArgument, "at least one predictor column is required");
    }
    const std::size_t yi = table.column_index(y_column);
    std::vector<std::size_t> xi;
    for (const auto& name : x_columns) xi.push_back(table.column_index(name));

    const std::size_t rows = table.rows();
    const std::size_t p = x_columns.size();
    if (rows < 1 || rows - 1 < p + 3) {
        fail(ErrorCode::TooFewRows, "need at least " + std::to_string(p + 3) +
                                        " observations after lagging, have " +
                                        std::to_string(rows == 0 ? 0 : rows - 1));
    }
    const auto n = static_cast<Eigen::Index>(rows - 1);
    Eigen::VectorXd y(n);
    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(p));
    for (Eigen::Index t = 0; t < n; ++t) {
        y(t) = table.columns[yi][static_cast<std::size_t>(t) + 1];
        for (std::size_t j = 0; j < p; ++j) {
            X(t, static_cast<Eigen::Index>(j)) = table.columns[xi[j]][static_cast<std::size_t>(t)];
        }
    }
    return RegressionData(std::move(y), std::move(X));
}

} // namespace predtest
