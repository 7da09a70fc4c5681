#include "predtest/csv_input.hpp"
#include "predtest/error.hpp"

#include <doctest.h>

#include <sstream>

using namespace predtest;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::InvalidArgument;
}

CsvTable parse(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in);
}

} // namespace

TEST_CASE("columns are read by header name") {
    const CsvTable t = parse("date,ret,dp\n1,0.5,-3.1\n2,-0.25,-3.0\n3,1e-2,-2.9\n");
    CHECK(t.rows() == 3);
    CHECK(t.column_index("dp") == 2);
    CHECK(t.columns[1][2] == 0.01);
    CHECK(code_of([&] { (void)t.column_index("tb"); }) == ErrorCode::ColumnMissing);
}

TEST_CASE("predictors are lagged one period") {
    std::string text = "y,x1,x2\n";
    for (int t = 0; t < 8; ++t) {
        text += std::to_string(100 + t) + "," + std::to_string(t) + "," + std::to_string(t * t % 5) + "\n";
    }
    const RegressionData d = lagged_regression(parse(text), "y", {"x1", "x2"});
    CHECK(d.n() == 7);
    CHECK(d.p() == 2);
    for (Eigen::Index t = 0; t < 7; ++t) {
        CHECK(d.y()(t) == 101 + t);
        CHECK(d.X()(t, 0) == t);
    }
}

TEST_CASE("short samples are refused") {
    // p = 2 needs 5 lagged observations, so 6 rows.
    std::string text = "y,a,b\n";
    for (int t = 0; t < 5; ++t) text += "1,2,3\n";
    CHECK(code_of([&] { (void)lagged_regression(parse(text), "y", {"a", "b"}); }) == ErrorCode::TooFewRows);
}

TEST_CASE("malformed input") {
    CHECK(code_of([] { (void)parse(""); }) == ErrorCode::CsvParseError);
    CHECK(code_of([] { (void)parse("y,x\n1,\n"); }) == ErrorCode::CsvParseError);
    CHECK(code_of([] { (void)parse("y,x\n1,NA\n"); }) == ErrorCode::CsvParseError);
    CHECK(code_of([] { (void)parse("y,x\n1,2,3\n"); }) == ErrorCode::CsvParseError);
    CHECK(code_of([] { (void)read_csv_file("/nonexistent/file.csv"); }) == ErrorCode::FileNotFound);
}

TEST_CASE("byte order mark and CRLF are tolerated") {
    const CsvTable t = parse("\xEF\xBB\xBFy,x\r\n1,2\r\n3,4\r\n");
    CHECK(t.header[0] == "y");
    CHECK(t.columns[1][1] == 4.0);
}
