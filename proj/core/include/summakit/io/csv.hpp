#pragma once

// Plain-text ingestion and export: "index,value" sequence files, one-column
// theta files, two-column (u, M) grids and per-window dumps. Malformed input
// raises CsvError carrying the 1-based line number.

#include <cstdint>
#include <string>
#include <vector>

#include "summakit/convergence.hpp"
#include "summakit/errors.hpp"
#include "summakit/orlicz.hpp"

namespace summakit::io {

class CsvError : public ValidationError {
public:
    CsvError(const std::string& path, std::int64_t line, const std::string& message)
        : ValidationError(path + ":" + std::to_string(line) + ": " + message), line_(line) {}

    [[nodiscard]] std::int64_t line() const noexcept { return line_; }

private:
    std::int64_t line_;
};

/// Header "index,value", then rows 1..n in order.
[[nodiscard]] orlicz::SequencePrefix read_sequence_csv(const std::string& path);
[[nodiscard]] orlicz::SequencePrefix parse_sequence_csv(const std::string& text, const std::string& name = "<input>");

/// One integer per row, with an optional non-numeric header line.
[[nodiscard]] std::vector<std::int64_t> read_theta_csv(const std::string& path);
[[nodiscard]] std::vector<std::int64_t> parse_theta_csv(const std::string& text, const std::string& name = "<input>");

/// Rows "u,M" with an optional non-numeric header line.
[[nodiscard]] std::vector<orlicz::GridPoint> read_grid_csv(const std::string& path);
[[nodiscard]] std::vector<orlicz::GridPoint> parse_grid_csv(const std::string& text,
                                                            const std::string& name = "<input>");

[[nodiscard]] std::string format_sequence_csv(const orlicz::SequencePrefix& x);

/// Counting testers: "i,lambda_i,c_i,D_i"; summation testers:
/// "i,lambda_i,sum_i,S_i". Doubles are written with 17 significant digits.
[[nodiscard]] std::string format_windows_csv(const convergence::ConvergenceVerdict& verdict, bool summation);

[[nodiscard]] std::string read_text_file(const std::string& path);

/// Writes to a temporary file in the target directory, then renames it over
/// the target, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

/// Shortest text that reads back to the same double.
[[nodiscard]] std::string format_double(double v);

}  // namespace summakit::io
