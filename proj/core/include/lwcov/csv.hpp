#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lwcov::csv {

/// Minimal reader for the toolkit's flat CSV schemas: comma separated,
/// no quoting, optional trailing CR, blank lines skipped.
class Reader {
public:
    explicit Reader(std::istream& in);

    /// Reads the header row and checks it against `expected` column names
    /// (order-sensitive). Throws ParseError on mismatch or empty input.
    void expect_header(std::string_view source, std::span<const std::string_view> expected);

    /// Next data row split into fields; std::nullopt at end of input.
    std::optional<std::vector<std::string>> next();

    /// Line number of the row last returned by next() (header is line 1).
    std::size_t line() const noexcept { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

std::vector<std::string> split(std::string_view row);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Strict numeric field parsers: the whole field must be consumed.
/// They throw ValidationError naming `column` on failure.
double parse_double(std::string_view field, std::string_view column);
std::int64_t parse_int(std::string_view field, std::string_view column);
std::uint64_t parse_uint(std::string_view field, std::string_view column);

}  // namespace lwcov::csv
