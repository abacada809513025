#include "lwcov/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <string>

#include "lwcov/error.hpp"

namespace lwcov {

ParseError::ParseError(std::string source, std::vector<ParseIssue> issues)
    : Error([&] {
          std::string msg = source + ": ";
          if (issues.empty()) {
              return msg + "parse error";
          }
          msg += "line " + std::to_string(issues.front().line) + ": " + issues.front().message;
          if (issues.size() > 1) {
              msg += " (+" + std::to_string(issues.size() - 1) + " more)";
          }
          return msg;
      }()),
      source_(std::move(source)),
      issues_(std::move(issues)) {}

UnknownGatewayError::UnknownGatewayError(std::vector<std::string> ids)
    : Error([&] {
          std::string msg = "unknown gateway id(s):";
          for (const auto& id : ids) {
              msg += " " + id;
          }
          return msg;
      }()),
      ids_(std::move(ids)) {}

namespace csv {

std::vector<std::string> split(std::string_view row) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = row.find(',', start);
        if (comma == std::string_view::npos) {
            fields.emplace_back(row.substr(start));
            break;
        }
        fields.emplace_back(row.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

Reader::Reader(std::istream& in) : in_(in) {}

std::optional<std::vector<std::string>> Reader::next() {
    std::string row;
    while (std::getline(in_, row)) {
        ++line_;
        if (!row.empty() && row.back() == '\r') {
            row.pop_back();
        }
        if (row.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        return split(row);
    }
    return std::nullopt;
}

void Reader::expect_header(std::string_view source, std::span<const std::string_view> expected) {
    auto header = next();
    if (!header) {
        throw ParseError(std::string(source), {{1, "missing header row"}});
    }
    // Tolerate a UTF-8 byte order mark on the first column.
    if (!header->empty() && header->front().starts_with("\xEF\xBB\xBF")) {
        header->front().erase(0, 3);
    }
    bool ok = header->size() == expected.size();
    if (ok) {
        std::size_t i = 0;
        for (auto name : expected) {
            if ((*header)[i++] != name) {
                ok = false;
                break;
            }
        }
    }
    if (!ok) {
        std::string want;
        for (auto name : expected) {
            want += want.empty() ? "" : ",";
            want += name;
        }
        throw ParseError(std::string(source), {{line_, "expected header '" + want + "'"}});
    }
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) {
        throw ValidationError("cannot format number");
    }
    return std::string(buf, ptr);
}

double parse_double(std::string_view field, std::string_view column) {
    double value = 0.0;
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ValidationError("column '" + std::string(column) + "': '" + std::string(field) +
                              "' is not a number");
    }
    if (!std::isfinite(value)) {
        throw ValidationError("column '" + std::string(column) + "': value is not finite");
    }
    return value;
}

std::int64_t parse_int(std::string_view field, std::string_view column) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ValidationError("column '" + std::string(column) + "': '" + std::string(field) +
                              "' is not an integer");
    }
    return value;
}

std::uint64_t parse_uint(std::string_view field, std::string_view column) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ValidationError("column '" + std::string(column) + "': '" + std::string(field) +
                              "' is not a non-negative integer");
    }
    return value;
}

}  // namespace csv
}  // namespace lwcov
