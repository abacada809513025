#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lwcov {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input value violates a type invariant (non-finite coordinate, bad SF, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the domain of a model function (e.g. d < d0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Regression input does not determine a line (fewer than two distinct abscissae).
class DegenerateFitError : public Error {
public:
    using Error::Error;
};

struct ParseIssue {
    std::size_t line;  // 1-based, the header is line 1
    std::string message;
};

/// One or more CSV rows could not be parsed; every offending line is listed.
class ParseError : public Error {
public:
    ParseError(std::string source, std::vector<ParseIssue> issues);

    const std::string& source() const noexcept { return source_; }
    const std::vector<ParseIssue>& issues() const noexcept { return issues_; }

private:
    std::string source_;
    std::vector<ParseIssue> issues_;
};

/// Receptions reference gateways missing from the registry.
class UnknownGatewayError : public Error {
public:
    explicit UnknownGatewayError(std::vector<std::string> ids);

    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    std::vector<std::string> ids_;
};

}  // namespace lwcov
