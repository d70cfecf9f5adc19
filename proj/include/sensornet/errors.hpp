#pragma once

#include <stdexcept>
#include <string>

namespace sensornet {

/// Input outside an operation's domain (k > n, p outside (0,1), W >= R, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A result whose numerical error could not be brought under its bound.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The model makes the requested ratio meaningless (for instance a proper
/// network has probability zero, so P_n is 0/0).
class DegenerateModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration text. Carries the offending line and field.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, std::string field, const std::string& what)
        : std::runtime_error(format(line, field, what)), line_(line), field_(std::move(field)) {}

    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(int line, const std::string& field, const std::string& what) {
        std::string out = "line " + std::to_string(line);
        if (!field.empty()) out += ", field '" + field + "'";
        return out + ": " + what;
    }

    int line_;
    std::string field_;
};

}  // namespace sensornet
