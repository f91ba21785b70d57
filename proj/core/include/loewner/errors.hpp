#pragma once

#include <stdexcept>
#include <string>

namespace loewner {

/// Input outside the domain of an operation (point off the disk, infinite
/// half-plane point, arc off its support, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A Herglotz field failed positivity or holomorphy probes.
class HerglotzError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Step-size underflow, persistent domain exit, or quadrature breakdown.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An analysis was requested outside the regime where it means anything
/// (e.g. non-tangential check on a trajectory that does not converge to tau).
class NotApplicable : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Classifications across a grid disagree where every point must share one
/// case; signals a numerical failure rather than a mathematical one.
class ClassificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario or expression text. Carries a 1-based line/column.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace loewner
