#pragma once

#include <stdexcept>
#include <string>

namespace sizeclust {

// Bad argument to a numerical routine (label out of range, non-positive
// composition part, length mismatch, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Configuration that is well-formed but cannot be honoured (K too large for
// exhaustive permutation search, too few chains for R-hat, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Unreadable or malformed input data. Carries row/column context when known.
class DataError : public std::runtime_error {
public:
    DataError(const std::string& what, long row = -1, long column = -1)
        : std::runtime_error(format(what, row, column)), row_(row), column_(column) {}

    long row() const noexcept { return row_; }
    long column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, long row, long column) {
        std::string out = what;
        if (row >= 0) out += " (row " + std::to_string(row);
        if (column >= 0) out += (row >= 0 ? ", column " : " (column ") + std::to_string(column);
        if (row >= 0 || column >= 0) out += ")";
        return out;
    }

    long row_;
    long column_;
};

}  // namespace sizeclust
