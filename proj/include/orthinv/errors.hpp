#pragma once

#include <stdexcept>
#include <string>

namespace orthinv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BadPrime : Error { using Error::Error; };
struct NonTame : Error { using Error::Error; };
struct ZeroInput : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };
struct PrecisionExhausted : Error { using Error::Error; };
struct NotSubfield : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NotSimilar : Error { using Error::Error; };
struct SearchBudgetExceeded : Error { using Error::Error; };
struct Reducible : Error { using Error::Error; };
struct FieldMismatch : Error { using Error::Error; };
struct UnsupportedOrbit : Error { using Error::Error; };
struct HypothesisFailed : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct DegenerateChain : Error { using Error::Error; };

struct ParseError : Error {
    int line;
    int col;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", col " + std::to_string(col_) + ")"),
          line(line_), col(col_) {}
};

} // namespace orthinv
