#pragma once

#include <stdexcept>
#include <string>

namespace qse {

// Failure categories. Config/Model map to CLI exit code 2, the numeric
// family to exit code 3.
enum class ErrorKind {
    Config,      // malformed or schema-violating input document
    Model,       // semantically invalid model (non-Hermitian, bad dims)
    Dimension,   // operand shape mismatch
    Size,        // exceeds configured universe dimension cap
    Numeric,     // tolerance violation in a numeric routine
    Continuity,  // Schmidt-basis tracking lost continuity
    Usage        // API contract violation (wrong call order, mixed gauges)
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    Error(ErrorKind kind, const std::string& msg, double value)
        : std::runtime_error(msg), kind_(kind), value_(value) {}

    ErrorKind kind() const { return kind_; }
    // Payload: offending time for continuity errors, asymmetry norm for
    // numeric ones.
    double value() const { return value_; }

  private:
    ErrorKind kind_;
    double value_ = 0.0;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}
[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg, double value) {
    throw Error(kind, msg, value);
}

// CLI convention: 0 success, 2 config error, 3 numeric/continuity error,
// 4 invariant failure (reported by the check battery, not via exceptions).
inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config:
        case ErrorKind::Model:
            return 2;
        default:
            return 3;
    }
}

}  // namespace qse
