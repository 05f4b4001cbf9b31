#pragma once

#include <stdexcept>
#include <string>

namespace dicert {

// Structured failure codes. Every throwing path in the library uses Error so
// callers (and the CLI exit-code mapping) can dispatch on the code instead of
// parsing messages.
enum class ErrorCode {
    MalformedRow,
    DomainError,
    EmptyLog,
    MissingInput,
    ZeroProbabilityInput,
    NonUniformSettings,
    AboveTsirelson,
    Infeasible,
    LengthMismatch,
    SeedExhausted,
    CertificationFailed,
    TooShort,
    IoError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace dicert
