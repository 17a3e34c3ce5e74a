#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cforge {

enum class ErrorCode {
    DomainMismatch,
    MalformedPayload,
    UnknownConcept,
    RefutedByStoredObject,
    BadHeader,
    BadLength,
    CharOutOfRange,
    SizeCapExceeded,
    ComplexityOutOfRange,
    TypeError,
    ParseError,
    NoEligibleObjects,
    EmptySignature,
    VacuousHypothesis,
    RefutedTarget,
    MalformedKB,
    JobActive,
    UnknownSubject,
    UnknownSession,
    BogusCounterexample,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every domain-level failure surfaces as this exception. `detail` carries
// machine-readable context (byte offsets, witness labels, evaluation traces).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string detail = {})
        : std::runtime_error(std::move(message)), code_(code), detail_(std::move(detail))
    {
    }

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace cforge
