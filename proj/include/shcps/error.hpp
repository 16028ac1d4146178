#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shcps {

enum class ErrorCode {
    DuplicateId,
    DuplicateEdge,
    UnknownNode,
    CycleDetected,
    KindViolation,
    NotAParameter,
    SchemaError,
    InvalidModel,
    UnknownProperty,
    InvalidValue,
    OutOfRange,
    InvalidTheta,
    NoSource,
    AlreadyAnnotated,
    NotAnnotated,
    StaleSubstitution,
    InvalidSubstitution,
    AlreadyFailed,
    NotFailed,
    InvalidSpec,
    ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::KindViolation: return "KindViolation";
    case ErrorCode::NotAParameter: return "NotAParameter";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::UnknownProperty: return "UnknownProperty";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidTheta: return "InvalidTheta";
    case ErrorCode::NoSource: return "NoSource";
    case ErrorCode::AlreadyAnnotated: return "AlreadyAnnotated";
    case ErrorCode::NotAnnotated: return "NotAnnotated";
    case ErrorCode::StaleSubstitution: return "StaleSubstitution";
    case ErrorCode::InvalidSubstitution: return "InvalidSubstitution";
    case ErrorCode::AlreadyFailed: return "AlreadyFailed";
    case ErrorCode::NotFailed: return "NotFailed";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// All library failures are reported through this exception; `code()` is
/// the stable, testable part and `what()` carries the human-readable detail
/// prefixed with the code name.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace shcps
