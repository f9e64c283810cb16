#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lrqd {

enum class ErrorCode {
    WrongDimensions,
    UnknownCharacter,
    OutOfRangeCode,
    NonFiniteActivation,
    NoEmptyTile,
    MalformedManifest,
    ShapeMismatch,
    TruncatedBlob,
    InvalidConfig,
    ArchiveSchemaMismatch,
    Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::WrongDimensions: return "WrongDimensions";
    case ErrorCode::UnknownCharacter: return "UnknownCharacter";
    case ErrorCode::OutOfRangeCode: return "OutOfRangeCode";
    case ErrorCode::NonFiniteActivation: return "NonFiniteActivation";
    case ErrorCode::NoEmptyTile: return "NoEmptyTile";
    case ErrorCode::MalformedManifest: return "MalformedManifest";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TruncatedBlob: return "TruncatedBlob";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ArchiveSchemaMismatch: return "ArchiveSchemaMismatch";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code, so
/// callers can branch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace lrqd
