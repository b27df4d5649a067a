#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aquasi {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    OutOfRange,
    MalformedHeader,
    TruncatedPayload,
    UnsupportedFormat,
    Io,
    Config,
    Divergence,
    NumericalBreakdown,
};

/// Stable lower-case identifier used in CLI diagnostics ("error: <kind>: <detail>").
std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(detail), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace aquasi
