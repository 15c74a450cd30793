#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phasesep {

enum class ErrorKind {
    Input,
    Numeric,
    Geometry,
    UnsupportedGeometry,
    Capability,
    Stagnation,
    Parse,
    NotFound,
    Unsupported,
    Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// CLI) can branch on the category without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

} // namespace phasesep
