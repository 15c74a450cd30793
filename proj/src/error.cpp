#include "phasesep/error.hpp"

namespace phasesep {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Input: return "input error";
    case ErrorKind::Numeric: return "numeric error";
    case ErrorKind::Geometry: return "geometry error";
    case ErrorKind::UnsupportedGeometry: return "unsupported geometry";
    case ErrorKind::Capability: return "capability error";
    case ErrorKind::Stagnation: return "stagnation";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::NotFound: return "not found";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Io: return "io error";
    }
    return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
{
}

void fail(ErrorKind kind, const std::string& message)
{
    throw Error(kind, message);
}

} // namespace phasesep
