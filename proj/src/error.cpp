#include "pnodal/error.hpp"

namespace pnodal {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::domain: return "domain error";
    case ErrorKind::quadrature: return "quadrature non-convergence";
    case ErrorKind::non_monotone_phase: return "non-monotone phase";
    case ErrorKind::step_underflow: return "step underflow";
    case ErrorKind::ode_tolerance: return "ode tolerance not met";
    case ErrorKind::no_bracket: return "no bracket found";
    case ErrorKind::missing_node: return "missing node";
    case ErrorKind::out_of_range: return "index out of range";
    case ErrorKind::config: return "config error";
    case ErrorKind::io: return "io error";
    }
    return "error";
}

}  // namespace pnodal
