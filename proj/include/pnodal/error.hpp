#ifndef PNODAL_ERROR_HPP
#define PNODAL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pnodal {

enum class ErrorKind {
    domain,              // argument outside the mathematical domain
    quadrature,          // adaptive quadrature failed to converge
    non_monotone_phase,  // Pruefer phase right-hand side became <= 0
    step_underflow,      // step control drove the step below its floor
    ode_tolerance,       // step-halving check could not meet the tolerance
    no_bracket,          // eigenvalue search found no sign change
    missing_node,        // fewer nodal brackets than the index requires
    out_of_range,        // index outside its admissible range
    config,              // malformed experiment configuration
    io                   // file could not be read or written
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace pnodal

#endif
