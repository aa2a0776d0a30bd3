#ifndef SLGREEN_ERRORS_HPP
#define SLGREEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slgreen {

// Every failure mode of the library. Codes are stable; messages are free-form.
enum class errc {
    // problem validation
    bad_geometry,
    nonpositive_coupling_minor,
    zero_boundary_row,
    nonpositive_delta0,
    out_of_side,
    // integration
    step_underflow,
    non_finite,
    max_steps_exceeded,
    out_of_span,
    quadrature_failure,
    // spectrum
    bad_range,
    not_a_bracket,
    no_convergence,
    not_an_eigenvalue,
    // Green's function / resolvent
    at_eigenvalue,
    at_interior_point,
    // Hilbert-space operations
    delta0_zero,
    not_in_domain,
    degenerate_constraints,
    // config parsing
    syntax_error,
    missing_key,
    // contract misuse not covered above
    invalid_argument,
};

const char* to_string(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

} // namespace slgreen

#endif
