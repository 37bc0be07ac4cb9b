#pragma once

#include <stdexcept>
#include <string>

namespace isospec {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Source text rejected by the expression grammar. offset is a byte index
// into the original source string, pointing at the offending token.
struct parse_error : error {
    parse_error(const std::string& msg, std::size_t offset_)
        : error(msg + " (byte " + std::to_string(offset_) + ")"), offset(offset_) {}
    std::size_t offset;
};

// Evaluation left the real domain: sqrt of a negative, ln of a non-positive,
// division by zero, negative base with non-integer exponent, non-finite result.
struct domain_error : error {
    using error::error;
};

// The integrating factor came out non-positive where it must be > 0.
struct invalid_superpotential : error {
    using error::error;
};

// exp(-2*integral of phi_p) left the representable range; the window reaches
// too far into a growing tail. Names the offending x.
struct window_error : error {
    explicit window_error(const std::string& msg, double x_ = 0.0) : error(msg), x(x_) {}
    double x;
};

// gamma + Gamma(x) vanishes inside the window: the family member blows up.
struct singularity_error : error {
    singularity_error(double x_, double gamma_)
        : error("family is singular: gamma + Gamma(x) = 0 at x = " + std::to_string(x_) +
                " for gamma = " + std::to_string(gamma_)),
          x(x_), gamma(gamma_) {}
    double x;
    double gamma;
};

// The zero mode has infinite L2 norm (e.g. every gamma of the fresnel preset).
struct nonnormalizable_error : error {
    using error::error;
};

// Appendix-convention gamma inside [-1, 0]: N = sqrt(gamma*(gamma+1)) is not real.
struct forbidden_interval_error : error {
    using error::error;
};

// Root bracketing failed: the function has the same sign at both bracket ends.
struct bracket_error : error {
    using error::error;
};

// The requested discrete bound state does not exist (continuous spectrum).
struct unsupported_spectrum_error : error {
    using error::error;
};

} // namespace isospec
