#pragma once

#include <stdexcept>
#include <string>

namespace grassdyn {

/// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed arguments: bad shapes, non-finite inputs, out-of-range indices.
struct invalid_input : error {
    explicit invalid_input(const std::string& what) : error(what) {}
};

/// Input files that do not parse; carries a human-readable location.
struct parse_error : error {
    explicit parse_error(const std::string& what) : error(what) {}
};

/// Matrix is numerically singular where an inverse is required.
struct singular_matrix : error {
    explicit singular_matrix(const std::string& what) : error(what) {}
};

/// A basis handed to the reducer is not linearly independent.
struct rank_deficiency : error {
    explicit rank_deficiency(const std::string& what) : error(what) {}
};

/// Jordan recovery hit a matrix outside the supported class.
struct unsupported_structure : error {
    explicit unsupported_structure(const std::string& what) : error(what) {}
};

/// An eigenvalue cluster sits below the modulus tolerance.
struct modulus_zero : error {
    explicit modulus_zero(const std::string& what) : error(what) {}
};

/// The image of a subspace frame collapsed during an orbit scan.
struct degenerate_orbit : error {
    degenerate_orbit(const std::string& what, long long at_iterate)
        : error(what), iterate(at_iterate) {}
    long long iterate;
};

/// A subspace claimed invariant is not; carries the measured residual.
struct invariance_violation : error {
    invariance_violation(const std::string& what, double res)
        : error(what), residual(res) {}
    double residual;
};

/// Unrecoverable internal failure (e.g. eigenvalue iteration stall).
struct internal_error : error {
    explicit internal_error(const std::string& what) : error(what) {}
};

} // namespace grassdyn
