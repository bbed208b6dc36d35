#pragma once

#include <stdexcept>
#include <string>

namespace gm {

// Base for all library errors so callers can catch one type at the boundary.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A segment (or a rescaled candidate) has |dx| >= dt: no real action exists.
struct spacelike_error : error {
    using error::error;
};

// Malformed path: too few events, repeated events, multiple time reversals.
struct path_error : error {
    using error::error;
};

// Bad experiment geometry (slit separation, screen placement, barrier box).
struct geometry_error : error {
    using error::error;
};

// Numerical preconditions: unstable step size, empty masked region,
// lattice too large for exhaustive enumeration, unresolvable fringes.
struct numeric_error : error {
    using error::error;
};

// Config-file problems carry the 1-based line number (0 = whole document).
struct config_error : error {
    int line;
    config_error(const std::string& msg, int line_no = 0)
        : error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg
                            : msg),
          line(line_no) {}
};

// Filesystem failures while emitting run outputs.
struct io_error : error {
    using error::error;
};

}  // namespace gm
