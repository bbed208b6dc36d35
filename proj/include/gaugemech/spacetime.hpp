#pragma once

// Flat 2+1 dimensional kinematics: events, piecewise-linear paths and their
// actions in natural units (c = 1, hbar = 1).  One spatial axis is enough for
// barrier problems; planar slit geometries use both.

#include <cstddef>
#include <utility>
#include <vector>

#include "gaugemech/errors.hpp"

namespace gm {

struct Event {
    double t = 0.0;
    double x = 0.0;  // longitudinal coordinate
    double y = 0.0;  // transverse coordinate, 0 for 1-d problems

    friend bool operator==(const Event&, const Event&) = default;
};

// Directed segment between two events.
struct Segment {
    Event start;
    Event end;

    double dt() const noexcept { return end.t - start.t; }
    // Euclidean spatial length.
    double length() const noexcept;
    // Spatial midpoint, where potentials are sampled.
    Event midpoint() const noexcept;
};

struct ParticleParams {
    double mass = 1.0;      // > 0, massless particles are out of scope
    double momentum = 1.0;  // > 0, magnitude of the classical momentum

    // de Broglie wavelength 2*pi/p in natural units.
    double wavelength() const noexcept;
    // Relativistic speed p/sqrt(p^2 + m^2), always < 1.
    double speed() const noexcept;

    friend bool operator==(const ParticleParams&, const ParticleParams&) = default;
};

enum class PotentialKind { free, barrier };

// Rectangular barrier of height V on [x_lo, x_hi]; `free` ignores the box.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::free;
    double height = 0.0;
    double x_lo = 0.0;
    double x_hi = 0.0;

    double value_at(const Event& where) const noexcept;

    friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

// Ordered event list.  `monotonic` is true when t strictly increases along
// the list; the only other admissible shape is a single time reversal
// (strictly up, then strictly down), which decomposes into two monotonic
// components sharing the turning event.
class Path {
  public:
    explicit Path(std::vector<Event> events);

    const std::vector<Event>& events() const noexcept { return events_; }
    bool monotonic() const noexcept { return monotonic_; }
    std::size_t segment_count() const noexcept { return events_.size() - 1; }
    Segment segment(std::size_t i) const;
    const Event& terminal() const noexcept { return events_.back(); }

    // Splits a single-reversal path at its turning event.  Both components
    // run forward in time; the second is the inverted branch reversed.
    // Throws path_error when the path is monotonic.
    std::pair<Path, Path> decompose() const;

    // Inverse of decompose: first + reversed(second), turning event shared.
    static Path recombine(const Path& forward, const Path& inverted);

  private:
    std::vector<Event> events_;
    bool monotonic_ = false;
};

enum class ActionMode { relativistic, nonrelativistic };

// Action of one timelike segment, -m*sqrt(dt^2 - l^2) - V*dt.
// Throws spacelike_error unless dt > l.
double segment_action_rel(const Segment& seg, const ParticleParams& particle,
                          double potential_value);

// Non-relativistic form m*l^2/(2*dt) - V*dt (rest-mass term dropped).
double segment_action_nonrel(const Segment& seg, const ParticleParams& particle,
                             double potential_value);

// Total action along a path.  Monotonic paths sum their segments with the
// potential sampled at segment midpoints.  A single-reversal path is
// decomposed and evaluated as S(forward) - S(inverted), the difference
// structure of a correlated pair.
double path_action(const Path& path, const ParticleParams& particle,
                   const PotentialSpec& pot,
                   ActionMode mode = ActionMode::relativistic);

// Total spatial length; both components of a reversal contribute positively.
double path_length(const Path& path);

// Copy of the path with extra joints inserted wherever a segment crosses a
// barrier face, so no segment straddles a discontinuity of the potential.
// Free potentials return the path unchanged.
Path refine_at_boundaries(const Path& path, const PotentialSpec& pot);

}  // namespace gm
