#include "gaugemech/spacetime.hpp"

#include <algorithm>
#include <cmath>

namespace gm {

// ─── segments ──────────────────────────────────────────────────────────────

double Segment::length() const noexcept {
    return std::hypot(end.x - start.x, end.y - start.y);
}

Event Segment::midpoint() const noexcept {
    return {0.5 * (start.t + end.t), 0.5 * (start.x + end.x),
            0.5 * (start.y + end.y)};
}

double ParticleParams::wavelength() const noexcept {
    return 2.0 * M_PI / momentum;
}

double ParticleParams::speed() const noexcept {
    return momentum / std::sqrt(momentum * momentum + mass * mass);
}

double PotentialSpec::value_at(const Event& where) const noexcept {
    if (kind == PotentialKind::free) return 0.0;
    return (where.x >= x_lo && where.x <= x_hi) ? height : 0.0;
}

// ─── paths ─────────────────────────────────────────────────────────────────

namespace {

// Admissible time profiles: strictly increasing, or one strict reversal.
// Returns the turning index, or npos for monotonic, throws otherwise.
constexpr std::size_t kMonotonic = static_cast<std::size_t>(-1);

std::size_t classify_times(const std::vector<Event>& ev) {
    std::size_t turn = kMonotonic;
    for (std::size_t i = 1; i < ev.size(); ++i) {
        const double dt = ev[i].t - ev[i - 1].t;
        if (dt > 0.0) {
            if (turn != kMonotonic)
                throw path_error("time increases again after a reversal");
        } else if (dt < 0.0) {
            if (i == 1) throw path_error("path starts backward in time");
            if (turn == kMonotonic) turn = i - 1;
        } else {
            throw path_error("consecutive events share the same time");
        }
    }
    return turn;
}

}  // namespace

Path::Path(std::vector<Event> events) : events_(std::move(events)) {
    if (events_.size() < 2) throw path_error("path needs at least two events");
    for (std::size_t i = 1; i < events_.size(); ++i)
        if (events_[i] == events_[i - 1])
            throw path_error("consecutive events coincide");
    monotonic_ = classify_times(events_) == kMonotonic;
}

Segment Path::segment(std::size_t i) const {
    return {events_.at(i), events_.at(i + 1)};
}

std::pair<Path, Path> Path::decompose() const {
    if (monotonic_) throw path_error("monotonic path has no decomposition");
    const std::size_t turn = classify_times(events_);
    std::vector<Event> fwd(events_.begin(), events_.begin() + turn + 1);
    std::vector<Event> inv(events_.rbegin(),
                           events_.rbegin() + (events_.size() - turn));
    return {Path(std::move(fwd)), Path(std::move(inv))};
}

Path Path::recombine(const Path& forward, const Path& inverted) {
    if (!forward.monotonic() || !inverted.monotonic())
        throw path_error("recombine expects two monotonic components");
    if (!(forward.events().back() == inverted.events().back()))
        throw path_error("components do not share a turning event");
    std::vector<Event> ev = forward.events();
    ev.insert(ev.end(), inverted.events().rbegin() + 1,
              inverted.events().rend());
    return Path(std::move(ev));
}

// ─── actions ───────────────────────────────────────────────────────────────

double segment_action_rel(const Segment& seg, const ParticleParams& particle,
                          double potential_value) {
    const double dt = seg.dt();
    const double l = seg.length();
    if (!(dt > l))
        throw spacelike_error("segment is not timelike (dt <= spatial length)");
    return -particle.mass * std::sqrt(dt * dt - l * l) - potential_value * dt;
}

double segment_action_nonrel(const Segment& seg, const ParticleParams& particle,
                             double potential_value) {
    const double dt = seg.dt();
    if (!(dt > 0.0)) throw spacelike_error("segment does not advance in time");
    const double l = seg.length();
    return particle.mass * l * l / (2.0 * dt) - potential_value * dt;
}

namespace {

double monotonic_action(const Path& path, const ParticleParams& particle,
                        const PotentialSpec& pot, ActionMode mode) {
    double total = 0.0;
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const Segment seg = path.segment(i);
        const double v = pot.value_at(seg.midpoint());
        total += (mode == ActionMode::relativistic)
                     ? segment_action_rel(seg, particle, v)
                     : segment_action_nonrel(seg, particle, v);
    }
    return total;
}

}  // namespace

double path_action(const Path& path, const ParticleParams& particle,
                   const PotentialSpec& pot, ActionMode mode) {
    if (path.monotonic()) return monotonic_action(path, particle, pot, mode);
    const auto [fwd, inv] = path.decompose();
    return monotonic_action(fwd, particle, pot, mode) -
           monotonic_action(inv, particle, pot, mode);
}

double path_length(const Path& path) {
    double total = 0.0;
    for (std::size_t i = 0; i < path.segment_count(); ++i)
        total += path.segment(i).length();
    return total;
}

Path refine_at_boundaries(const Path& path, const PotentialSpec& pot) {
    if (pot.kind == PotentialKind::free) return path;
    std::vector<Event> out;
    out.reserve(path.events().size() + 8);
    out.push_back(path.events().front());
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const Segment seg = path.segment(i);
        const double x0 = seg.start.x, x1 = seg.end.x;
        // Fractional positions of each face crossing, in segment order.
        std::vector<double> cuts;
        for (double face : {pot.x_lo, pot.x_hi}) {
            if ((x0 < face && x1 > face) || (x0 > face && x1 < face))
                cuts.push_back((face - x0) / (x1 - x0));
        }
        std::sort(cuts.begin(), cuts.end());
        for (double f : cuts) {
            out.push_back({seg.start.t + f * seg.dt(),
                           x0 + f * (x1 - x0),
                           seg.start.y + f * (seg.end.y - seg.start.y)});
        }
        out.push_back(seg.end);
    }
    return Path(std::move(out));
}

}  // namespace gm
