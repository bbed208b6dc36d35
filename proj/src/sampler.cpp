#include "gaugemech/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace gm {

// ─── screen histograms ─────────────────────────────────────────────────────

void ScreenSpec::validate() const {
    if (!(x_min < x_max)) throw geometry_error("screen range is empty");
    if (n_bins < 2) throw geometry_error("screen needs at least two bins");
}

ScreenHistogram::ScreenHistogram(const ScreenSpec& screen) : screen_(screen) {
    screen_.validate();
    weights_.assign(static_cast<std::size_t>(screen_.n_bins), 0.0);
}

void ScreenHistogram::add(double coordinate, double weight) {
    if (coordinate < screen_.x_min || coordinate >= screen_.x_max) {
        overflow_weight_ += weight;
        overflow_count_ += 1;
        return;
    }
    const auto bin = static_cast<std::size_t>(
        (coordinate - screen_.x_min) / screen_.bin_width());
    weights_[std::min(bin, weights_.size() - 1)] += weight;
    total_ += weight;
}

void ScreenHistogram::add_terminal(const Event& terminal, double weight) {
    add(screen_.axis == Axis::y ? terminal.y : terminal.x, weight);
}

void ScreenHistogram::merge(const ScreenHistogram& other) {
    if (other.weights_.size() != weights_.size() ||
        other.screen_.x_min != screen_.x_min ||
        other.screen_.x_max != screen_.x_max)
        throw error("cannot merge histograms over different screens");
    for (std::size_t i = 0; i < weights_.size(); ++i)
        weights_[i] += other.weights_[i];
    total_ += other.total_;
    overflow_weight_ += other.overflow_weight_;
    overflow_count_ += other.overflow_count_;
}

DensityProfile ScreenHistogram::normalized() const {
    DensityProfile profile;
    profile.bin_centers.resize(weights_.size());
    for (std::size_t i = 0; i < weights_.size(); ++i)
        profile.bin_centers[i] = screen_.bin_center(static_cast<int>(i));
    profile.gauge_density.assign(weights_.size(), 0.0);
    profile.overflow_weight = overflow_weight_;
    profile.overflow_count = overflow_count_;
    profile.empty = !(total_ > 0.0);
    if (!profile.empty) {
        const double norm = 1.0 / (total_ * screen_.bin_width());
        for (std::size_t i = 0; i < weights_.size(); ++i)
            profile.gauge_density[i] = weights_[i] * norm;
    }
    return profile;
}

DensityProfile accumulate_screen(
    const std::vector<std::pair<Path, double>>& batch, const ScreenSpec& screen) {
    ScreenHistogram hist(screen);
    for (const auto& [path, weight] : batch)
        hist.add_terminal(path.terminal(), weight);
    return hist.normalized();
}

// ─── path generation ───────────────────────────────────────────────────────

void SamplerConfig::validate() const {
    if (n_paths < 1) throw error("n_paths must be at least 1");
    if (n_joints < 0 || n_joints > 64) throw error("n_joints outside [0, 64]");
    if (!(perturb_scale > 0.0)) throw error("perturb_scale must be positive");
    if (!(accept_tol > 0.0) || accept_tol > M_PI)
        throw error("accept_tol outside (0, pi]");
    if (max_bisection_iters < 1) throw error("max_bisection_iters must be >= 1");
}

Path jittered_path(const Event& start, const Event& end, int n_joints,
                   double perturb_scale, const Event& jitter,
                   RandomStream& rng) {
    std::vector<Event> ev;
    ev.reserve(static_cast<std::size_t>(n_joints) + 2);
    ev.push_back(start);
    const double dt = end.t - start.t;
    for (int j = 1; j <= n_joints; ++j) {
        const double f = static_cast<double>(j) / (n_joints + 1);
        const double g = perturb_scale * rng.gaussian();
        ev.push_back({start.t + f * dt,
                      start.x + f * (end.x - start.x) + g * jitter.x,
                      start.y + f * (end.y - start.y) + g * jitter.y});
    }
    ev.push_back(end);
    return Path(std::move(ev));
}

namespace {

// Unit jitter direction for a pair of endpoints; see header.
Event jitter_direction(const Event& start, const Event& end) {
    const double dx = end.x - start.x, dy = end.y - start.y;
    const double len = std::hypot(dx, dy);
    if (start.y == 0.0 && end.y == 0.0)
        return {0.0, 1.0, 0.0};  // longitudinal, keeps the problem 1+1 d
    if (len == 0.0) return {0.0, 0.0, 1.0};
    return {0.0, -dy / len, dx / len};
}

}  // namespace

std::vector<Path> sample_paths(const Event& start, const Event& end,
                               const SamplerConfig& cfg, const SeedSpec& seeds) {
    cfg.validate();
    if (seeds.stream_count < 1) throw error("stream_count must be >= 1");
    if (!(end.t > start.t))
        throw error("endpoints must be ordered in time");
    const Event dir = jitter_direction(start, end);
    std::vector<Path> batch;
    batch.reserve(static_cast<std::size_t>(cfg.n_paths));
    for (int s = 0; s < seeds.stream_count; ++s) {
        RandomStream rng(seeds.master_seed, s);
        const long long lo = cfg.n_paths * s / seeds.stream_count;
        const long long hi = cfg.n_paths * (s + 1) / seeds.stream_count;
        for (long long i = lo; i < hi; ++i)
            batch.push_back(jittered_path(start, end, cfg.n_joints,
                                          cfg.perturb_scale, dir, rng));
    }
    return batch;
}

// ─── projection ────────────────────────────────────────────────────────────

Path scale_elapsed_time(const Path& path, double scale) {
    const double t0 = path.events().front().t;
    std::vector<Event> ev = path.events();
    for (Event& e : ev) e.t = t0 + scale * (e.t - t0);
    return Path(std::move(ev));
}

namespace {

// Smallest admissible elapsed-time scale: every segment needs s*dt > l.
double timelike_floor(const Path& path) {
    double floor_scale = 0.0;
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const Segment seg = path.segment(i);
        floor_scale = std::max(floor_scale, seg.length() / seg.dt());
    }
    return floor_scale;
}

}  // namespace

std::optional<Path> project_to_physical(const Path& path,
                                        const ParticleParams& particle,
                                        const PotentialSpec& pot,
                                        const PhaseState& kappa_start,
                                        const PhaseState& kappa_end,
                                        const SamplerConfig& cfg,
                                        ActionMode mode) {
    constexpr double kTol = 1e-9;
    constexpr double kWindow = 0.25;
    if (!path.monotonic())
        throw path_error("projection expects a monotonic path");

    const Path refined = refine_at_boundaries(path, pot);
    const double delta = kappa_end.angle() - kappa_start.angle();

    const auto action_at = [&](double s) {
        return path_action(scale_elapsed_time(refined, s), particle, pot, mode);
    };

    double lo = 1.0 - kWindow, hi = 1.0 + kWindow;
    if (mode == ActionMode::relativistic) {
        const double floor_scale = timelike_floor(refined);
        if (floor_scale >= hi) return std::nullopt;  // spacelike limit
        lo = std::max(lo, floor_scale * (1.0 + 1e-9));
    }

    const double s_unscaled = action_at(1.0);
    const PhaseResidual res = phase_residual(s_unscaled, delta);
    if (res.omega <= kTol) return path;  // fixed point
    const double target = delta + 2.0 * M_PI * static_cast<double>(res.n_nearest);

    double g_lo = action_at(lo) - target;
    double g_hi = action_at(hi) - target;
    if (g_lo == 0.0) return scale_elapsed_time(refined, lo);
    if (g_hi == 0.0) return scale_elapsed_time(refined, hi);
    if ((g_lo < 0.0) == (g_hi < 0.0)) return std::nullopt;  // not bracketed

    for (int iter = 0; iter < cfg.max_bisection_iters; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = action_at(mid) - target;
        if (std::fabs(g_mid) <= kTol) return scale_elapsed_time(refined, mid);
        if ((g_mid < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    return std::nullopt;  // bracket too stiff for the iteration budget
}

}  // namespace gm
