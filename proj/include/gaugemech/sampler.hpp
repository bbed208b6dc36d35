#pragma once

// Monte Carlo trajectory generation and projection onto the admissible set.
// Everything here is deterministic in (config, seeds): equal inputs give
// bit-equal paths, and stream partials merge independently of evaluation
// order.

#include <optional>
#include <vector>

#include "gaugemech/gauge.hpp"
#include "gaugemech/profile.hpp"
#include "gaugemech/rng.hpp"
#include "gaugemech/spacetime.hpp"

namespace gm {

enum class ProjectionMode { band_filter, root_find };

struct SamplerConfig {
    long long n_paths = 200000;    // >= 1
    int n_joints = 8;              // interior joints, <= 64
    double perturb_scale = 0.1;    // Gaussian jitter amplitude, > 0
    double accept_tol = M_PI;      // band half-width in omega, <= pi
    ProjectionMode projection = ProjectionMode::band_filter;
    int max_bisection_iters = 200;

    void validate() const;

    friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

// Piecewise-linear path between fixed endpoints: n_joints interior joints at
// uniformly spaced times, jittered by centered Gaussians of width
// perturb_scale along `jitter`.  Endpoints are never jittered.
Path jittered_path(const Event& start, const Event& end, int n_joints,
                   double perturb_scale, const Event& jitter,
                   RandomStream& rng);

// Batch form of jittered_path.  The jitter direction is the in-plane
// perpendicular of the endpoint displacement; purely longitudinal 1-d
// problems (y == 0 throughout) jitter along x instead, staying 1+1
// dimensional.  Paths are generated stream by stream; the returned batch is
// in stream-major order.
std::vector<Path> sample_paths(const Event& start, const Event& end,
                               const SamplerConfig& cfg, const SeedSpec& seeds);

// Rescales the path's elapsed time uniformly (start time fixed) by bisection
// until the action lands on the gauge-offset multiple of 2*pi nearest to the
// unscaled action, with |residual| <= 1e-9.  Scale factors are confined to
// [0.75, 1.25], further clipped to keep every segment timelike in
// relativistic mode.  Returns nothing when the target is not bracketed or
// bisection fails to converge; a path already physical returns unchanged.
std::optional<Path> project_to_physical(const Path& path,
                                        const ParticleParams& particle,
                                        const PotentialSpec& pot,
                                        const PhaseState& kappa_start,
                                        const PhaseState& kappa_end,
                                        const SamplerConfig& cfg,
                                        ActionMode mode = ActionMode::relativistic);

// Elapsed-time scale copy used by the projection; exposed for tests.
Path scale_elapsed_time(const Path& path, double scale);

}  // namespace gm
