#pragma once

// Experiment drivers.  Planar two-slit geometry: slits at transverse +-d/2 on
// the plane x = 0, screen plane at x = L, screen coordinate y.  The analytic
// estimator evaluates the correlated-pair density plus a classical-image
// baseline per bin; the Monte Carlo estimator samples jittered correlated
// arm pairs and band-filters them.  Barrier runs are 1+1 dimensional and use
// root finding for existence.

#include <optional>
#include <vector>

#include "gaugemech/gauge.hpp"
#include "gaugemech/profile.hpp"
#include "gaugemech/sampler.hpp"
#include "gaugemech/spacetime.hpp"

namespace gm {

enum class IntrusionMode { none, fixed_phase, random_kick };
// Where a watching device sits; the pair condition absorbs the state change
// identically either way, with mirrored sign.
enum class IntrusionStage { pre_slit, post_slit };

struct IntrusionSpec {
    IntrusionMode mode = IntrusionMode::none;
    double photon_momentum = 0.0;    // q >= 0, sets the kick spread q*d
    double fixed_delta_kappa = 0.0;  // state offset used by fixed_phase
    IntrusionStage stage = IntrusionStage::pre_slit;

    friend bool operator==(const IntrusionSpec&, const IntrusionSpec&) = default;
};

enum class Estimator { analytic, monte_carlo, both };

struct ExperimentConfig {
    ParticleParams particle{1.0, 2.0 * M_PI};
    double slit_separation = 5.0;
    ScreenSpec screen{};
    IntrusionSpec intrusion{};
    double flux = 0.0;  // enclosed-field phase for interferometer runs
    // Unit box of unit height; inert until kind is switched to barrier.
    PotentialSpec potential{PotentialKind::free, 1.0, 0.0, 1.0};
    SamplerConfig sampler{};
    SeedSpec seeds{};
    Estimator estimator = Estimator::analytic;
    DensityParams density{};
    // Half-angle of the single-slit beam spread; <= 0 selects wavelength/d.
    double divergence = 0.0;
    // Barrier endpoints sit this far outside the box faces.
    double barrier_margin = 0.25;
    // Terminal times are drawn uniformly from this window, in units of the
    // straight crossing length.
    double t_over_l_min = 1.1;
    double t_over_l_max = 2.2;
    // Canonical two-lobe-to-fringe ladder; visibility is monotone on it.
    std::vector<double> sweep_distances{3.0, 12.0, 20.0, 50.0, 100.0};

    double beam_divergence() const;
    // Single-slit image width on a screen at distance L.
    double image_width(double distance) const;
    // Weight of the correlated-pair population against the classical-image
    // baseline: image overlap times the intrusion coherence factor.
    double pair_weight(double distance) const;
    void validate_slit_geometry() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// ─── profiles ───────────────────────────────────────────────────────────────

// Two-slit density profile via cfg.estimator (`both` selects monte_carlo;
// callers wanting the pair of profiles invoke each estimator explicitly).
DensityProfile double_slit(const ExperimentConfig& cfg);
DensityProfile double_slit(const ExperimentConfig& cfg, Estimator which);

// One profile per distance, same seeds and estimator throughout.
std::vector<DensityProfile> screen_distance_sweep(const ExperimentConfig& cfg,
                                                  const std::vector<double>& distances);

// Shielded-flux interferometer: the two-slit pipeline with the pair offset
// shifted by the enclosed phase cfg.flux, canonically reduced mod 2*pi.
DensityProfile aharonov_bohm(const ExperimentConfig& cfg);
DensityProfile aharonov_bohm(const ExperimentConfig& cfg, Estimator which);

// Flux values indistinguishable by any profile.
bool gauge_equivalent(double flux_a, double flux_b, double tol = 1e-9);

// ─── correlated pairs ───────────────────────────────────────────────────────

struct EprOutcome {
    bool undisturbed_physical = false;
    double compensating_factor_angle = 0.0;  // delta_S mod 2*pi
};

// Phase algebra of a correlated pair hit by a state change of measure
// delta_S at one wing: whether the undisturbed pair is admissible, and the
// angle of the multiplicative factor the partner must absorb.
EprOutcome epr_compensation(double s_rho, double s_rho_prime, double delta_s);

// ─── barrier ────────────────────────────────────────────────────────────────

struct TunnelingReport {
    long long n_attempts = 0;
    long long n_transmitted = 0;
    std::vector<double> emergent_speeds;  // post-barrier l/t per transmission
    double transmitted_fraction = 0.0;
};

// Samples candidate crossings of the barrier with jittered interior joints
// and a spread of terminal times, then root-finds an admissible time
// rescale for each.  Attempts with no admissible rescale reflect.
TunnelingReport barrier_scan(const ExperimentConfig& cfg);

// ─── fringe analysis ────────────────────────────────────────────────────────

// Exact two-point path difference at screen coordinate y.
double slit_path_difference(const ExperimentConfig& cfg, double y);

// 3-bin moving average used by all detectors.
std::vector<double> smoothed_density(const DensityProfile& profile);

// Bin centers of local maxima (3-point comparison on the smoothed profile).
std::vector<double> fringe_maxima(const DensityProfile& profile);

// Contrast between the two maxima nearest the screen center and the valley
// between them; 0 when fewer than three maxima resolve.
double fringe_visibility(const DensityProfile& profile);

// delta_p * delta_x from detected fringes: the fringe spacing delta_r is the
// mean step of the path difference across consecutive maxima, delta_p =
// p * delta_r / d, delta_x = d / 2.  Throws numeric_error with fewer than
// three maxima.
double uncertainty_product(const DensityProfile& profile,
                           const ExperimentConfig& cfg);

// The same product with the small-angle fringe spacing 2*pi/p inserted
// symbolically; equals pi for every particle and slit separation.
double uncertainty_product_smallangle(const ParticleParams& particle,
                                      double slit_separation);

}  // namespace gm
