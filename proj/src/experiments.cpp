#include "gaugemech/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gm {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kProjectionTol = 1e-9;

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Fixed part of the pair phase offset.
double fixed_offset(const IntrusionSpec& intr) {
    return intr.mode == IntrusionMode::fixed_phase ? intr.fixed_delta_kappa : 0.0;
}

// Spread of the per-particle state kick, q*d.
double kick_sigma(const IntrusionSpec& intr, double slit_separation) {
    if (intr.mode == IntrusionMode::none) return 0.0;
    return intr.photon_momentum * slit_separation;
}

double wrap_centered(double a) { return a - kTwoPi * std::round(a / kTwoPi); }

}  // namespace

// ─── config helpers ─────────────────────────────────────────────────────────

double ExperimentConfig::beam_divergence() const {
    return divergence > 0.0 ? divergence
                            : particle.wavelength() / slit_separation;
}

double ExperimentConfig::image_width(double distance) const {
    return density.xi_bar + beam_divergence() * distance;
}

double ExperimentConfig::pair_weight(double distance) const {
    const double w = image_width(distance);
    const double overlap =
        std::exp(-slit_separation * slit_separation / (8.0 * w * w));
    const double sigma = kick_sigma(intrusion, slit_separation);
    return overlap * std::exp(-0.5 * sigma * sigma);
}

void ExperimentConfig::validate_slit_geometry() const {
    if (!(particle.mass > 0.0) || !(particle.momentum > 0.0))
        throw geometry_error("particle mass and momentum must be positive");
    if (!(slit_separation > 0.0))
        throw geometry_error("slit separation must be positive");
    if (!(screen.distance > 0.0))
        throw geometry_error("screen distance must be positive");
    if (screen.axis != Axis::y)
        throw geometry_error("slit experiments bin the transverse coordinate");
    if (!(slit_separation < screen.x_max - screen.x_min))
        throw geometry_error("slit separation must fit inside the screen range");
    if (intrusion.photon_momentum < 0.0)
        throw geometry_error("photon momentum must be non-negative");
    screen.validate();
    sampler.validate();
}

double slit_path_difference(const ExperimentConfig& cfg, double y) {
    const double half = 0.5 * cfg.slit_separation;
    const double L = cfg.screen.distance;
    return std::hypot(L, y + half) - std::hypot(L, y - half);
}

// ─── analytic estimator ─────────────────────────────────────────────────────

namespace {

// Quadrature nodes (offset, weight) for averaging over the wrapped-normal
// state kick; a single node when the spread is zero.
std::vector<std::pair<double, double>> kick_nodes(double sigma) {
    if (sigma <= 0.0) return {{0.0, 1.0}};
    constexpr int kNodes = 256;
    const int images = static_cast<int>(std::ceil(4.0 * sigma / kTwoPi)) + 1;
    std::vector<std::pair<double, double>> nodes(kNodes);
    double total = 0.0;
    for (int j = 0; j < kNodes; ++j) {
        const double v = -M_PI + (j + 0.5) * kTwoPi / kNodes;
        double pdf = 0.0;
        for (int k = -images; k <= images; ++k) {
            const double u = (v + kTwoPi * k) / sigma;
            pdf += std::exp(-0.5 * u * u);
        }
        nodes[j] = {v, pdf};
        total += pdf;
    }
    for (auto& [v, w] : nodes) w /= total;
    return nodes;
}

void stamp_common(DensityProfile& profile, const ExperimentConfig& cfg,
                  const char* estimator, double pair_offset) {
    profile.metadata["estimator"] = estimator;
    profile.metadata["p"] = fmt_g(cfg.particle.momentum);
    profile.metadata["mass"] = fmt_g(cfg.particle.mass);
    profile.metadata["d"] = fmt_g(cfg.slit_separation);
    profile.metadata["L"] = fmt_g(cfg.screen.distance);
    profile.metadata["pair_weight"] = fmt_g(cfg.pair_weight(cfg.screen.distance));
    profile.metadata["pair_offset"] = fmt_g(pair_offset);
    profile.metadata["kick_sigma"] =
        fmt_g(kick_sigma(cfg.intrusion, cfg.slit_separation));
    profile.metadata["baseline"] = "classical images, width xi_bar + divergence*L";
}

DensityProfile analytic_profile(const ExperimentConfig& cfg, double extra_offset) {
    cfg.validate_slit_geometry();
    const ScreenSpec& screen = cfg.screen;
    const double p = cfg.particle.momentum;
    const double L = screen.distance;
    const double w_pair = cfg.pair_weight(L);
    const double sigma_img = cfg.image_width(L);
    const double half = 0.5 * cfg.slit_separation;
    const double delta0 = fixed_offset(cfg.intrusion) + extra_offset;
    const auto nodes =
        cfg.intrusion.mode == IntrusionMode::random_kick
            ? kick_nodes(kick_sigma(cfg.intrusion, cfg.slit_separation))
            : kick_nodes(0.0);

    const auto n = static_cast<std::size_t>(screen.n_bins);
    std::vector<double> pair_term(n), mono_term(n);
    double pair_area = 0.0, mono_area = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = screen.bin_center(static_cast<int>(i));
        const double ds = p * slit_path_difference(cfg, y);
        double acc = 0.0;
        for (const auto& [v, wt] : nodes)
            acc += wt * neighborhood_density(phase_residual(ds, delta0 + v).omega,
                                             cfg.density);
        pair_term[i] = acc;
        const double u1 = (y - half) / sigma_img, u2 = (y + half) / sigma_img;
        mono_term[i] = std::exp(-0.5 * u1 * u1) + std::exp(-0.5 * u2 * u2);
        pair_area += pair_term[i];
        mono_area += mono_term[i];
    }

    DensityProfile profile;
    profile.bin_centers.resize(n);
    profile.gauge_density.resize(n);
    const double width = screen.bin_width();
    for (std::size_t i = 0; i < n; ++i) {
        profile.bin_centers[i] = screen.bin_center(static_cast<int>(i));
        const double pair_norm = pair_term[i] / (pair_area * width);
        const double mono_norm = mono_term[i] / (mono_area * width);
        profile.gauge_density[i] = w_pair * pair_norm + (1.0 - w_pair) * mono_norm;
    }
    profile.empty = false;
    stamp_common(profile, cfg, "analytic", delta0);
    return profile;
}

// ─── Monte Carlo estimator ──────────────────────────────────────────────────

DensityProfile mc_profile(const ExperimentConfig& cfg, double extra_offset) {
    cfg.validate_slit_geometry();
    if (cfg.seeds.stream_count < 1) throw error("stream_count must be >= 1");
    const ScreenSpec& screen = cfg.screen;
    const double p = cfg.particle.momentum;
    const double mass = cfg.particle.mass;
    const double L = screen.distance;
    const double half = 0.5 * cfg.slit_separation;
    const double w_pair = cfg.pair_weight(L);
    const double w_mono = 1.0 - w_pair;
    const double sigma_img = cfg.image_width(L);
    const double delta0 = fixed_offset(cfg.intrusion) + extra_offset;
    const double sigma_kick =
        cfg.intrusion.mode == IntrusionMode::random_kick
            ? kick_sigma(cfg.intrusion, cfg.slit_separation)
            : 0.0;
    const double kick_sign =
        cfg.intrusion.stage == IntrusionStage::post_slit ? -1.0 : 1.0;
    const PotentialSpec free_pot{};

    ScreenHistogram pair_all(screen), mono_all(screen);
    std::vector<std::vector<double>> stream_profiles;

    // Systematic split between the populations and a stratified transverse
    // proposal: sample i is monotonic when floor((i+1)*w_mono) steps past
    // floor(i*w_mono); the remaining pair samples cycle through the bins in
    // global order with a uniform offset inside the bin.  Both choices are
    // functions of the sample index alone, so stream partials stay
    // independent of stream count and the bin occupancy is exact, leaving
    // only the in-bin weight variance.
    const auto mono_before = [w_mono](long long i) {
        return static_cast<long long>(std::floor(static_cast<double>(i) * w_mono));
    };
    const int n_streams = cfg.seeds.stream_count;
    for (int s = 0; s < n_streams; ++s) {
        RandomStream rng(cfg.seeds.master_seed, s);
        ScreenHistogram pair_h(screen), mono_h(screen);
        const long long lo = cfg.sampler.n_paths * s / n_streams;
        const long long hi = cfg.sampler.n_paths * (s + 1) / n_streams;
        for (long long i = lo; i < hi; ++i) {
            if (mono_before(i + 1) > mono_before(i)) {
                const double slit_y = rng.bernoulli(0.5) ? half : -half;
                mono_h.add(slit_y + sigma_img * rng.gaussian(), 1.0);
                continue;
            }
            const long long c = i - mono_before(i);
            const int bin = static_cast<int>(c % screen.n_bins);
            const double yb =
                screen.x_min + (bin + rng.uniform()) * screen.bin_width();
            const double r_lower = std::hypot(L, yb + half);  // from slit -d/2
            const double r_upper = std::hypot(L, yb - half);  // from slit +d/2
            const double elapsed = mass * (r_lower + r_upper) / (2.0 * p);
            const Event hit{elapsed, L, yb};
            const Path arm_lower = jittered_path(
                {0, 0, -half}, hit, cfg.sampler.n_joints, cfg.sampler.perturb_scale,
                {0, -(yb + half) / r_lower, L / r_lower}, rng);
            const Path arm_upper = jittered_path(
                {0, 0, half}, hit, cfg.sampler.n_joints, cfg.sampler.perturb_scale,
                {0, -(yb - half) / r_upper, L / r_upper}, rng);
            const double ds =
                path_action(arm_lower, cfg.particle, free_pot, ActionMode::nonrelativistic) -
                path_action(arm_upper, cfg.particle, free_pot, ActionMode::nonrelativistic);
            double delta_i = delta0;
            if (sigma_kick > 0.0)
                delta_i += kick_sign * wrap_centered(sigma_kick * rng.gaussian());
            const double omega = phase_residual(ds, delta_i).omega;
            if (omega <= cfg.sampler.accept_tol)
                pair_h.add(yb, neighborhood_density(omega, cfg.density));
        }

        // Per-stream mixed profile, kept for the error estimate.
        const auto pp = pair_h.normalized();
        const auto mp = mono_h.normalized();
        if ((w_pair == 0.0 || !pp.empty) && (w_mono == 0.0 || !mp.empty)) {
            std::vector<double> mixed(pp.gauge_density.size());
            for (std::size_t b = 0; b < mixed.size(); ++b)
                mixed[b] = w_pair * pp.gauge_density[b] + w_mono * mp.gauge_density[b];
            stream_profiles.push_back(std::move(mixed));
        }
        pair_all.merge(pair_h);
        mono_all.merge(mono_h);
    }

    const auto pair_prof = pair_all.normalized();
    const auto mono_prof = mono_all.normalized();
    DensityProfile profile;
    profile.bin_centers = pair_prof.bin_centers;
    profile.gauge_density.resize(pair_prof.gauge_density.size());
    double area = 0.0;
    for (std::size_t b = 0; b < profile.gauge_density.size(); ++b) {
        profile.gauge_density[b] = w_pair * pair_prof.gauge_density[b] +
                                   w_mono * mono_prof.gauge_density[b];
        area += profile.gauge_density[b] * screen.bin_width();
    }
    profile.empty = !(area > 0.0);
    if (!profile.empty && std::fabs(area - 1.0) > 1e-12)
        for (double& v : profile.gauge_density) v /= area;  // one side was empty
    profile.overflow_weight = pair_prof.overflow_weight + mono_prof.overflow_weight;
    profile.overflow_count = pair_prof.overflow_count + mono_prof.overflow_count;

    if (stream_profiles.size() >= 2) {
        const auto ns = static_cast<double>(stream_profiles.size());
        profile.standard_error.assign(profile.gauge_density.size(), 0.0);
        for (std::size_t b = 0; b < profile.gauge_density.size(); ++b) {
            double mean = 0.0;
            for (const auto& sp : stream_profiles) mean += sp[b];
            mean /= ns;
            double var = 0.0;
            for (const auto& sp : stream_profiles)
                var += (sp[b] - mean) * (sp[b] - mean);
            profile.standard_error[b] = std::sqrt(var / (ns * (ns - 1.0)));
        }
    }

    stamp_common(profile, cfg, "monte_carlo", delta0);
    profile.metadata["n_paths"] = std::to_string(cfg.sampler.n_paths);
    profile.metadata["seed"] = std::to_string(cfg.seeds.master_seed);
    profile.metadata["stage"] =
        cfg.intrusion.stage == IntrusionStage::post_slit ? "post_slit" : "pre_slit";
    return profile;
}

DensityProfile slit_profile(const ExperimentConfig& cfg, Estimator which,
                            double extra_offset) {
    return which == Estimator::analytic ? analytic_profile(cfg, extra_offset)
                                        : mc_profile(cfg, extra_offset);
}

Estimator resolve(Estimator e) {
    return e == Estimator::both ? Estimator::monte_carlo : e;
}

// Reported floor: minimum over the central half of the screen against the
// global peak.
void stamp_central_floor(DensityProfile& profile) {
    if (profile.empty || profile.gauge_density.empty()) return;
    const double span = profile.bin_centers.back() - profile.bin_centers.front();
    double peak = 0.0, central_min = -1.0;
    for (std::size_t i = 0; i < profile.gauge_density.size(); ++i) {
        peak = std::max(peak, profile.gauge_density[i]);
        if (std::fabs(profile.bin_centers[i]) <= 0.25 * span) {
            const double v = profile.gauge_density[i];
            if (central_min < 0.0 || v < central_min) central_min = v;
        }
    }
    if (peak > 0.0 && central_min >= 0.0)
        profile.metadata["central_min_over_peak"] = fmt_g(central_min / peak);
}

}  // namespace

// ─── experiment drivers ─────────────────────────────────────────────────────

DensityProfile double_slit(const ExperimentConfig& cfg, Estimator which) {
    DensityProfile profile = slit_profile(cfg, resolve(which), 0.0);
    profile.metadata["experiment"] = "double_slit";
    stamp_central_floor(profile);
    return profile;
}

DensityProfile double_slit(const ExperimentConfig& cfg) {
    return double_slit(cfg, cfg.estimator);
}

std::vector<DensityProfile> screen_distance_sweep(
    const ExperimentConfig& cfg, const std::vector<double>& distances) {
    if (distances.empty()) throw geometry_error("sweep needs at least one distance");
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (!(distances[i] > 0.0))
            throw geometry_error("sweep distances must be positive");
        if (i > 0 && !(distances[i] > distances[i - 1]))
            throw geometry_error("sweep distances must ascend");
    }
    std::vector<DensityProfile> out;
    out.reserve(distances.size());
    for (double L : distances) {
        ExperimentConfig local = cfg;
        local.screen.distance = L;
        DensityProfile profile = double_slit(local);
        profile.metadata["experiment"] = "sweep";
        out.push_back(std::move(profile));
    }
    return out;
}

DensityProfile aharonov_bohm(const ExperimentConfig& cfg, Estimator which) {
    // Canonical flux representative: exact multiples of 2*pi reduce to 0.0,
    // making gauge-equivalent fluxes bit-identical through the pipeline.
    const double f_eff = cfg.flux - kTwoPi * std::round(cfg.flux / kTwoPi);
    DensityProfile profile = slit_profile(cfg, resolve(which), f_eff);
    profile.metadata["experiment"] = "aharonov_bohm";
    // The canonical representative, not the raw flux: gauge-equivalent
    // fluxes must leave identical files behind.
    profile.metadata["flux"] = fmt_g(f_eff);
    stamp_central_floor(profile);
    return profile;
}

DensityProfile aharonov_bohm(const ExperimentConfig& cfg) {
    return aharonov_bohm(cfg, cfg.estimator);
}

bool gauge_equivalent(double flux_a, double flux_b, double tol) {
    return phase_residual(flux_a - flux_b).omega <= tol;
}

EprOutcome epr_compensation(double s_rho, double s_rho_prime, double delta_s) {
    EprOutcome out;
    out.undisturbed_physical =
        pair_is_physical(s_rho, s_rho_prime, 0.0, kProjectionTol);
    double angle = std::fmod(delta_s, kTwoPi);
    if (angle < 0.0) angle += kTwoPi;
    out.compensating_factor_angle = angle;
    return out;
}

// ─── barrier ────────────────────────────────────────────────────────────────

namespace {

// Speed of the portion after the last exit through the far face.
std::optional<double> emergent_speed(const Path& path, double face) {
    const auto& ev = path.events();
    std::size_t cross = ev.size();
    for (std::size_t i = 0; i + 1 < ev.size(); ++i)
        if (ev[i].x <= face && ev[i + 1].x > face) cross = i;
    if (cross == ev.size()) return std::nullopt;
    const Event& a = ev[cross];
    const Event& b = ev[cross + 1];
    const double f = (face - a.x) / (b.x - a.x);
    const double t_cross = a.t + f * (b.t - a.t);
    const Event& end = ev.back();
    if (!(end.t > t_cross)) return std::nullopt;
    return (end.x - face) / (end.t - t_cross);
}

}  // namespace

TunnelingReport barrier_scan(const ExperimentConfig& cfg) {
    const PotentialSpec& pot = cfg.potential;
    if (!(pot.x_hi >= pot.x_lo)) throw geometry_error("barrier box is inverted");
    if (pot.kind == PotentialKind::barrier && pot.height < 0.0)
        throw geometry_error("barrier height must be non-negative");
    if (!(cfg.barrier_margin > 0.0))
        throw geometry_error("barrier margin must be positive");
    if (!(cfg.t_over_l_min > 1.0) || !(cfg.t_over_l_max > cfg.t_over_l_min))
        throw geometry_error("terminal time window must satisfy 1 < lo < hi");
    cfg.sampler.validate();

    const double x_start = pot.x_lo - cfg.barrier_margin;
    const double x_end = pot.x_hi + cfg.barrier_margin;
    const double l_straight = x_end - x_start;
    const PhaseState id{};
    const Event jitter_dir{0, 1, 0};  // longitudinal, stays 1+1 dimensional

    TunnelingReport report;
    report.n_attempts = cfg.sampler.n_paths;
    const int n_streams = cfg.seeds.stream_count;
    for (int s = 0; s < n_streams; ++s) {
        RandomStream rng(cfg.seeds.master_seed, s);
        const long long lo = cfg.sampler.n_paths * s / n_streams;
        const long long hi = cfg.sampler.n_paths * (s + 1) / n_streams;
        for (long long i = lo; i < hi; ++i) {
            const double elapsed =
                l_straight * rng.uniform(cfg.t_over_l_min, cfg.t_over_l_max);
            const Path candidate =
                jittered_path({0, x_start, 0}, {elapsed, x_end, 0},
                              cfg.sampler.n_joints, cfg.sampler.perturb_scale,
                              jitter_dir, rng);
            // Existence needs a root, not a band: always exact projection.
            std::optional<Path> projected;
            try {
                projected = project_to_physical(candidate, cfg.particle, pot, id,
                                                id, cfg.sampler,
                                                ActionMode::relativistic);
            } catch (const spacelike_error&) {
                projected.reset();  // jitter produced an over-fast candidate
            }
            if (!projected) continue;
            const auto speed = emergent_speed(*projected, pot.x_hi);
            if (!speed) continue;
            report.n_transmitted += 1;
            report.emergent_speeds.push_back(*speed);
        }
    }
    report.transmitted_fraction =
        static_cast<double>(report.n_transmitted) /
        static_cast<double>(report.n_attempts);
    return report;
}

// ─── fringe analysis ────────────────────────────────────────────────────────

std::vector<double> smoothed_density(const DensityProfile& profile) {
    const auto& d = profile.gauge_density;
    std::vector<double> out(d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = std::min(i + 1, d.size() - 1);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += d[j];
        out[i] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

namespace {

// Inclusive index run of equal smoothed values that beats both neighbours.
// Runs of length one are the plain 3-point local maximum; longer runs keep
// symmetric grids from dropping a peak that straddles two tied bins.
struct MaxRun {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

std::vector<MaxRun> maxima_runs(const std::vector<double>& s) {
    std::vector<MaxRun> out;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t j = i;
        while (j + 1 < s.size() && s[j + 1] == s[i]) ++j;
        if (i > 0 && j + 1 < s.size() && s[i - 1] < s[i] && s[j + 1] < s[i])
            out.push_back({i, j});
        i = j + 1;
    }
    return out;
}

double run_position(const DensityProfile& profile, const MaxRun& run) {
    return 0.5 * (profile.bin_centers[run.lo] + profile.bin_centers[run.hi]);
}

}  // namespace

std::vector<double> fringe_maxima(const DensityProfile& profile) {
    const auto runs = maxima_runs(smoothed_density(profile));
    std::vector<double> out;
    out.reserve(runs.size());
    for (const MaxRun& run : runs) out.push_back(run_position(profile, run));
    return out;
}

double fringe_visibility(const DensityProfile& profile) {
    const auto s = smoothed_density(profile);
    const auto runs = maxima_runs(s);
    if (runs.size() < 3) return 0.0;

    // The maximum nearest the screen center and its neighbour.
    std::size_t central = 0;
    for (std::size_t k = 1; k < runs.size(); ++k)
        if (std::fabs(run_position(profile, runs[k])) <
            std::fabs(run_position(profile, runs[central])))
            central = k;
    const std::size_t other =
        central + 1 < runs.size() ? central + 1 : central - 1;
    const std::size_t a = std::min(runs[central].hi, runs[other].hi);
    const std::size_t b = std::max(runs[central].lo, runs[other].lo);
    double valley = s[a];
    for (std::size_t i = a; i <= b; ++i) valley = std::min(valley, s[i]);
    const double peak = 0.5 * (s[runs[central].lo] + s[runs[other].lo]);
    return (peak - valley) / (peak + valley);
}

double uncertainty_product(const DensityProfile& profile,
                           const ExperimentConfig& cfg) {
    const auto maxima = fringe_maxima(profile);
    if (maxima.size() < 3)
        throw numeric_error("fewer than three resolved fringes");
    // Mean step of the exact path difference across consecutive maxima.
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < maxima.size(); ++k)
        acc += slit_path_difference(cfg, maxima[k + 1]) -
               slit_path_difference(cfg, maxima[k]);
    const double delta_r = acc / static_cast<double>(maxima.size() - 1);
    const double delta_p = cfg.particle.momentum * delta_r / cfg.slit_separation;
    return delta_p * (0.5 * cfg.slit_separation);
}

double uncertainty_product_smallangle(const ParticleParams& particle,
                                      double slit_separation) {
    const double delta_r = particle.wavelength();
    const double delta_p = particle.momentum * delta_r / slit_separation;
    return delta_p * (0.5 * slit_separation);
}

}  // namespace gm
