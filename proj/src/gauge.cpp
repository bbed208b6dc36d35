#include "gaugemech/gauge.hpp"

#include <cmath>

namespace gm {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

double wrap_to_unit_circle(double a) noexcept {
    double w = a - kTwoPi * std::floor(a / kTwoPi);
    if (w >= kTwoPi) w = 0.0;  // floor rounding can land exactly on 2*pi
    return w;
}
}  // namespace

PhaseState::PhaseState(double angle) : angle_(wrap_to_unit_circle(angle)) {
    if (!std::isfinite(angle)) throw error("phase angle must be finite");
}

PhaseState PhaseState::compose(const PhaseState& other) const {
    return PhaseState(angle_ + other.angle_);
}

PhaseState PhaseState::inverse() const { return PhaseState(-angle_); }

PhaseResidual phase_residual(double action, double delta) noexcept {
    const double x = action - delta;
    // Nearest integer with half-ties rounded down, so omega = pi reports the
    // smaller of the two equidistant multiples.
    const double n = std::ceil(x / kTwoPi - 0.5);
    double omega = std::fabs(x - kTwoPi * n);
    if (omega > M_PI) omega = M_PI;  // guard the invariant against rounding
    return {omega, static_cast<long long>(n)};
}

bool is_physical(double action, const PhaseState& kappa_start,
                 const PhaseState& kappa_end, double tol) {
    const double delta = kappa_end.angle() - kappa_start.angle();
    return phase_residual(action, delta).omega <= tol;
}

bool pair_is_physical(double action_a, double action_b, double delta_kappa,
                      double tol) {
    return phase_residual(action_a - action_b, delta_kappa).omega <= tol;
}

std::vector<double> quantized_radii(const ParticleParams& particle, int n_max) {
    if (!(particle.momentum > 0.0)) throw error("momentum must be positive");
    if (n_max < 1) throw error("n_max must be at least 1");
    std::vector<double> radii;
    radii.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n)
        radii.push_back(kTwoPi * n / particle.momentum);
    return radii;
}

double neighborhood_density(double omega, const DensityParams& params) {
    if (!(params.a > 0.0 && params.b > 0.0 && params.xi_bar > 0.0))
        throw error("density coefficients must be positive");
    if (omega < 0.0 || omega > M_PI + 1e-12)
        throw error("omega outside [0, pi]");
    return 1.0 / (params.a * params.xi_bar * params.xi_bar +
                  params.b * params.xi_bar * std::sqrt(std::max(omega, 0.0)));
}

}  // namespace gm
