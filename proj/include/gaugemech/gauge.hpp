#pragma once

// Phase-level physicality predicates.  A trajectory is admissible when its
// action, corrected for the endpoint gauge states, lands on a multiple of
// 2*pi; the residual distance to the nearest multiple grades how close a
// neighbouring trajectory is to admissibility.

#include <vector>

#include "gaugemech/errors.hpp"
#include "gaugemech/spacetime.hpp"

namespace gm {

// Abelian gauge state at an event, an angle in [0, 2*pi).
class PhaseState {
  public:
    PhaseState() = default;
    explicit PhaseState(double angle);

    double angle() const noexcept { return angle_; }
    // Group composition: angles add mod 2*pi.
    PhaseState compose(const PhaseState& other) const;
    PhaseState inverse() const;

  private:
    double angle_ = 0.0;
};

// Distance omega in [0, pi] from (S - delta) to its nearest 2*pi multiple,
// together with the index n of that multiple:  S - delta = 2*pi*n ± omega.
struct PhaseResidual {
    double omega = 0.0;
    long long n_nearest = 0;
};

// omega/n of S relative to a gauge offset delta.  Exact ties at omega = pi
// resolve to the smaller integer.
PhaseResidual phase_residual(double action, double delta = 0.0) noexcept;

// Single-trajectory admissibility: exp(i(S + kappa_a - kappa_b)) == 1 within
// an angular tolerance.
bool is_physical(double action, const PhaseState& kappa_start,
                 const PhaseState& kappa_end, double tol = 1e-9);

// Correlated-pair admissibility: the action difference of the two branches
// must absorb the gauge mismatch delta_kappa between their far endpoints.
bool pair_is_physical(double action_a, double action_b, double delta_kappa,
                      double tol = 1e-9);

// Reachable sphere radii for an admissible free trajectory fan: 2*pi*n/p
// for n = 1..n_max.
std::vector<double> quantized_radii(const ParticleParams& particle, int n_max);

// Coefficients of the local path-density estimate.
struct DensityParams {
    double a = 1.0;
    double b = 1.0;
    double xi_bar = 0.1;  // neighbourhood half-width, default lambda/10 at p=2*pi

    friend bool operator==(const DensityParams&, const DensityParams&) = default;
};

// Density of admissible neighbours at residual omega:
//   1 / (a*xi_bar^2 + b*xi_bar*sqrt(omega)).
// Decreasing in omega, maximal on the admissible set itself.
double neighborhood_density(double omega, const DensityParams& params);

}  // namespace gm
