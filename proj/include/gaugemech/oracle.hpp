#pragma once

// Standard quantum mechanics reference results: closed-form two-slit
// intensity, split-step spectral wave evolution, the hydrodynamic
// (density/phase) decomposition with its residual check, and an exhaustively
// enumerated lattice sum over histories.  Everything is 1-d on a uniform
// grid and sized for test workloads.

#include <complex>
#include <cstdint>
#include <vector>

#include "gaugemech/errors.hpp"

namespace gm {

// ─── wave fields ────────────────────────────────────────────────────────────

struct WaveField {
    std::vector<std::complex<double>> psi;
    double dx = 1.0;
    double x_origin = 0.0;  // coordinate of psi[0]
    double t = 0.0;

    double x_at(std::size_t i) const { return x_origin + dx * static_cast<double>(i); }
    double norm() const;
};

WaveField plane_wave(std::size_t n, double dx, double x_origin, double momentum);
WaveField gaussian_packet(std::size_t n, double dx, double x_origin,
                          double center, double width, double momentum);

// Strang-split spectral integrator, periodic boundary.  The potential grid
// must match the field size; `dt` must satisfy dt <= (2/pi)*mass*dx^2 or a
// numeric_error is thrown.
WaveField evolve_wave(const WaveField& field, double dt, int n_steps,
                      const std::vector<double>& potential, double mass);

// ─── two-slit closed form ───────────────────────────────────────────────────

enum class SlitAmplitude { idealized, inverse_r };

// |A1 e^{i p r1} + A2 e^{i p r2}|^2 for slits at transverse +-d/2 a distance
// L from the screen; idealized mode uses unit amplitudes (true zeros at
// half-integer path differences), inverse_r weights each term by 1/r.
double two_slit_wave_intensity(double y, double slit_separation, double distance,
                               double momentum,
                               SlitAmplitude mode = SlitAmplitude::idealized);

// ─── hydrodynamic form ──────────────────────────────────────────────────────

struct MadelungFields {
    std::vector<double> sigma;    // |psi|^2
    std::vector<double> s_phase;  // unwrapped phase, valid where mask is set
    std::vector<std::uint8_t> mask;
    double dx = 1.0;
    double t = 0.0;
};

// sigma = |psi|^2 everywhere; the phase is unwrapped independently along each
// contiguous run of points with sigma > threshold_frac * max(sigma).
MadelungFields madelung_decompose(const WaveField& field,
                                  double threshold_frac = 1e-10);

struct MadelungResiduals {
    double continuity = 0.0;  // d(sigma)/dt + div(sigma * grad(S)/m)
    double quantum_hj = 0.0;  // dS/dt + |grad S|^2/(2m) + V - QP
};

// Max-norm residuals of the continuity and quantum Hamilton-Jacobi equations
// between two adjacent-time decompositions, evaluated at the time midpoint
// with centered stencils.  Points enter when sigma exceeds eval_threshold *
// max(sigma) at both times across the whole stencil footprint; an empty
// region throws numeric_error.  `include_quantum_potential` exists so tests
// can show the -lap(sqrt sigma)/(2m sqrt sigma) term is load-bearing.
MadelungResiduals madelung_residuals(const MadelungFields& before,
                                     const MadelungFields& after, double dt,
                                     double mass,
                                     const std::vector<double>& potential,
                                     double eval_threshold = 1e-6,
                                     bool include_quantum_potential = true);

// ─── lattice sum over histories ─────────────────────────────────────────────

struct LatticeSpec {
    int n_space_points = 3;
    int n_time_steps = 2;
    double dx = 1.0;
    double dt = 1.0;
    double mass = 1.0;
    std::vector<double> potential;  // per space point; empty means free

    // Throws numeric_error when n_space_points^n_time_steps exceeds 1e7.
    void validate() const;
};

struct PathSumResult {
    std::vector<std::complex<double>> all;       // unfiltered endpoint amplitudes
    std::vector<std::complex<double>> physical;  // paths with omega <= tol only
};

// Sums exp(i S) over every lattice path from start_index, one hop per time
// step to any space point.  Link action m*(dx_hop)^2/(2 dt) - Vbar*dt with
// the potential averaged between link endpoints.  Amplitudes are not
// normalized.  Enumeration order never changes the reported sums beyond
// rounding.
PathSumResult filtered_path_sum(const LatticeSpec& lattice, int start_index,
                                double tol);

}  // namespace gm
