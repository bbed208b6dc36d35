#include "gaugemech/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

#include "gaugemech/gauge.hpp"

namespace gm {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

// ─── wave fields ────────────────────────────────────────────────────────────

double WaveField::norm() const {
    double acc = 0.0;
    for (const auto& c : psi) acc += std::norm(c);
    return std::sqrt(acc * dx);
}

WaveField plane_wave(std::size_t n, double dx, double x_origin, double momentum) {
    WaveField f{{}, dx, x_origin, 0.0};
    f.psi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phase = momentum * f.x_at(i);
        f.psi[i] = {std::cos(phase), std::sin(phase)};
    }
    return f;
}

WaveField gaussian_packet(std::size_t n, double dx, double x_origin,
                          double center, double width, double momentum) {
    WaveField f{{}, dx, x_origin, 0.0};
    f.psi.resize(n);
    const double amp = std::pow(kTwoPi * width * width, -0.25);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = f.x_at(i) - center;
        const double mag = amp * std::exp(-u * u / (4.0 * width * width));
        const double phase = momentum * f.x_at(i);
        f.psi[i] = mag * std::complex<double>{std::cos(phase), std::sin(phase)};
    }
    return f;
}

WaveField evolve_wave(const WaveField& field, double dt, int n_steps,
                      const std::vector<double>& potential, double mass) {
    const std::size_t n = field.psi.size();
    if (n < 2) throw numeric_error("wave grid too small");
    if (potential.size() != n)
        throw numeric_error("potential grid does not match the field");
    if (!(mass > 0.0)) throw numeric_error("mass must be positive");
    if (n_steps < 0) throw numeric_error("negative step count");
    // Keep the per-step kinetic phase at the grid's Nyquist mode below pi.
    const double dt_max = (2.0 / M_PI) * mass * field.dx * field.dx;
    if (!(dt > 0.0) || dt > dt_max)
        throw numeric_error("unstable step: dt exceeds (2/pi)*mass*dx^2");

    WaveField out = field;
    std::vector<std::complex<double>> half_v(n), kinetic(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ph = -0.5 * potential[i] * dt;
        half_v[i] = {std::cos(ph), std::sin(ph)};
    }
    const double dk = kTwoPi / (field.dx * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double j = (i <= n / 2) ? static_cast<double>(i)
                                      : static_cast<double>(i) - static_cast<double>(n);
        const double k = dk * j;
        const double ph = -0.5 * k * k * dt / mass;
        kinetic[i] = {std::cos(ph), std::sin(ph)};
    }

    auto* buf = reinterpret_cast<fftw_complex*>(out.psi.data());
    fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                     FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                     FFTW_BACKWARD, FFTW_ESTIMATE);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int step = 0; step < n_steps; ++step) {
        for (std::size_t i = 0; i < n; ++i) out.psi[i] *= half_v[i];
        fftw_execute(fwd);
        for (std::size_t i = 0; i < n; ++i) out.psi[i] *= kinetic[i];
        fftw_execute(bwd);
        for (std::size_t i = 0; i < n; ++i) out.psi[i] *= half_v[i] * inv_n;
    }
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    out.t = field.t + dt * n_steps;
    return out;
}

// ─── two-slit closed form ───────────────────────────────────────────────────

double two_slit_wave_intensity(double y, double slit_separation, double distance,
                               double momentum, SlitAmplitude mode) {
    if (!(slit_separation > 0.0) || !(distance > 0.0))
        throw geometry_error("slit separation and screen distance must be positive");
    const double r1 = std::hypot(distance, y - 0.5 * slit_separation);
    const double r2 = std::hypot(distance, y + 0.5 * slit_separation);
    const double a1 = mode == SlitAmplitude::inverse_r ? 1.0 / r1 : 1.0;
    const double a2 = mode == SlitAmplitude::inverse_r ? 1.0 / r2 : 1.0;
    // |a1 e^{ipr1} + a2 e^{ipr2}|^2 without the complex detour.
    return a1 * a1 + a2 * a2 + 2.0 * a1 * a2 * std::cos(momentum * (r1 - r2));
}

// ─── hydrodynamic form ──────────────────────────────────────────────────────

MadelungFields madelung_decompose(const WaveField& field, double threshold_frac) {
    const std::size_t n = field.psi.size();
    MadelungFields out;
    out.dx = field.dx;
    out.t = field.t;
    out.sigma.resize(n);
    out.s_phase.assign(n, 0.0);
    out.mask.assign(n, 0);
    double sigma_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.sigma[i] = std::norm(field.psi[i]);
        sigma_max = std::max(sigma_max, out.sigma[i]);
    }
    const double cut = threshold_frac * sigma_max;
    for (std::size_t i = 0; i < n; ++i) out.mask[i] = out.sigma[i] > cut ? 1 : 0;

    // Unwrap along each contiguous masked run, anchored at its left edge.
    std::size_t i = 0;
    while (i < n) {
        if (!out.mask[i]) {
            ++i;
            continue;
        }
        double prev = std::arg(field.psi[i]);
        out.s_phase[i] = prev;
        std::size_t j = i + 1;
        for (; j < n && out.mask[j]; ++j) {
            const double raw = std::arg(field.psi[j]);
            double step = raw - std::fmod(prev, kTwoPi);
            // Take the representative of the jump closest to zero.
            step -= kTwoPi * std::floor(step / kTwoPi + 0.5);
            prev += step;
            out.s_phase[j] = prev;
        }
        i = j;
    }
    return out;
}

namespace {

double masked_max(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace

MadelungResiduals madelung_residuals(const MadelungFields& before,
                                     const MadelungFields& after, double dt,
                                     double mass,
                                     const std::vector<double>& potential,
                                     double eval_threshold,
                                     bool include_quantum_potential) {
    const std::size_t n = before.sigma.size();
    if (after.sigma.size() != n || potential.size() != n)
        throw numeric_error("madelung grids do not match");
    if (!(dt > 0.0)) throw numeric_error("dt must be positive");
    const double dx = before.dx;
    const double cut =
        eval_threshold * std::max(masked_max(before.sigma), masked_max(after.sigma));

    auto usable = [&](std::size_t i) {
        return before.sigma[i] > cut && after.sigma[i] > cut && before.mask[i] &&
               after.mask[i];
    };
    auto grad = [&](const std::vector<double>& v, std::size_t i) {
        return (v[i + 1] - v[i - 1]) / (2.0 * dx);
    };
    auto quantum_potential = [&](const std::vector<double>& sigma, std::size_t i) {
        const double c = std::sqrt(sigma[i]);
        const double lap =
            (std::sqrt(sigma[i + 1]) - 2.0 * c + std::sqrt(sigma[i - 1])) / (dx * dx);
        return -lap / (2.0 * mass * c);
    };

    MadelungResiduals res;
    bool any = false;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        bool ok = true;
        for (std::size_t j = i - 2; j <= i + 2; ++j) ok = ok && usable(j);
        if (!ok) continue;
        any = true;

        // Continuity at the time midpoint: centered d(sigma)/dt plus the
        // average of the two flux divergences.
        const double dsdt = (after.sigma[i] - before.sigma[i]) / dt;
        auto flux = [&](const MadelungFields& f, std::size_t j) {
            return f.sigma[j] * grad(f.s_phase, j) / mass;
        };
        const double div_before = (flux(before, i + 1) - flux(before, i - 1)) / (2.0 * dx);
        const double div_after = (flux(after, i + 1) - flux(after, i - 1)) / (2.0 * dx);
        res.continuity =
            std::max(res.continuity, std::fabs(dsdt + 0.5 * (div_before + div_after)));

        // Quantum Hamilton-Jacobi, same centering.
        const double dS = (after.s_phase[i] - before.s_phase[i]) / dt;
        const double g_before = grad(before.s_phase, i);
        const double g_after = grad(after.s_phase, i);
        double hj = dS + 0.25 * (g_before * g_before + g_after * g_after) / mass +
                    potential[i];
        if (include_quantum_potential)
            hj += 0.5 * (quantum_potential(before.sigma, i) +
                         quantum_potential(after.sigma, i));
        res.quantum_hj = std::max(res.quantum_hj, std::fabs(hj));
    }
    if (!any) throw numeric_error("no grid points above the density threshold");
    return res;
}

// ─── lattice sum over histories ─────────────────────────────────────────────

void LatticeSpec::validate() const {
    if (n_space_points < 2) throw numeric_error("lattice needs >= 2 space points");
    if (n_time_steps < 1) throw numeric_error("lattice needs >= 1 time step");
    if (!(dx > 0.0) || !(dt > 0.0) || !(mass > 0.0))
        throw numeric_error("lattice scales must be positive");
    if (!potential.empty() &&
        potential.size() != static_cast<std::size_t>(n_space_points))
        throw numeric_error("potential grid does not match the lattice");
    double count = 1.0;
    for (int s = 0; s < n_time_steps; ++s) {
        count *= n_space_points;
        if (count > 1e7) throw numeric_error("lattice too large to enumerate");
    }
}

PathSumResult filtered_path_sum(const LatticeSpec& lattice, int start_index,
                                double tol) {
    lattice.validate();
    if (start_index < 0 || start_index >= lattice.n_space_points)
        throw numeric_error("start index outside the lattice");

    const int n = lattice.n_space_points;
    const auto v_at = [&](int i) {
        return lattice.potential.empty() ? 0.0 : lattice.potential[static_cast<std::size_t>(i)];
    };
    // Precomputed link actions: hop from i to j.
    std::vector<double> link(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double hop = lattice.dx * (j - i);
            link[static_cast<std::size_t>(i) * n + j] =
                lattice.mass * hop * hop / (2.0 * lattice.dt) -
                0.5 * (v_at(i) + v_at(j)) * lattice.dt;
        }

    PathSumResult result;
    result.all.assign(static_cast<std::size_t>(n), {0.0, 0.0});
    result.physical.assign(static_cast<std::size_t>(n), {0.0, 0.0});

    // Odometer over intermediate and final positions, in lexicographic order.
    std::vector<int> at(static_cast<std::size_t>(lattice.n_time_steps), 0);
    for (;;) {
        double action = 0.0;
        int prev = start_index;
        for (int s = 0; s < lattice.n_time_steps; ++s) {
            action += link[static_cast<std::size_t>(prev) * n + at[static_cast<std::size_t>(s)]];
            prev = at[static_cast<std::size_t>(s)];
        }
        const std::complex<double> amp{std::cos(action), std::sin(action)};
        result.all[static_cast<std::size_t>(prev)] += amp;
        if (phase_residual(action).omega <= tol)
            result.physical[static_cast<std::size_t>(prev)] += amp;

        int digit = lattice.n_time_steps - 1;
        while (digit >= 0 && ++at[static_cast<std::size_t>(digit)] == n) {
            at[static_cast<std::size_t>(digit)] = 0;
            --digit;
        }
        if (digit < 0) break;
    }
    return result;
}

}  // namespace gm
