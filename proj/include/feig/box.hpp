// Chords in the box by Dirichlet shooting, and their doubling into periodic
// orbits through the anti-symplectic involution zeta(q, p) = (-q, p).
//
// A chord starts and ends on the vertical Lagrangian {0} x R^n, so the
// scalar problem is w'' + tau^2 (E - V(s)) w = 0, w(0) = 0, with the free
// endpoint value w(1) as the shooting function of tau.  Sturm oscillation
// makes every zero of tau -> w(1; tau) simple (no tangencies, unlike the
// ring scan), and the k-th zero produces a solution with exactly k - 1
// interior zeros.
//
// The doubled curve runs the chord forward and then its zeta-reflection
// backward; with w(tau*) = 0 the junction is smooth because zeta fixes p.
// In first-leg Hill data the doubled monodromy is K M^{-1} K M with
// K = diag(-1, 1), which for a chord (upper-right entry of M zero) collapses
// to the parabolic shear [[1, 0], [2 a c, 1]]: doubled endpoints are always
// degenerate.  The chord index is therefore read off a probe flow stopped
// 2 x 0.01 short of the full doubled period, where the endpoint is honestly
// elliptic or hyperbolic; halving its (always even) index gives the chord
// index.

#ifndef FEIG_BOX_HPP
#define FEIG_BOX_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "feig/core.hpp"
#include "feig/cz.hpp"
#include "feig/dynamics.hpp"
#include "feig/potential.hpp"
#include "feig/ring.hpp"
#include "feig/verify.hpp"

namespace feig {

struct DoubledChord {
    Trajectory traj;                      // periodic orbit of duration 2 tau*
    double junction_residual = 0.0;       // |x(tau*) - zeta x(tau*)| / amplitude
    double closure_residual = 0.0;        // |x(2 tau*) - x(0)| / amplitude
    double reintegration_residual = 0.0;  // worst sample gap against a fresh run
};

struct ChordIndexReport {
    long index = 0;     // half the doubled index
    CzReport doubled;   // index report of the probe flow
    double probe = 0.01;
};

struct BoxSolution {
    double tau_star = 0.0;  // chord duration; the reported box length l_E
    Trajectory chord;
    DoubledChord doubled;
    ChordIndexReport index;
    EigenstateProfile eigenstate;
    int zero_count = 0;             // interior zeros of w, equals k - 1
    double endpoint_residual = 0.0;  // |q(tau*)| / amplitude
};

// Stiffness profile of the doubled orbit as a function of its own loop
// fraction: the second half retraces the potential backwards.
inline double doubled_time(double t) { return t <= 0.5 ? 2.0 * t : 2.0 - 2.0 * t; }

inline double dirichlet_shoot(const HamiltonianParams& par, const PotentialSpec& spec,
                              double tau, int steps = 0) {
    detail::require_margin(par, spec);
    if (steps == 0) steps = default_steps(par, spec, tau);
    auto k = [&](double s) { return tau * tau * (par.energy - evaluate_potential(spec, s)); };
    // w(1) for initial data (0, 1) is the upper-right monodromy entry
    return detail::flow_blocks(k, 1.0, steps).back().b;
}

namespace detail {

inline double shoot(const HamiltonianParams& par, const PotentialSpec& spec, double tau,
                    Scheme scheme) {
    if (scheme == Scheme::adaptive) {
        auto k = [&](double s) {
            return tau * tau * (par.energy - evaluate_potential(spec, s));
        };
        return flow_block_adaptive(k, 1.0).b;
    }
    return dirichlet_shoot(par, spec, tau, hill_steps(par, spec, tau, 4));
}

}  // namespace detail

// k-th positive zero of the shooting function.  The scan range
// [0.1, (k+1) pi / sqrt(m0) + 1] always contains it: Sturm comparison pins
// the k-th zero between k pi / sqrt(E - min V) and k pi / sqrt(m0).
inline double find_chord_tau(const HamiltonianParams& par, const PotentialSpec& spec, int k,
                             Scheme scheme = Scheme::fixed_step) {
    const double m0 = detail::require_margin(par, spec);
    if (k < 1) throw std::invalid_argument("chord index k starts at 1");
    const double stiff_max = par.energy - potential_range(spec).vmin;
    const double tau_lo = 0.1;
    const double tau_hi = (k + 1) * kPi / std::sqrt(m0) + 1.0;
    const double step = kPi / (8.0 * std::sqrt(stiff_max));

    int found = 0;
    double lo = tau_lo, flo = detail::shoot(par, spec, tau_lo, scheme);
    if (flo == 0.0 && k == 1) return tau_lo;  // pathological but cheap to honor
    double bracket_lo = 0.0, bracket_hi = 0.0, f_bracket_lo = 0.0;
    for (double hi = tau_lo + step; lo < tau_hi; hi = std::min(hi + step, tau_hi)) {
        const double fhi = detail::shoot(par, spec, hi, scheme);
        if (fhi == 0.0) {
            if (++found == k) return hi;
        } else if (flo * fhi < 0.0) {
            ++found;
            if (found == k) {
                bracket_lo = lo;
                bracket_hi = hi;
                f_bracket_lo = flo;
                break;
            }
        }
        lo = hi;
        flo = fhi;
        if (hi >= tau_hi) break;
    }
    if (found < k)
        throw numerical_error("no " + std::to_string(k) +
                              "-th shooting zero in [0.1, " + std::to_string(tau_hi) + "]");

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (bracket_lo + bracket_hi);
        if (bracket_hi - bracket_lo <= 1e-10 * (1.0 + mid)) {
            if (std::abs(detail::shoot(par, spec, mid, scheme)) > 1e-8)
                throw numerical_error("chord bisection left |w(1)| above 1e-8");
            return mid;
        }
        const double fm = detail::shoot(par, spec, mid, scheme);
        if (fm == 0.0) return mid;
        if (f_bracket_lo * fm < 0.0) {
            bracket_hi = mid;
        } else {
            bracket_lo = mid;
            f_bracket_lo = fm;
        }
    }
    throw numerical_error("chord bisection failed to converge in 200 iterations");
}

// Interior zeros of the scalar solution w on (0, 1), counted as strict sign
// changes between interior samples (the endpoints are zeros by construction
// and must not count).
inline int count_interior_zeros(const HamiltonianParams& par, const PotentialSpec& spec,
                                double tau, int steps = 0) {
    if (steps == 0) steps = detail::hill_steps(par, spec, tau, 4);
    auto k = [&](double s) { return tau * tau * (par.energy - evaluate_potential(spec, s)); };
    const std::vector<Mat2> flow = detail::flow_blocks(k, 1.0, steps);
    int count = 0;
    for (int j = 1; j + 2 < static_cast<int>(flow.size()); ++j)
        if (flow[j].b * flow[j + 1].b < 0.0) ++count;
    return count;
}

// Chord in R^{2n} from the scalar solution, planted in plane 1 (optionally
// mirrored into plane 2, which only multiplies psi by a constant phase).
inline Trajectory build_chord(const HamiltonianParams& par, const PotentialSpec& spec,
                              double tau_star, int steps = 0, bool plant_both = false) {
    detail::require_margin(par, spec);
    const double miss = dirichlet_shoot(par, spec, tau_star,
                                        detail::hill_steps(par, spec, tau_star, 4));
    if (std::abs(miss) > 1e-8)
        throw std::invalid_argument("build_chord needs |w(1)| <= 1e-8 at tau*, got " +
                                    std::to_string(std::abs(miss)));
    if (steps == 0) steps = default_steps(par, spec, tau_star);
    PhasePoint z0 = PhasePoint::zero(par.planes);
    if (plant_both && par.planes > 1) {
        z0.p[0] = 1.0 / (tau_star * std::sqrt(2.0));
        z0.p[1] = 1.0 / (tau_star * std::sqrt(2.0));
    } else {
        z0.p[0] = 1.0 / tau_star;  // Hill initial data (0, 1) in physical time
    }
    Trajectory chord =
        integrate_trajectory(par, spec, z0, tau_star, steps, TrajectoryKind::chord);
    chord = rescale_to_zero_mean(par, spec, chord);
    double qend = 0.0;
    for (double qi : chord.samples.back().q) qend += qi * qi;
    qend = std::sqrt(qend);
    if (qend > 1e-7 * chord.max_norm())
        throw numerical_error("chord endpoint |q(tau*)| = " + std::to_string(qend) +
                              " exceeds 1e-7 of the amplitude");
    return chord;
}

// Concatenate the chord with its reflected reversal and verify the result
// against a direct integration of the doubled stiffness profile.
inline DoubledChord double_chord(const HamiltonianParams& par, const PotentialSpec& spec,
                                 const Trajectory& chord) {
    const int K = chord.steps();
    const double tau = chord.tau;
    DoubledChord out;
    out.traj.tau = 2.0 * tau;
    out.traj.kind = TrajectoryKind::periodic_orbit;
    out.traj.times.reserve(2 * K + 1);
    out.traj.samples.reserve(2 * K + 1);
    for (int j = 0; j <= K; ++j) {
        out.traj.times.push_back(chord.times[j]);
        out.traj.samples.push_back(chord.samples[j]);
    }
    for (int j = 1; j <= K; ++j) {
        out.traj.times.push_back(2.0 * tau - chord.times[K - j]);
        PhasePoint z = chord.samples[K - j];
        for (double& qi : z.q) qi = -qi;
        out.traj.samples.push_back(std::move(z));
    }

    const double amp = chord.max_norm();
    auto qnorm = [](const PhasePoint& z) {
        double s = 0.0;
        for (double qi : z.q) s += qi * qi;
        return std::sqrt(s);
    };
    // x and zeta x must agree where the legs meet; both gaps are twice the
    // configuration part
    out.junction_residual = 2.0 * qnorm(chord.samples[K]) / amp;
    out.closure_residual = 2.0 * qnorm(chord.samples[0]) / amp;
    if (out.junction_residual > 1e-6)
        throw numerical_error("doubled-chord junction residual " +
                              std::to_string(out.junction_residual) +
                              " exceeds 1e-6; integration drift");

    auto stiff = [&](double t) {
        return par.energy - evaluate_potential(spec, doubled_time(t));
    };
    const Trajectory redo = integrate_trajectory_profile(
        stiff, out.traj.samples[0].planes(), out.traj.samples[0], 2.0 * tau, 2 * K,
        TrajectoryKind::periodic_orbit);
    double worst = 0.0;
    for (int j = 0; j <= 2 * K; ++j) {
        double d2 = 0.0;
        const PhasePoint& a = out.traj.samples[j];
        const PhasePoint& b = redo.samples[j];
        for (int i = 0; i < a.planes(); ++i) {
            d2 += (a.q[i] - b.q[i]) * (a.q[i] - b.q[i]);
            d2 += (a.p[i] - b.p[i]) * (a.p[i] - b.p[i]);
        }
        worst = std::max(worst, std::sqrt(d2));
    }
    out.reintegration_residual = worst / amp;
    return out;
}

// Index of the chord through the doubling relation.  The full doubled flow
// ends on the parabolic shear, so the winding is evaluated on a probe flow
// stopped 2 x probe short of 2 tau*; the result must be even.
inline ChordIndexReport chord_index(const HamiltonianParams& par, const PotentialSpec& spec,
                                    double tau_star, double probe = 0.01) {
    detail::require_margin(par, spec);
    const double full = 2.0 * tau_star;
    const double trunc = full - 2.0 * probe;
    if (!(trunc > 0.0)) throw std::invalid_argument("probe longer than the doubled period");
    auto stiff = [&](double t) {
        return par.energy - evaluate_potential(spec, doubled_time(t * trunc / full));
    };
    const double stiff_max = par.energy - potential_range(spec).vmin;
    const int steps =
        2 * std::max(1, static_cast<int>(
                            std::ceil(50.0 * trunc * std::sqrt(std::max(1.0, stiff_max)))));
    TrackedFlow tracked = track_angles_refined(stiff, par.planes, trunc, steps);
    ChordIndexReport rep;
    rep.probe = probe;
    rep.doubled = cz_index(tracked.flow);
    if (rep.doubled.degenerate)
        throw numerical_error("probe flow still degenerate at offset " + std::to_string(probe) +
                              "; pick a different probe");
    if (rep.doubled.index % 2 != 0)
        throw numerical_error("doubled index " + std::to_string(rep.doubled.index) +
                              " is odd; doubling convention broken");
    rep.index = rep.doubled.index / 2;
    return rep;
}

// Wave function on the box: psi(s_k) = Q1(u_k) + i Q2(u_k) at u_k = tau* k/K,
// stored on the closed grid s in [0, 1].  The box length is tau* and the
// eigenstate lives on the segment from (0, l_E) to (l_E, l_E) of the plane,
// in the convention reported by the CLI.
inline EigenstateProfile assemble_box_eigenstate(const Trajectory& chord, double tau_star,
                                                 int grid) {
    const int K = grid;
    if (chord.steps() % K != 0)
        throw std::invalid_argument("chord sampling must be a multiple of the profile grid");
    const int stride = chord.steps() / K;
    EigenstateProfile prof;
    prof.R = tau_star;
    prof.bc = BoundaryCondition::dirichlet;
    prof.psi.reserve(K + 1);
    for (int k = 0; k <= K; ++k) {
        const PhasePoint& z = chord.samples[static_cast<std::size_t>(k) * stride];
        const double q2 = z.q.size() > 1 ? z.q[1] : 0.0;
        prof.psi.emplace_back(z.q[0], q2);
    }
    return prof;
}

struct BoxOptions {
    int profile_grid = 512;
    Scheme scheme = Scheme::fixed_step;
    double probe = 0.01;
    bool plant_both = false;
};

inline BoxSolution solve_box(const HamiltonianParams& par, const PotentialSpec& spec, int k,
                             const BoxOptions& opt = {}) {
    BoxSolution sol;
    sol.tau_star = find_chord_tau(par, spec, k, opt.scheme);
    sol.zero_count = count_interior_zeros(par, spec, sol.tau_star);
    if (sol.zero_count != k - 1)
        throw numerical_error("chord " + std::to_string(k) + " shows " +
                              std::to_string(sol.zero_count) +
                              " interior zeros instead of " + std::to_string(k - 1));

    const int base = default_steps(par, spec, sol.tau_star);
    const int steps = opt.profile_grid * ((base + opt.profile_grid - 1) / opt.profile_grid);
    sol.chord = build_chord(par, spec, sol.tau_star, steps, opt.plant_both);

    double qend = 0.0;
    for (double qi : sol.chord.samples.back().q) qend += qi * qi;
    sol.endpoint_residual = std::sqrt(qend) / sol.chord.max_norm();

    sol.doubled = double_chord(par, spec, sol.chord);
    sol.index = chord_index(par, spec, sol.tau_star, opt.probe);
    sol.eigenstate = assemble_box_eigenstate(sol.chord, sol.tau_star, opt.profile_grid);
    sol.eigenstate.energy = par.energy;
    return sol;
}

}  // namespace feig

#endif  // FEIG_BOX_HPP
