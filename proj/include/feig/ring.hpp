// Periodic orbits on the ring by Floquet analysis.
//
// A period-tau orbit of the equations of motion exists exactly when the Hill
// monodromy M(tau) has a Floquet multiplier 1, i.e. g(tau) = tr M(tau) - 2
// vanishes.  Constant and near-constant potentials make every such zero
// tangential (M is a rotation there, so g <= 0 touches zero from below),
// which rules out plain bisection; the scan therefore collects sign-change
// brackets and local minima of |g| and the refiner treats the two cases
// separately.  Tangent candidates are pinned down through the stationary
// point of g, whose tau-derivative comes from the variational system
//
//     M' = A M,   N' = A N + A_tau M,   g'(tau) = tr N,
//
// with A = [[0, 1], [-tau^2 (E - V), 0]] and A_tau = [[0, 0], [-2 tau (E-V), 0]];
// minimizing |g| directly cannot place tau* better than sqrt of the g
// tolerance, which is far too coarse for the 1e-7 period contracts.

#ifndef FEIG_RING_HPP
#define FEIG_RING_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "feig/core.hpp"
#include "feig/cz.hpp"
#include "feig/dynamics.hpp"
#include "feig/potential.hpp"
#include "feig/verify.hpp"

namespace feig {

enum class Scheme { fixed_step, adaptive };

struct FloquetPoint {
    double tau = 0.0;
    double g = 0.0;  // tr M(tau) - 2
};

struct FloquetBracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct FloquetScan {
    std::vector<FloquetPoint> samples;
    std::vector<FloquetBracket> brackets;  // sign changes of g
    std::vector<FloquetBracket> tangencies;  // local minima of |g| under the threshold
    double threshold = 0.0;
};

struct RingSolution {
    double tau_star = 0.0;        // period; the reported ring value r_E
    double trace_residual = 0.0;  // |tr M(tau*) - 2|
    Trajectory orbit;
    LinearFlowPath flow;
    CzReport cz;
    MonotonicityCertificate certificate;
    EigenstateProfile eigenstate;
    double confinement = 0.0;  // radius bound at tau0 = tau*
    bool real_profile = false;  // Q2 identically zero (single Floquet eigendirection)
};

namespace detail {

inline double require_margin(const HamiltonianParams& par, const PotentialSpec& spec) {
    const double m0 = positivity_margin(spec, par.energy);
    if (!(m0 > 0.0))
        throw positivity_error("positivity margin " + std::to_string(m0) +
                               " is not positive; E must exceed max V");
    return m0;
}

inline int hill_steps(const HamiltonianParams& par, const PotentialSpec& spec, double tau,
                      int factor) {
    return factor * minimum_steps(par, spec, tau);
}

inline double hill_trace(const HamiltonianParams& par, const PotentialSpec& spec, double tau,
                         int steps) {
    auto k = [&](double s) { return tau * tau * (par.energy - evaluate_potential(spec, s)); };
    return flow_blocks(k, 1.0, steps).back().trace();
}

inline double hill_trace_adaptive(const HamiltonianParams& par, const PotentialSpec& spec,
                                  double tau) {
    auto k = [&](double s) { return tau * tau * (par.energy - evaluate_potential(spec, s)); };
    return flow_block_adaptive(k, 1.0).trace();
}

// Monodromy together with its tau-derivative via the variational system.
struct HillPair {
    Mat2 m;
    Mat2 n;
};

inline HillPair hill_with_derivative_fixed(const HamiltonianParams& par,
                                           const PotentialSpec& spec, double tau, int steps) {
    auto stiff = [&](double s) { return par.energy - evaluate_potential(spec, s); };
    auto derivative = [&](double s, const HillPair& y) {
        const double k = stiff(s);
        const double ktt = tau * tau * k;
        const double kt2 = 2.0 * tau * k;
        HillPair d;
        d.m = {y.m.c, y.m.d, -ktt * y.m.a, -ktt * y.m.b};
        d.n = {y.n.c, y.n.d, -ktt * y.n.a - kt2 * y.m.a, -ktt * y.n.b - kt2 * y.m.b};
        return d;
    };
    auto axpy = [](HillPair y, double s, const HillPair& x) {
        y.m = y.m + s * x.m;
        y.n = y.n + s * x.n;
        return y;
    };
    HillPair y{Mat2::identity(), {0.0, 0.0, 0.0, 0.0}};
    const double h = 1.0 / steps;
    for (int j = 0; j < steps; ++j) {
        const double s = static_cast<double>(j) / steps;
        const HillPair k1 = derivative(s, y);
        const HillPair k2 = derivative(s + 0.5 * h, axpy(y, 0.5 * h, k1));
        const HillPair k3 = derivative(s + 0.5 * h, axpy(y, 0.5 * h, k2));
        const HillPair k4 = derivative(s + h, axpy(y, h, k3));
        y = axpy(axpy(axpy(axpy(y, h / 6.0, k1), h / 3.0, k2), h / 3.0, k3), h / 6.0, k4);
    }
    if (!std::isfinite(y.m.max_abs()) || !std::isfinite(y.n.max_abs()))
        throw numerical_error("variational Hill system overflowed");
    return y;
}

inline HillPair hill_with_derivative_adaptive(const HamiltonianParams& par,
                                              const PotentialSpec& spec, double tau) {
    auto stiff = [&](double s) { return par.energy - evaluate_potential(spec, s); };
    auto rhs = [&](double s, const std::vector<double>& y, std::vector<double>& dy) {
        const double k = stiff(s);
        const double ktt = tau * tau * k;
        const double kt2 = 2.0 * tau * k;
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = -ktt * y[0];
        dy[3] = -ktt * y[1];
        dy[4] = y[6];
        dy[5] = y[7];
        dy[6] = -ktt * y[4] - kt2 * y[0];
        dy[7] = -ktt * y[5] - kt2 * y[1];
    };
    std::vector<double> y = {1, 0, 0, 1, 0, 0, 0, 0};
    y = integrate_adaptive(rhs, std::move(y), 0.0, 1.0);
    return {{y[0], y[1], y[2], y[3]}, {y[4], y[5], y[6], y[7]}};
}

struct FloquetEvaluator {
    const HamiltonianParams& par;
    const PotentialSpec& spec;
    Scheme scheme;

    double g(double tau) const {
        if (scheme == Scheme::adaptive) return hill_trace_adaptive(par, spec, tau) - 2.0;
        return hill_trace(par, spec, tau, hill_steps(par, spec, tau, 4)) - 2.0;
    }
    double gprime(double tau) const {
        if (scheme == Scheme::adaptive)
            return hill_with_derivative_adaptive(par, spec, tau).n.trace();
        return hill_with_derivative_fixed(par, spec, tau, hill_steps(par, spec, tau, 4))
            .n.trace();
    }
};

inline double bisect_g(const FloquetEvaluator& ev, double lo, double hi, double glo,
                       double ghi) {
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if (glo * ghi > 0.0)
        throw numerical_error("bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                              "] does not change sign");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-10 * (1.0 + mid)) return mid;
        const double gm = ev.g(mid);
        if (gm == 0.0) return mid;
        if (glo * gm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    throw numerical_error("period bisection failed to converge in 200 iterations");
}

inline double bisect_gprime(const FloquetEvaluator& ev, double lo, double hi, double dlo,
                            double dhi) {
    if (dlo * dhi > 0.0)
        throw numerical_error("tangency bracket does not enclose a stationary point");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-11 * (1.0 + mid)) return mid;
        const double dm = ev.gprime(mid);
        if (dm == 0.0) return mid;
        if (dlo * dm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            dlo = dm;
        }
    }
    throw numerical_error("tangency refinement failed to converge in 200 iterations");
}

}  // namespace detail

// Uniform scan of g(tau) = tr M(tau) - 2 over [tau_min, tau_max] with G
// cells.  Tangency candidates are local minima of |g| below a grid-aware
// threshold: a tangential zero passed at distance d from the nearest sample
// shows |g| of order |g''| d^2 / 2, and |g''| is bounded by the squared
// stiffness scale, so the cutoff max(1e-4, 4 L delta^2) with
// L = max(1, E - min V) catches every touch the grid can express while
// rejecting the noise floor.
inline FloquetScan floquet_scan(const HamiltonianParams& par, const PotentialSpec& spec,
                                double tau_min, double tau_max, int grid, int threads = 0) {
    detail::require_margin(par, spec);
    if (!(tau_min > 0.0) || !(tau_max > tau_min))
        throw std::invalid_argument("floquet_scan needs 0 < tau_min < tau_max");
    if (grid < 64) throw std::invalid_argument("floquet_scan needs at least 64 grid cells");

    const double stiff_max = par.energy - potential_range(spec).vmin;
    FloquetScan scan;
    scan.samples.resize(grid + 1);
    const double delta = (tau_max - tau_min) / grid;
    scan.threshold = std::max(1e-4, 4.0 * std::max(1.0, stiff_max) * delta * delta);

    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, grid + 1));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i > grid) return;
            const double tau = tau_min + delta * i;
            const int steps = 2 * minimum_steps(par, spec, tau);
            scan.samples[i] = {tau, detail::hill_trace(par, spec, tau, steps) - 2.0};
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (int i = 0; i < grid; ++i) {
        const double a = scan.samples[i].g, b = scan.samples[i + 1].g;
        if (a == 0.0 || a * b < 0.0)
            scan.brackets.push_back({scan.samples[i].tau, scan.samples[i + 1].tau});
    }
    if (scan.samples[grid].g == 0.0)
        scan.brackets.push_back({scan.samples[grid - 1].tau, scan.samples[grid].tau});
    for (int i = 1; i < grid; ++i) {
        const double am = std::abs(scan.samples[i - 1].g);
        const double a0 = std::abs(scan.samples[i].g);
        const double ap = std::abs(scan.samples[i + 1].g);
        if (a0 > scan.threshold || a0 > am || a0 > ap) continue;
        // skip minima that are already covered by a sign-change bracket
        if (scan.samples[i - 1].g * scan.samples[i].g < 0.0 ||
            scan.samples[i].g * scan.samples[i + 1].g < 0.0)
            continue;
        scan.tangencies.push_back({scan.samples[i - 1].tau, scan.samples[i + 1].tau});
    }
    return scan;
}

struct FloquetSeed {
    bool is_bracket = true;
    double lo = 0.0;
    double hi = 0.0;
};

// Refine one scan candidate to machine-level tau*.  Sign-change brackets go
// through plain bisection.  Tangency windows first locate the stationary
// point of g; if g there is within the acceptance tolerance the touch itself
// is the root, and if g is decisively positive the window is a narrow
// instability tongue whose two edge crossings fell inside one scan cell, so
// both edges are bisected separately.  A decisively negative stationary
// value is a near miss and yields nothing.
inline std::vector<double> find_periodic_tau(const HamiltonianParams& par,
                                             const PotentialSpec& spec, const FloquetSeed& seed,
                                             Scheme scheme = Scheme::fixed_step) {
    detail::require_margin(par, spec);
    const detail::FloquetEvaluator ev{par, spec, scheme};
    if (seed.is_bracket) {
        const double tau = detail::bisect_g(ev, seed.lo, seed.hi, ev.g(seed.lo), ev.g(seed.hi));
        if (std::abs(ev.g(tau)) > 1e-8)
            throw numerical_error("bracket refinement left |tr M - 2| = " +
                                  std::to_string(std::abs(ev.g(tau))) + " above 1e-8");
        return {tau};
    }
    double lo = seed.lo, hi = seed.hi;
    double dlo = ev.gprime(lo), dhi = ev.gprime(hi);
    if (dlo * dhi > 0.0) {  // widen once; the scan minimum can sit off center
        const double w = hi - lo;
        lo -= 0.5 * w;
        hi += 0.5 * w;
        lo = std::max(lo, 1e-3);
        dlo = ev.gprime(lo);
        dhi = ev.gprime(hi);
        if (dlo * dhi > 0.0) return {};  // no stationary point; spurious candidate
    }
    const double tau_c = detail::bisect_gprime(ev, lo, hi, dlo, dhi);
    const double gc = ev.g(tau_c);
    if (std::abs(gc) <= 1e-8) return {tau_c};
    if (gc > 0.0) {
        // instability tongue: two simple roots straddle the interior maximum
        const double glo = ev.g(lo), ghi = ev.g(hi);
        if (glo < 0.0 && ghi < 0.0) {
            std::vector<double> roots;
            roots.push_back(detail::bisect_g(ev, lo, tau_c, glo, gc));
            roots.push_back(detail::bisect_g(ev, tau_c, hi, gc, ghi));
            return roots;
        }
        throw numerical_error("tangency window has positive interior maximum but no "
                              "negative flanks to bracket against");
    }
    return {};  // clean near miss, |g| bottoms out below zero but away from it
}

// All periods found by a scan, refined, sorted, and de-duplicated.
inline std::vector<double> periodic_taus(const HamiltonianParams& par, const PotentialSpec& spec,
                                         const FloquetScan& scan,
                                         Scheme scheme = Scheme::fixed_step) {
    std::vector<double> taus;
    for (const auto& b : scan.brackets)
        for (double t : find_periodic_tau(par, spec, {true, b.lo, b.hi}, scheme))
            taus.push_back(t);
    for (const auto& t : scan.tangencies)
        for (double r : find_periodic_tau(par, spec, {false, t.lo, t.hi}, scheme))
            taus.push_back(r);
    std::sort(taus.begin(), taus.end());
    std::vector<double> out;
    for (double t : taus)
        if (out.empty() || t - out.back() > 1e-7 * (1.0 + t)) out.push_back(t);
    return out;
}

// Build the closed orbit at tau*.  The initial condition comes from the
// eigenvalue-1 eigenvector of M(tau*); with tr M = 2 and det M = 1 the rows
// of M - I are proportional, so (b, 1 - a) and (1 - d, c) both lie in the
// kernel and the better-conditioned one wins.  When M is the identity to
// tolerance the whole plane is periodic and two orthogonal copies are
// planted in the two configuration planes, weighted to equal mean energy,
// which makes the assembled profile genuinely complex.
inline Trajectory build_periodic_orbit(const HamiltonianParams& par, const PotentialSpec& spec,
                                       double tau_star, int steps = 0) {
    detail::require_margin(par, spec);
    const int hsteps = detail::hill_steps(par, spec, tau_star, 4);
    const Mat2 m = monodromy(par, spec, tau_star, hsteps).m;
    if (std::abs(m.trace() - 2.0) > 1e-8)
        throw std::invalid_argument("build_periodic_orbit needs |tr M - 2| <= 1e-8, got " +
                                    std::to_string(std::abs(m.trace() - 2.0)));
    if (steps == 0) steps = default_steps(par, spec, tau_star);

    const Mat2 mi{m.a - 1.0, m.b, m.c, m.d - 1.0};
    const double n1 = std::hypot(m.b, 1.0 - m.a);
    const double n2 = std::hypot(1.0 - m.d, m.c);
    const double id_gap = mi.max_abs();

    auto residual = [&](double v0, double v1) {
        const double r0 = mi.a * v0 + mi.b * v1;
        const double r1 = mi.c * v0 + mi.d * v1;
        return std::hypot(r0, r1) / std::hypot(v0, v1);
    };

    Trajectory orbit;
    if (id_gap <= 1e-8) {
        // fully periodic monodromy: orthogonal plantings in the two planes,
        // amplitudes balanced so both carry the same mean quadratic energy
        if (par.planes < 2)
            throw numerical_error("orthogonal planting needs at least two planes");
        PhasePoint zc = PhasePoint::zero(par.planes);
        zc.q[0] = 1.0;  // Hill initial data (1, 0)
        PhasePoint zs = PhasePoint::zero(par.planes);
        zs.p[1] = 1.0 / tau_star;  // Hill initial data (0, 1) maps to p = 1/tau
        const Trajectory tc = integrate_trajectory(par, spec, zc, tau_star, steps);
        const Trajectory ts = integrate_trajectory(par, spec, zs, tau_star, steps);
        const double ec = average_energy(par, spec, tc) + par.c;
        const double es = average_energy(par, spec, ts) + par.c;
        PhasePoint z0 = PhasePoint::zero(par.planes);
        z0.q[0] = 1.0;
        z0.p[1] = std::sqrt(ec / es) / tau_star;
        orbit = integrate_trajectory(par, spec, z0, tau_star, steps);
    } else {
        double v0, v1;
        if (n1 >= n2) {
            v0 = m.b;
            v1 = 1.0 - m.a;
        } else {
            v0 = 1.0 - m.d;
            v1 = m.c;
        }
        if (residual(v0, v1) > 1e-6)
            throw numerical_error("Floquet eigenvector residual " +
                                  std::to_string(residual(v0, v1)) +
                                  " exceeds 1e-6; monodromy is defective beyond tolerance");
        PhasePoint z0 = PhasePoint::zero(par.planes);
        z0.q[0] = v0;             // Hill (w, w') maps to (q, p) = (w, w'/tau)
        z0.p[0] = v1 / tau_star;
        orbit = integrate_trajectory(par, spec, z0, tau_star, steps);
    }

    orbit = rescale_to_zero_mean(par, spec, orbit);
    const PhasePoint& first = orbit.samples.front();
    const PhasePoint& last = orbit.samples.back();
    double gap2 = 0.0;
    for (int i = 0; i < par.planes; ++i) {
        gap2 += (last.q[i] - first.q[i]) * (last.q[i] - first.q[i]);
        gap2 += (last.p[i] - first.p[i]) * (last.p[i] - first.p[i]);
    }
    const double closure = std::sqrt(gap2);
    if (closure > 1e-6 * orbit.max_norm())
        throw numerical_error("orbit closure " + std::to_string(closure) +
                              " exceeds 1e-6 of the amplitude");
    return orbit;
}

// Sample the wave function off the orbit: psi(phi_k) = Q1(u_k) + i Q2(u_k)
// with u_k = tau* k / K on the half-open angle grid phi_k = 2 pi k / K.
// The ring radius is tau* / 2 pi (circumference tau*).
inline EigenstateProfile assemble_ring_eigenstate(const Trajectory& orbit, double tau_star,
                                                  int grid) {
    const int K = grid;
    if (orbit.steps() % K != 0)
        throw std::invalid_argument("orbit sampling must be a multiple of the profile grid");
    const int stride = orbit.steps() / K;
    EigenstateProfile prof;
    prof.R = tau_star / kTwoPi;
    prof.bc = BoundaryCondition::periodic;
    prof.psi.reserve(K);
    for (int k = 0; k < K; ++k) {
        const PhasePoint& z = orbit.samples[static_cast<std::size_t>(k) * stride];
        const double q2 = z.q.size() > 1 ? z.q[1] : 0.0;
        prof.psi.emplace_back(z.q[0], q2);
    }
    return prof;
}

// Gronwall confinement bound: every critical point with period at most tau0
// stays inside R_Omega exp(tau0 L), where R_Omega = sqrt(2c / min(1, m0))
// contains the set {H_t <= 0 for some t} and L = max(1, E - min V) bounds
// the relative speed |X_H(z)| <= L |z|.
inline double confinement_radius(const HamiltonianParams& par, const PotentialSpec& spec,
                                 double tau0) {
    const double m0 = detail::require_margin(par, spec);
    const double r_omega = std::sqrt(2.0 * par.c / std::min(1.0, m0));
    const double lips = std::max(1.0, par.energy - potential_range(spec).vmin);
    return r_omega * std::exp(tau0 * lips);
}

struct RingOptions {
    double tau_min = 0.1;
    double tau_max = 0.0;  // 0 means the default 4 pi / sqrt(m0)
    int grid = 512;
    int threads = 0;
    Scheme scheme = Scheme::fixed_step;
    int profile_grid = 512;
};

inline std::vector<RingSolution> solve_ring(const HamiltonianParams& par,
                                            const PotentialSpec& spec,
                                            const RingOptions& opt = {}) {
    const double m0 = detail::require_margin(par, spec);
    double tau_max = opt.tau_max;
    if (tau_max <= 0.0) tau_max = 4.0 * kPi / std::sqrt(m0);
    const FloquetScan scan =
        floquet_scan(par, spec, opt.tau_min, tau_max, opt.grid, opt.threads);
    const std::vector<double> taus = periodic_taus(par, spec, scan, opt.scheme);

    auto stiff = [&](double t) { return par.energy - evaluate_potential(spec, t); };
    std::vector<RingSolution> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        RingSolution sol;
        sol.tau_star = tau;
        const int hsteps = detail::hill_steps(par, spec, tau, 4);
        sol.trace_residual = std::abs(monodromy(par, spec, tau, hsteps).trace - 2.0);

        // orbit steps: a multiple of the profile grid at least as fine as
        // the default integration density
        const int base = default_steps(par, spec, tau);
        const int steps =
            opt.profile_grid * ((base + opt.profile_grid - 1) / opt.profile_grid);
        sol.orbit = build_periodic_orbit(par, spec, tau, steps);

        TrackedFlow tracked =
            track_angles_refined(stiff, par.planes, tau, default_steps(par, spec, tau));
        sol.flow = std::move(tracked.flow);
        sol.cz = cz_index(sol.flow);
        const HessianPath hess = hessian_path(par, spec, tau, sol.flow.steps());
        sol.certificate = monotonicity_certificate(sol.flow, hess);

        sol.eigenstate = assemble_ring_eigenstate(sol.orbit, tau, opt.profile_grid);
        sol.eigenstate.energy = par.energy;
        sol.confinement = confinement_radius(par, spec, tau);

        double im_max = 0.0;
        for (const auto& v : sol.eigenstate.psi) im_max = std::max(im_max, std::abs(v.imag()));
        sol.real_profile = im_max <= 1e-12 * sol.eigenstate.max_abs();
        out.push_back(std::move(sol));
    }
    return out;
}

}  // namespace feig

#endif  // FEIG_RING_HPP
