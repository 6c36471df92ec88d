// Discretized Rabinowitz-type action functional on loops and chords.
//
// The continuum functional is A(x, eta) = int x*lambda - eta int H_t(x) dt
// with the one form lambda = (p dq - q dp)/2, taken over the unit circle
// (periodic loops) or the unit interval with q pinned to zero at both ends
// (chords).  Critical points are exactly the solutions of
// x' = eta J grad H_t(x) with zero mean energy, i.e. reparametrized orbits
// or chords whose period/length is the multiplier eta.
//
// The discretization is midpoint collocation on N segments:
//
//   A_N = sum_j  (pbar_j . dq_j - qbar_j . dp_j)/2  -  eta/N sum_j H(tbar_j, xbar_j)
//
// with xbar_j = (x_j + x_{j+1})/2, dx_j = x_{j+1} - x_j and tbar_j the segment
// midpoint in unit time.  Two properties make this the right choice here:
//
//   * the partial derivatives of A_N vanish exactly when the midpoint
//     collocation equations dx_j = (eta/N) J grad H(tbar_j, xbar_j) hold and
//     the mean discrete energy is zero, and
//
//   * at such a discrete critical point the Liouville sum telescopes against
//     the quadrature term and A_N = eta * c to machine precision, which turns
//     the action-period identity into an exactly checkable statement instead
//     of one clouded by O(1/N^2) discretization error.
//
// The gradient below is the exact derivative of action_value (same floating
// point formulas), so finite-difference consistency holds to roundoff.  The
// metric on loop variations is the discrete L^2 one with weight 1/N, and
// weight one on the eta slot; the reported gradient entries are N * dA/dx_j,
// which stay O(1) as N grows.
//
// Critical points are saddles (the functional is strongly indefinite), so
// refinement is a damped Newton iteration on the square collocation system,
// not descent.  The descent flow exists separately as a diagnostic.

#ifndef FEIG_ACTION_HPP
#define FEIG_ACTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "feig/core.hpp"
#include "feig/dynamics.hpp"
#include "feig/potential.hpp"

namespace feig {

// N phase-space samples plus the Lagrange multiplier eta (the period for
// loops, the length for chords).  Periodic loops store x_0 .. x_{N-1} and
// wrap; chords store x_0 .. x_N with the q components of both endpoints
// pinned to zero exactly.
struct DiscretizedLoop {
    TrajectoryKind kind = TrajectoryKind::periodic_orbit;
    std::vector<PhasePoint> points;
    double eta = 0.0;

    int segments() const {
        const int m = static_cast<int>(points.size());
        return kind == TrajectoryKind::periodic_orbit ? m : m - 1;
    }
    int planes() const { return points.empty() ? 0 : points.front().planes(); }
    const PhasePoint& at(int j) const {
        const int m = static_cast<int>(points.size());
        if (kind == TrajectoryKind::periodic_orbit) return points[static_cast<std::size_t>(j % m)];
        return points[static_cast<std::size_t>(j)];
    }
    double max_norm() const {
        double m = 0.0;
        for (const auto& z : points) m = std::max(m, z.norm());
        return m;
    }
};

struct ActionReport {
    double action = 0.0;     // liouville - eta * constraint, exactly
    double liouville = 0.0;  // sum of (pbar.dq - qbar.dp)/2
    double constraint = 0.0; // mean discrete energy (1/N) sum H(tbar, xbar)
    double eta = 0.0;
    double grad_norm = 0.0;
};

struct ActionGradient {
    std::vector<PhasePoint> point_grad;  // N * dA/dx_j in each slot
    double eta_grad = 0.0;               // dA/deta = -mean energy
    double norm = 0.0;                   // sqrt((1/N) sum |g_j|^2 + eta_grad^2)
};

namespace detail {

inline void check_loop(const DiscretizedLoop& loop) {
    const int n_pts = static_cast<int>(loop.points.size());
    if (loop.segments() < 32)
        throw std::invalid_argument("discretized loop needs at least 32 segments");
    const int n = loop.points.front().planes();
    for (const auto& z : loop.points)
        if (z.planes() != n || static_cast<int>(z.p.size()) != n)
            throw std::invalid_argument("inconsistent phase-point dimensions in loop");
    if (loop.kind == TrajectoryKind::chord) {
        for (double x : loop.points.front().q)
            if (x != 0.0) throw std::invalid_argument("chord loop start q must be pinned to zero");
        for (double x : loop.points[static_cast<std::size_t>(n_pts - 1)].q)
            if (x != 0.0) throw std::invalid_argument("chord loop end q must be pinned to zero");
    }
}

}  // namespace detail

// Exact derivative of the discrete action.  Per segment j the four scatter
// contributions below are the partials of
//   (pbar.dq - qbar.dp)/2 - (eta/N) H(tbar, xbar)
// with respect to the two endpoint samples; chord mode afterwards projects
// out the pinned endpoint q variations.
inline ActionGradient action_gradient(const HamiltonianParams& par, const PotentialSpec& spec,
                                      const DiscretizedLoop& loop) {
    detail::check_loop(loop);
    const int nseg = loop.segments();
    const int n = loop.planes();
    const int n_pts = static_cast<int>(loop.points.size());
    const bool periodic = loop.kind == TrajectoryKind::periodic_orbit;

    std::vector<PhasePoint> partial(static_cast<std::size_t>(n_pts), PhasePoint::zero(n));
    double mean_h = 0.0;
    for (int j = 0; j < nseg; ++j) {
        const PhasePoint& a = loop.at(j);
        const PhasePoint& b = loop.at(j + 1);
        const double tbar = (j + 0.5) / nseg;
        const double k = par.energy - evaluate_potential(spec, tbar);
        const double w = 0.5 * loop.eta / nseg;  // eta/(2N)
        PhasePoint& ga = partial[static_cast<std::size_t>(j)];
        PhasePoint& gb = partial[static_cast<std::size_t>(periodic ? (j + 1) % n_pts : j + 1)];
        double h_q = 0.0, h_p = 0.0;
        for (int i = 0; i < n; ++i) {
            const double qbar = 0.5 * (a.q[i] + b.q[i]);
            const double pbar = 0.5 * (a.p[i] + b.p[i]);
            const double dq = b.q[i] - a.q[i];
            const double dp = b.p[i] - a.p[i];
            ga.q[i] += -0.5 * pbar - 0.25 * dp - w * k * qbar;
            gb.q[i] += 0.5 * pbar - 0.25 * dp - w * k * qbar;
            ga.p[i] += 0.25 * dq + 0.5 * qbar - w * pbar;
            gb.p[i] += 0.25 * dq - 0.5 * qbar - w * pbar;
            h_q += qbar * qbar;
            h_p += pbar * pbar;
        }
        mean_h += 0.5 * h_p + 0.5 * k * h_q - par.c;
    }
    mean_h /= nseg;

    if (loop.kind == TrajectoryKind::chord) {
        for (int i = 0; i < n; ++i) {
            partial.front().q[i] = 0.0;
            partial.back().q[i] = 0.0;
        }
    }

    ActionGradient g;
    g.point_grad = std::move(partial);
    double sum = 0.0;
    for (auto& z : g.point_grad) {
        for (double& x : z.q) x *= nseg;
        for (double& x : z.p) x *= nseg;
        const double nm = z.norm();
        sum += nm * nm;
    }
    g.eta_grad = -mean_h;
    g.norm = std::sqrt(sum / nseg + g.eta_grad * g.eta_grad);
    return g;
}

inline ActionReport action_value(const HamiltonianParams& par, const PotentialSpec& spec,
                                 const DiscretizedLoop& loop) {
    detail::check_loop(loop);
    const int nseg = loop.segments();
    const int n = loop.planes();

    double liouville = 0.0;
    double mean_h = 0.0;
    for (int j = 0; j < nseg; ++j) {
        const PhasePoint& a = loop.at(j);
        const PhasePoint& b = loop.at(j + 1);
        const double k = par.energy - evaluate_potential(spec, (j + 0.5) / nseg);
        double h_q = 0.0, h_p = 0.0;
        for (int i = 0; i < n; ++i) {
            const double qbar = 0.5 * (a.q[i] + b.q[i]);
            const double pbar = 0.5 * (a.p[i] + b.p[i]);
            liouville += 0.5 * (pbar * (b.q[i] - a.q[i]) - qbar * (b.p[i] - a.p[i]));
            h_q += qbar * qbar;
            h_p += pbar * pbar;
        }
        mean_h += 0.5 * h_p + 0.5 * k * h_q - par.c;
    }
    mean_h /= nseg;

    ActionReport rep;
    rep.liouville = liouville;
    rep.constraint = mean_h;
    rep.eta = loop.eta;
    rep.action = liouville - loop.eta * mean_h;
    rep.grad_norm = action_gradient(par, spec, loop).norm;
    return rep;
}

namespace detail {

// Unknown packing for the Newton system: one column per free coordinate
// (pinned chord-endpoint q slots get -1) plus a trailing eta column.
struct LoopIndexMap {
    std::vector<int> col;  // (point, plane, q/p) -> column or -1
    int unknowns = 0;
    int n = 0;

    static LoopIndexMap build(const DiscretizedLoop& loop) {
        LoopIndexMap m;
        m.n = loop.planes();
        const int n_pts = static_cast<int>(loop.points.size());
        m.col.assign(static_cast<std::size_t>(n_pts) * 2 * m.n, -1);
        int next = 0;
        for (int j = 0; j < n_pts; ++j) {
            const bool pin_q = loop.kind == TrajectoryKind::chord && (j == 0 || j == n_pts - 1);
            for (int i = 0; i < m.n; ++i) {
                if (!pin_q) m.col[m.slot(j, i, 0)] = next++;
                m.col[m.slot(j, i, 1)] = next++;
            }
        }
        m.unknowns = next + 1;  // + eta
        return m;
    }
    std::size_t slot(int j, int i, int comp) const {
        return (static_cast<std::size_t>(j) * n + i) * 2 + static_cast<std::size_t>(comp);
    }
    int eta_col() const { return unknowns - 1; }
};

// Midpoint collocation residuals: per segment and plane
//   r_q = dq - (eta/N) pbar,   r_p = dp + (eta/N) k qbar,
// plus the mean-energy constraint as the last row.  Roots of this square
// system are exactly the critical points of the discrete action.
inline std::vector<double> collocation_residual(const HamiltonianParams& par,
                                                const PotentialSpec& spec,
                                                const DiscretizedLoop& loop) {
    const int nseg = loop.segments();
    const int n = loop.planes();
    std::vector<double> r(static_cast<std::size_t>(nseg) * 2 * n + 1, 0.0);
    double mean_h = 0.0;
    std::size_t row = 0;
    for (int j = 0; j < nseg; ++j) {
        const PhasePoint& a = loop.at(j);
        const PhasePoint& b = loop.at(j + 1);
        const double k = par.energy - evaluate_potential(spec, (j + 0.5) / nseg);
        const double step = loop.eta / nseg;
        double h_q = 0.0, h_p = 0.0;
        for (int i = 0; i < n; ++i) {
            const double qbar = 0.5 * (a.q[i] + b.q[i]);
            const double pbar = 0.5 * (a.p[i] + b.p[i]);
            r[row++] = b.q[i] - a.q[i] - step * pbar;
            r[row++] = b.p[i] - a.p[i] + step * k * qbar;
            h_q += qbar * qbar;
            h_p += pbar * pbar;
        }
        mean_h += 0.5 * h_p + 0.5 * k * h_q - par.c;
    }
    r[row] = mean_h / nseg;
    return r;
}

inline double l2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

struct SparseRow {
    std::vector<std::pair<int, double>> entries;
    void add(int col, double val) {
        if (col >= 0) entries.emplace_back(col, val);
    }
};

// Jacobian of collocation_residual in sparse row form.  Segment rows touch
// the two endpoint samples and eta; the constraint row touches every sample.
inline std::vector<SparseRow> collocation_jacobian(const HamiltonianParams& par,
                                                   const PotentialSpec& spec,
                                                   const DiscretizedLoop& loop,
                                                   const LoopIndexMap& map) {
    const int nseg = loop.segments();
    const int n = loop.planes();
    const int n_pts = static_cast<int>(loop.points.size());
    const bool periodic = loop.kind == TrajectoryKind::periodic_orbit;
    std::vector<SparseRow> rows(static_cast<std::size_t>(nseg) * 2 * n + 1);
    SparseRow& last = rows.back();

    std::size_t row = 0;
    for (int j = 0; j < nseg; ++j) {
        const int ja = periodic ? j % n_pts : j;
        const int jb = periodic ? (j + 1) % n_pts : j + 1;
        const PhasePoint& a = loop.at(j);
        const PhasePoint& b = loop.at(j + 1);
        const double k = par.energy - evaluate_potential(spec, (j + 0.5) / nseg);
        const double w = 0.5 * loop.eta / nseg;
        for (int i = 0; i < n; ++i) {
            const double qbar = 0.5 * (a.q[i] + b.q[i]);
            const double pbar = 0.5 * (a.p[i] + b.p[i]);
            SparseRow& rq = rows[row++];
            rq.add(map.col[map.slot(ja, i, 0)], -1.0);
            rq.add(map.col[map.slot(jb, i, 0)], 1.0);
            rq.add(map.col[map.slot(ja, i, 1)], -w);
            rq.add(map.col[map.slot(jb, i, 1)], -w);
            rq.add(map.eta_col(), -pbar / nseg);
            SparseRow& rp = rows[row++];
            rp.add(map.col[map.slot(ja, i, 1)], -1.0);
            rp.add(map.col[map.slot(jb, i, 1)], 1.0);
            rp.add(map.col[map.slot(ja, i, 0)], w * k);
            rp.add(map.col[map.slot(jb, i, 0)], w * k);
            rp.add(map.eta_col(), k * qbar / nseg);
            last.add(map.col[map.slot(ja, i, 0)], 0.5 * k * qbar / nseg);
            last.add(map.col[map.slot(jb, i, 0)], 0.5 * k * qbar / nseg);
            last.add(map.col[map.slot(ja, i, 1)], 0.5 * pbar / nseg);
            last.add(map.col[map.slot(jb, i, 1)], 0.5 * pbar / nseg);
        }
    }
    return rows;
}

inline void apply_step(DiscretizedLoop& loop, const LoopIndexMap& map,
                       const std::vector<double>& delta, double scale) {
    const int n_pts = static_cast<int>(loop.points.size());
    for (int j = 0; j < n_pts; ++j)
        for (int i = 0; i < map.n; ++i) {
            const int cq = map.col[map.slot(j, i, 0)];
            const int cp = map.col[map.slot(j, i, 1)];
            if (cq >= 0) loop.points[static_cast<std::size_t>(j)].q[i] += scale * delta[static_cast<std::size_t>(cq)];
            loop.points[static_cast<std::size_t>(j)].p[i] += scale * delta[static_cast<std::size_t>(cp)];
        }
    loop.eta += scale * delta[static_cast<std::size_t>(map.eta_col())];
}

}  // namespace detail

struct NewtonReport {
    DiscretizedLoop loop;
    int iterations = 0;
    double grad_norm = 0.0;             // final |grad A|
    double residual_norm = 0.0;         // final collocation residual, l2
    std::vector<DiscretizedLoop> iterates;  // seed plus every accepted update
};

// Damped Newton on the square collocation system.  The normal equations get
// a tiny Levenberg shift because periodic critical points come in circles
// (time shift), so the plain Jacobian is singular along the orbit direction.
inline NewtonReport newton_refine(const HamiltonianParams& par, const PotentialSpec& spec,
                                  const DiscretizedLoop& seed, double tol = 1e-10,
                                  int max_iter = 50) {
    detail::check_loop(seed);
    if (!(tol > 0.0)) throw std::invalid_argument("newton tolerance must be positive");

    NewtonReport rep;
    rep.loop = seed;
    rep.iterates.push_back(seed);
    const auto map = detail::LoopIndexMap::build(seed);
    const int m = map.unknowns;

    for (int iter = 0; iter <= max_iter; ++iter) {
        const ActionGradient grad = action_gradient(par, spec, rep.loop);
        std::vector<double> r = detail::collocation_residual(par, spec, rep.loop);
        rep.grad_norm = grad.norm;
        rep.residual_norm = detail::l2(r);
        rep.iterations = iter;
        if (grad.norm <= tol) return rep;
        if (iter == max_iter) break;

        const auto rows = detail::collocation_jacobian(par, spec, rep.loop, map);
        SquareMat jtj(m);
        std::vector<double> jtr(static_cast<std::size_t>(m), 0.0);
        for (std::size_t rr = 0; rr < rows.size(); ++rr) {
            const auto& entries = rows[rr].entries;
            for (const auto& [ca, va] : entries) {
                jtr[static_cast<std::size_t>(ca)] += va * r[rr];
                for (const auto& [cb, vb] : entries) jtj(ca, cb) += va * vb;
            }
        }
        double trace = 0.0;
        for (int i = 0; i < m; ++i) trace += jtj(i, i);
        const double mu = 1e-10 * std::max(trace / m, 1.0);
        for (double& x : jtr) x = -x;
        std::vector<double> delta;
        try {
            delta = cholesky_solve_damped(jtj, std::move(jtr), mu);
        } catch (const numerical_error&) {
            throw numerical_error("degenerate critical point: singular collocation normal equations");
        }

        const double base = rep.residual_norm;
        double scale = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            DiscretizedLoop trial = rep.loop;
            detail::apply_step(trial, map, delta, scale);
            const double rn = detail::l2(detail::collocation_residual(par, spec, trial));
            if (rn <= (1.0 - 1e-4 * scale) * base || rn == 0.0) {
                rep.loop = std::move(trial);
                rep.iterates.push_back(rep.loop);
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted)
            throw numerical_error("newton refinement stalled: no residual decrease along step");
    }
    throw numerical_error("newton refinement did not reach tolerance " + std::to_string(tol) +
                          " in " + std::to_string(max_iter) + " iterations");
}

struct FlowLineSample {
    double s = 0.0;
    ActionReport report;
};

struct FlowLineResult {
    std::vector<FlowLineSample> samples;
    DiscretizedLoop loop;   // final state
    bool escaped = false;   // action fell past the floor; not a failure
    bool stationary = false;
};

// Explicit negative-gradient iteration with backtracking, for diagnostics.
// The functional is unbounded below, so a run that dives past the action
// floor is reported as an escape rather than an error.
inline FlowLineResult flow_line(const HamiltonianParams& par, const PotentialSpec& spec,
                                const DiscretizedLoop& start, double s_max, double step = 0.0,
                                double action_floor = -1e6) {
    detail::check_loop(start);
    if (!(s_max > 0.0)) throw std::invalid_argument("flow time must be positive");
    const int nseg = start.segments();
    if (step <= 0.0) step = 1e-3 / nseg;

    FlowLineResult out;
    out.loop = start;
    double s = 0.0;
    out.samples.push_back({s, action_value(par, spec, out.loop)});
    while (s < s_max) {
        const ActionGradient g = action_gradient(par, spec, out.loop);
        const double g2 = g.norm * g.norm;
        if (g2 * step < 1e-30) {  // no representable descent left
            out.stationary = true;
            break;
        }
        const double a0 = out.samples.back().report.action;
        double h = std::min(step, s_max - s);
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            DiscretizedLoop trial = out.loop;
            for (std::size_t j = 0; j < trial.points.size(); ++j) {
                for (int i = 0; i < trial.planes(); ++i) {
                    trial.points[j].q[i] -= h * g.point_grad[j].q[i];
                    trial.points[j].p[i] -= h * g.point_grad[j].p[i];
                }
            }
            trial.eta -= h * g.eta_grad;
            const ActionReport rep = action_value(par, spec, trial);
            if (rep.action <= a0 - 1e-4 * h * g2) {
                out.loop = std::move(trial);
                s += h;
                out.samples.push_back({s, rep});
                accepted = true;
                break;
            }
            h *= 0.5;
        }
        if (!accepted) {
            out.stationary = true;
            break;
        }
        if (out.samples.back().report.action < action_floor) {
            out.escaped = true;
            break;
        }
    }
    return out;
}

struct ConstraintReport {
    double value = 0.0;          // F(z) = |p|^2/2 + Ebar |q|^2/2 - c
    PhasePoint grad;             // (Ebar q, p)
    bool regular = false;        // Ebar > 0 and c > 0
    double mean_stiffness = 0.0; // Ebar = int (E - V) dt
    double min_grad_norm = 0.0;  // min |grad F| over F = 0, sqrt(2 c min(1, Ebar))
};

// Time-averaged constraint function whose zero set is the compact ellipsoid
// the critical loops live on.  On that set |grad F|^2 = Ebar^2 |q|^2 + |p|^2
// is minimized along the pure-q or pure-p axis, whichever has the smaller
// coefficient, giving min |grad F| = sqrt(2 c min(1, Ebar)) > 0: every level-0
// point is regular and the ellipsoid is a genuine hypersurface.
inline ConstraintReport constraint_report(const HamiltonianParams& par, const PotentialSpec& spec,
                                          const PhasePoint& z) {
    const int grid = 2048;
    std::vector<double> f(grid + 1);
    for (int j = 0; j <= grid; ++j)
        f[static_cast<std::size_t>(j)] =
            par.energy - evaluate_potential(spec, static_cast<double>(j) / grid);
    const double ebar = detail::quadrature_unit(f, spec.domain == Domain::ring);

    ConstraintReport rep;
    rep.mean_stiffness = ebar;
    double q2 = 0.0, p2 = 0.0;
    for (double x : z.q) q2 += x * x;
    for (double x : z.p) p2 += x * x;
    rep.value = 0.5 * p2 + 0.5 * ebar * q2 - par.c;
    rep.grad = z;
    for (double& x : rep.grad.q) x *= ebar;
    rep.regular = ebar > 0.0 && par.c > 0.0;
    rep.min_grad_norm = rep.regular ? std::sqrt(2.0 * par.c * std::min(1.0, ebar)) : 0.0;
    return rep;
}

struct ActionPeriodCheck {
    double action = 0.0;
    double eta_c = 0.0;
    double rel_gap = 0.0;
};

// At a critical loop the action equals eta * c: the Liouville form is
// invariant under the flow and contracts against the Hamiltonian vector
// field to H + c, of which the mean-H part is killed by the constraint.
inline ActionPeriodCheck check_action_period(const HamiltonianParams& par,
                                             const PotentialSpec& spec,
                                             const DiscretizedLoop& loop) {
    const ActionReport rep = action_value(par, spec, loop);
    if (!(rep.grad_norm <= 1e-6))
        throw numerical_error("action-period check needs a critical loop; |grad A| = " +
                              std::to_string(rep.grad_norm));
    ActionPeriodCheck out;
    out.action = rep.action;
    out.eta_c = loop.eta * par.c;
    const double denom = std::max(std::abs(out.eta_c), 1e-300);
    out.rel_gap = std::abs(out.action - out.eta_c) / denom;
    return out;
}

struct MultiplierBound {
    double epsilon = 0.0;
    double grad_norm = 0.0;
    double alpha = 0.0;     // max(1/c, c_lambda epsilon / c)
    double c_lambda = 0.0;  // max |lambda| on the loop = half the max phase norm
    double eta_abs = 0.0;
    double bound = 0.0;     // alpha (|A| + 1)
    bool vacuous = false;   // |grad A| > epsilon, implication holds trivially
    bool holds = false;
};

// Near-critical multiplier bound: |grad A| <= eps forces
// |eta| <= alpha (|A| + 1) with alpha built from the action offset and the
// sup of the one form on the compact set the loop occupies.
inline MultiplierBound check_multiplier_bound(const HamiltonianParams& par,
                                              const PotentialSpec& spec,
                                              const DiscretizedLoop& loop, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const ActionReport rep = action_value(par, spec, loop);

    MultiplierBound out;
    out.epsilon = epsilon;
    out.grad_norm = rep.grad_norm;
    out.c_lambda = 0.5 * loop.max_norm();
    out.alpha = std::max(1.0 / par.c, out.c_lambda * epsilon / par.c);
    out.eta_abs = std::abs(loop.eta);
    out.bound = out.alpha * (std::abs(rep.action) + 1.0);
    out.vacuous = rep.grad_norm > epsilon;
    out.holds = out.vacuous || out.eta_abs <= out.bound;
    return out;
}

// Stride-resample an integrated trajectory into a discretized loop seed.
// Periodic trajectories drop the duplicated closing sample; chords keep both
// endpoints and pin their q components exactly.
inline DiscretizedLoop loop_from_trajectory(const Trajectory& traj, int nseg) {
    if (nseg < 32) throw std::invalid_argument("discretized loop needs at least 32 segments");
    const int steps = traj.steps();
    if (steps < nseg || steps % nseg != 0)
        throw std::invalid_argument("trajectory step count " + std::to_string(steps) +
                                    " is not a multiple of requested segment count " +
                                    std::to_string(nseg));
    const int stride = steps / nseg;

    DiscretizedLoop loop;
    loop.kind = traj.kind;
    loop.eta = traj.tau;
    const int n_pts = traj.kind == TrajectoryKind::periodic_orbit ? nseg : nseg + 1;
    loop.points.reserve(static_cast<std::size_t>(n_pts));
    for (int j = 0; j < n_pts; ++j)
        loop.points.push_back(traj.samples[static_cast<std::size_t>(j) * stride]);
    if (traj.kind == TrajectoryKind::chord) {
        for (double& x : loop.points.front().q) x = 0.0;
        for (double& x : loop.points.back().q) x = 0.0;
    }
    return loop;
}

}  // namespace feig

#endif  // FEIG_ACTION_HPP
