// Equations of motion and linearized flow for the time-periodic quadratic
// Hamiltonian H(t, q, p) = |p|^2/2 + (E - V(t)) |q|^2/2 - c on R^{2n}.
//
// Two time variables show up everywhere.  Physical time u runs over [0, tau]
// while the potential profile lives on the unit interval, so the stiffness at
// physical time u is E - V(u/tau).  The monodromy uses the substitution
// w(s) = q(tau s), which turns the equation of motion into the Hill form
// w'' + tau^2 (E - V(s)) w = 0 on the fixed interval s in [0, 1]; that makes
// the period scan a one-parameter family over a fixed domain.
//
// The configuration planes never couple (the stiffness is the same scalar in
// every plane), so per-plane 2x2 blocks carry all the linear-flow content and
// the full 2n x 2n matrices are direct sums of them.

#ifndef FEIG_DYNAMICS_HPP
#define FEIG_DYNAMICS_HPP

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "feig/core.hpp"
#include "feig/potential.hpp"

namespace feig {

struct HamiltonianParams {
    double energy = 1.0;
    double c = 0.5;     // action offset, must stay positive
    int planes = 2;     // configuration dimension n
};

struct PhasePoint {
    std::vector<double> q;
    std::vector<double> p;

    static PhasePoint zero(int n) {
        PhasePoint z;
        z.q.assign(n, 0.0);
        z.p.assign(n, 0.0);
        return z;
    }
    int planes() const { return static_cast<int>(q.size()); }
    double norm() const {
        double s = 0.0;
        for (double x : q) s += x * x;
        for (double x : p) s += x * x;
        return std::sqrt(s);
    }
    PhasePoint scaled(double s) const {
        PhasePoint z = *this;
        for (double& x : z.q) x *= s;
        for (double& x : z.p) x *= s;
        return z;
    }
};

enum class TrajectoryKind { periodic_orbit, chord };

// Uniformly sampled solution of the equations of motion on [0, tau].
struct Trajectory {
    double tau = 0.0;
    TrajectoryKind kind = TrajectoryKind::periodic_orbit;
    std::vector<double> times;        // u_j = j tau / K
    std::vector<PhasePoint> samples;  // K + 1 entries

    int steps() const { return static_cast<int>(samples.size()) - 1; }
    double max_norm() const {
        double m = 0.0;
        for (const auto& z : samples) m = std::max(m, z.norm());
        return m;
    }
};

// Linearized flow phi(u_j) from the identity, full matrices in the interleaved
// ordering (q_1, p_1, q_2, p_2, ...) plus the per-plane 2x2 factors.
struct LinearFlowPath {
    double tau = 0.0;
    std::vector<double> times;
    std::vector<SquareMat> mats;
    std::vector<std::vector<Mat2>> blocks;  // blocks[plane][time index]

    int planes() const { return static_cast<int>(blocks.size()); }
    int steps() const { return static_cast<int>(times.size()) - 1; }
};

// Diagonal Hessian D^2 H along the path: per plane diag(E - V(u/tau), 1)
// in the (q, p) ordering.
struct HessianPath {
    double tau = 0.0;
    std::vector<double> times;
    std::vector<double> d11;  // E - V(u_j / tau)
    std::vector<double> d22;  // identically 1 for this Hamiltonian
};

struct MonodromyResult {
    Mat2 m;
    double trace = 0.0;
};

inline double hamiltonian_value(const HamiltonianParams& par, const PotentialSpec& spec,
                                double t, const PhasePoint& z) {
    double q2 = 0.0, p2 = 0.0;
    for (double x : z.q) q2 += x * x;
    for (double x : z.p) p2 += x * x;
    return 0.5 * p2 + 0.5 * (par.energy - evaluate_potential(spec, t)) * q2 - par.c;
}

inline PhasePoint vector_field(const HamiltonianParams& par, const PotentialSpec& spec,
                               double t, const PhasePoint& z) {
    const double k = par.energy - evaluate_potential(spec, t);
    PhasePoint dz = PhasePoint::zero(z.planes());
    for (int i = 0; i < z.planes(); ++i) {
        dz.q[i] = z.p[i];
        dz.p[i] = -k * z.q[i];
    }
    return dz;
}

// Step-count rule: at least 50 RK4 steps per shortest oscillation period.
// The error constant of classical RK4 on a rotation leaves roughly (h w)^5
// per step, so 50 steps per period keeps desk-scale runs under 1e-7; the
// default doubles that so the determinant drift of long flows stays under
// the 1e-10 block budget.
inline int minimum_steps(const HamiltonianParams& par, const PotentialSpec& spec, double tau) {
    const double stiff_max = par.energy - potential_range(spec).vmin;
    const int k = static_cast<int>(std::ceil(50.0 * tau * std::sqrt(std::max(1.0, stiff_max))));
    return std::max(k, 1);
}

inline int default_steps(const HamiltonianParams& par, const PotentialSpec& spec, double tau) {
    return 2 * minimum_steps(par, spec, tau);
}

namespace detail {

// One classical RK4 step of the per-plane linear system
// (q, p)' = (p, -k(u) q), shared by trajectories and 2x2 flows.
// k is a callable of absolute time on the integration interval.

template <class Stiff>
inline Mat2 block_derivative(Stiff&& k, double u, const Mat2& y) {
    // phi' = [[0, 1], [-k, 0]] phi
    const double kk = k(u);
    return {y.c, y.d, -kk * y.a, -kk * y.b};
}

template <class Stiff>
inline std::vector<Mat2> flow_blocks(Stiff&& k, double T, int steps) {
    std::vector<Mat2> out;
    out.reserve(steps + 1);
    Mat2 y = Mat2::identity();
    out.push_back(y);
    const double h = T / steps;
    for (int j = 0; j < steps; ++j) {
        const double u = T * j / steps;
        const Mat2 k1 = block_derivative(k, u, y);
        const Mat2 k2 = block_derivative(k, u + 0.5 * h, y + 0.5 * h * k1);
        const Mat2 k3 = block_derivative(k, u + 0.5 * h, y + 0.5 * h * k2);
        const Mat2 k4 = block_derivative(k, u + h, y + h * k3);
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(y.max_abs()))
            throw numerical_error("linear flow overflowed at step " + std::to_string(j + 1));
        out.push_back(y);
    }
    return out;
}

// Full 2n x 2n version, integrated on its own rather than assembled from the
// blocks, so the stored matrices really are RK4 solutions of the matrix ODE.
template <class Stiff>
inline std::vector<SquareMat> flow_full(Stiff&& k, int planes, double T, int steps) {
    const int dim = 2 * planes;
    auto derivative = [&](double u, const SquareMat& y) {
        // (J D y): row 2b is the p-row of plane b, row 2b+1 the forced q-row.
        const double kk = k(u);
        SquareMat d(dim);
        for (int b = 0; b < planes; ++b)
            for (int j = 0; j < dim; ++j) {
                d(2 * b, j) = y(2 * b + 1, j);
                d(2 * b + 1, j) = -kk * y(2 * b, j);
            }
        return d;
    };
    auto axpy = [&](SquareMat y, double s, const SquareMat& x) {
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) y(i, j) += s * x(i, j);
        return y;
    };
    std::vector<SquareMat> out;
    out.reserve(steps + 1);
    SquareMat y = SquareMat::identity(dim);
    out.push_back(y);
    const double h = T / steps;
    for (int j = 0; j < steps; ++j) {
        const double u = T * j / steps;
        const SquareMat k1 = derivative(u, y);
        const SquareMat k2 = derivative(u + 0.5 * h, axpy(y, 0.5 * h, k1));
        const SquareMat k3 = derivative(u + 0.5 * h, axpy(y, 0.5 * h, k2));
        const SquareMat k4 = derivative(u + h, axpy(y, h, k3));
        y = axpy(axpy(axpy(axpy(y, h / 6.0, k1), h / 3.0, k2), h / 3.0, k3), h / 6.0, k4);
        if (!std::isfinite(y.max_abs()))
            throw numerical_error("full linear flow overflowed at step " + std::to_string(j + 1));
        out.push_back(y);
    }
    return out;
}

}  // namespace detail

// Integrate the equations of motion from z0 over physical time [0, tau] with
// the stiffness profile given as a callable of the time fraction u/tau.
template <class StiffFrac>
inline Trajectory integrate_trajectory_profile(StiffFrac&& stiff, int planes,
                                               const PhasePoint& z0, double tau, int steps,
                                               TrajectoryKind kind) {
    if (static_cast<int>(z0.q.size()) != planes || static_cast<int>(z0.p.size()) != planes)
        throw std::invalid_argument("initial phase point has wrong dimension");
    if (steps < 1) throw std::invalid_argument("integration needs at least one step");
    Trajectory tr;
    tr.tau = tau;
    tr.kind = kind;
    tr.times.reserve(steps + 1);
    tr.samples.reserve(steps + 1);
    auto k_abs = [&](double u) { return stiff(u / tau); };
    std::vector<Mat2> flow = detail::flow_blocks(k_abs, tau, steps);
    for (int j = 0; j <= steps; ++j) {
        tr.times.push_back(tau * j / steps);
        PhasePoint z = PhasePoint::zero(planes);
        const Mat2& f = flow[j];
        for (int i = 0; i < planes; ++i) {
            z.q[i] = f.a * z0.q[i] + f.b * z0.p[i];
            z.p[i] = f.c * z0.q[i] + f.d * z0.p[i];
        }
        tr.samples.push_back(std::move(z));
    }
    return tr;
}

inline Trajectory integrate_trajectory(const HamiltonianParams& par, const PotentialSpec& spec,
                                       const PhasePoint& z0, double tau, int steps,
                                       TrajectoryKind kind = TrajectoryKind::periodic_orbit) {
    if (steps < minimum_steps(par, spec, tau))
        throw std::invalid_argument("step count below the 50-per-period floor");
    auto stiff = [&](double t) { return par.energy - evaluate_potential(spec, t); };
    return integrate_trajectory_profile(stiff, par.planes, z0, tau, steps, kind);
}

template <class StiffFrac>
inline LinearFlowPath linearized_flow_profile(StiffFrac&& stiff, int planes, double tau,
                                              int steps) {
    if (steps < 1) throw std::invalid_argument("integration needs at least one step");
    LinearFlowPath fl;
    fl.tau = tau;
    fl.times.reserve(steps + 1);
    for (int j = 0; j <= steps; ++j) fl.times.push_back(tau * j / steps);
    auto k_abs = [&](double u) { return stiff(u / tau); };
    std::vector<Mat2> block = detail::flow_blocks(k_abs, tau, steps);
    fl.mats = detail::flow_full(k_abs, planes, tau, steps);
    fl.blocks.assign(planes, block);
    return fl;
}

inline LinearFlowPath linearized_flow(const HamiltonianParams& par, const PotentialSpec& spec,
                                      double tau, int steps) {
    if (steps < minimum_steps(par, spec, tau))
        throw std::invalid_argument("step count below the 50-per-period floor");
    auto stiff = [&](double t) { return par.energy - evaluate_potential(spec, t); };
    return linearized_flow_profile(stiff, par.planes, tau, steps);
}

template <class StiffFrac>
inline HessianPath hessian_path_profile(StiffFrac&& stiff, double tau, int steps) {
    HessianPath h;
    h.tau = tau;
    h.times.reserve(steps + 1);
    h.d11.reserve(steps + 1);
    h.d22.assign(steps + 1, 1.0);
    for (int j = 0; j <= steps; ++j) {
        h.times.push_back(tau * j / steps);
        h.d11.push_back(stiff(static_cast<double>(j) / steps));
    }
    return h;
}

inline HessianPath hessian_path(const HamiltonianParams& par, const PotentialSpec& spec,
                                double tau, int steps) {
    auto stiff = [&](double t) { return par.energy - evaluate_potential(spec, t); };
    return hessian_path_profile(stiff, tau, steps);
}

// Monodromy of the Hill form w'' + tau^2 (E - V(s)) w = 0 over s in [0, 1].
inline MonodromyResult monodromy(const HamiltonianParams& par, const PotentialSpec& spec,
                                 double tau, int steps = 0) {
    const double m0 = positivity_margin(spec, par.energy);
    if (!(m0 > 0.0))
        throw positivity_error("positivity margin " + std::to_string(m0) +
                               " is not positive; E must exceed max V");
    if (steps == 0) steps = default_steps(par, spec, tau);
    auto k_hill = [&](double s) {
        return tau * tau * (par.energy - evaluate_potential(spec, s));
    };
    const Mat2 m = detail::flow_blocks(k_hill, 1.0, steps).back();
    return {m, m.trace()};
}

namespace detail {

// Composite quadrature of uniformly sampled values over the unit parameter
// interval.  Periodic data gets the trapezoid rule (spectrally accurate on
// smooth loops); interval data gets Simpson, with a 3/8 tail when the cell
// count is odd.
inline double quadrature_unit(const std::vector<double>& f, bool periodic) {
    const int K = static_cast<int>(f.size()) - 1;
    if (periodic) {
        double s = 0.5 * (f[0] + f[K]);
        for (int j = 1; j < K; ++j) s += f[j];
        return s / K;
    }
    double s = 0.0;
    int j = 0;
    int cells = K;
    if (cells % 2 == 1) {  // 3/8 rule on the last three cells
        const int m = K - 3;
        s += (3.0 / 8.0) * (f[m] + 3.0 * f[m + 1] + 3.0 * f[m + 2] + f[m + 3]);
        cells -= 3;
    }
    for (; j < cells; j += 2) s += (f[j] + 4.0 * f[j + 1] + f[j + 2]) / 3.0;
    return s / K;
}

}  // namespace detail

// Mean of H over the loop/chord parameter, i.e. the constraint value of the
// action functional: integral of H(t, x(t)) dt over [0, 1].
inline double average_energy(const HamiltonianParams& par, const PotentialSpec& spec,
                             const Trajectory& tr) {
    if (tr.samples.size() < 8)
        throw std::invalid_argument("average_energy needs at least 8 samples");
    const int K = tr.steps();
    std::vector<double> f(K + 1);
    for (int j = 0; j <= K; ++j)
        f[j] = hamiltonian_value(par, spec, static_cast<double>(j) / K, tr.samples[j]);
    return detail::quadrature_unit(f, tr.kind == TrajectoryKind::periodic_orbit);
}

// Scale a trajectory so the mean of H vanishes.  The dynamics is linear, so a
// scaled solution is still a solution; the quadratic part has mean
// average_energy + c, and the scale sqrt(c / mean) zeroes the constraint.
inline Trajectory rescale_to_zero_mean(const HamiltonianParams& par, const PotentialSpec& spec,
                                       const Trajectory& tr) {
    const double quad_mean = average_energy(par, spec, tr) + par.c;
    if (!(quad_mean > 0.0))
        throw numerical_error("degenerate trajectory: mean quadratic energy " +
                              std::to_string(quad_mean) + " is not positive");
    const double s = std::sqrt(par.c / quad_mean);
    Trajectory out = tr;
    for (auto& z : out.samples) z = z.scaled(s);
    return out;
}

// ---------------------------------------------------------------------------
// Embedded Dormand-Prince 5(4) pair, the cross-validation oracle.  Fixed-step
// RK4 above is the production path; everything labelled "adaptive" below
// exists so results can be checked against an independent scheme.
// ---------------------------------------------------------------------------

// f(u, y, dy) fills dy with the derivative.  Integrates from u0 to u1 > u0.
template <class RHS>
inline std::vector<double> integrate_adaptive(RHS&& f, std::vector<double> y, double u0,
                                              double u1, double tol = 1e-12) {
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n), y4(n);
    auto stage = [&](double u, const std::vector<double>& yy, std::vector<double>& kk) {
        f(u, yy, kk);
    };
    double u = u0;
    double h = (u1 - u0) / 100.0;
    const double hmin = (u1 - u0) * 1e-14;
    for (long iter = 0; u1 - u > hmin; ++iter) {
        if (iter > 10000000)
            throw numerical_error("adaptive integrator exceeded its step budget");
        if (u + h > u1) h = u1 - u;
        stage(u, y, k1);
        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (0.2 * k1[i]);
        stage(u + 0.2 * h, yt, k2);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (3.0 / 40.0 * k1[i] + 9.0 / 40.0 * k2[i]);
        stage(u + 0.3 * h, yt, k3);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (44.0 / 45.0 * k1[i] - 56.0 / 15.0 * k2[i] + 32.0 / 9.0 * k3[i]);
        stage(u + 0.8 * h, yt, k4);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (19372.0 / 6561.0 * k1[i] - 25360.0 / 2187.0 * k2[i] +
                                64448.0 / 6561.0 * k3[i] - 212.0 / 729.0 * k4[i]);
        stage(u + 8.0 / 9.0 * h, yt, k5);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (9017.0 / 3168.0 * k1[i] - 355.0 / 33.0 * k2[i] +
                                46732.0 / 5247.0 * k3[i] + 49.0 / 176.0 * k4[i] -
                                5103.0 / 18656.0 * k5[i]);
        stage(u + h, yt, k6);
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3[i] +
                                125.0 / 192.0 * k4[i] - 2187.0 / 6784.0 * k5[i] +
                                11.0 / 84.0 * k6[i]);
        stage(u + h, y5, k7);
        for (std::size_t i = 0; i < n; ++i)
            y4[i] = y[i] + h * (5179.0 / 57600.0 * k1[i] + 7571.0 / 16695.0 * k3[i] +
                                393.0 / 640.0 * k4[i] - 92097.0 / 339200.0 * k5[i] +
                                187.0 / 2100.0 * k6[i] + 1.0 / 40.0 * k7[i]);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double scale = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double e = (y5[i] - y4[i]) / scale;
            err += e * e;
        }
        err = std::sqrt(err / static_cast<double>(n));
        if (err <= 1.0) {
            u += h;
            y = y5;
            double amp = 0.0;
            for (double v : y) amp = std::max(amp, std::abs(v));
            if (!std::isfinite(amp)) throw numerical_error("adaptive integrator overflowed");
        } else if (h < hmin) {
            throw numerical_error("adaptive integrator step size collapsed");
        }
        const double grow = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
        h *= std::min(5.0, std::max(0.2, grow));
    }
    return y;
}

template <class StiffAbs>
inline Mat2 flow_block_adaptive(StiffAbs&& k, double T, double tol = 1e-12) {
    auto rhs = [&](double u, const std::vector<double>& y, std::vector<double>& dy) {
        const double kk = k(u);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = -kk * y[0];
        dy[3] = -kk * y[1];
    };
    std::vector<double> y = {1.0, 0.0, 0.0, 1.0};
    y = integrate_adaptive(rhs, std::move(y), 0.0, T, tol);
    return {y[0], y[1], y[2], y[3]};
}

inline MonodromyResult monodromy_adaptive(const HamiltonianParams& par,
                                          const PotentialSpec& spec, double tau,
                                          double tol = 1e-12) {
    const double m0 = positivity_margin(spec, par.energy);
    if (!(m0 > 0.0))
        throw positivity_error("positivity margin " + std::to_string(m0) +
                               " is not positive; E must exceed max V");
    auto k_hill = [&](double s) {
        return tau * tau * (par.energy - evaluate_potential(spec, s));
    };
    const Mat2 m = flow_block_adaptive(k_hill, 1.0, tol);
    return {m, m.trace()};
}

inline PhasePoint integrate_point_adaptive(const HamiltonianParams& par,
                                           const PotentialSpec& spec, const PhasePoint& z0,
                                           double tau, double tol = 1e-12) {
    const int n = z0.planes();
    auto rhs = [&](double u, const std::vector<double>& y, std::vector<double>& dy) {
        const double kk = par.energy - evaluate_potential(spec, u / tau);
        for (int i = 0; i < n; ++i) {
            dy[i] = y[n + i];
            dy[n + i] = -kk * y[i];
        }
    };
    std::vector<double> y(2 * n);
    for (int i = 0; i < n; ++i) {
        y[i] = z0.q[i];
        y[n + i] = z0.p[i];
    }
    y = integrate_adaptive(rhs, std::move(y), 0.0, tau, tol);
    PhasePoint z = PhasePoint::zero(n);
    for (int i = 0; i < n; ++i) {
        z.q[i] = y[i];
        z.p[i] = y[n + i];
    }
    return z;
}

// CSV export: header row u, q_1..q_n, p_1..p_n; full double precision.
inline std::string trajectory_to_csv(const Trajectory& tr) {
    std::ostringstream os;
    os << std::setprecision(17);
    const int n = tr.samples.empty() ? 0 : tr.samples[0].planes();
    os << "u";
    for (int i = 1; i <= n; ++i) os << ",q_" << i;
    for (int i = 1; i <= n; ++i) os << ",p_" << i;
    os << "\n";
    for (std::size_t j = 0; j < tr.samples.size(); ++j) {
        os << tr.times[j];
        for (int i = 0; i < n; ++i) os << "," << tr.samples[j].q[i];
        for (int i = 0; i < n; ++i) os << "," << tr.samples[j].p[i];
        os << "\n";
    }
    return os.str();
}

}  // namespace feig

#endif  // FEIG_DYNAMICS_HPP
