// Conley-Zehnder index of a linearized-flow path via the polar retract.
//
// Every flow here decouples into 2x2 symplectic blocks phi = [[a, b], [c, d]],
// and the retract sends a block to the unit complex number
//
//     rho(phi) = (a + d + i(b - c)) / sqrt((a+d)^2 + (b-c)^2),
//
// which for phi = U(theta) P (polar decomposition, P symmetric positive with
// det 1) is exactly e^{i theta}: the trace of phi is cos(theta) tr(P) and
// b - c = sin(theta) tr(P), with tr(P) >= 2.  Tracking theta continuously
// along the path and correcting the endpoint into a fixed normal form turns
// the index into a winding count.
//
// Endpoint corrections, per block, by the trace T of the final matrix:
//   T < 2 (elliptic or negative hyperbolic):  the block joins -I by moving
//     theta to the odd multiple of pi inside its current 2 pi window; the
//     window cannot be left without hitting det(S - I) = 0, so the block
//     contributes 2 floor(theta/2pi) + 1.  Safe because T < 2 keeps theta
//     off the even lattice.
//   T > 2 (positive hyperbolic): the block joins diag(2, 1/2) with the angle
//     pinned near its lattice point (cos(theta) tr(P) > 2 forces theta within
//     pi/2 of an even multiple of pi), contributing 2 round(theta/2pi).
// Degenerate endpoints (det(phi(tau) - I) ~ 0) get a flag and the winding of
// the uncorrected loop rounded down, with a snap to the nearest integer first
// so that an exactly-periodic endpoint does not flip the floor.

#ifndef FEIG_CZ_HPP
#define FEIG_CZ_HPP

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "feig/core.hpp"
#include "feig/dynamics.hpp"

namespace feig {

// Continuous per-block polar angles along a flow, theta_b(0) = 0.
struct AnglePath {
    std::vector<double> times;
    std::vector<std::vector<double>> theta;  // theta[block][time index]
    std::vector<double> total;               // Theta = 2 sum_b theta_b

    std::vector<double> final_angles() const {
        std::vector<double> out;
        out.reserve(theta.size());
        for (const auto& t : theta) out.push_back(t.back());
        return out;
    }
};

struct CzReport {
    long index = 0;
    bool degenerate = false;
    std::vector<double> final_angles;
    double endpoint_gap = 0.0;  // |det(phi(tau) - I)| = prod_b |2 - T_b|
};

struct MonotonicityCertificate {
    double min_rate = 0.0;
    bool certified = false;
};

// Square root of a symmetric positive 2x2 matrix with unit determinant.
// Cayley-Hamilton gives (P + I)^2 = (tr P + 2) P when det P = 1, so the
// root is (P + I) / sqrt(tr P + 2).
inline Mat2 symmetric_sqrt_2x2(const Mat2& P) {
    if (std::abs(P.b - P.c) > 1e-8 * std::max(1.0, P.max_abs()))
        throw std::domain_error("matrix square root needs a symmetric input");
    if (std::abs(P.det() - 1.0) > 1e-8)
        throw std::domain_error("matrix square root needs unit determinant, got det = " +
                                std::to_string(P.det()));
    // with det = 1, positive definiteness is exactly tr > 0
    if (!(P.trace() > 0.0))
        throw std::domain_error("matrix square root of a non-positive matrix");
    const double s = 1.0 / std::sqrt(P.trace() + 2.0);
    return {(P.a + 1.0) * s, P.b * s, P.c * s, (P.d + 1.0) * s};
}

inline std::complex<double> polar_retract_2x2(const Mat2& m) {
    const double re = m.a + m.d;
    const double im = m.b - m.c;
    const double h = std::hypot(re, im);
    if (!(h > 1e-12))
        throw degenerate_retract_error(
            "polar retract denominator vanished; input is not a unit-determinant "
            "symplectic block");
    return {re / h, im / h};
}

// Principal polar angle in (-pi, pi].
inline double block_angle(const Mat2& m) {
    const std::complex<double> r = polar_retract_2x2(m);
    return std::atan2(r.imag(), r.real());
}

// Unwrap the per-block polar angle along the stored flow.  Rejects any step
// whose principal-value jump reaches pi/2: the angle speed is bounded by
// max(D11, D22), so a conforming step size can always be found and a larger
// jump means the flow is undersampled.
inline AnglePath track_angles(const LinearFlowPath& flow) {
    AnglePath ap;
    ap.times = flow.times;
    const int planes = flow.planes();
    const int K = flow.steps();
    ap.theta.assign(planes, {});
    for (int b = 0; b < planes; ++b) {
        std::vector<double>& th = ap.theta[b];
        th.reserve(K + 1);
        th.push_back(0.0);
        double prev_raw = block_angle(flow.blocks[b][0]);  // 0 at the identity
        double acc = 0.0;
        for (int j = 1; j <= K; ++j) {
            const double raw = block_angle(flow.blocks[b][j]);
            double d = raw - prev_raw;
            if (d > kPi) d -= kTwoPi;
            if (d <= -kPi) d += kTwoPi;
            if (!(std::abs(d) < 0.5 * kPi))
                throw resolution_error(
                    "angle step " + std::to_string(d) + " at sample " + std::to_string(j) +
                        " reaches pi/2; rebuild the flow with more steps",
                    d);
            acc += d;
            th.push_back(acc);
            prev_raw = raw;
        }
    }
    ap.total.assign(K + 1, 0.0);
    for (int j = 0; j <= K; ++j) {
        double s = 0.0;
        for (int b = 0; b < planes; ++b) s += ap.theta[b][j];
        ap.total[j] = 2.0 * s;
    }
    return ap;
}

// Angle tracking with automatic re-integration on halved steps when the
// flow is too coarse.  The stiffness is a callable of the time fraction.
struct TrackedFlow {
    LinearFlowPath flow;
    AnglePath angles;
};

template <class StiffFrac>
inline TrackedFlow track_angles_refined(StiffFrac&& stiff, int planes, double tau, int steps,
                                        int max_refinements = 6) {
    for (int r = 0;; ++r) {
        LinearFlowPath flow = linearized_flow_profile(stiff, planes, tau, steps);
        try {
            AnglePath ap = track_angles(flow);
            return {std::move(flow), std::move(ap)};
        } catch (const resolution_error&) {
            if (r >= max_refinements) throw;
            steps *= 2;
        }
    }
}

// theta-dot along the flow from the linearized-flow equation.  Substituting
// a' = D22 c, b' = D22 d, c' = -D11 a, d' = -D11 b into the derivative of
// atan2(b - c, a + d) gives
//
//   theta' = [(b'-c')(a+d) - (b-c)(a'+d')] / [(a+d)^2 + (b-c)^2],
//
// whose numerator collapses to D11 (a^2+b^2+1) + D22 (c^2+d^2+1) when the
// block has determinant 1; positive diagonal D therefore forces theta' > 0.
inline std::vector<std::vector<double>> angle_rate(const LinearFlowPath& flow,
                                                   const HessianPath& hess) {
    const int planes = flow.planes();
    const int K = flow.steps();
    std::vector<std::vector<double>> rate(planes);
    for (int b = 0; b < planes; ++b) {
        rate[b].reserve(K + 1);
        for (int j = 0; j <= K; ++j) {
            const Mat2& m = flow.blocks[b][j];
            const double d11 = hess.d11[j], d22 = hess.d22[j];
            const double da = d22 * m.c, db = d22 * m.d;
            const double dc = -d11 * m.a, dd = -d11 * m.b;
            const double num = (db - dc) * (m.a + m.d) - (m.b - m.c) * (da + dd);
            const double den = (m.a + m.d) * (m.a + m.d) + (m.b - m.c) * (m.b - m.c);
            rate[b].push_back(num / den);
        }
    }
    return rate;
}

inline MonotonicityCertificate monotonicity_certificate(const LinearFlowPath& flow,
                                                        const HessianPath& hess) {
    const auto rate = angle_rate(flow, hess);
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& r : rate)
        for (double v : r) mn = std::min(mn, v);
    return {mn, mn > 0.0};
}

namespace detail {

inline long floor_long(double x) { return static_cast<long>(std::floor(x)); }

// Winding of the uncorrected loop, snapped to the nearest integer when the
// endpoint sits on it to machine-level accuracy, then rounded down.
inline long degenerate_index(const std::vector<double>& final_angles) {
    double w = 0.0;
    for (double th : final_angles) w += th / kPi;
    const double nearest = std::round(w);
    if (std::abs(w - nearest) < 1e-6) return static_cast<long>(nearest);
    return floor_long(w);
}

}  // namespace detail

inline CzReport cz_index(const LinearFlowPath& flow) {
    const AnglePath ap = track_angles(flow);
    CzReport rep;
    rep.final_angles = ap.final_angles();
    double gap = 1.0;
    for (int b = 0; b < flow.planes(); ++b)
        gap *= 2.0 - flow.blocks[b].back().trace();  // det(M - I) = 2 - tr M per block
    rep.endpoint_gap = std::abs(gap);
    rep.degenerate = rep.endpoint_gap <= 1e-9;
    if (rep.degenerate) {
        rep.index = detail::degenerate_index(rep.final_angles);
        return rep;
    }
    long total = 0;
    for (int b = 0; b < flow.planes(); ++b) {
        const double T = flow.blocks[b].back().trace();
        const double th = rep.final_angles[b];
        if (T < 2.0) {
            total += 2 * detail::floor_long(th / kTwoPi) + 1;
        } else {
            total += 2 * static_cast<long>(std::llround(th / kTwoPi));
        }
    }
    rep.index = total;
    return rep;
}

}  // namespace feig

#endif  // FEIG_CZ_HPP
