// Independent verification of assembled eigenstate profiles.
//
// Everything here works from the stored samples alone (plain finite
// differences and quadrature), never from solver-internal derivatives, so a
// bug in the integration or assembly shows up as a residual.

#ifndef FEIG_VERIFY_HPP
#define FEIG_VERIFY_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "feig/core.hpp"
#include "feig/potential.hpp"

namespace feig {

enum class BoundaryCondition { periodic, dirichlet };

// Wave-function profile.  Ring profiles hold K samples on the half-open
// angle grid phi_k = 2 pi k / K and R is the ring radius, so arclength is
// u = R phi and the circumference is 2 pi R.  Box profiles hold K + 1
// samples on s_k = k / K over [0, 1] (arclength fraction) and R is the box
// length.
struct EigenstateProfile {
    double R = 1.0;
    double energy = 0.0;
    BoundaryCondition bc = BoundaryCondition::periodic;
    std::vector<std::complex<double>> psi;

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : psi) m = std::max(m, std::abs(v));
        return m;
    }
};

struct ResidualReport {
    double max_rel = 0.0;
    double rms_rel = 0.0;
};

// Central-difference residual of the time-independent equation.  On the ring
// the profile solves -(1/R^2) psi'' (angle derivative) + V psi = E psi with
// V evaluated at the loop fraction; in the box the equation is the same in
// the s variable with the length as the scale.  Residuals are reported
// relative to (E + max |V|) max |psi|.
inline ResidualReport schrodinger_residual(const EigenstateProfile& prof,
                                           const PotentialSpec& spec) {
    const bool ring = (prof.bc == BoundaryCondition::periodic);
    const int K = ring ? static_cast<int>(prof.psi.size())
                       : static_cast<int>(prof.psi.size()) - 1;
    if (K < 64) throw std::invalid_argument("residual check needs a grid of at least 64");
    if (!(prof.max_abs() > 0.0)) throw std::invalid_argument("residual check on a zero profile");

    const double h = ring ? kTwoPi / K : 1.0 / K;
    const double scale2 = prof.R * prof.R;
    const PotentialRange pr = potential_range(spec);
    const double vmax_abs = std::max(std::abs(pr.vmin), std::abs(pr.vmax));
    const double denom = (prof.energy + vmax_abs) * prof.max_abs();

    double worst = 0.0, sum2 = 0.0;
    int count = 0;
    const int lo = ring ? 0 : 1;
    const int hi = ring ? K - 1 : K - 1;
    for (int k = lo; k <= hi; ++k) {
        const std::complex<double> prev = ring ? prof.psi[(k + K - 1) % K] : prof.psi[k - 1];
        const std::complex<double> next = ring ? prof.psi[(k + 1) % K] : prof.psi[k + 1];
        const std::complex<double> lap = (next - 2.0 * prof.psi[k] + prev) / (h * h);
        const double t = static_cast<double>(k) / K;
        const double v = evaluate_potential(spec, t);
        const std::complex<double> r =
            -lap / scale2 + (v - prof.energy) * prof.psi[k];
        const double a = std::abs(r) / denom;
        worst = std::max(worst, a);
        sum2 += a * a;
        ++count;
    }
    return {worst, std::sqrt(sum2 / count)};
}

struct BoundaryReport {
    bool pass = false;
    double magnitude = 0.0;  // worst offending value relative to max |psi|
};

inline BoundaryReport boundary_check(const EigenstateProfile& prof) {
    const double amp = prof.max_abs();
    if (!(amp > 0.0)) return {false, 0.0};
    if (prof.bc == BoundaryCondition::dirichlet) {
        const double worst =
            std::max(std::abs(prof.psi.front()), std::abs(prof.psi.back())) / amp;
        return {worst <= 1e-7, worst};
    }
    // Ring samples live on the half-open grid; periodicity is a statement
    // about the wrapped stencil, which the residual exercises.  Here we make
    // sure the samples came from a closed orbit: the wraparound jump between
    // the last sample and the first must look like one more grid step.  The
    // median neighbor distance serves as the interpolation scale so that a
    // single corrupted sample cannot hide its own jump.
    const int K = static_cast<int>(prof.psi.size());
    const double jump = std::abs(prof.psi.front() - prof.psi.back());
    std::vector<double> steps;
    steps.reserve(K - 1);
    for (int k = 0; k + 1 < K; ++k) steps.push_back(std::abs(prof.psi[k + 1] - prof.psi[k]));
    std::nth_element(steps.begin(), steps.begin() + steps.size() / 2, steps.end());
    const double step = steps[steps.size() / 2];
    const double rel = jump / amp;
    return {jump <= 1.5 * step + 1e-7 * amp, rel};
}

// L2 norm in the geometric measure: arclength R dphi on the ring (periodic
// rectangle rule on the half-open grid), ds on the unit interval for the box
// (trapezoid).
inline double l2_norm(const EigenstateProfile& prof) {
    if (prof.bc == BoundaryCondition::periodic) {
        const int K = static_cast<int>(prof.psi.size());
        double s = 0.0;
        for (const auto& v : prof.psi) s += std::norm(v);
        return std::sqrt(s * prof.R * kTwoPi / K);
    }
    const int K = static_cast<int>(prof.psi.size()) - 1;
    double s = 0.5 * (std::norm(prof.psi.front()) + std::norm(prof.psi.back()));
    for (int k = 1; k < K; ++k) s += std::norm(prof.psi[k]);
    return std::sqrt(s / K);
}

inline EigenstateProfile normalize(const EigenstateProfile& prof) {
    const double n = l2_norm(prof);
    if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero profile");
    EigenstateProfile out = prof;
    for (auto& v : out.psi) v /= n;
    return out;
}

// Free reference spectra in units hbar^2 / 2m = 1.  The box of length L has
// E_n = (n pi / L)^2; the ring of circumference L (radius R = L / 2 pi) has
// E_n = (n / R)^2.
inline double reference_spectrum_free(BoundaryCondition bc, double length, int n) {
    if (bc == BoundaryCondition::dirichlet) {
        if (n < 1) throw std::invalid_argument("box levels start at n = 1");
        return (n * kPi / length) * (n * kPi / length);
    }
    if (n < 0) throw std::invalid_argument("ring levels start at n = 0");
    const double radius = length / kTwoPi;
    return (n / radius) * (n / radius);
}

struct VerificationReport {
    double max_residual_rel = 0.0;
    double rms_residual_rel = 0.0;
    bool bc_pass = false;
    double norm = 0.0;
};

inline VerificationReport verify_profile(const EigenstateProfile& prof,
                                         const PotentialSpec& spec) {
    const ResidualReport r = schrodinger_residual(prof, spec);
    const BoundaryReport b = boundary_check(prof);
    return {r.max_rel, r.rms_rel, b.pass, l2_norm(prof)};
}

}  // namespace feig

#endif  // FEIG_VERIFY_HPP
