#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "feig/core.hpp"
#include "feig/dynamics.hpp"
#include "feig/potential.hpp"

using namespace feig;

namespace {

HamiltonianParams params(double energy) {
    HamiltonianParams par;
    par.energy = energy;
    return par;
}

}  // namespace

TEST_CASE("free hill monodromy matches the closed form") {
    // constant stiffness w'' + tau^2 w0^2 w = 0 over s in [0,1] integrates to
    //   M = [[cos(w0 tau), sin(w0 tau)/(w0 tau)], [-w0 tau sin(w0 tau), cos]]
    const PotentialSpec v = constant_potential(0.3, Domain::ring);
    const HamiltonianParams par = params(1.0);
    const double w0 = std::sqrt(0.7);
    for (double tau : {1.3, 2.0, 6.283185307179586, 9.1}) {
        const MonodromyResult m = monodromy(par, v, tau);
        const double ph = w0 * tau;
        // the default 100-steps-per-period rate accumulates a few 1e-10 of
        // phase by ph ~ 8 radians; 2e-9 leaves margin without going blunt
        CHECK(std::abs(m.m.a - std::cos(ph)) < 2e-9);
        CHECK(std::abs(m.m.b - std::sin(ph) / ph) < 2e-9);
        CHECK(std::abs(m.m.c + ph * std::sin(ph)) < 2e-9 * std::max(1.0, ph));
        CHECK(std::abs(m.m.d - std::cos(ph)) < 2e-9);
        CHECK(std::abs(m.m.det() - 1.0) < 1e-10);  // the documented drift budget
    }
}

TEST_CASE("fixed-step and adaptive monodromy agree on the mathieu profile") {
    // two independent integrators (classical RK4 vs embedded 5(4) pair), one
    // answer; this is the cross-check the whole scan machinery leans on
    const PotentialSpec v = fourier_potential(0.3, {0.1}, {}, Domain::ring);
    const HamiltonianParams par = params(1.0);
    for (double tau : {1.7, 5.0, 7.5, 12.25, 15.9}) {
        const MonodromyResult fixed = monodromy(par, v, tau);
        const MonodromyResult adap = monodromy_adaptive(par, v, tau);
        CHECK(std::abs(fixed.trace - adap.trace) < 1e-9);
        CHECK((fixed.m - adap.m).max_abs() < 1e-8);
    }
}

TEST_CASE("monodromy refuses a non-positive margin") {
    const PotentialSpec v = constant_potential(0.5, Domain::ring);
    CHECK_THROWS_AS(monodromy(params(0.4), v, 1.0), positivity_error);
    CHECK_THROWS_AS(monodromy_adaptive(params(0.5), v, 1.0), positivity_error);
}

TEST_CASE("step-count rules") {
    const PotentialSpec v = constant_potential(0.0, Domain::ring);
    const HamiltonianParams par = params(1.0);
    CHECK(minimum_steps(par, v, 2.0) == 100);  // ceil(50 tau), stiffness 1
    CHECK(default_steps(par, v, 2.0) == 200);
    // stiffness below 1 is clamped so short periods are never undersampled
    CHECK(minimum_steps(params(0.25), v, 2.0) == 100);
    // stiffness 4 doubles the rate
    CHECK(minimum_steps(params(4.0), v, 2.0) == 200);

    PhasePoint z0 = PhasePoint::zero(2);
    z0.q[0] = 1.0;
    CHECK_THROWS_AS(integrate_trajectory(par, v, z0, 2.0, 50), std::invalid_argument);
}

TEST_CASE("free circular orbit closes and conserves the hamiltonian") {
    const PotentialSpec v = constant_potential(0.0, Domain::ring);
    const HamiltonianParams par = params(1.0);
    PhasePoint z0 = PhasePoint::zero(2);
    z0.q[0] = 1.0;
    z0.p[1] = 1.0;
    const double tau = kTwoPi;
    const Trajectory tr = integrate_trajectory(par, v, z0, tau, 1024);

    CHECK(tr.steps() == 1024);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == doctest::Approx(tau));

    // q1 = cos u, q2 = sin u, p1 = -sin u, p2 = cos u
    for (int j : {0, 100, 512, 1024}) {
        const double u = tr.times[j];
        CHECK(tr.samples[j].q[0] == doctest::Approx(std::cos(u)).epsilon(1e-9));
        CHECK(tr.samples[j].q[1] == doctest::Approx(std::sin(u)).epsilon(1e-9));
        CHECK(tr.samples[j].p[0] == doctest::Approx(-std::sin(u)).epsilon(1e-9));
        CHECK(tr.samples[j].p[1] == doctest::Approx(std::cos(u)).epsilon(1e-9));
    }
    double gap = 0.0;
    for (int i = 0; i < 2; ++i) {
        gap = std::max(gap, std::abs(tr.samples.back().q[i] - tr.samples.front().q[i]));
        gap = std::max(gap, std::abs(tr.samples.back().p[i] - tr.samples.front().p[i]));
    }
    CHECK(gap < 1e-10);

    // autonomous potential: H is a constant of motion
    double h_min = 1e300, h_max = -1e300;
    for (std::size_t j = 0; j < tr.samples.size(); ++j) {
        const double h = hamiltonian_value(par, v, tr.times[j] / tau, tr.samples[j]);
        h_min = std::min(h_min, h);
        h_max = std::max(h_max, h);
    }
    CHECK(h_max - h_min < 1e-10);
    CHECK(h_max == doctest::Approx(0.5).epsilon(1e-9));  // |z|^2 = 2, c = 1/2
}

TEST_CASE("rescale_to_zero_mean zeroes the average energy") {
    const PotentialSpec v = fourier_potential(0.3, {0.1}, {}, Domain::ring);
    const HamiltonianParams par = params(1.0);
    PhasePoint z0 = PhasePoint::zero(2);
    z0.q[0] = 1.7;
    z0.p[1] = -0.4;
    const Trajectory tr = integrate_trajectory(par, v, z0, 3.0, default_steps(par, v, 3.0));
    const Trajectory zr = rescale_to_zero_mean(par, v, tr);
    CHECK(std::abs(average_energy(par, v, zr)) < 1e-12);
    // scaling preserves the solution property: endpoints keep their ratio
    CHECK(zr.samples[5].q[0] / tr.samples[5].q[0] ==
          doctest::Approx(zr.samples[9].p[1] / tr.samples[9].p[1]).epsilon(1e-12));
}

TEST_CASE("rescale rejects a trajectory with non-positive quadratic mean") {
    const PotentialSpec v = constant_potential(0.0, Domain::ring);
    const HamiltonianParams par = params(1.0);
    Trajectory tr;
    tr.tau = 1.0;
    tr.kind = TrajectoryKind::periodic_orbit;
    for (int j = 0; j <= 64; ++j) {
        tr.times.push_back(j / 64.0);
        tr.samples.push_back(PhasePoint::zero(2));  // H = -c < 0 on the zero loop
    }
    CHECK_THROWS_AS(rescale_to_zero_mean(par, v, tr), numerical_error);
}

TEST_CASE("unit quadrature is exact where it should be") {
    // periodic trapezoid integrates low harmonics exactly
    {
        const int K = 64;
        std::vector<double> f(K + 1);
        for (int j = 0; j <= K; ++j) {
            const double x = static_cast<double>(j) / K;
            f[j] = std::sin(kTwoPi * x) * std::sin(kTwoPi * x);
        }
        CHECK(detail::quadrature_unit(f, true) == doctest::Approx(0.5).epsilon(1e-14));
    }
    // simpson (even cell count) is exact on cubics
    {
        const int K = 64;
        std::vector<double> f(K + 1);
        for (int j = 0; j <= K; ++j) {
            const double x = static_cast<double>(j) / K;
            f[j] = x * x * x;
        }
        CHECK(detail::quadrature_unit(f, false) == doctest::Approx(0.25).epsilon(1e-14));
    }
    // odd cell count routes the tail through the 3/8 rule, still exact on cubics
    {
        const int K = 65;
        std::vector<double> f(K + 1);
        for (int j = 0; j <= K; ++j) {
            const double x = static_cast<double>(j) / K;
            f[j] = x * x * x - 0.5 * x;
        }
        CHECK(detail::quadrature_unit(f, false) == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("linearized flow is symplectic to machine accuracy") {
    const PotentialSpec v = fourier_potential(0.3, {0.1}, {}, Domain::ring);
    const HamiltonianParams par = params(1.0);
    const double tau = 7.5;
    const LinearFlowPath fl = linearized_flow(par, v, tau, default_steps(par, v, tau));
    CHECK(fl.mats.back().dim() == 4);
    CHECK(symplectic_defect(fl.mats.back()) < 1e-10);
    // per-block determinants too
    for (const auto& plane : fl.blocks)
        CHECK(plane.back().det() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("point integration agrees with the adaptive reference") {
    const PotentialSpec v = fourier_potential(0.3, {0.1}, {}, Domain::ring);
    const HamiltonianParams par = params(1.0);
    PhasePoint z0 = PhasePoint::zero(2);
    z0.q[0] = 0.3;
    z0.q[1] = -1.1;
    z0.p[0] = 0.9;
    z0.p[1] = 0.2;
    const double tau = 3.0;
    const Trajectory tr = integrate_trajectory(par, v, z0, tau, default_steps(par, v, tau));
    const PhasePoint ref = integrate_point_adaptive(par, v, z0, tau);
    for (int i = 0; i < 2; ++i) {
        CHECK(tr.samples.back().q[i] == doctest::Approx(ref.q[i]).epsilon(1e-9));
        CHECK(tr.samples.back().p[i] == doctest::Approx(ref.p[i]).epsilon(1e-9));
    }
}

TEST_CASE("csv export carries the full state") {
    const PotentialSpec v = constant_potential(0.0, Domain::ring);
    const HamiltonianParams par = params(1.0);
    PhasePoint z0 = PhasePoint::zero(2);
    z0.q[0] = 1.0;
    const Trajectory tr = integrate_trajectory(par, v, z0, 2.0, 100);
    const std::string csv = trajectory_to_csv(tr);
    CHECK(csv.substr(0, csv.find('\n')) == "u,q_1,q_2,p_1,p_2");
    // one header plus steps+1 sample rows
    std::size_t rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 102);
}

TEST_CASE("hessian path is diag(E - V, 1) along the loop") {
    const PotentialSpec v = fourier_potential(0.3, {0.1}, {}, Domain::ring);
    const HamiltonianParams par = params(1.0);
    const HessianPath h = hessian_path(par, v, 2.0, 100);
    CHECK(h.d11.size() == 101);
    CHECK(h.d22[40] == 1.0);
    CHECK(h.d11[0] == doctest::Approx(0.6));            // E - V(0) = 1 - 0.4
    CHECK(h.d11[50] == doctest::Approx(0.8));           // E - V(1/2)
    CHECK(h.d11[100] == doctest::Approx(h.d11[0]));     // wraps
}
