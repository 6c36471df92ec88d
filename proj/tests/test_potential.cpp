#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "feig/potential.hpp"

using namespace feig;

TEST_CASE("constant potential is constant everywhere") {
    const PotentialSpec p = constant_potential(0.77, Domain::ring);
    CHECK(evaluate_potential(p, 0.0) == 0.77);
    CHECK(evaluate_potential(p, 0.33) == 0.77);
    CHECK(evaluate_potential(p, -4.2) == 0.77);  // ring wraps
    CHECK(potential_derivative(p, 0.5) == 0.0);
    const PotentialRange r = potential_range(p);
    CHECK(r.vmin == 0.77);
    CHECK(r.vmax == 0.77);
    CHECK(positivity_margin(p, 1.0) == doctest::Approx(0.23));
}

TEST_CASE("fourier potential evaluates the series") {
    // V(t) = 0.3 + 0.1 cos(2 pi t), the Mathieu-type profile used throughout
    const PotentialSpec p = fourier_potential(0.3, {0.1}, {}, Domain::ring);
    CHECK(evaluate_potential(p, 0.0) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(evaluate_potential(p, 0.25) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(evaluate_potential(p, 0.5) == doctest::Approx(0.2).epsilon(1e-15));
    // wraparound: V(t + 1) = V(t) and negative arguments are fine on the ring
    CHECK(evaluate_potential(p, 1.25) == doctest::Approx(evaluate_potential(p, 0.25)));
    CHECK(evaluate_potential(p, -0.25) == doctest::Approx(evaluate_potential(p, 0.75)));
}

TEST_CASE("fourier derivative matches a central difference") {
    const PotentialSpec p =
        fourier_potential(0.25, {0.05, -0.02}, {0.03, 0.05}, Domain::ring);
    const double h = 1e-6;
    for (double t : {0.0, 0.1, 0.37, 0.5, 0.93}) {
        const double fd =
            (evaluate_potential(p, t + h) - evaluate_potential(p, t - h)) / (2.0 * h);
        CHECK(potential_derivative(p, t) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("box potential rejects arguments outside the interval") {
    const PotentialSpec p = constant_potential(0.1, Domain::box);
    CHECK_THROWS_AS(evaluate_potential(p, 1.5), std::domain_error);
    CHECK_THROWS_AS(evaluate_potential(p, -0.2), std::domain_error);
    // the interval endpoints themselves are fine
    CHECK(evaluate_potential(p, 0.0) == 0.1);
    CHECK(evaluate_potential(p, 1.0) == 0.1);
}

TEST_CASE("periodic spline through fourier samples reproduces the series") {
    const PotentialSpec ref = fourier_potential(0.3, {0.1}, {}, Domain::ring);
    std::vector<double> samples(64);
    for (int i = 0; i < 64; ++i) samples[i] = evaluate_potential(ref, i / 64.0);
    const PotentialSpec spl = sampled_potential(samples, Domain::ring);

    // cubic spline error is O(h^4 max|V''''|), far below 1e-6 at h = 1/64
    double worst = 0.0;
    for (int j = 0; j <= 1000; ++j) {
        const double t = j / 1000.0;
        worst = std::max(worst,
                         std::abs(evaluate_potential(spl, t) - evaluate_potential(ref, t)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("natural spline on the box reproduces a straight line exactly") {
    std::vector<double> samples;
    for (int i = 0; i < 9; ++i) samples.push_back(0.1 + 0.05 * i / 8.0);
    const PotentialSpec p = sampled_potential(samples, Domain::box);
    for (double t : {0.0, 0.01, 0.33, 0.71, 1.0})
        CHECK(evaluate_potential(p, t) == doctest::Approx(0.1 + 0.05 * t).epsilon(1e-14));
}

TEST_CASE("potential range locates the extrema of the mathieu profile") {
    const PotentialSpec p = fourier_potential(0.3, {0.1}, {}, Domain::ring);
    const PotentialRange r = potential_range(p);
    CHECK(r.vmax == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(r.vmin == doctest::Approx(0.2).epsilon(1e-10));
    // min of cos(2 pi t) sits at t = 1/2; the max is at the wrap point, so
    // only pin down the location of the interior extremum
    CHECK(std::abs(r.tmin - 0.5) < 1e-6);
    CHECK(evaluate_potential(p, r.tmax) == doctest::Approx(r.vmax).epsilon(1e-12));
    CHECK(positivity_margin(p, 1.0) == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(positivity_margin(p, 0.35) < 0.0);
}

TEST_CASE("potential json round trip") {
    const PotentialSpec p = fourier_potential(0.3, {0.1, 0.0}, {-0.04}, Domain::box);
    const PotentialSpec q = parse_potential(emit_potential(p));
    CHECK(q.domain == Domain::box);
    CHECK(q.kind == PotentialKind::fourier);
    for (double t : {0.0, 0.2, 0.8, 1.0})
        CHECK(evaluate_potential(q, t) == doctest::Approx(evaluate_potential(p, t)));

    const PotentialSpec s = sampled_potential({0.1, 0.2, 0.15, 0.12, 0.1}, Domain::ring);
    const PotentialSpec s2 = parse_potential(emit_potential(s));
    for (double t : {0.05, 0.44, 0.9})
        CHECK(evaluate_potential(s2, t) == doctest::Approx(evaluate_potential(s, t)));
}

TEST_CASE("potential parser names the offending key") {
    CHECK_THROWS_WITH_AS(parse_potential("{\"domain\": \"ring\"}"),
                         doctest::Contains("kind"), parse_error);
    CHECK_THROWS_WITH_AS(parse_potential("{\"kind\": \"constant\", \"value\": 1}"),
                         doctest::Contains("domain"), parse_error);
    CHECK_THROWS_WITH_AS(
        parse_potential("{\"kind\": \"sawtooth\", \"domain\": \"ring\"}"),
        doctest::Contains("sawtooth"), parse_error);
    CHECK_THROWS_WITH_AS(
        parse_potential("{\"kind\": \"constant\", \"value\": 1, \"domain\": \"disk\"}"),
        doctest::Contains("disk"), parse_error);
    CHECK_THROWS_AS(
        parse_potential("{\"kind\": \"samples\", \"values\": [1, 2], \"domain\": \"box\"}"),
        parse_error);
    CHECK_THROWS_AS(
        parse_potential("{\"kind\": \"fourier\", \"a0\": 0.1, \"cos\": [\"x\"], "
                        "\"domain\": \"ring\"}"),
        parse_error);
    CHECK_THROWS_AS(parse_potential("not json at all"), parse_error);
    CHECK_THROWS_AS(parse_potential("[1, 2, 3]"), parse_error);
}
