// Time-dependent potential profiles V(t) on the unit parameter interval.
//
// Three stored forms: a constant, a finite Fourier series, or raw samples
// interpolated by a cubic spline (periodic spline on the ring, natural spline
// on the box).  Physical period/length never enters here; solvers rescale.

#ifndef FEIG_POTENTIAL_HPP
#define FEIG_POTENTIAL_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "feig/core.hpp"

namespace feig {

enum class Domain { ring, box };
enum class PotentialKind { constant, fourier, samples };

inline std::string to_string(Domain d) { return d == Domain::ring ? "ring" : "box"; }

struct PotentialSpec {
    PotentialKind kind = PotentialKind::constant;
    Domain domain = Domain::ring;

    double value = 0.0;                    // constant
    double a0 = 0.0;                       // fourier mean
    std::vector<double> cos_coef;          // fourier, harmonics 1..K
    std::vector<double> sin_coef;
    std::vector<double> values;            // samples at the spline nodes
    std::vector<double> spline_d2;         // second derivatives at the nodes
};

namespace detail {

// Cyclic tridiagonal solve (all rows: 1, 4, 1 with wraparound corners) via
// Sherman-Morrison on top of the plain Thomas algorithm.
inline std::vector<double> solve_periodic_spline(const std::vector<double>& v, double h) {
    const int m = static_cast<int>(v.size());
    std::vector<double> rhs(m);
    for (int i = 0; i < m; ++i) {
        const double prev = v[(i + m - 1) % m], next = v[(i + 1) % m];
        rhs[i] = 6.0 * (prev - 2.0 * v[i] + next) / (h * h);
    }
    // System: d2[i-1] + 4 d2[i] + d2[i+1] = rhs[i], indices mod m.
    auto thomas = [&](std::vector<double> b, std::vector<double> r) {
        const int n = static_cast<int>(b.size());
        std::vector<double> x(n);
        for (int i = 1; i < n; ++i) {
            const double w = 1.0 / b[i - 1];
            b[i] -= w;          // subdiag and superdiag are 1
            r[i] -= w * r[i - 1];
        }
        x[n - 1] = r[n - 1] / b[n - 1];
        for (int i = n - 2; i >= 0; --i) x[i] = (r[i] - x[i + 1]) / b[i];
        return x;
    };
    // Rank-one correction: write A = T + u w^T with u = (gamma, 0, .., 1),
    // w = (1, 0, .., gamma2) chosen to absorb the corners.
    const double gamma = -4.0;  // arbitrary nonzero shift
    std::vector<double> b(m, 4.0);
    b[0] -= gamma;
    b[m - 1] -= 1.0 / gamma;
    std::vector<double> u(m, 0.0);
    u[0] = gamma;
    u[m - 1] = 1.0;
    std::vector<double> y = thomas(b, rhs);
    std::vector<double> z = thomas(b, u);
    const double wy = y[0] + y[m - 1] / gamma;
    const double wz = 1.0 + z[0] + z[m - 1] / gamma;
    std::vector<double> d2(m);
    for (int i = 0; i < m; ++i) d2[i] = y[i] - z[i] * (wy / wz);
    return d2;
}

// Natural cubic spline second derivatives (ends clamped to zero curvature).
inline std::vector<double> solve_natural_spline(const std::vector<double>& v, double h) {
    const int m = static_cast<int>(v.size());
    std::vector<double> d2(m, 0.0);
    if (m < 3) return d2;
    std::vector<double> b(m - 2, 4.0), r(m - 2);
    for (int i = 1; i + 1 < m; ++i)
        r[i - 1] = 6.0 * (v[i - 1] - 2.0 * v[i] + v[i + 1]) / (h * h);
    for (int i = 1; i < m - 2; ++i) {
        const double w = 1.0 / b[i - 1];
        b[i] -= w;
        r[i] -= w * r[i - 1];
    }
    d2[m - 2] = r[m - 3] / b[m - 3];
    for (int i = m - 4; i >= 0; --i) d2[i + 1] = (r[i] - d2[i + 2]) / b[i];
    return d2;
}

inline void build_spline(PotentialSpec& p) {
    if (p.kind != PotentialKind::samples) return;
    const int m = static_cast<int>(p.values.size());
    const double h = (p.domain == Domain::ring) ? 1.0 / m : 1.0 / (m - 1);
    p.spline_d2 = (p.domain == Domain::ring) ? solve_periodic_spline(p.values, h)
                                             : solve_natural_spline(p.values, h);
}

}  // namespace detail

// Wraps ring arguments into [0,1); rejects box arguments outside [0,1].
inline double canonical_time(const PotentialSpec& p, double t) {
    if (p.domain == Domain::ring) {
        double r = t - std::floor(t);
        if (r >= 1.0) r = 0.0;  // guard against floor rounding at exact integers
        return r;
    }
    if (t < -1e-12 || t > 1.0 + 1e-12)
        throw std::domain_error("box potential evaluated at t = " + std::to_string(t) +
                                " outside [0, 1]");
    return std::min(std::max(t, 0.0), 1.0);
}

inline double evaluate_potential(const PotentialSpec& p, double t) {
    t = canonical_time(p, t);
    switch (p.kind) {
        case PotentialKind::constant:
            return p.value;
        case PotentialKind::fourier: {
            double v = p.a0;
            for (std::size_t k = 0; k < p.cos_coef.size(); ++k)
                v += p.cos_coef[k] * std::cos(kTwoPi * static_cast<double>(k + 1) * t);
            for (std::size_t k = 0; k < p.sin_coef.size(); ++k)
                v += p.sin_coef[k] * std::sin(kTwoPi * static_cast<double>(k + 1) * t);
            return v;
        }
        case PotentialKind::samples: {
            const int m = static_cast<int>(p.values.size());
            const bool ring = (p.domain == Domain::ring);
            const double h = ring ? 1.0 / m : 1.0 / (m - 1);
            int i = static_cast<int>(std::floor(t / h));
            const int last = ring ? m - 1 : m - 2;
            i = std::min(std::max(i, 0), last);
            const double x = t - i * h;
            const int j = ring ? (i + 1) % m : i + 1;
            const double A = (h - x) / h, B = x / h;
            return A * p.values[i] + B * p.values[j] +
                   ((A * A * A - A) * p.spline_d2[i] + (B * B * B - B) * p.spline_d2[j]) *
                       (h * h) / 6.0;
        }
    }
    throw numerical_error("unreachable potential kind");
}

inline double potential_derivative(const PotentialSpec& p, double t) {
    t = canonical_time(p, t);
    switch (p.kind) {
        case PotentialKind::constant:
            return 0.0;
        case PotentialKind::fourier: {
            double v = 0.0;
            for (std::size_t k = 0; k < p.cos_coef.size(); ++k) {
                const double w = kTwoPi * static_cast<double>(k + 1);
                v -= p.cos_coef[k] * w * std::sin(w * t);
            }
            for (std::size_t k = 0; k < p.sin_coef.size(); ++k) {
                const double w = kTwoPi * static_cast<double>(k + 1);
                v += p.sin_coef[k] * w * std::cos(w * t);
            }
            return v;
        }
        case PotentialKind::samples: {
            const int m = static_cast<int>(p.values.size());
            const bool ring = (p.domain == Domain::ring);
            const double h = ring ? 1.0 / m : 1.0 / (m - 1);
            int i = static_cast<int>(std::floor(t / h));
            const int last = ring ? m - 1 : m - 2;
            i = std::min(std::max(i, 0), last);
            const double x = t - i * h;
            const int j = ring ? (i + 1) % m : i + 1;
            const double A = (h - x) / h, B = x / h;
            return (p.values[j] - p.values[i]) / h +
                   (-(3.0 * A * A - 1.0) * p.spline_d2[i] + (3.0 * B * B - 1.0) * p.spline_d2[j]) *
                       h / 6.0;
        }
    }
    throw numerical_error("unreachable potential kind");
}

struct PotentialRange {
    double vmin = 0.0;
    double tmin = 0.0;
    double vmax = 0.0;
    double tmax = 0.0;
};

// Dense scan plus golden-section refinement of each bracketed local extremum.
inline PotentialRange potential_range(const PotentialSpec& p, int grid = 4096) {
    if (p.kind == PotentialKind::constant) return {p.value, 0.0, p.value, 0.0};
    const bool ring = (p.domain == Domain::ring);
    const int n = ring ? grid : grid + 1;
    std::vector<double> ts(n), vs(n);
    for (int i = 0; i < n; ++i) {
        ts[i] = static_cast<double>(i) / grid;
        vs[i] = evaluate_potential(p, ts[i]);
    }
    auto refine = [&](double lo, double hi, int sign) {
        // golden-section search for a maximum of sign * V on [lo, hi]
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = sign * evaluate_potential(p, x1), f2 = sign * evaluate_potential(p, x2);
        for (int it = 0; it < 80 && (b - a) > 1e-13; ++it) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a); f2 = sign * evaluate_potential(p, x2);
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a); f1 = sign * evaluate_potential(p, x1);
            }
        }
        return 0.5 * (a + b);
    };
    PotentialRange r{vs[0], ts[0], vs[0], ts[0]};
    const int cells = ring ? n : n - 1;
    for (int i = 0; i < cells; ++i) {
        const int prev = ring ? (i + n - 1) % n : std::max(i - 1, 0);
        const int next = ring ? (i + 1) % n : std::min(i + 1, n - 1);
        // the ring evaluation wraps, but a box window must not poke past the
        // closed interval (boundary samples bracket against themselves)
        const double lo = ring ? ts[i] - 1.0 / grid : std::max(ts[i] - 1.0 / grid, 0.0);
        const double hi = ring ? ts[i] + 1.0 / grid : std::min(ts[i] + 1.0 / grid, 1.0);
        if (vs[i] <= vs[prev] && vs[i] <= vs[next]) {
            const double t = refine(lo, hi, -1);
            const double tc = ring ? t : std::min(std::max(t, 0.0), 1.0);
            const double v = evaluate_potential(p, tc);
            if (v < r.vmin) { r.vmin = v; r.tmin = tc; }
        }
        if (vs[i] >= vs[prev] && vs[i] >= vs[next]) {
            const double t = refine(lo, hi, +1);
            const double tc = ring ? t : std::min(std::max(t, 0.0), 1.0);
            const double v = evaluate_potential(p, tc);
            if (v > r.vmax) { r.vmax = v; r.tmax = tc; }
        }
        if (vs[i] < r.vmin) { r.vmin = vs[i]; r.tmin = ts[i]; }
        if (vs[i] > r.vmax) { r.vmax = vs[i]; r.tmax = ts[i]; }
    }
    if (!ring) {  // box endpoints are admissible extrema even without a bracket
        for (int i : {0, n - 1}) {
            if (vs[i] < r.vmin) { r.vmin = vs[i]; r.tmin = ts[i]; }
            if (vs[i] > r.vmax) { r.vmax = vs[i]; r.tmax = ts[i]; }
        }
    }
    return r;
}

// Worst-case margin of E - V(t) over the domain (positive means the
// confinement hypothesis holds).
inline double positivity_margin(const PotentialSpec& p, double energy, int grid = 4096) {
    return energy - potential_range(p, grid).vmax;
}

// ---------------------------------------------------------------------------
// JSON schema
//
//   {"kind": "constant", "value": 0.3, "domain": "ring"}
//   {"kind": "fourier", "a0": 0.3, "cos": [0.1], "sin": [], "domain": "ring"}
//   {"kind": "samples", "values": [...], "domain": "box"}
// ---------------------------------------------------------------------------

inline PotentialSpec parse_potential_json(const nlohmann::json& j) {
    if (!j.is_object()) throw parse_error("potential document must be a JSON object");
    auto require = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key))
            throw parse_error(std::string("potential document missing key \"") + key + "\"");
        return j.at(key);
    };
    PotentialSpec p;
    const std::string kind = require("kind").is_string()
                                 ? require("kind").get<std::string>()
                                 : throw parse_error("\"kind\" must be a string");
    const std::string domain = require("domain").is_string()
                                   ? require("domain").get<std::string>()
                                   : throw parse_error("\"domain\" must be a string");
    if (domain == "ring") p.domain = Domain::ring;
    else if (domain == "box") p.domain = Domain::box;
    else throw parse_error("\"domain\" must be \"ring\" or \"box\", got \"" + domain + "\"");

    auto as_number = [](const nlohmann::json& v, const char* key) {
        if (!v.is_number())
            throw parse_error(std::string("\"") + key + "\" must be a number");
        return v.get<double>();
    };
    auto as_array = [](const nlohmann::json& v, const char* key) {
        if (!v.is_array())
            throw parse_error(std::string("\"") + key + "\" must be an array of numbers");
        std::vector<double> out;
        out.reserve(v.size());
        for (const auto& x : v) {
            if (!x.is_number())
                throw parse_error(std::string("\"") + key + "\" must contain only numbers");
            out.push_back(x.get<double>());
        }
        return out;
    };

    if (kind == "constant") {
        p.kind = PotentialKind::constant;
        p.value = as_number(require("value"), "value");
    } else if (kind == "fourier") {
        p.kind = PotentialKind::fourier;
        p.a0 = as_number(require("a0"), "a0");
        if (j.contains("cos")) p.cos_coef = as_array(j.at("cos"), "cos");
        if (j.contains("sin")) p.sin_coef = as_array(j.at("sin"), "sin");
    } else if (kind == "samples") {
        p.kind = PotentialKind::samples;
        p.values = as_array(require("values"), "values");
        if (p.values.size() < 4)
            throw parse_error("\"values\" needs at least 4 samples, got " +
                              std::to_string(p.values.size()));
        detail::build_spline(p);
    } else {
        throw parse_error("unknown potential kind \"" + kind + "\"");
    }
    return p;
}

inline PotentialSpec parse_potential(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("potential document is not valid JSON: ") + e.what());
    }
    return parse_potential_json(j);
}

inline nlohmann::ordered_json emit_potential_json(const PotentialSpec& p) {
    nlohmann::ordered_json j;
    switch (p.kind) {
        case PotentialKind::constant:
            j["kind"] = "constant";
            j["value"] = p.value;
            break;
        case PotentialKind::fourier:
            j["kind"] = "fourier";
            j["a0"] = p.a0;
            j["cos"] = p.cos_coef;
            j["sin"] = p.sin_coef;
            break;
        case PotentialKind::samples:
            j["kind"] = "samples";
            j["values"] = p.values;
            break;
    }
    j["domain"] = to_string(p.domain);
    return j;
}

inline std::string emit_potential(const PotentialSpec& p) {
    return emit_potential_json(p).dump(2) + "\n";
}

// Convenience constructors used all over the tests and demos.
inline PotentialSpec constant_potential(double value, Domain d) {
    PotentialSpec p;
    p.kind = PotentialKind::constant;
    p.domain = d;
    p.value = value;
    return p;
}

inline PotentialSpec fourier_potential(double a0, std::vector<double> cosc,
                                       std::vector<double> sinc, Domain d) {
    PotentialSpec p;
    p.kind = PotentialKind::fourier;
    p.domain = d;
    p.a0 = a0;
    p.cos_coef = std::move(cosc);
    p.sin_coef = std::move(sinc);
    return p;
}

inline PotentialSpec sampled_potential(std::vector<double> values, Domain d) {
    PotentialSpec p;
    p.kind = PotentialKind::samples;
    p.domain = d;
    p.values = std::move(values);
    if (p.values.size() < 4)
        throw parse_error("sampled potential needs at least 4 samples");
    detail::build_spline(p);
    return p;
}

}  // namespace feig

#endif  // FEIG_POTENTIAL_HPP
