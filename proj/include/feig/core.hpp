// Shared error taxonomy and the small dense linear algebra used everywhere.
//
// All phase-space matrices in this project are tiny (2x2 blocks, 2n x 2n with
// n = 2 by default, and one moderately sized normal-equation solve in the
// loop-space Newton), so we carry our own minimal types instead of pulling in
// a linear algebra library.

#ifndef FEIG_CORE_HPP
#define FEIG_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace feig {

// Document / schema problems (CLI maps these to exit code 65).
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite states, overflow, failed factorizations.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// E - V(t) fails to stay positive where the method requires it
// (CLI maps these to exit code 3).
class positivity_error : public std::runtime_error {
public:
    explicit positivity_error(const std::string& what) : std::runtime_error(what) {}
};

// Angle tracking found a step with |dtheta| >= pi/2; callers should rebuild
// the flow on a finer grid.  worst_step carries the offending increment.
class resolution_error : public std::runtime_error {
public:
    resolution_error(const std::string& what, double worst)
        : std::runtime_error(what), worst_step(worst) {}
    double worst_step;
};

// The polar retract denominator vanished; the input was not a unit-determinant
// symplectic block.  Never clamped over.
class degenerate_retract_error : public numerical_error {
public:
    explicit degenerate_retract_error(const std::string& what) : numerical_error(what) {}
};

// 2x2 real matrix [[a, b], [c, d]], the per-plane block of every linear flow here.
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }

    Mat2 transposed() const { return {a, c, b, d}; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

// Dense square matrix, row major.  Used for full 2n x 2n flows and for the
// Newton normal equations; never large enough to justify anything fancier.
class SquareMat {
public:
    SquareMat() = default;
    explicit SquareMat(int n) : n_(n), v_(static_cast<std::size_t>(n) * n, 0.0) {}

    static SquareMat identity(int n) {
        SquareMat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return n_; }
    double& operator()(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }

    SquareMat operator*(const SquareMat& o) const {
        SquareMat r(n_);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) {
                const double aik = (*this)(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }

private:
    int n_ = 0;
    std::vector<double> v_;
};

// Defect of the symplectic condition phi^T J phi = J, with coordinates ordered
// plane by plane as (q_1, p_1, q_2, p_2, ...), i.e. J = diag(J_2, ..., J_2).
inline double symplectic_defect(const SquareMat& phi) {
    const int n = phi.dim();
    // (J phi)_{ij}: J swaps each (q,p) pair with a sign.
    auto jrow = [&](int i, int j) {
        return (i % 2 == 0) ? phi(i + 1, j) : -phi(i - 1, j);
    };
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += phi(k, i) * jrow(k, j);
            double target = 0.0;
            if (j == i + 1 && i % 2 == 0) target = 1.0;
            if (j == i - 1 && i % 2 == 1) target = -1.0;
            worst = std::max(worst, std::abs(s - target));
        }
    }
    return worst;
}

// Solve (A + mu I) x = b for symmetric positive semi-definite A via Cholesky.
// A is overwritten.  Throws numerical_error if a pivot collapses.
inline std::vector<double> cholesky_solve_damped(SquareMat& A, std::vector<double> b, double mu) {
    const int n = A.dim();
    for (int i = 0; i < n; ++i) A(i, i) += mu;
    // standard in-place LL^T
    for (int j = 0; j < n; ++j) {
        double diag = A(j, j);
        for (int k = 0; k < j; ++k) diag -= A(j, k) * A(j, k);
        if (!(diag > 0.0) || !std::isfinite(diag))
            throw numerical_error("cholesky pivot not positive at row " + std::to_string(j));
        diag = std::sqrt(diag);
        A(j, j) = diag;
        for (int i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (int k = 0; k < j; ++k) s -= A(i, k) * A(j, k);
            A(i, j) = s / diag;
        }
    }
    for (int i = 0; i < n; ++i) {  // forward
        double s = b[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= A(i, k) * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s / A(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {  // backward
        double s = b[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k) s -= A(k, i) * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s / A(i, i);
    }
    return b;
}

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

}  // namespace feig

#endif  // FEIG_CORE_HPP
