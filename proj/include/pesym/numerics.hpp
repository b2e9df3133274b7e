#ifndef PESYM_NUMERICS_HPP
#define PESYM_NUMERICS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pesym {

/// Scalar function of one variable with analytic derivatives up to third
/// order. Instances are immutable; copies share the implementation.
class ScalarFn {
public:
    ScalarFn();  // identically zero

    double operator()(double x) const { return value(x); }
    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;
    double d3(double x) const;

    /// f(x) = c
    static ScalarFn constant(double c);
    /// f(x) = c[0] + c[1] x + ... + c[k] x^k
    static ScalarFn poly(std::vector<double> coeffs);
    /// f(x) = amp * sin(omega x + phase)
    static ScalarFn sinusoid(double amp, double omega, double phase);
    /// f(x) = amp * cos(omega x + phase)
    static ScalarFn cosine(double amp, double omega, double phase);
    /// f(x) = amp * x^expo (x > 0)
    static ScalarFn powlaw(double amp, double expo);

    ScalarFn scaled(double s) const;

    bool is_zero() const;

    /// int_a^b f(s)/s ds (a, b > 0): closed form for polynomial and power-law
    /// functions, adaptive quadrature otherwise.
    double log_weighted_integral(double a, double b) const;

private:
    struct Impl;
    explicit ScalarFn(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    /// (y, -x): used for the perpendicular pairing of boost parameters.
    Vec2 perp() const { return {y, -x}; }
};
inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Mat2 {
    // row-major
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    static Mat2 identity() { return {}; }
    static Mat2 rotation(double angle);
    static Mat2 outer(const Vec2& u, const Vec2& v);
    Vec2 apply(const Vec2& p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
    Mat2 mul(const Mat2& o) const;
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    Mat2 transpose() const { return {a, c, b, d}; }
    double det() const { return a * d - b * c; }
    Mat2 inverse() const;
    double trace() const { return a + d; }
};

/// Dense 9x9 matrix, row-major; used for map Jacobians.
struct Mat9 {
    std::array<double, 81> m{};
    static Mat9 identity();
    double& at(int r, int c) { return m[static_cast<size_t>(r) * 9 + c]; }
    double at(int r, int c) const { return m[static_cast<size_t>(r) * 9 + c]; }
    Mat9 mul(const Mat9& o) const;
    std::array<double, 9> apply(const std::array<double, 9>& v) const;
    Mat9 inverse() const;  // Gaussian elimination with partial pivoting
};

/// Adaptive Simpson quadrature with Richardson correction.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 40);

/// Composite Simpson with panel doubling until two successive estimates
/// differ by less than tol (or panel cap is hit).
double simpson_doubling(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_panels = 1 << 20);

/// Classical fixed-step fourth-order Runge-Kutta for y' = f(t, y).
/// Integrates from t0 to t1 (either direction) in `steps` equal steps.
void rk4_integrate(const std::function<void(double, const double*, double*)>& f,
                   double t0, double t1, int steps, std::vector<double>& y);

/// Five-point central difference, O(h^4).
double deriv5(const std::function<double(double)>& f, double x, double h);

/// Plain central difference, O(h^2).
double deriv2(const std::function<double(double)>& f, double x, double h);

/// Deterministic pseudo-random stream (splitmix64). Identical sequences on
/// every platform for a given seed, unlike std:: distributions.
class RandomStream {
public:
    explicit RandomStream(uint64_t seed) : state_(seed) {}
    uint64_t next_u64();
    /// uniform in [0, 1)
    double next_unit();
    /// uniform in [lo, hi)
    double next_in(double lo, double hi);

private:
    uint64_t state_;
};

}  // namespace pesym

#endif
