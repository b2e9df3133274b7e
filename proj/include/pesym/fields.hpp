#ifndef PESYM_FIELDS_HPP
#define PESYM_FIELDS_HPP

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pesym/numerics.hpp"

namespace pesym {

/// A point of the independent-variable space (t, x, y, p), p > 0.
struct Point4 {
    double t = 0, x = 0, y = 0, p = 1;
};

/// Values of the five dependent variables at a point. `w` is the vertical
/// velocity in the pressure coordinate, `phi` the geopotential.
struct StateValue {
    double u = 0, v = 0, w = 0, phi = 0, T = 0;
    double& operator[](int i);
    double operator[](int i) const;
};

/// Combined 9-tuple (independent + dependent coordinates), the space point
/// transformations act on. Coordinate order: t,x,y,p,u,v,w,phi,T.
struct Point9 {
    Point4 z;
    StateValue s;
    double operator[](int i) const;
    double& operator[](int i);
    std::array<double, 9> flat() const;
    static Point9 from_flat(const std::array<double, 9>& a);
};

enum class Var { t = 0, x = 1, y = 2, p = 3 };
enum class Comp { u = 0, v = 1, w = 2, phi = 3, T = 4 };

/// Physical constants of the system. kappa = R/cp must lie in (0,1) unless
/// allow_kappa_one is set (used only for the cp == R checks).
struct PhysConsts {
    double f = 0.0;
    double R = 2.0 / 7.0;
    double cp = 1.0;
    bool allow_kappa_one = false;

    double kappa() const { return R / cp; }
    void validate() const;
    PhysConsts with_f(double fv) const {
        PhysConsts c = *this;
        c.f = fv;
        return c;
    }
};

/// External heating J(t,x,y,p).
class HeatingField {
public:
    HeatingField() : fn_([](const Point4&) { return 0.0; }), zero_(true) {}
    explicit HeatingField(std::function<double(const Point4&)> fn)
        : fn_(std::move(fn)), zero_(false) {}
    double operator()(const Point4& z) const { return fn_(z); }
    bool is_zero() const { return zero_; }
    static HeatingField zero() { return HeatingField(); }

private:
    std::function<double(const Point4&)> fn_;
    bool zero_;
};

/// Axis-aligned evaluation box with p bounded away from zero.
struct Box {
    double t_lo = 0, t_hi = 1;
    double x_lo = -1, x_hi = 1;
    double y_lo = -1, y_hi = 1;
    double p_lo = 0.2, p_hi = 1.0;
    static Box standard() { return Box{}; }
    void validate() const;
};

enum class DerivMode { Exact, FiniteDifference };

/// All twenty first partials of a field at a point: d[comp][var].
struct Partials {
    double d[5][4] = {};
    double& at(Comp c, Var v) { return d[static_cast<int>(c)][static_cast<int>(v)]; }
    double at(Comp c, Var v) const { return d[static_cast<int>(c)][static_cast<int>(v)]; }
};

/// A solution candidate: five scalar functions of (t,x,y,p). Immutable after
/// construction; evaluation is safe from concurrent threads.
class StateField {
public:
    virtual ~StateField() = default;

    virtual StateValue eval(const Point4& z) const = 0;

    /// First partial of one component. Uses analytic formulas when the field
    /// has them and the mode is Exact; otherwise central finite differences
    /// with step fd_step()*max(1,|coordinate|).
    double partial(const Point4& z, Var v, Comp c) const;
    virtual Partials partials(const Point4& z) const;

    virtual bool has_exact_partials() const { return false; }
    DerivMode mode() const { return mode_; }
    double fd_step() const { return fd_step_; }

protected:
    virtual double exact_partial(const Point4&, Var, Comp) const {
        throw std::logic_error("exact_partial not available");
    }
    DerivMode mode_ = DerivMode::Exact;
    double fd_step_ = 1e-5;
    friend std::shared_ptr<const StateField> with_mode(
        std::shared_ptr<const StateField>, DerivMode, double);
};

using FieldPtr = std::shared_ptr<const StateField>;

/// Generic analytic field assembled from per-component closures. `value`
/// is required; `deriv` may be empty, in which case FD is used throughout.
class AnalyticField final : public StateField {
public:
    using ValueFn = std::function<StateValue(const Point4&)>;
    using DerivFn = std::function<double(const Point4&, Var, Comp)>;
    AnalyticField(ValueFn value, DerivFn deriv);
    StateValue eval(const Point4& z) const override { return value_(z); }
    bool has_exact_partials() const override { return static_cast<bool>(deriv_); }

protected:
    double exact_partial(const Point4& z, Var v, Comp c) const override {
        return deriv_(z, v, c);
    }

private:
    ValueFn value_;
    DerivFn deriv_;
};

/// Copy of a field with a different derivative mode / FD step.
FieldPtr with_mode(FieldPtr f, DerivMode mode, double fd_step = 1e-5);

/// Horizontally homogeneous steady column: u=u0(p), v=v0(p), w=0, T=T0(p),
/// phi from the hydrostatic quadrature anchored at p_ref. Solves the system
/// with f=0, J=0.
FieldPtr make_stratified(const ScalarFn& u0, const ScalarFn& v0, const ScalarFn& T0,
                         double p_ref, const PhysConsts& consts);

/// The rotating-frame image of the stratified column for Coriolis parameter
/// f: velocities precess at angular rate f/2 and the geopotential acquires
/// the parabolic correction -(f^2/8)(x^2+y^2). Solves the system with that f.
FieldPtr make_inertial(const ScalarFn& u0, const ScalarFn& v0, const ScalarFn& T0,
                       double p_ref, double f, const PhysConsts& consts);

/// One monomial c * t^kt * x^kx * y^ky * p^kp of a manufactured field.
struct Monomial {
    double c = 0;
    int kt = 0, kx = 0, ky = 0, kp = 0;
};

/// Manufactured polynomial field; not generally a solution. Exact partials.
FieldPtr make_polynomial(const std::vector<Monomial>& u, const std::vector<Monomial>& v,
                         const std::vector<Monomial>& w, const std::vector<Monomial>& phi,
                         const std::vector<Monomial>& T);

/// a*f1 + f2 componentwise (exact partials when both operands have them).
FieldPtr linear_combination(double a, FieldPtr f1, FieldPtr f2);

/// All twenty first partials by explicit central differences with the given
/// step, regardless of the field's own derivative mode.
Partials eval_partials_fd(const StateField& f, const Point4& z, double h);

/// Deterministic sample of n points in the box; identical across platforms
/// and runs for a given seed.
std::vector<Point4> sample_points(uint64_t seed, size_t n, const Box& box);

/// Deterministic sample of full 9-tuples (box for the independent part,
/// [-1,1] for dependent coordinates except T in [0.5, 1.5]).
std::vector<Point9> sample_points9(uint64_t seed, size_t n, const Box& box);

}  // namespace pesym

#endif
