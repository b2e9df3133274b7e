#include "pesym/fields.hpp"

#include <cmath>

namespace pesym {

double& StateValue::operator[](int i) {
    switch (i) {
        case 0: return u;
        case 1: return v;
        case 2: return w;
        case 3: return phi;
        default: return T;
    }
}

double StateValue::operator[](int i) const {
    return const_cast<StateValue&>(*this)[i];
}

double Point9::operator[](int i) const { return const_cast<Point9&>(*this)[i]; }

double& Point9::operator[](int i) {
    switch (i) {
        case 0: return z.t;
        case 1: return z.x;
        case 2: return z.y;
        case 3: return z.p;
        default: return s[i - 4];
    }
}

std::array<double, 9> Point9::flat() const {
    std::array<double, 9> a;
    for (int i = 0; i < 9; ++i) a[i] = (*this)[i];
    return a;
}

Point9 Point9::from_flat(const std::array<double, 9>& a) {
    Point9 q;
    for (int i = 0; i < 9; ++i) q[i] = a[i];
    return q;
}

void PhysConsts::validate() const {
    if (!(R > 0.0) || !(cp > 0.0)) throw std::invalid_argument("PhysConsts: R and cp must be positive");
    const double k = kappa();
    if (allow_kappa_one) {
        if (!(k > 0.0) || k > 1.0) throw std::invalid_argument("PhysConsts: kappa outside (0,1]");
    } else if (!(k > 0.0) || !(k < 1.0)) {
        throw std::invalid_argument("PhysConsts: kappa must lie in (0,1); cp must exceed R");
    }
}

void Box::validate() const {
    if (!(p_lo > 0.0)) throw std::domain_error("Box: p must be bounded away from zero");
    if (!(t_lo <= t_hi && x_lo <= x_hi && y_lo <= y_hi && p_lo <= p_hi))
        throw std::invalid_argument("Box: empty box");
}

namespace {

double coord(const Point4& z, Var v) {
    switch (v) {
        case Var::t: return z.t;
        case Var::x: return z.x;
        case Var::y: return z.y;
        default: return z.p;
    }
}

Point4 shifted(const Point4& z, Var v, double d) {
    Point4 q = z;
    switch (v) {
        case Var::t: q.t += d; break;
        case Var::x: q.x += d; break;
        case Var::y: q.y += d; break;
        default: q.p += d; break;
    }
    return q;
}

}  // namespace

double StateField::partial(const Point4& z, Var v, Comp c) const {
    if (mode_ == DerivMode::Exact && has_exact_partials()) return exact_partial(z, v, c);
    const double h = fd_step_ * std::max(1.0, std::abs(coord(z, v)));
    if (v == Var::p && z.p - h <= 0.0)
        throw std::domain_error("StateField::partial: FD stencil leaves p > 0 domain");
    const int ci = static_cast<int>(c);
    return (eval(shifted(z, v, h))[ci] - eval(shifted(z, v, -h))[ci]) / (2.0 * h);
}

Partials StateField::partials(const Point4& z) const {
    Partials out;
    for (int c = 0; c < 5; ++c)
        for (int v = 0; v < 4; ++v)
            out.d[c][v] = partial(z, static_cast<Var>(v), static_cast<Comp>(c));
    return out;
}

AnalyticField::AnalyticField(ValueFn value, DerivFn deriv)
    : value_(std::move(value)), deriv_(std::move(deriv)) {}

namespace {

class ModeWrapper final : public StateField {
public:
    ModeWrapper(FieldPtr inner, DerivMode mode, double h) : inner_(std::move(inner)) {
        mode_ = mode;
        fd_step_ = h;
    }
    StateValue eval(const Point4& z) const override { return inner_->eval(z); }
    bool has_exact_partials() const override { return inner_->has_exact_partials(); }

protected:
    double exact_partial(const Point4& z, Var v, Comp c) const override {
        return inner_->partial(z, v, c);
    }

private:
    FieldPtr inner_;
};

}  // namespace

FieldPtr with_mode(FieldPtr f, DerivMode mode, double fd_step) {
    return std::make_shared<ModeWrapper>(std::move(f), mode, fd_step);
}

namespace {

// Hydrostatic geopotential: phi(p) = -R * integral_{p_ref}^{p} T0(s)/s ds.
double hydrostatic_phi(const ScalarFn& T0, double p_ref, double R, double p) {
    if (!(p > 0.0) || !(p_ref > 0.0))
        throw std::domain_error("hydrostatic quadrature requires positive pressure");
    return -R * T0.log_weighted_integral(p_ref, p);
}

}  // namespace

FieldPtr make_stratified(const ScalarFn& u0, const ScalarFn& v0, const ScalarFn& T0,
                         double p_ref, const PhysConsts& consts) {
    consts.validate();
    if (!(p_ref > 0.0)) throw std::invalid_argument("make_stratified: p_ref must be positive");
    const double R = consts.R;
    auto value = [=](const Point4& z) {
        StateValue s;
        s.u = u0(z.p);
        s.v = v0(z.p);
        s.w = 0.0;
        s.phi = hydrostatic_phi(T0, p_ref, R, z.p);
        s.T = T0(z.p);
        return s;
    };
    auto deriv = [=](const Point4& z, Var v, Comp c) -> double {
        if (v != Var::p) return 0.0;
        switch (c) {
            case Comp::u: return u0.d1(z.p);
            case Comp::v: return v0.d1(z.p);
            case Comp::w: return 0.0;
            case Comp::phi: return -R * T0(z.p) / z.p;
            default: return T0.d1(z.p);
        }
    };
    return std::make_shared<AnalyticField>(value, deriv);
}

FieldPtr make_inertial(const ScalarFn& u0, const ScalarFn& v0, const ScalarFn& T0,
                       double p_ref, double f, const PhysConsts& consts) {
    consts.validate();
    if (!(p_ref > 0.0)) throw std::invalid_argument("make_inertial: p_ref must be positive");
    const double R = consts.R;
    const double hf = 0.5 * f;
    auto value = [=](const Point4& z) {
        const double c = std::cos(hf * z.t), s = std::sin(hf * z.t);
        StateValue out;
        out.u = c * u0(z.p) + s * v0(z.p) + hf * z.y;
        out.v = -s * u0(z.p) + c * v0(z.p) - hf * z.x;
        out.w = 0.0;
        out.phi = hydrostatic_phi(T0, p_ref, R, z.p) -
                  0.5 * hf * hf * (z.x * z.x + z.y * z.y);
        out.T = T0(z.p);
        return out;
    };
    auto deriv = [=](const Point4& z, Var v, Comp cc) -> double {
        const double c = std::cos(hf * z.t), s = std::sin(hf * z.t);
        switch (cc) {
            case Comp::u:
                switch (v) {
                    case Var::t: return hf * (-s * u0(z.p) + c * v0(z.p));
                    case Var::x: return 0.0;
                    case Var::y: return hf;
                    default: return c * u0.d1(z.p) + s * v0.d1(z.p);
                }
            case Comp::v:
                switch (v) {
                    case Var::t: return -hf * (c * u0(z.p) + s * v0(z.p));
                    case Var::x: return -hf;
                    case Var::y: return 0.0;
                    default: return -s * u0.d1(z.p) + c * v0.d1(z.p);
                }
            case Comp::w: return 0.0;
            case Comp::phi:
                switch (v) {
                    case Var::t: return 0.0;
                    case Var::x: return -hf * hf * z.x;
                    case Var::y: return -hf * hf * z.y;
                    default: return -R * T0(z.p) / z.p;
                }
            default:
                return v == Var::p ? T0.d1(z.p) : 0.0;
        }
    };
    return std::make_shared<AnalyticField>(value, deriv);
}

namespace {

double mono_eval(const std::vector<Monomial>& terms, const Point4& z) {
    double acc = 0.0;
    for (const auto& m : terms)
        acc += m.c * std::pow(z.t, m.kt) * std::pow(z.x, m.kx) * std::pow(z.y, m.ky) *
               std::pow(z.p, m.kp);
    return acc;
}

double mono_partial(const std::vector<Monomial>& terms, const Point4& z, Var v) {
    double acc = 0.0;
    for (const auto& m : terms) {
        int k[4] = {m.kt, m.kx, m.ky, m.kp};
        const int vi = static_cast<int>(v);
        if (k[vi] == 0) continue;
        double factor = m.c * k[vi];
        k[vi] -= 1;
        acc += factor * std::pow(z.t, k[0]) * std::pow(z.x, k[1]) * std::pow(z.y, k[2]) *
               std::pow(z.p, k[3]);
    }
    return acc;
}

}  // namespace

FieldPtr make_polynomial(const std::vector<Monomial>& u, const std::vector<Monomial>& v,
                         const std::vector<Monomial>& w, const std::vector<Monomial>& phi,
                         const std::vector<Monomial>& T) {
    auto comps = std::make_shared<std::array<std::vector<Monomial>, 5>>(
        std::array<std::vector<Monomial>, 5>{u, v, w, phi, T});
    auto value = [comps](const Point4& z) {
        StateValue s;
        for (int c = 0; c < 5; ++c) s[c] = mono_eval((*comps)[c], z);
        return s;
    };
    auto deriv = [comps](const Point4& z, Var var, Comp c) {
        return mono_partial((*comps)[static_cast<int>(c)], z, var);
    };
    return std::make_shared<AnalyticField>(value, deriv);
}

FieldPtr linear_combination(double a, FieldPtr f1, FieldPtr f2) {
    const bool exact = f1->has_exact_partials() && f2->has_exact_partials();
    auto value = [=](const Point4& z) {
        const StateValue s1 = f1->eval(z), s2 = f2->eval(z);
        StateValue s;
        for (int c = 0; c < 5; ++c) s[c] = a * s1[c] + s2[c];
        return s;
    };
    AnalyticField::DerivFn deriv;
    if (exact)
        deriv = [=](const Point4& z, Var v, Comp c) {
            return a * f1->partial(z, v, c) + f2->partial(z, v, c);
        };
    return std::make_shared<AnalyticField>(value, deriv);
}

Partials eval_partials_fd(const StateField& f, const Point4& z, double h) {
    if (z.p - h <= 0.0)
        throw std::domain_error("eval_partials_fd: stencil leaves p > 0 domain");
    Partials out;
    for (int v = 0; v < 4; ++v) {
        const StateValue plus = f.eval(shifted(z, static_cast<Var>(v), h));
        const StateValue minus = f.eval(shifted(z, static_cast<Var>(v), -h));
        for (int c = 0; c < 5; ++c) out.d[c][v] = (plus[c] - minus[c]) / (2.0 * h);
    }
    return out;
}

std::vector<Point4> sample_points(uint64_t seed, size_t n, const Box& box) {
    box.validate();
    RandomStream rng(seed);
    std::vector<Point4> pts;
    pts.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        Point4 z;
        z.t = rng.next_in(box.t_lo, box.t_hi);
        z.x = rng.next_in(box.x_lo, box.x_hi);
        z.y = rng.next_in(box.y_lo, box.y_hi);
        z.p = rng.next_in(box.p_lo, box.p_hi);
        pts.push_back(z);
    }
    return pts;
}

std::vector<Point9> sample_points9(uint64_t seed, size_t n, const Box& box) {
    box.validate();
    RandomStream rng(seed ^ 0x5eedULL);
    std::vector<Point9> pts;
    pts.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        Point9 q;
        q.z.t = rng.next_in(box.t_lo, box.t_hi);
        q.z.x = rng.next_in(box.x_lo, box.x_hi);
        q.z.y = rng.next_in(box.y_lo, box.y_hi);
        q.z.p = rng.next_in(box.p_lo, box.p_hi);
        q.s.u = rng.next_in(-1.0, 1.0);
        q.s.v = rng.next_in(-1.0, 1.0);
        q.s.w = rng.next_in(-1.0, 1.0);
        q.s.phi = rng.next_in(-1.0, 1.0);
        q.s.T = rng.next_in(0.5, 1.5);
        pts.push_back(q);
    }
    return pts;
}

}  // namespace pesym
