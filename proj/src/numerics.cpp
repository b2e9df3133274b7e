#include "pesym/numerics.hpp"

#include <algorithm>

namespace pesym {

struct ScalarFn::Impl {
    enum class Kind { Poly, Sin, Pow } kind = Kind::Poly;
    std::vector<double> coeffs;          // Poly
    double amp = 0, omega = 0, phase = 0;  // Sin: amp*sin(omega x + phase); Pow: amp*x^omega

    double eval(int order, double x) const {
        if (kind == Kind::Poly) {
            // differentiate coefficients `order` times, then Horner
            std::vector<double> c = coeffs;
            for (int k = 0; k < order; ++k) {
                if (c.size() <= 1) return 0.0;
                std::vector<double> d(c.size() - 1);
                for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
                c = std::move(d);
            }
            double acc = 0.0;
            for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
            return acc;
        }
        if (kind == Kind::Pow) {
            double a = amp, e = omega;
            for (int k = 0; k < order; ++k) {
                a *= e;
                e -= 1.0;
            }
            return a == 0.0 ? 0.0 : a * std::pow(x, e);
        }
        // d^n/dx^n [a sin(wx+p)] = a w^n sin(wx + p + n*pi/2)
        double w = 1.0;
        for (int k = 0; k < order; ++k) w *= omega;
        return amp * w * std::sin(omega * x + phase + order * (M_PI / 2.0));
    }
};

ScalarFn::ScalarFn() : ScalarFn(constant(0.0)) {}
ScalarFn::ScalarFn(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

double ScalarFn::value(double x) const { return impl_->eval(0, x); }
double ScalarFn::d1(double x) const { return impl_->eval(1, x); }
double ScalarFn::d2(double x) const { return impl_->eval(2, x); }
double ScalarFn::d3(double x) const { return impl_->eval(3, x); }

ScalarFn ScalarFn::constant(double c) { return poly({c}); }

ScalarFn ScalarFn::poly(std::vector<double> coeffs) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Impl::Kind::Poly;
    impl->coeffs = std::move(coeffs);
    if (impl->coeffs.empty()) impl->coeffs.push_back(0.0);
    return ScalarFn(impl);
}

ScalarFn ScalarFn::sinusoid(double amp, double omega, double phase) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Impl::Kind::Sin;
    impl->amp = amp;
    impl->omega = omega;
    impl->phase = phase;
    return ScalarFn(impl);
}

ScalarFn ScalarFn::cosine(double amp, double omega, double phase) {
    return sinusoid(amp, omega, phase + M_PI / 2.0);
}

ScalarFn ScalarFn::powlaw(double amp, double expo) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Impl::Kind::Pow;
    impl->amp = amp;
    impl->omega = expo;
    return ScalarFn(impl);
}

ScalarFn ScalarFn::scaled(double s) const {
    auto impl = std::make_shared<Impl>(*impl_);
    if (impl->kind == Impl::Kind::Poly) {
        for (auto& c : impl->coeffs) c *= s;
    } else {
        impl->amp *= s;
    }
    return ScalarFn(std::const_pointer_cast<const Impl>(std::shared_ptr<Impl>(std::move(impl))));
}

double ScalarFn::log_weighted_integral(double a, double b) const {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("log_weighted_integral: bounds must be positive");
    if (impl_->kind == Impl::Kind::Poly) {
        const auto& c = impl_->coeffs;
        double acc = c.empty() ? 0.0 : c[0] * std::log(b / a);
        for (size_t k = 1; k < c.size(); ++k)
            acc += c[k] * (std::pow(b, double(k)) - std::pow(a, double(k))) / double(k);
        return acc;
    }
    if (impl_->kind == Impl::Kind::Pow) {
        const double q = impl_->omega;
        if (q == 0.0) return impl_->amp * std::log(b / a);
        return impl_->amp * (std::pow(b, q) - std::pow(a, q)) / q;
    }
    const Impl& f = *impl_;
    return adaptive_simpson([&f](double s) { return f.eval(0, s) / s; }, a, b, 1e-13);
}

bool ScalarFn::is_zero() const {
    if (impl_->kind != Impl::Kind::Poly) return impl_->amp == 0.0;
    return std::all_of(impl_->coeffs.begin(), impl_->coeffs.end(),
                       [](double c) { return c == 0.0; });
}

Mat2 Mat2::rotation(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c, -s, s, c};
}

Mat2 Mat2::outer(const Vec2& u, const Vec2& v) {
    return {u.x * v.x, u.x * v.y, u.y * v.x, u.y * v.y};
}

Mat2 Mat2::mul(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mat2 Mat2::inverse() const {
    const double dt = det();
    if (dt == 0.0) throw std::domain_error("Mat2::inverse: singular matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

Mat9 Mat9::identity() {
    Mat9 r;
    for (int i = 0; i < 9; ++i) r.at(i, i) = 1.0;
    return r;
}

Mat9 Mat9::mul(const Mat9& o) const {
    Mat9 r;
    for (int i = 0; i < 9; ++i)
        for (int k = 0; k < 9; ++k) {
            const double aik = at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < 9; ++j) r.at(i, j) += aik * o.at(k, j);
        }
    return r;
}

std::array<double, 9> Mat9::apply(const std::array<double, 9>& v) const {
    std::array<double, 9> r{};
    for (int i = 0; i < 9; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 9; ++j) acc += at(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

Mat9 Mat9::inverse() const {
    std::array<std::array<double, 18>, 9> aug{};
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) aug[i][j] = at(i, j);
        aug[i][9 + i] = 1.0;
    }
    for (int col = 0; col < 9; ++col) {
        int piv = col;
        for (int r = col + 1; r < 9; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
        if (aug[piv][col] == 0.0) throw std::domain_error("Mat9::inverse: singular matrix");
        std::swap(aug[piv], aug[col]);
        const double s = 1.0 / aug[col][col];
        for (int j = 0; j < 18; ++j) aug[col][j] *= s;
        for (int r = 0; r < 9; ++r) {
            if (r == col) continue;
            const double f = aug[r][col];
            if (f == 0.0) continue;
            for (int j = 0; j < 18; ++j) aug[r][j] -= f * aug[col][j];
        }
    }
    Mat9 inv;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) inv.at(i, j) = aug[i][9 + j];
    return inv;
}

namespace {

double simpson(double h, double fa, double fc, double fb) {
    return (fa + 4.0 * fc + fb) * (h / 6.0);
}

double simpson_ad(const std::function<double(double)>& f, double a, double c, double b,
                  double fa, double fc, double fb, double whole, double tol, int depth) {
    const double ca = 0.5 * (a + c), cb = 0.5 * (c + b);
    const double fca = f(ca), fcb = f(cb);
    const double left = simpson(c - a, fa, fca, fc);
    const double right = simpson(b - c, fc, fcb, fb);
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth <= 0) return left + right + err;
    return simpson_ad(f, a, ca, c, fa, fca, fc, left, 0.5 * tol, depth - 1) +
           simpson_ad(f, c, cb, b, fc, fcb, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    const double c = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fc = f(c);
    const double whole = simpson(b - a, fa, fc, fb);
    return simpson_ad(f, a, c, b, fa, fc, fb, whole, tol, max_depth);
}

double simpson_doubling(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_panels) {
    if (a == b) return 0.0;
    auto composite = [&](int panels) {
        const double h = (b - a) / panels;
        double acc = f(a) + f(b);
        for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
        return acc * h / 3.0;
    };
    int panels = 8;
    double prev = composite(panels);
    while (panels < max_panels) {
        panels *= 2;
        const double cur = composite(panels);
        if (std::abs(cur - prev) < tol) return cur;
        prev = cur;
    }
    return prev;
}

void rk4_integrate(const std::function<void(double, const double*, double*)>& f,
                   double t0, double t1, int steps, std::vector<double>& y) {
    if (steps <= 0) throw std::invalid_argument("rk4_integrate: steps must be positive");
    const size_t n = y.size();
    const double h = (t1 - t0) / steps;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = t0;
    for (int s = 0; s < steps; ++s) {
        f(t, y.data(), k1.data());
        for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        f(t + 0.5 * h, tmp.data(), k2.data());
        for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        f(t + 0.5 * h, tmp.data(), k3.data());
        for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        f(t + h, tmp.data(), k4.data());
        for (size_t i = 0; i < n; ++i)
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = t0 + (s + 1) * h;
    }
}

double deriv5(const std::function<double(double)>& f, double x, double h) {
    return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12.0 * h);
}

double deriv2(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

uint64_t RandomStream::next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double RandomStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_in(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
}

}  // namespace pesym
