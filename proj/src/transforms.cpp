#include "pesym/transforms.hpp"

#include <cmath>

namespace pesym {

namespace {


Mat9 diag9(const std::array<double, 9>& d) {
    Mat9 m;
    for (int i = 0; i < 9; ++i) m.at(i, i) = d[i];
    return m;
}

// Solve the 4x4 system M X = I (Gaussian elimination, partial pivoting).
std::array<std::array<double, 4>, 4> inverse4(const std::array<std::array<double, 4>, 4>& in) {
    std::array<std::array<double, 8>, 4> aug{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) aug[i][j] = in[i][j];
        aug[i][4 + i] = 1.0;
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
        if (aug[piv][col] == 0.0)
            throw std::domain_error("pushforward: independent-variable block is singular");
        std::swap(aug[piv], aug[col]);
        const double s = 1.0 / aug[col][col];
        for (int j = 0; j < 8; ++j) aug[col][j] *= s;
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = aug[r][col];
            for (int j = 0; j < 8; ++j) aug[r][j] -= f * aug[col][j];
        }
    }
    std::array<std::array<double, 4>, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i][j] = aug[i][4 + j];
    return out;
}

}  // namespace

GroupMap identity_map() {
    GroupMap g;
    g.label = "identity";
    g.fwd = [](const Point9& q) { return q; };
    g.inv = [](const Point9& q) { return q; };
    g.base_fwd = [](const Point4& z) { return z; };
    g.base_inv = [](const Point4& z) { return z; };
    g.jac = [](const Point9&) { return Mat9::identity(); };
    return g;
}

GroupMap derotation(double f) {
    const double hf = 0.5 * f;
    GroupMap g;
    g.label = "derotation(f=" + std::to_string(f) + ")";
    g.base_fwd = [hf](const Point4& z) {
        const double c = std::cos(hf * z.t), s = std::sin(hf * z.t);
        return Point4{z.t, c * z.x - s * z.y, s * z.x + c * z.y, z.p};
    };
    g.base_inv = [hf](const Point4& z) {
        const double c = std::cos(hf * z.t), s = std::sin(hf * z.t);
        return Point4{z.t, c * z.x + s * z.y, -s * z.x + c * z.y, z.p};
    };
    g.fwd = [hf](const Point9& q) {
        const double c = std::cos(hf * q.z.t), s = std::sin(hf * q.z.t);
        Point9 out = q;
        out.z.x = c * q.z.x - s * q.z.y;
        out.z.y = s * q.z.x + c * q.z.y;
        out.s.u = c * q.s.u - s * q.s.v - hf * (s * q.z.x + c * q.z.y);
        out.s.v = s * q.s.u + c * q.s.v + hf * (c * q.z.x - s * q.z.y);
        out.s.phi = q.s.phi + 0.5 * hf * hf * (q.z.x * q.z.x + q.z.y * q.z.y);
        return out;
    };
    g.inv = [hf](const Point9& q) {
        const double c = std::cos(hf * q.z.t), s = std::sin(hf * q.z.t);
        Point9 out = q;
        out.z.x = c * q.z.x + s * q.z.y;
        out.z.y = -s * q.z.x + c * q.z.y;
        const double a = q.s.u + hf * q.z.y, b = q.s.v - hf * q.z.x;
        out.s.u = c * a + s * b;
        out.s.v = -s * a + c * b;
        out.s.phi = q.s.phi - 0.5 * hf * hf * (q.z.x * q.z.x + q.z.y * q.z.y);
        return out;
    };
    g.jac = [hf](const Point9& q) {
        const double c = std::cos(hf * q.z.t), s = std::sin(hf * q.z.t);
        const double x = q.z.x, y = q.z.y, u = q.s.u, v = q.s.v;
        Mat9 J = Mat9::identity();
        // x~, y~ rows
        J.at(1, 0) = -hf * (s * x + c * y);
        J.at(1, 1) = c;
        J.at(1, 2) = -s;
        J.at(2, 0) = hf * (c * x - s * y);
        J.at(2, 1) = s;
        J.at(2, 2) = c;
        // u~, v~ rows
        J.at(4, 0) = -hf * (s * u + c * v) - hf * hf * (c * x - s * y);
        J.at(4, 1) = -hf * s;
        J.at(4, 2) = -hf * c;
        J.at(4, 4) = c;
        J.at(4, 5) = -s;
        J.at(5, 0) = hf * (c * u - s * v) - hf * hf * (s * x + c * y);
        J.at(5, 1) = hf * c;
        J.at(5, 2) = -hf * s;
        J.at(5, 4) = s;
        J.at(5, 5) = c;
        // phi~ row
        J.at(7, 1) = hf * hf * x;
        J.at(7, 2) = hf * hf * y;
        return J;
    };
    return g;
}

void SymmetryParams::validate() const {
    if (eps1 == 0.0) throw std::invalid_argument("SymmetryParams: time scale must be nonzero");
    if (!(eps2 > 0.0)) throw std::invalid_argument("SymmetryParams: horizontal scale must be positive");
    if (!(eps3 > 0.0)) throw std::invalid_argument("SymmetryParams: pressure scale must be positive");
}

Mat2 SymmetryParams::orth() const {
    Mat2 O = Mat2::rotation(angle);
    if (reflect) {
        // multiply by diag(1,-1) on the right: flip the second column
        O.b = -O.b;
        O.d = -O.d;
    }
    return O;
}

GroupMap symmetry_map(const SymmetryParams& params, const PhysConsts& consts,
                      Perturb perturb, double factor) {
    params.validate();
    consts.validate();
    const SymmetryParams P = params;
    const Mat2 O = P.orth();
    const Mat2 Ot = O.transpose();
    const double kap = consts.kappa();
    const double cp = consts.cp;
    const double wscale = (P.eps3 / P.eps1) * (perturb == Perturb::OmegaScale ? factor : 1.0);
    const double Tscale =
        (P.eps2 * P.eps2 / (P.eps1 * P.eps1)) * (perturb == Perturb::TScale ? factor : 1.0);
    const double phiscale = P.eps2 * P.eps2 / (P.eps1 * P.eps1);

    GroupMap g;
    g.label = "symmetry-map";
    g.base_fwd = [=](const Point4& z) {
        const Vec2 xx = O.apply({z.x, z.y}) * P.eps2;
        return Point4{P.eps1 * z.t + P.eps0, xx.x + P.beta1(z.t), xx.y + P.beta2(z.t),
                      P.eps3 * z.p};
    };
    g.base_inv = [=](const Point4& z) {
        const double t = (z.t - P.eps0) / P.eps1;
        const Vec2 xx = Ot.apply({(z.x - P.beta1(t)) / P.eps2, (z.y - P.beta2(t)) / P.eps2});
        return Point4{t, xx.x, xx.y, z.p / P.eps3};
    };
    g.fwd = [=](const Point9& q) {
        const double t = q.z.t, p = q.z.p;
        Point9 out;
        out.z = g.base_fwd(q.z);
        const Vec2 vv = O.apply({q.s.u, q.s.v}) * (P.eps2 / P.eps1);
        out.s.u = vv.x + P.beta1.d1(t) / P.eps1;
        out.s.v = vv.y + P.beta2.d1(t) / P.eps1;
        out.s.w = wscale * q.s.w;
        const Vec2 Ox = O.apply({q.z.x, q.z.y});
        const double btt_dot_Ox = P.beta1.d2(t) * Ox.x + P.beta2.d2(t) * Ox.y;
        out.s.phi = phiscale * q.s.phi + P.eps4 * cp * std::pow(p, kap) -
                    (P.eps2 / (P.eps1 * P.eps1)) * btt_dot_Ox + P.alpha(t);
        out.s.T = Tscale * q.s.T - P.eps4 * std::pow(p, kap);
        return out;
    };
    g.inv = [=](const Point9& q) {
        Point9 out;
        out.z = g.base_inv(q.z);
        const double t = out.z.t, p = out.z.p;
        const Vec2 vv = Ot.apply({q.s.u - P.beta1.d1(t) / P.eps1, q.s.v - P.beta2.d1(t) / P.eps1});
        out.s.u = vv.x * (P.eps1 / P.eps2);
        out.s.v = vv.y * (P.eps1 / P.eps2);
        out.s.w = q.s.w / wscale;
        out.s.T = (q.s.T + P.eps4 * std::pow(p, kap)) / Tscale;
        const Vec2 Ox = O.apply({out.z.x, out.z.y});
        const double btt_dot_Ox = P.beta1.d2(t) * Ox.x + P.beta2.d2(t) * Ox.y;
        out.s.phi = (q.s.phi - P.eps4 * cp * std::pow(p, kap) +
                     (P.eps2 / (P.eps1 * P.eps1)) * btt_dot_Ox - P.alpha(t)) /
                    phiscale;
        return out;
    };
    g.jac = [=](const Point9& q) {
        const double t = q.z.t, p = q.z.p;
        Mat9 J;
        J.at(0, 0) = P.eps1;
        J.at(1, 0) = P.beta1.d1(t);
        J.at(1, 1) = P.eps2 * O.a;
        J.at(1, 2) = P.eps2 * O.b;
        J.at(2, 0) = P.beta2.d1(t);
        J.at(2, 1) = P.eps2 * O.c;
        J.at(2, 2) = P.eps2 * O.d;
        J.at(3, 3) = P.eps3;
        J.at(4, 0) = P.beta1.d2(t) / P.eps1;
        J.at(4, 4) = (P.eps2 / P.eps1) * O.a;
        J.at(4, 5) = (P.eps2 / P.eps1) * O.b;
        J.at(5, 0) = P.beta2.d2(t) / P.eps1;
        J.at(5, 4) = (P.eps2 / P.eps1) * O.c;
        J.at(5, 5) = (P.eps2 / P.eps1) * O.d;
        J.at(6, 6) = wscale;
        const Vec2 Ox = O.apply({q.z.x, q.z.y});
        const double c1 = P.eps2 / (P.eps1 * P.eps1);
        J.at(7, 0) = -c1 * (P.beta1.d3(t) * Ox.x + P.beta2.d3(t) * Ox.y) + P.alpha.d1(t);
        // gradient of beta_tt . O x in x and y: O^T beta_tt
        J.at(7, 1) = -c1 * (P.beta1.d2(t) * O.a + P.beta2.d2(t) * O.c);
        J.at(7, 2) = -c1 * (P.beta1.d2(t) * O.b + P.beta2.d2(t) * O.d);
        J.at(7, 3) = P.eps4 * cp * kap * std::pow(p, kap - 1.0);
        J.at(7, 7) = phiscale;
        J.at(8, 3) = -P.eps4 * kap * std::pow(p, kap - 1.0);
        J.at(8, 8) = Tscale;
        return J;
    };
    return g;
}

std::pair<GroupMap, GroupMap> discrete_involutions() {
    GroupMap g1;
    g1.label = "time-velocity reversal";
    auto flip1 = [](const Point9& q) {
        Point9 out = q;
        out.z.t = -q.z.t;
        out.s.u = -q.s.u;
        out.s.v = -q.s.v;
        out.s.w = -q.s.w;
        return out;
    };
    g1.fwd = flip1;
    g1.inv = flip1;
    g1.base_fwd = [](const Point4& z) { return Point4{-z.t, z.x, z.y, z.p}; };
    g1.base_inv = g1.base_fwd;
    g1.jac = [](const Point9&) { return diag9({-1, 1, 1, 1, -1, -1, -1, 1, 1}); };

    GroupMap g2;
    g2.label = "x-u mirror";
    auto flip2 = [](const Point9& q) {
        Point9 out = q;
        out.z.x = -q.z.x;
        out.s.u = -q.s.u;
        return out;
    };
    g2.fwd = flip2;
    g2.inv = flip2;
    g2.base_fwd = [](const Point4& z) { return Point4{z.t, -z.x, z.y, z.p}; };
    g2.base_inv = g2.base_fwd;
    g2.jac = [](const Point9&) { return diag9({1, -1, 1, 1, -1, 1, 1, 1, 1}); };
    return {g1, g2};
}

GroupMap compose(const GroupMap& g1, const GroupMap& g2) {
    GroupMap g;
    g.label = g1.label + " o " + g2.label;
    g.fwd = [g1, g2](const Point9& q) { return g1.fwd(g2.fwd(q)); };
    g.inv = [g1, g2](const Point9& q) { return g2.inv(g1.inv(q)); };
    g.base_fwd = [g1, g2](const Point4& z) { return g1.base_fwd(g2.base_fwd(z)); };
    g.base_inv = [g1, g2](const Point4& z) { return g2.base_inv(g1.base_inv(z)); };
    g.jac = [g1, g2](const Point9& q) { return g1.jac(g2.fwd(q)).mul(g2.jac(q)); };
    return g;
}

GroupMap invert(const GroupMap& g) {
    GroupMap out;
    out.label = "inverse(" + g.label + ")";
    out.fwd = g.inv;
    out.inv = g.fwd;
    out.base_fwd = g.base_inv;
    out.base_inv = g.base_fwd;
    out.jac = [g](const Point9& q) { return g.jac(g.inv(q)).inverse(); };
    return out;
}

namespace {

class PushedField final : public StateField {
public:
    PushedField(GroupMap g, FieldPtr src) : g_(std::move(g)), src_(std::move(src)) {}

    StateValue eval(const Point4& z) const override {
        const Point4 z0 = g_.base_inv(z);
        const Point9 q{z0, src_->eval(z0)};
        return g_.fwd(q).s;
    }

    bool has_exact_partials() const override { return src_->has_exact_partials(); }

    Partials partials(const Point4& z) const override {
        if (!(mode() == DerivMode::Exact && has_exact_partials()))
            return StateField::partials(z);
        const Point4 z0 = g_.base_inv(z);
        const Point9 q{z0, src_->eval(z0)};
        const Partials S = src_->partials(z0);
        const Mat9 J = g_.jac(q);
        // dep rows of J split into dF/dz (5x4) and dF/ds (5x5)
        std::array<std::array<double, 4>, 4> base{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) base[i][j] = J.at(i, j);
        const auto binv = inverse4(base);
        Partials out;
        for (int c = 0; c < 5; ++c) {
            double m[4];
            for (int j = 0; j < 4; ++j) {
                double acc = J.at(4 + c, j);
                for (int b = 0; b < 5; ++b) acc += J.at(4 + c, 4 + b) * S.d[b][j];
                m[j] = acc;
            }
            for (int j = 0; j < 4; ++j) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += m[k] * binv[k][j];
                out.d[c][j] = acc;
            }
        }
        return out;
    }

protected:
    double exact_partial(const Point4& z, Var v, Comp c) const override {
        return partials(z).at(c, v);
    }

private:
    GroupMap g_;
    FieldPtr src_;
};

}  // namespace

FieldPtr pushforward_field(const GroupMap& g, FieldPtr field) {
    return std::make_shared<PushedField>(g, std::move(field));
}

HeatingField pushforward_heating(const GroupMap& g, const HeatingField& J) {
    if (J.is_zero()) return HeatingField::zero();
    return HeatingField([g, J](const Point4& z) { return J(g.base_inv(z)); });
}

std::array<double, 9> pushforward_vf(const GroupMap& g, const VectorFieldSpec& vf,
                                     const Point9& pt) {
    return g.jac(pt).apply(vf.coeffs(pt));
}

Mat9 jacobian_fd(const GroupMap& g, const Point9& pt, double h) {
    Mat9 J;
    for (int j = 0; j < 9; ++j) {
        Point9 plus = pt, minus = pt;
        plus[j] += h;
        minus[j] -= h;
        const Point9 fp = g.fwd(plus), fm = g.fwd(minus);
        for (int i = 0; i < 9; ++i) J.at(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    return J;
}

SymmetryParams random_symmetry_params(RandomStream& rng) {
    SymmetryParams P;
    P.eps0 = rng.next_in(-0.3, 0.3);
    P.eps1 = rng.next_in(0.7, 1.5) * (rng.next_unit() < 0.5 ? -1.0 : 1.0);
    P.eps2 = rng.next_in(0.7, 1.4);
    P.eps3 = rng.next_in(0.7, 1.4);
    P.eps4 = rng.next_in(-0.5, 0.5);
    P.angle = rng.next_in(0.0, 2.0 * M_PI);
    P.reflect = rng.next_unit() < 0.5;
    P.beta1 = ScalarFn::poly({rng.next_in(-0.3, 0.3), rng.next_in(-0.3, 0.3),
                              rng.next_in(-0.2, 0.2), rng.next_in(-0.1, 0.1)});
    P.beta2 = ScalarFn::sinusoid(rng.next_in(-0.3, 0.3), rng.next_in(0.5, 2.0),
                                 rng.next_in(0.0, 2.0 * M_PI));
    P.alpha = ScalarFn::poly({rng.next_in(-0.5, 0.5), rng.next_in(-0.5, 0.5)});
    return P;
}

}  // namespace pesym
