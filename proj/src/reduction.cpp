#include "pesym/reduction.hpp"

#include <cmath>

namespace pesym {

double ReductionSpec::delta(double t) const {
    return gamma1(t) * sigma2(t) - gamma2(t) * sigma1(t);
}

double ReductionSpec::delta_t(double t) const {
    return gamma1.d1(t) * sigma2(t) + gamma1(t) * sigma2.d1(t) - gamma2.d1(t) * sigma1(t) -
           gamma2(t) * sigma1.d1(t);
}

double ReductionSpec::delta_tt(double t) const {
    return gamma1.d2(t) * sigma2(t) + 2.0 * gamma1.d1(t) * sigma2.d1(t) +
           gamma1(t) * sigma2.d2(t) - gamma2.d2(t) * sigma1(t) -
           2.0 * gamma2.d1(t) * sigma1.d1(t) - gamma2(t) * sigma1.d2(t);
}

Mat2 ReductionSpec::coupling(double t) const {
    const Vec2 g1{gamma1.d1(t), gamma2.d1(t)};
    const Vec2 s1{sigma1.d1(t), sigma2.d1(t)};
    const Vec2 gp = gamma(t).perp();
    const Vec2 sp = sigma(t).perp();
    const double d = delta(t);
    if (d == 0.0) throw std::domain_error("ReductionSpec: delta vanished");
    return (Mat2::outer(g1, sp) - Mat2::outer(s1, gp)) * (1.0 / d);
}

Vec2 ReductionSpec::gauge_weight(double t) const {
    return sigma(t).perp() * a1 - gamma(t).perp() * a2;
}

CompatReport check_compatibility(const ReductionSpec& spec, int n_samples) {
    CompatReport rep;
    rep.min_delta = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_samples; ++i) {
        const double t =
            spec.t_lo + (spec.t_hi - spec.t_lo) * (n_samples == 1 ? 0.0 : double(i) / (n_samples - 1));
        const Vec2 gtt{spec.gamma1.d2(t), spec.gamma2.d2(t)};
        const Vec2 stt{spec.sigma1.d2(t), spec.sigma2.d2(t)};
        rep.max_defect =
            std::max(rep.max_defect, std::abs(gtt.dot(spec.sigma(t)) - stt.dot(spec.gamma(t))));
        rep.min_delta = std::min(rep.min_delta, spec.delta(t));
    }
    return rep;
}

void ReductionSpec::validate(int n_samples) const {
    consts.validate();
    if (!(t_lo <= t0 && t0 <= t_hi))
        throw std::invalid_argument("ReductionSpec: anchor time outside the t-range");
    if (!(p0 > 0.0)) throw std::invalid_argument("ReductionSpec: anchor pressure must be positive");
    if (steps_per_unit < 100)
        throw std::invalid_argument("ReductionSpec: at least 100 steps per unit time");
    const CompatReport rep = check_compatibility(*this, n_samples);
    if (rep.max_defect > 1e-10)
        throw std::invalid_argument("ReductionSpec: boost pair is not commuting (defect " +
                                    std::to_string(rep.max_defect) + ")");
    if (!(rep.min_delta > 0.0))
        throw std::invalid_argument("ReductionSpec: delta must stay positive on the t-range");
}

// ---------- fundamental matrix ----------

FundamentalMatrix::FundamentalMatrix(std::function<Mat2(double)> H, double t0, double lo,
                                     double hi, int steps_per_unit)
    : H_(std::move(H)), t0_(t0) {
    if (!(lo <= t0 && t0 <= hi))
        throw std::invalid_argument("FundamentalMatrix: anchor outside range");
    auto rhs = [this](double t, const double* y, double* dy) {
        const Mat2 A = H_(t);
        const Mat2 G{y[0], y[1], y[2], y[3]};
        const Mat2 Gi{y[4], y[5], y[6], y[7]};
        const Mat2 dG = A.mul(G);
        const Mat2 dGi = Gi.mul(A) * -1.0;
        dy[0] = dG.a; dy[1] = dG.b; dy[2] = dG.c; dy[3] = dG.d;
        dy[4] = dGi.a; dy[5] = dGi.b; dy[6] = dGi.c; dy[7] = dGi.d;
    };
    auto make_side = [&](double target, std::vector<Node>& side, double& hstep) {
        side.clear();
        const double span = std::abs(target - t0_);
        const int steps = std::max(1, static_cast<int>(std::ceil(steps_per_unit * span)));
        hstep = (target - t0_) / steps;
        std::vector<double> y{1, 0, 0, 1, 1, 0, 0, 1};
        auto record = [&](double t) {
            Node nd;
            nd.t = t;
            nd.G = {y[0], y[1], y[2], y[3]};
            nd.Gi = {y[4], y[5], y[6], y[7]};
            const Mat2 A = H_(t);
            nd.dG = A.mul(nd.G);
            nd.dGi = nd.Gi.mul(A) * -1.0;
            side.push_back(nd);
        };
        record(t0_);
        for (int s = 0; s < steps; ++s) {
            rk4_integrate(rhs, t0_ + s * hstep, t0_ + (s + 1) * hstep, 1, y);
            record(t0_ + (s + 1) * hstep);
        }
    };
    if (hi > t0_) make_side(hi, fwd_, h_fwd_);
    if (lo < t0_) make_side(lo, bwd_, h_bwd_);
    if (fwd_.empty()) make_side(t0_, fwd_, h_fwd_);  // degenerate range
}

Mat2 FundamentalMatrix::interp(double t, bool inv) const {
    const std::vector<Node>& side = (t >= t0_ || bwd_.empty()) ? fwd_ : bwd_;
    const double h = (&side == &fwd_) ? h_fwd_ : h_bwd_;
    if (side.size() == 1 || h == 0.0) return inv ? side[0].Gi : side[0].G;
    double s = (t - t0_) / h;
    s = std::min(std::max(s, 0.0), static_cast<double>(side.size() - 1));
    size_t k = std::min(static_cast<size_t>(s), side.size() - 2);
    const Node& n0 = side[k];
    const Node& n1 = side[k + 1];
    const double dt = n1.t - n0.t;
    const double u = (t - n0.t) / dt;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    const Mat2& A0 = inv ? n0.Gi : n0.G;
    const Mat2& A1 = inv ? n1.Gi : n1.G;
    const Mat2& D0 = inv ? n0.dGi : n0.dG;
    const Mat2& D1 = inv ? n1.dGi : n1.dG;
    return A0 * h00 + D0 * (h10 * dt) + A1 * h01 + D1 * (h11 * dt);
}

Mat2 FundamentalMatrix::eval(double t) const { return interp(t, false); }
Mat2 FundamentalMatrix::eval_inv(double t) const { return interp(t, true); }

double FundamentalMatrix::node_consistency() const {
    double worst = 0.0;
    auto check = [&](const std::vector<Node>& side) {
        for (const auto& nd : side) {
            const Mat2 P = nd.G.mul(nd.Gi);
            worst = std::max({worst, std::abs(P.a - 1.0), std::abs(P.b), std::abs(P.c),
                              std::abs(P.d - 1.0)});
        }
    };
    check(fwd_);
    check(bwd_);
    return worst;
}

std::vector<double> FundamentalMatrix::nodes() const {
    std::vector<double> out;
    for (auto it = bwd_.rbegin(); it != bwd_.rend(); ++it) out.push_back(it->t);
    for (const auto& nd : fwd_)
        if (out.empty() || nd.t != out.back()) out.push_back(nd.t);
    return out;
}

FundamentalMatrix solve_reduced_fundamental(const ReductionSpec& spec, int steps_per_unit) {
    ReductionSpec s = spec;
    return FundamentalMatrix([s](double t) { return s.coupling(t) * -1.0; }, spec.t0,
                             spec.t_lo, spec.t_hi, steps_per_unit);
}

double theta(const ReductionSpec& spec, double t) {
    const double lo = std::min(spec.t0, t), hi = std::max(spec.t0, t);
    for (int i = 0; i <= 64; ++i) {
        const double s = lo + (hi - lo) * i / 64.0;
        if (!(spec.delta(s) > 0.0))
            throw std::domain_error("theta: delta must stay positive on the integration range");
    }
    const ScalarFn chi = spec.chi, g1 = spec.gamma1, g2 = spec.gamma2, s1 = spec.sigma1,
                   s2 = spec.sigma2;
    return adaptive_simpson(
        [=](double s) { return chi(s) / (g1(s) * s2(s) - g2(s) * s1(s)); }, spec.t0, t, 1e-13);
}

// ---------- assembled solution ----------

struct ReducedSolution::Trace {
    Mat2 G, Gi;
    double Theta = 0;
    Vec2 I{}, Ixi{};
    double J = 0, Jxi = 0;
    double t = 0, xi = 0;
};

namespace {

struct SpecFrame {
    double delta, delta1, delta2;
    Vec2 g, g1, s, s1;
    Vec2 w, w1;
    Mat2 A;
};

SpecFrame frame_of(const ReductionSpec& sp, double t) {
    SpecFrame f;
    f.delta = sp.delta(t);
    f.delta1 = sp.delta_t(t);
    f.delta2 = sp.delta_tt(t);
    f.g = sp.gamma(t);
    f.g1 = {sp.gamma1.d1(t), sp.gamma2.d1(t)};
    f.s = sp.sigma(t);
    f.s1 = {sp.sigma1.d1(t), sp.sigma2.d1(t)};
    f.w = sp.gauge_weight(t);
    f.w1 = f.s1.perp() * sp.a1 - f.g1.perp() * sp.a2;
    f.A = sp.coupling(t);
    return f;
}

}  // namespace

ReducedSolution::ReducedSolution(ReductionSpec spec)
    : spec_(std::move(spec)), has_gauge_(spec_.a1 != 0.0 || spec_.a2 != 0.0) {
    spec_.validate();
    if (has_gauge_) {
        // the (xi + Theta)^kappa kernel needs a positive argument everywhere a
        // standard-box evaluation can reach
        for (int it = 0; it <= 16; ++it) {
            const double t = spec_.t_lo + (spec_.t_hi - spec_.t_lo) * it / 16.0;
            const double Th_t = Theta(t);
            for (double p : {0.05, 0.2, 1.0}) {
                const double xi = p * spec_.delta(t) - Th_t;
                for (int jt = 0; jt <= 16; ++jt) {
                    const double tau = spec_.t0 + (t - spec_.t0) * jt / 16.0;
                    if (xi + Theta(tau) <= 0.0 && p >= 0.2)
                        throw std::invalid_argument(
                            "ReducedSolution: kernel argument not positive over the box");
                }
            }
        }
    }
}

double ReducedSolution::Theta(double t) const {
    const ReductionSpec& sp = spec_;
    return adaptive_simpson(
        [&sp](double s) { return sp.chi(s) * sp.delta(s); }, sp.t0, t, 1e-13);
}

double ReducedSolution::xi_of(double t, double p) const {
    return p * spec_.delta(t) - Theta(t);
}

ReducedSolution::Trace ReducedSolution::run(double t, double xi) const {
    const ReductionSpec& sp = spec_;
    const double kap = sp.consts.kappa();
    const double cp = sp.consts.cp;
    const bool gauge = has_gauge_;
    const Vec2 v0{sp.v0x(xi), sp.v0y(xi)};
    const Vec2 v0d{sp.v0x.d1(xi), sp.v0y.d1(xi)};

    std::vector<double> y(15, 0.0);
    y[0] = y[3] = y[4] = y[7] = 1.0;  // G = Gi = identity
    auto rhs = [&](double tau, const double* s, double* ds) {
        const SpecFrame f = frame_of(sp, tau);
        const Mat2 G{s[0], s[1], s[2], s[3]};
        const Mat2 Gi{s[4], s[5], s[6], s[7]};
        const Mat2 dG = f.A.mul(G) * -1.0;
        const Mat2 dGi = Gi.mul(f.A);
        ds[0] = dG.a; ds[1] = dG.b; ds[2] = dG.c; ds[3] = dG.d;
        ds[4] = dGi.a; ds[5] = dGi.b; ds[6] = dGi.c; ds[7] = dGi.d;
        ds[8] = sp.chi(tau) * f.delta;  // Theta
        Vec2 dI{}, dIxi{};
        if (gauge) {
            const double arg = xi + s[8];
            if (!(arg > 0.0))
                throw std::domain_error("ReducedSolution: kernel argument became nonpositive");
            const double base = std::pow(f.delta, -kap - 1.0);
            const Vec2 Giw = Gi.apply(f.w);
            dI = Giw * (base * std::pow(arg, kap));
            dIxi = Giw * (base * kap * std::pow(arg, kap - 1.0));
        }
        ds[9] = dI.x; ds[10] = dI.y;
        ds[11] = dIxi.x; ds[12] = dIxi.y;
        const Vec2 vcheck = v0 - Vec2{s[9], s[10]} * cp;
        const Vec2 vcheck_xi = v0d - Vec2{s[11], s[12]} * cp;
        ds[13] = f.w.dot(G.apply(vcheck)) / f.delta;
        ds[14] = f.w.dot(G.apply(vcheck_xi)) / f.delta;
    };
    if (t != sp.t0) {
        const int steps =
            std::max(1, static_cast<int>(std::ceil(sp.steps_per_unit * std::abs(t - sp.t0))));
        rk4_integrate(rhs, sp.t0, t, steps, y);
    }
    Trace tr;
    tr.G = {y[0], y[1], y[2], y[3]};
    tr.Gi = {y[4], y[5], y[6], y[7]};
    tr.Theta = y[8];
    tr.I = {y[9], y[10]};
    tr.Ixi = {y[11], y[12]};
    tr.J = y[13];
    tr.Jxi = y[14];
    tr.t = t;
    tr.xi = xi;
    return tr;
}

void ReducedSolution::batch_run(double t, const std::vector<double>& xis, bool with_derivs,
                                std::vector<double>& That_out,
                                std::vector<double>& That_t_out) const {
    const ReductionSpec& sp = spec_;
    const double kap = sp.consts.kappa();
    const double cp = sp.consts.cp;
    const bool gauge = has_gauge_;
    const size_t K = xis.size();
    const size_t blk = with_derivs ? 6 : 3;  // per-xi states: I(2)[,Ixi(2)], J(1)[,Jxi(1)]
    std::vector<Vec2> v0(K), v0d(K);
    for (size_t k = 0; k < K; ++k) {
        v0[k] = {sp.v0x(xis[k]), sp.v0y(xis[k])};
        v0d[k] = {sp.v0x.d1(xis[k]), sp.v0y.d1(xis[k])};
    }
    std::vector<double> y(9 + blk * K, 0.0);
    y[0] = y[3] = y[4] = y[7] = 1.0;
    auto rhs = [&](double tau, const double* s, double* ds) {
        const SpecFrame f = frame_of(sp, tau);
        const Mat2 G{s[0], s[1], s[2], s[3]};
        const Mat2 Gi{s[4], s[5], s[6], s[7]};
        const Mat2 dG = f.A.mul(G) * -1.0;
        const Mat2 dGi = Gi.mul(f.A);
        ds[0] = dG.a; ds[1] = dG.b; ds[2] = dG.c; ds[3] = dG.d;
        ds[4] = dGi.a; ds[5] = dGi.b; ds[6] = dGi.c; ds[7] = dGi.d;
        ds[8] = sp.chi(tau) * f.delta;
        const Vec2 Giw = gauge ? Gi.apply(f.w) : Vec2{};
        const double base = gauge ? std::pow(f.delta, -kap - 1.0) : 0.0;
        for (size_t k = 0; k < K; ++k) {
            double* d = ds + 9 + blk * k;
            const double* st = s + 9 + blk * k;
            Vec2 dI{}, dIxi{};
            if (gauge) {
                const double arg = xis[k] + s[8];
                if (!(arg > 0.0))
                    throw std::domain_error("ReducedSolution: kernel argument became nonpositive");
                dI = Giw * (base * std::pow(arg, kap));
                if (with_derivs) dIxi = Giw * (base * kap * std::pow(arg, kap - 1.0));
            }
            d[0] = dI.x;
            d[1] = dI.y;
            const Vec2 vcheck = v0[k] - Vec2{st[0], st[1]} * cp;
            if (with_derivs) {
                d[2] = dIxi.x;
                d[3] = dIxi.y;
                d[4] = f.w.dot(G.apply(vcheck)) / f.delta;
                const Vec2 vcheck_xi = v0d[k] - Vec2{st[2], st[3]} * cp;
                d[5] = f.w.dot(G.apply(vcheck_xi)) / f.delta;
            } else {
                d[2] = f.w.dot(G.apply(vcheck)) / f.delta;
            }
        }
    };
    if (t != sp.t0) {
        const int steps =
            std::max(1, static_cast<int>(std::ceil(sp.steps_per_unit * std::abs(t - sp.t0))));
        rk4_integrate(rhs, sp.t0, t, steps, y);
    }
    That_out.assign(K, 0.0);
    That_t_out.assign(K, 0.0);
    const SpecFrame f = frame_of(sp, t);
    const Mat2 G{y[0], y[1], y[2], y[3]};
    for (size_t k = 0; k < K; ++k) {
        const double* st = y.data() + 9 + blk * k;
        const double Jv = with_derivs ? st[4] : st[2];
        That_out[k] = sp.T0(xis[k]) + Jv;
        if (with_derivs) {
            const Vec2 vcheck = v0[k] - Vec2{st[0], st[1]} * cp;
            const double L = f.w.dot(G.apply(vcheck)) / f.delta;
            // d xi/dt at fixed pressure s where xi_k = s*delta - Theta:
            // s = (xi_k + Theta)/delta
            const double s_of_xi = (xis[k] + y[8]) / f.delta;
            const double xi_t = s_of_xi * f.delta1 - sp.chi(t) * f.delta;
            const double That_xi = sp.T0.d1(xis[k]) + st[5];
            That_t_out[k] = L + That_xi * xi_t;
        }
    }
}

namespace {

// Reduced profiles and their (t,p)-derivatives, assembled from one trace.
struct Profiles {
    Vec2 vh, vh_t, vh_p;
    double That, That_t, That_p;
};

}  // namespace

struct ReducedSolution::Derivs : Profiles {};

ReducedSolution::Derivs ReducedSolution::profiles(double t, double p, const Trace& tr) const {
    const SpecFrame f = frame_of(spec_, t);
    const double cp = spec_.consts.cp;
    const double kap = spec_.consts.kappa();
    const Vec2 vcheck{spec_.v0x(tr.xi) - cp * tr.I.x, spec_.v0y(tr.xi) - cp * tr.I.y};
    const Vec2 vcheck_xi{spec_.v0x.d1(tr.xi) - cp * tr.Ixi.x,
                         spec_.v0y.d1(tr.xi) - cp * tr.Ixi.y};
    const double xi_t = p * f.delta1 - spec_.chi(t) * f.delta;
    Derivs d;
    d.vh = tr.G.apply(vcheck);
    d.vh_p = tr.G.apply(vcheck_xi) * f.delta;
    Vec2 dcheck = vcheck_xi * xi_t;
    if (has_gauge_) {
        const Vec2 K = tr.Gi.apply(f.w) * (std::pow(p, kap) / f.delta);
        dcheck = dcheck - K * cp;
    }
    d.vh_t = f.A.apply(d.vh) * -1.0 + tr.G.apply(dcheck);
    d.That = spec_.T0(tr.xi) + tr.J;
    d.That_p = (spec_.T0.d1(tr.xi) + tr.Jxi) * f.delta;
    const double L = f.w.dot(d.vh) / f.delta;
    d.That_t = L + (spec_.T0.d1(tr.xi) + tr.Jxi) * xi_t;
    return d;
}

Vec2 ReducedSolution::vhat(double t, double p) const {
    return profiles(t, p, run(t, xi_of(t, p))).vh;
}

Vec2 ReducedSolution::vhat_p(double t, double p) const {
    return profiles(t, p, run(t, xi_of(t, p))).vh_p;
}

Vec2 ReducedSolution::vhat_t(double t, double p) const {
    return profiles(t, p, run(t, xi_of(t, p))).vh_t;
}

double ReducedSolution::That(double t, double p) const {
    return profiles(t, p, run(t, xi_of(t, p))).That;
}

double ReducedSolution::That_p(double t, double p) const {
    return profiles(t, p, run(t, xi_of(t, p))).That_p;
}

double ReducedSolution::That_t(double t, double p) const {
    return profiles(t, p, run(t, xi_of(t, p))).That_t;
}

double ReducedSolution::omega_hat(double t, double p) const {
    return -(spec_.delta_t(t) / spec_.delta(t)) * p + spec_.chi(t);
}

// The hydrostatic quadrature runs over u = s^kappa, which absorbs the
// s^(kappa-1) weight: int s^(kappa-1) That ds = (1/kappa) int That(t, u^(1/kappa)) du.
double ReducedSolution::phihat(double t, double p) const {
    const ReductionSpec& sp = spec_;
    if (p == sp.p0) return 0.0;
    const double kap = sp.consts.kappa();
    const int nodes = 2 * sp.phi_panels + 1;
    const double Th = Theta(t);
    const double d = sp.delta(t);
    const double u_lo = std::pow(sp.p0, kap), u_hi = std::pow(p, kap);
    std::vector<double> xis(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double u = u_lo + (u_hi - u_lo) * i / (nodes - 1.0);
        xis[i] = std::pow(u, 1.0 / kap) * d - Th;
    }
    std::vector<double> That_v, That_t_v;
    batch_run(t, xis, false, That_v, That_t_v);
    const double h = (u_hi - u_lo) / (nodes - 1.0);
    double acc = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double wgt = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += wgt * That_v[i];
    }
    return -(sp.consts.R / kap) * acc * h / 3.0;
}

StateValue ReducedSolution::eval(const Point4& z) const {
    const ReductionSpec& sp = spec_;
    const SpecFrame f = frame_of(sp, z.t);
    const double kap = sp.consts.kappa();
    const Trace tr = run(z.t, xi_of(z.t, z.p));
    const Vec2 vcheck{sp.v0x(tr.xi) - sp.consts.cp * tr.I.x,
                      sp.v0y(tr.xi) - sp.consts.cp * tr.I.y};
    const Vec2 vh = tr.G.apply(vcheck);
    const double Th_val = sp.T0(tr.xi) + tr.J;
    const Vec2 x{z.x, z.y};
    const double sx = f.s.perp().dot(x), gx = f.g.perp().dot(x);
    const Vec2 gtt{sp.gamma1.d2(z.t), sp.gamma2.d2(z.t)};
    const Vec2 stt{sp.sigma1.d2(z.t), sp.sigma2.d2(z.t)};
    const double pk = std::pow(z.p, kap);
    StateValue out;
    out.u = vh.x + (sx * f.g1.x - gx * f.s1.x) / f.delta;
    out.v = vh.y + (sx * f.g1.y - gx * f.s1.y) / f.delta;
    out.w = omega_hat(z.t, z.p);
    out.T = pk * Th_val - (pk / f.delta) * f.w.dot(x);
    out.phi = phihat(z.t, z.p) + sp.consts.cp * (pk / f.delta) * f.w.dot(x) -
              sx * gtt.dot(x) / (2.0 * f.delta) + gx * stt.dot(x) / (2.0 * f.delta);
    return out;
}

Partials ReducedSolution::partials(const Point4& z) const {
    const ReductionSpec& sp = spec_;
    const SpecFrame f = frame_of(sp, z.t);
    const double kap = sp.consts.kappa();
    const double cp = sp.consts.cp;
    const double R = sp.consts.R;
    const double xi = xi_of(z.t, z.p);
    const Trace tr = run(z.t, xi);

    const Vec2 vcheck{sp.v0x(xi) - cp * tr.I.x, sp.v0y(xi) - cp * tr.I.y};
    const Vec2 vcheck_xi{sp.v0x.d1(xi) - cp * tr.Ixi.x, sp.v0y.d1(xi) - cp * tr.Ixi.y};
    const Vec2 vh = tr.G.apply(vcheck);
    const double xi_t = z.p * f.delta1 - sp.chi(z.t) * f.delta;

    Vec2 dvh_t = vcheck_xi * xi_t;
    if (has_gauge_) {
        const Vec2 K = tr.Gi.apply(f.w) * (std::pow(z.p, kap) / f.delta);
        dvh_t = dvh_t - K * cp;
    }
    const Vec2 vh_t = f.A.apply(vh) * -1.0 + tr.G.apply(dvh_t);
    const Vec2 vh_p = tr.G.apply(vcheck_xi) * f.delta;

    const double Th_val = sp.T0(xi) + tr.J;
    const double Th_xi = sp.T0.d1(xi) + tr.Jxi;
    const double L = f.w.dot(tr.G.apply(vcheck)) / f.delta;
    const double Th_t = L + Th_xi * xi_t;
    const double Th_p = Th_xi * f.delta;

    const Vec2 x{z.x, z.y};
    const Vec2 gp = f.g.perp(), sig_p = f.s.perp();
    const Vec2 gp1 = f.g1.perp(), sp1 = f.s1.perp();
    const double sx = sig_p.dot(x), gx = gp.dot(x);
    const Vec2 gtt{sp.gamma1.d2(z.t), sp.gamma2.d2(z.t)};
    const Vec2 stt{sp.sigma1.d2(z.t), sp.sigma2.d2(z.t)};
    const Vec2 gttt{sp.gamma1.d3(z.t), sp.gamma2.d3(z.t)};
    const Vec2 sttt{sp.sigma1.d3(z.t), sp.sigma2.d3(z.t)};
    const double pk = std::pow(z.p, kap);
    const double pkm1 = std::pow(z.p, kap - 1.0);
    const double wx = f.w.dot(x), w1x = f.w1.dot(x);

    // phihat_t needs the p-quadrature of That_t (same u = s^kappa substitution)
    double phihat_t = 0.0;
    if (z.p != sp.p0) {
        const int nodes = 2 * sp.phi_panels + 1;
        std::vector<double> xis(nodes);
        const double Th_anchor = tr.Theta;  // Theta(t) from the shared run
        const double u_lo = std::pow(sp.p0, kap), u_hi = std::pow(z.p, kap);
        for (int i = 0; i < nodes; ++i) {
            const double u = u_lo + (u_hi - u_lo) * i / (nodes - 1.0);
            xis[i] = std::pow(u, 1.0 / kap) * f.delta - Th_anchor;
        }
        std::vector<double> tv, ttv;
        batch_run(z.t, xis, true, tv, ttv);
        const double h = (u_hi - u_lo) / (nodes - 1.0);
        double acc = 0.0;
        for (int i = 0; i < nodes; ++i) {
            const double wgt = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += wgt * ttv[i];
        }
        phihat_t = -(R / kap) * acc * h / 3.0;
    }

    Partials out;
    auto set = [&out](Comp c, Var v, double val) { out.at(c, v) = val; };

    // u, v
    const Vec2 shear_t = (f.g1 * (sp1.dot(x)) + gtt * sx - f.s1 * (gp1.dot(x)) - stt * gx) *
                             (1.0 / f.delta) -
                         (f.g1 * sx - f.s1 * gx) * (f.delta1 / (f.delta * f.delta));
    set(Comp::u, Var::t, vh_t.x + shear_t.x);
    set(Comp::v, Var::t, vh_t.y + shear_t.y);
    set(Comp::u, Var::x, (f.s.y * f.g1.x - f.g.y * f.s1.x) / f.delta);
    set(Comp::v, Var::x, (f.s.y * f.g1.y - f.g.y * f.s1.y) / f.delta);
    set(Comp::u, Var::y, (-f.s.x * f.g1.x + f.g.x * f.s1.x) / f.delta);
    set(Comp::v, Var::y, (-f.s.x * f.g1.y + f.g.x * f.s1.y) / f.delta);
    set(Comp::u, Var::p, vh_p.x);
    set(Comp::v, Var::p, vh_p.y);

    // omega
    set(Comp::w, Var::t,
        -(f.delta2 / f.delta - f.delta1 * f.delta1 / (f.delta * f.delta)) * z.p +
            sp.chi.d1(z.t));
    set(Comp::w, Var::p, -f.delta1 / f.delta);

    // T
    set(Comp::T, Var::t,
        pk * Th_t - pk * (w1x / f.delta - wx * f.delta1 / (f.delta * f.delta)));
    set(Comp::T, Var::x, -(pk / f.delta) * f.w.x);
    set(Comp::T, Var::y, -(pk / f.delta) * f.w.y);
    set(Comp::T, Var::p, kap * pkm1 * Th_val + pk * Th_p - kap * pkm1 * wx / f.delta);

    // phi
    set(Comp::phi, Var::x,
        cp * (pk / f.delta) * f.w.x -
            (sig_p.x * gtt.dot(x) + sx * gtt.x) / (2.0 * f.delta) +
            (gp.x * stt.dot(x) + gx * stt.x) / (2.0 * f.delta));
    set(Comp::phi, Var::y,
        cp * (pk / f.delta) * f.w.y -
            (sig_p.y * gtt.dot(x) + sx * gtt.y) / (2.0 * f.delta) +
            (gp.y * stt.dot(x) + gx * stt.y) / (2.0 * f.delta));
    set(Comp::phi, Var::p, -R * pkm1 * Th_val + cp * kap * (pkm1 / f.delta) * wx);
    const double quad_t =
        -((sp1.dot(x)) * gtt.dot(x) + sx * gttt.dot(x)) / (2.0 * f.delta) +
        sx * gtt.dot(x) * f.delta1 / (2.0 * f.delta * f.delta) +
        ((gp1.dot(x)) * stt.dot(x) + gx * sttt.dot(x)) / (2.0 * f.delta) -
        gx * stt.dot(x) * f.delta1 / (2.0 * f.delta * f.delta);
    set(Comp::phi, Var::t,
        phihat_t + cp * pk * (w1x / f.delta - wx * f.delta1 / (f.delta * f.delta)) + quad_t);

    return out;
}

std::array<double, 5> ReducedSolution::reduced_residual(double t, double p) const {
    const SpecFrame f = frame_of(spec_, t);
    const double kap = spec_.consts.kappa();
    const Derivs d = profiles(t, p, run(t, xi_of(t, p)));
    const double om = omega_hat(t, p);
    const Vec2 mom = d.vh_t + d.vh_p * om + f.A.apply(d.vh) +
                     f.w * (spec_.consts.cp * std::pow(p, kap) / f.delta);
    // hydrostatic relation probed against an FD derivative of the actual
    // quadrature, not the Leibniz formula
    const double hstep = 1e-4 * std::max(1.0, p);
    const double dphi_dp = (phihat(t, p + hstep) - phihat(t, p - hstep)) / (2.0 * hstep);
    const double hyd = dphi_dp + spec_.consts.R * std::pow(p, kap - 1.0) * d.That;
    const double cont = f.delta1 / f.delta + (-f.delta1 / f.delta);
    const double heat = d.That_t + om * d.That_p - f.w.dot(d.vh) / f.delta;
    return {mom.x, mom.y, hyd, cont, heat};
}

FieldPtr assemble_solution(ReductionSpec spec) {
    return std::make_shared<ReducedSolution>(std::move(spec));
}

FieldPtr rotating_family(ReductionSpec spec, double f) {
    FieldPtr base = assemble_solution(std::move(spec));
    return pushforward_field(invert(derotation(f)), std::move(base));
}

}  // namespace pesym
