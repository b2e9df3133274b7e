// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one [PASS]/[FAIL] line per criterion. Exit code 0 iff all pass.
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pesym/config.hpp"
#include "pesym/liealg.hpp"
#include "pesym/reduction.hpp"
#include "pesym/report.hpp"

using namespace pesym;

namespace {

const PhysConsts kConsts;

int g_failures = 0;
std::vector<std::string> g_notes;

void report(const std::string& id, bool pass, const std::string& detail) {
    std::printf("[%s] %-28s %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

bool check(const std::string&, std::ostringstream& os, bool cond, const std::string& what) {
    if (!cond) os << " !!" << what;
    return cond;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

FieldPtr stratified_fixture() {
    return make_stratified(ScalarFn::poly({0.3, 0.4}), ScalarFn::poly({-0.2, 0.1}),
                           ScalarFn::poly({1.0, -0.25}), 1.0, kConsts);
}

FieldPtr stratified_powlaw_fixture() {
    return make_stratified(ScalarFn::sinusoid(0.5, 2.0, 0.3), ScalarFn::poly({0.1, 0.2}),
                           ScalarFn::powlaw(1.1, kConsts.kappa()), 1.0, kConsts);
}

FieldPtr inertial_fixture(double f) {
    return make_inertial(ScalarFn::poly({0.3, 0.4}), ScalarFn::poly({-0.2, 0.1}),
                         ScalarFn::poly({1.0, -0.25}), 1.0, f, kConsts);
}

ReductionSpec rotation_spec() {
    ReductionSpec s;
    s.gamma1 = ScalarFn::cosine(1, 1, 0);
    s.gamma2 = ScalarFn::sinusoid(1, 1, 0);
    s.sigma1 = ScalarFn::sinusoid(-1, 1, 0);
    s.sigma2 = ScalarFn::cosine(1, 1, 0);
    s.v0x = ScalarFn::poly({0, 1});
    s.v0y = ScalarFn::constant(0);
    s.T0 = ScalarFn::constant(0);
    s.consts = kConsts;
    return s;
}

ReductionSpec gauge_rotation_spec() {
    ReductionSpec s = rotation_spec();
    s.a1 = 0.5;
    s.a2 = -0.3;
    s.v0y = ScalarFn::constant(0.2);
    s.T0 = ScalarFn::poly({0.5, 0.1});
    return s;
}

ReductionSpec expanding_spec() {
    ReductionSpec s;
    s.gamma1 = ScalarFn::constant(1);
    s.gamma2 = ScalarFn::constant(0);
    s.sigma1 = ScalarFn::constant(0);
    s.sigma2 = ScalarFn::poly({0, 1});
    s.v0x = ScalarFn::poly({0.5, 0.2});
    s.v0y = ScalarFn::poly({0.1, -0.3});
    s.T0 = ScalarFn::poly({1.0, 0.1});
    s.t0 = 1.0;
    s.t_lo = 1.0;
    s.t_hi = 2.0;
    s.consts = kConsts;
    return s;
}

double solution_residual(const StateField& f, double coriolis, const std::vector<Point4>& pts) {
    return residual_norms(f, kConsts.with_f(coriolis), HeatingField::zero(), pts).linf_total();
}

// 1. stratified and rotating-column solutions at the pinned tolerances
void criterion_1() {
    std::ostringstream os;
    bool ok = true;
    const auto pts = sample_points(1001, 1000, Box::standard());
    auto strat = stratified_fixture();
    auto inert = inertial_fixture(1.0);
    const double r_strat = solution_residual(*strat, 0.0, pts);
    const double r_inert = solution_residual(*inert, 1.0, pts);
    ok &= check("C1", os, r_strat < 1e-10, "stratified-exact");
    ok &= check("C1", os, r_inert < 1e-10, "inertial-exact");
    const double r_strat_fd = solution_residual(
        *with_mode(strat, DerivMode::FiniteDifference, 1e-5), 0.0, pts);
    const double r_inert_fd = solution_residual(
        *with_mode(inert, DerivMode::FiniteDifference, 1e-5), 1.0, pts);
    ok &= check("C1", os, r_strat_fd < 1e-6, "stratified-fd");
    ok &= check("C1", os, r_inert_fd < 1e-6, "inertial-fd");
    report("1 solution-verification", ok,
           "exact=" + num(std::max(r_strat, r_inert)) + " fd=" +
               num(std::max(r_strat_fd, r_inert_fd)) + os.str());
}

// 2. frame-change transport in both directions plus the coordinate round trip
void criterion_2() {
    std::ostringstream os;
    bool ok = true;
    const double f = 1.0;
    const auto pts = sample_points(1002, 400, Box::standard());
    double worst_to_rot = 0.0;
    const std::vector<FieldPtr> resting{stratified_fixture(), stratified_powlaw_fixture(),
                                        assemble_solution(rotation_spec())};
    for (const auto& sol : resting) {
        auto pushed = pushforward_field(invert(derotation(f)), sol);
        worst_to_rot = std::max(worst_to_rot, solution_residual(*pushed, f, pts));
    }
    ok &= check("C2", os, worst_to_rot < 1e-8, "to-rotating");
    double worst_to_rest = 0.0;
    const std::vector<FieldPtr> rotating{inertial_fixture(f),
                                         rotating_family(rotation_spec(), f)};
    for (const auto& sol : rotating) {
        auto pushed = pushforward_field(derotation(f), sol);
        worst_to_rest = std::max(worst_to_rest, solution_residual(*pushed, 0.0, pts));
    }
    ok &= check("C2", os, worst_to_rest < 1e-8, "to-rest");
    double rt = 0.0;
    const GroupMap g = derotation(f);
    for (const auto& q : sample_points9(1003, 150, Box::standard())) {
        const Point9 back = g.inv(g.fwd(q));
        for (int i = 0; i < 9; ++i) rt = std::max(rt, std::abs(back[i] - q[i]));
    }
    ok &= check("C2", os, rt < 1e-12, "roundtrip");
    report("2 frame-change-transport", ok,
           "to-rot=" + num(worst_to_rot) + " to-rest=" + num(worst_to_rest) +
               " roundtrip=" + num(rt) + os.str());
}

// 3. random group elements transport solutions; pinned coefficients are
// necessary (negative controls)
void criterion_3() {
    std::ostringstream os;
    bool ok = true;
    RandomStream rng(1004);
    auto strat = stratified_fixture();
    double worst = 0.0;
    int reversals = 0, reflections = 0;
    for (int k = 0; k < 20; ++k) {
        const SymmetryParams P = random_symmetry_params(rng);
        reversals += P.eps1 < 0;
        reflections += P.reflect;
        const GroupMap g = symmetry_map(P, kConsts);
        auto pushed = pushforward_field(g, strat);
        std::vector<Point4> pts;
        for (const auto& z : sample_points(2000 + k, 150, Box::standard()))
            pts.push_back(g.base_fwd(z));
        worst = std::max(worst, solution_residual(*pushed, 0.0, pts));
    }
    ok &= check("C3", os, worst < 1e-8, "transport");
    ok &= check("C3", os, reversals > 0 && reflections > 0, "parameter-coverage");
    // negative controls at one percent
    SymmetryParams neutral;
    auto column = assemble_solution(expanding_spec());
    Box cbox = Box::standard();
    cbox.t_lo = 1.0;
    cbox.t_hi = 2.0;
    const auto cpts = sample_points(1005, 200, cbox);
    auto bad_w = pushforward_field(symmetry_map(neutral, kConsts, Perturb::OmegaScale, 1.01),
                                   column);
    const double r_w = solution_residual(*bad_w, 0.0, cpts);
    auto bad_T = pushforward_field(symmetry_map(neutral, kConsts, Perturb::TScale, 1.01),
                                   stratified_fixture());
    const double r_T =
        solution_residual(*bad_T, 0.0, sample_points(1006, 200, Box::standard()));
    ok &= check("C3", os, r_w > 1e-3, "omega-control");
    ok &= check("C3", os, r_T > 1e-3, "T-control");
    report("3 group-transport", ok,
           "worst=" + num(worst) + " omega-ctl=" + num(r_w) + " T-ctl=" + num(r_T) + os.str());
}

// 4. both discrete involutions square to the identity and transport solutions
void criterion_4() {
    std::ostringstream os;
    bool ok = true;
    const auto [g1, g2] = discrete_involutions();
    double sq = 0.0;
    for (const auto& q : sample_points9(1007, 200, Box::standard())) {
        const Point9 a = g1.fwd(g1.fwd(q)), b = g2.fwd(g2.fwd(q));
        for (int i = 0; i < 9; ++i)
            sq = std::max({sq, std::abs(a[i] - q[i]), std::abs(b[i] - q[i])});
    }
    ok &= check("C4", os, sq == 0.0, "involution-squared");
    Box sym;
    sym.t_lo = -0.5;
    sym.t_hi = 0.5;
    const auto pts = sample_points(1008, 300, sym);
    double worst = 0.0;
    for (const FieldPtr& sol :
         {stratified_fixture(), FieldPtr(assemble_solution(rotation_spec()))}) {
        for (const GroupMap& g : {g1, g2})
            worst = std::max(worst,
                             solution_residual(*pushforward_field(g, sol), 0.0, pts));
    }
    ok &= check("C4", os, worst < 1e-10, "transport");
    report("4 discrete-involutions", ok, "squared=" + num(sq) + " residual=" + num(worst) + os.str());
}

// 5. exact antisymmetry and Jacobi for every basis pair/triple
void criterion_5() {
    std::ostringstream os;
    bool ok = true;
    for (int n : {2, 3, 4}) {
        const liealg::Trunc tr = liealg::Trunc::make(n);
        auto br = [&tr](const liealg::AlgElem& a, const liealg::AlgElem& b) {
            return liealg::bracket(tr, a, b);
        };
        ok &= check("C5", os, liealg::antisymmetry_max_defect(tr, br) == liealg::Rat(0),
                    "antisym-n" + std::to_string(n));
        ok &= check("C5", os, liealg::jacobi_max_defect(tr, br) == liealg::Rat(0),
                    "jacobi-n" + std::to_string(n));
    }
    report("5 algebra-exactness", ok, std::string("defects exactly zero for n=2,3,4") + os.str());
}

// 6. the eleven selected megaideals, the iterated series, truncation stability
void criterion_6() {
    std::ostringstream os;
    bool ok = true;
    const auto chain = liealg::megaideal_chain(4);
    ok &= check("C6", os, chain.entries.size() == 11, "count");
    for (const auto& e : chain.entries) {
        ok &= check("C6", os, e.interior_match && e.ideal && e.exact_match, e.label);
    }
    ok &= check("C6", os, chain.lift_series_dims.size() >= 4, "series-length");
    for (size_t i = 0; i + 1 < chain.lift_series_dims.size(); ++i)
        ok &= check("C6", os, chain.lift_series_dims[i] + 1 == chain.lift_series_dims[i + 1],
                    "series-step");
    const auto chain6 = liealg::megaideal_chain(6);
    bool stable = chain6.entries.size() == 11;
    for (size_t i = 0; stable && i < 11; ++i)
        stable = chain.entries[i].computed.restricted(2) ==
                 chain6.entries[i].computed.restricted(2);
    ok &= check("C6", os, stable, "degree-stability");
    report("6 megaideal-chain", ok,
           "entries=11 exact, series dims 1.." +
               std::to_string(chain.lift_series_dims.back()) + os.str());
}

// 7. the redefined rotating-frame basis reproduces the resting structure
// constants numerically; the corrupted redefinition does not
void criterion_7() {
    std::ostringstream os;
    bool ok = true;
    const double d0 = liealg::isomorphism_check(0.0, 100, 1009, kConsts);
    const double d1 = liealg::isomorphism_check(1.0, 100, 1009, kConsts.with_f(1.0));
    const double dc = liealg::isomorphism_check(1.0, 100, 1009, kConsts.with_f(1.0), true);
    ok &= check("C7", os, d0 < 1e-10, "f0");
    ok &= check("C7", os, d1 < 1e-6, "f1");
    ok &= check("C7", os, dc > 1e-2, "corrupted");
    report("7 algebra-isomorphism", ok,
           "f0=" + num(d0) + " f1=" + num(d1) + " corrupted=" + num(dc) + os.str());
}

// 8. first-order deformation defects scale quadratically for admitted
// generators; the cp == R extras separate the two constant regimes
void criterion_8() {
    std::ostringstream os;
    bool ok = true;
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    const auto pts = sample_points(1010, 25, Box::standard());
    auto strat = stratified_fixture();
    for (const auto& [name, gen] : liealg::standard_generator_set()) {
        const auto d = defect_sweep(liealg::realize(gen, kConsts), strat, kConsts, eps, pts);
        ok &= check("C8", os, quadratic_defect_verdict(d), "rest:" + name);
    }
    const PhysConsts c1 = kConsts.with_f(1.0);
    auto inert = inertial_fixture(1.0);
    for (const auto& [name, gen] : liealg::standard_generator_set()) {
        const auto d = defect_sweep(liealg::realize(gen, c1), inert, c1, eps, pts);
        ok &= check("C8", os, quadratic_defect_verdict(d), "rot:" + name);
    }
    // a genuinely nonzero quadratic constant on an x-dependent solution
    auto shear = assemble_solution(rotation_spec());
    const auto d_shear = defect_sweep(
        liealg::realize(liealg::AlgElemD::from(liealg::AlgElem::scalar(liealg::kTimeScaling)),
                        kConsts),
        shear, kConsts, eps, pts);
    ok &= check("C8", os, d_shear[0] > 1e-6 && quadratic_defect_verdict(d_shear), "shear-band");
    // cp == R extras: quadratic at kappa = 1, linear at kappa = 2/7
    PhysConsts k1;
    k1.R = 1.0;
    k1.cp = 1.0;
    k1.allow_kappa_one = true;
    auto sol_k1 = make_stratified(ScalarFn::poly({0.3, 0.4}), ScalarFn::poly({-0.2, 0.1}),
                                  ScalarFn::poly({1.0, -0.25}), 1.0, k1);
    const ScalarFn lam = ScalarFn::poly({0.2, 0.5, 0.3});
    const ScalarFn psi = ScalarFn::poly({0.4, -0.2});
    double lin_ratio = 0.0;
    for (const auto& vf :
         {liealg::time_reparam_generator(lam), liealg::vertical_boost_generator(psi)}) {
        const auto d_k1 = defect_sweep(vf, sol_k1, k1, eps, pts);
        ok &= check("C8", os, quadratic_defect_verdict(d_k1) && d_k1[0] > 1e-8,
                    "extra-kappa1");
        const auto d_std = defect_sweep(vf, strat, kConsts, eps, pts);
        const double r = d_std[0] / d_std[1];
        lin_ratio = std::max(lin_ratio, r);
        ok &= check("C8", os, !quadratic_defect_verdict(d_std) && r > 5.0 && r < 20.0,
                    "extra-kappa27");
    }
    report("8 infinitesimal-sweep", ok,
           "shear-c=" + num(d_shear[0]) + " extras-linear-ratio~" + num(lin_ratio) + os.str());
}

// 9. the invariant family: reduced system on a 50x50 grid, assembled residual,
// refinement order, rotating transport
void criterion_9() {
    std::ostringstream os;
    bool ok = true;
    const ReducedSolution sol(gauge_rotation_spec());
    double grid_worst = 0.0;
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) {
            const double t = i / 49.0;
            const double p = 0.2 + 0.8 * j / 49.0;
            for (double r : sol.reduced_residual(t, p))
                grid_worst = std::max(grid_worst, std::abs(r));
        }
    ok &= check("C9", os, grid_worst < 1e-7, "reduced-grid");
    const auto pts = sample_points(1011, 1000, Box::standard());
    const double field_res = solution_residual(sol, 0.0, pts);
    ok &= check("C9", os, field_res < 1e-6, "field-residual");
    // refinement: quartering the step and panel sizes gains at least 8x
    ReductionSpec fine = gauge_rotation_spec();
    fine.steps_per_unit = 6400;
    fine.phi_panels = 256;
    auto ref = assemble_solution(fine);
    const auto dev_pts = sample_points(1012, 20, Box::standard());
    auto deviation = [&](int steps, int panels) {
        ReductionSpec s = gauge_rotation_spec();
        s.steps_per_unit = steps;
        s.phi_panels = panels;
        auto cand = assemble_solution(s);
        double d = 0.0;
        for (const auto& z : dev_pts) {
            const StateValue a = cand->eval(z), b = ref->eval(z);
            for (int c = 0; c < 5; ++c) d = std::max(d, std::abs(a[c] - b[c]));
        }
        return d;
    };
    const double coarse = deviation(200, 8), refined = deviation(800, 32);
    ok &= check("C9", os, coarse > 1e-11 && coarse / refined >= 8.0, "refinement");
    // rotating transport at the frame-change tolerances
    auto rot_strat = rotating_family(
        [] {
            ReductionSpec s;
            s.gamma1 = ScalarFn::constant(1);
            s.gamma2 = ScalarFn::constant(0);
            s.sigma1 = ScalarFn::constant(0);
            s.sigma2 = ScalarFn::constant(1);
            s.v0x = ScalarFn::constant(0.7);
            s.v0y = ScalarFn::constant(-0.3);
            s.T0 = ScalarFn::constant(1.2);
            s.consts = kConsts;
            return s;
        }(),
        1.0);
    const double rot_res = solution_residual(*rot_strat, 1.0, pts);
    ok &= check("C9", os, rot_res < 1e-8, "rotating-exact");
    auto rot_gauge = rotating_family(gauge_rotation_spec(), 1.0);
    const auto pts_small = sample_points(1013, 150, Box::standard());
    const double rot_gauge_res = solution_residual(*rot_gauge, 1.0, pts_small);
    const double base_res = solution_residual(sol, 0.0, pts_small);
    ok &= check("C9", os, rot_gauge_res <= base_res + 1e-9, "frame-equivalence");
    report("9 invariant-family", ok,
           "grid=" + num(grid_worst) + " field=" + num(field_res) + " gain=" +
               num(coarse / refined) + " rot=" + num(rot_res) + os.str());
}

// 10. repeated runs with the same seeds produce identical reports
void criterion_10() {
    std::ostringstream os;
    bool ok = true;
    auto make_report = [] {
        Report rep;
        rep.command = "residual";
        rep.settings = {{"seed", 9}, {"points", 200}};
        auto f = stratified_fixture();
        const auto pts = sample_points(9, 200, Box::standard());
        const auto n = residual_norms(*f, kConsts, HeatingField::zero(), pts);
        for (int i = 0; i < 5; ++i) rep.metric("linf_" + std::to_string(i), n.linf[i]);
        rep.metric("iso", liealg::isomorphism_check(1.0, 5, 9, kConsts.with_f(1.0)));
        rep.verdicts.push_back(Verdict::below("residual", n.linf_total(), 1e-10));
        return rep.to_json().dump(2);
    };
    const std::string a = make_report(), b = make_report();
    ok &= check("C10", os, a == b, "bytes");
    report("10 determinism", ok, (a == b ? "reports byte-identical" : "reports differ") + os.str());
}

}  // namespace

int main() {
    using Criterion = std::function<void()>;
    const std::vector<Criterion> criteria{
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
        criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            std::printf("[FAIL] criterion threw: %s\n", e.what());
            ++g_failures;
        }
    }
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
