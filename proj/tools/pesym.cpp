// pesym: batch front-end for the primitive-equation symmetry toolkit.
#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "pesym/config.hpp"
#include "pesym/liealg.hpp"
#include "pesym/report.hpp"

namespace {

using namespace pesym;
using nlohmann::json;

// --config supplies defaults; flags given on the command line win.
template <typename T>
T pick(const CLI::App& app, const std::string& flag, const json& cfg, const std::string& key,
       T current) {
    if (app.count(flag) > 0) return current;
    if (!cfg.is_null() && cfg.contains(key)) return cfg.at(key).get<T>();
    return current;
}

json builtin_field_json(const std::string& name) {
    if (name == "stratified" || name == "inertial")
        return json{{"name", name},
                    {"u0", {{"type", "poly"}, {"coeffs", {0.3, 0.4}}}},
                    {"v0", {{"type", "poly"}, {"coeffs", {-0.2, 0.1}}}},
                    {"T0", {{"type", "poly"}, {"coeffs", {1.0, -0.25}}}},
                    {"p_ref", 1.0}};
    return json();
}

json resolve_field_json(const std::string& arg) {
    json builtin = builtin_field_json(arg);
    if (!builtin.is_null()) return builtin;
    return config::load_json_file(arg);
}

json default_reduction_json() {
    return json{{"gamma1", {{"type", "cos"}, {"amp", 1.0}, {"omega", 1.0}, {"phase", 0.0}}},
                {"gamma2", {{"type", "sin"}, {"amp", 1.0}, {"omega", 1.0}, {"phase", 0.0}}},
                {"sigma1", {{"type", "sin"}, {"amp", -1.0}, {"omega", 1.0}, {"phase", 0.0}}},
                {"sigma2", {{"type", "cos"}, {"amp", 1.0}, {"omega", 1.0}, {"phase", 0.0}}},
                {"a1", 0.0},
                {"a2", 0.0},
                {"chi", 0.0},
                {"v0x", {{"type", "poly"}, {"coeffs", {0.0, 1.0}}}},
                {"v0y", 0.0},
                {"T0", 0.0},
                {"t0", 0.0},
                {"p0", 1.0},
                {"t_range", {0.0, 1.0}}};
}

json default_symmetry_params_json() {
    return json{{"eps0", 0.1},  {"eps1", 1.2},   {"eps2", 0.9},
                {"eps3", 1.1},  {"eps4", 0.3},   {"angle", 0.7},
                {"reflect", false},
                {"beta1", {{"type", "poly"}, {"coeffs", {0.1, 0.2, -0.1}}}},
                {"beta2", {{"type", "sin"}, {"amp", 0.2}, {"omega", 1.3}, {"phase", 0.4}}},
                {"alpha", {{"type", "poly"}, {"coeffs", {0.0, 0.5}}}}};
}

int finish(Report& rep, const std::string& report_path,
           std::chrono::steady_clock::time_point start) {
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << rep.to_table();
    std::string path = report_path;
    if (path.empty()) {
        if (const char* dir = std::getenv("PESYM_OUT_DIR"))
            path = std::string(dir) + "/" + rep.command + "-report.json";
    }
    if (!path.empty()) {
        std::ofstream out(path);
        if (!out) throw std::invalid_argument("cannot write report to " + path);
        out << rep.to_json().dump(2) << "\n";
        std::cout << "report: " << path << "\n";
    }
    return rep.all_pass() ? 0 : 1;
}

json consts_of(const json& cfg) {
    return cfg.is_null() ? json() : cfg.value("consts", json());
}

int run_residual(const CLI::App& app, const json& cfg, std::string field_arg, double f,
                 std::string heating_arg, int points, uint64_t seed, std::string mode,
                 double fd_step, double tol, std::string report_path) {
    const auto start = std::chrono::steady_clock::now();
    field_arg = pick(app, "--field", cfg, "field", field_arg);
    f = pick(app, "--f", cfg, "f", f);
    heating_arg = pick(app, "--J", cfg, "J", heating_arg);
    points = pick(app, "--points", cfg, "points", points);
    seed = pick(app, "--seed", cfg, "seed", seed);
    mode = pick(app, "--mode", cfg, "mode", mode);
    fd_step = pick(app, "--fd-step", cfg, "fd_step", fd_step);
    tol = pick(app, "--tol", cfg, "tol", tol);

    const PhysConsts consts = config::parse_consts(consts_of(cfg), f);
    auto fc = config::parse_field(resolve_field_json(field_arg), consts);
    FieldPtr field = fc.field;
    if (mode == "fd")
        field = with_mode(field, DerivMode::FiniteDifference, fd_step);
    else if (mode != "exact")
        throw std::invalid_argument("residual: --mode must be exact or fd");
    const HeatingField J = heating_arg == "zero"
                               ? HeatingField::zero()
                               : config::parse_heating(config::load_json_file(heating_arg));
    const Box box = config::parse_box(cfg.is_null() ? json() : cfg.value("box", json()));
    const auto pts = sample_points(seed, points, box);
    const ResidualNorms norms = residual_norms(*field, consts, J, pts);

    Report rep;
    rep.command = "residual";
    rep.settings = {{"field", fc.name}, {"f", f},       {"points", points},
                    {"seed", seed},     {"mode", mode}, {"tol", tol}};
    const char* comp[5] = {"u", "v", "hyd", "cont", "T"};
    for (int i = 0; i < 5; ++i) {
        rep.metric(std::string("linf_") + comp[i], norms.linf[i]);
        rep.metric(std::string("rms_") + comp[i], norms.rms[i]);
    }
    rep.metric("points", static_cast<double>(norms.n_points));
    rep.verdicts.push_back(Verdict::below("residual_linf", norms.linf_total(), tol));
    return finish(rep, report_path, start);
}

int run_derotate(const CLI::App& app, const json& cfg, std::string field_arg, double f,
                 std::string direction, bool verify, int points, uint64_t seed, double tol,
                 std::string report_path) {
    const auto start = std::chrono::steady_clock::now();
    field_arg = pick(app, "--field", cfg, "field", field_arg);
    f = pick(app, "--f", cfg, "f", f);
    direction = pick(app, "--direction", cfg, "direction", direction);
    points = pick(app, "--points", cfg, "points", points);
    seed = pick(app, "--seed", cfg, "seed", seed);
    tol = pick(app, "--tol", cfg, "tol", tol);

    const bool to_rest = direction == "to-rest";
    if (!to_rest && direction != "to-rotating")
        throw std::invalid_argument("derotate: --direction must be to-rest or to-rotating");
    // to-rest expects a rotating-frame solution, to-rotating a resting one
    const double f_src = to_rest ? f : 0.0;
    const double f_dst = to_rest ? 0.0 : f;
    const PhysConsts consts = config::parse_consts(consts_of(cfg), f_src);
    auto fc = config::parse_field(resolve_field_json(field_arg), consts);

    const GroupMap map = to_rest ? derotation(f) : invert(derotation(f));
    FieldPtr pushed = pushforward_field(map, fc.field);

    Report rep;
    rep.command = "derotate";
    rep.settings = {{"field", fc.name}, {"f", f}, {"direction", direction},
                    {"points", points}, {"seed", seed}};
    double rt = 0.0;
    for (const auto& q : sample_points9(seed, 100, Box::standard())) {
        const Point9 back = map.inv(map.fwd(q));
        for (int i = 0; i < 9; ++i) rt = std::max(rt, std::abs(back[i] - q[i]));
    }
    rep.metric("roundtrip_linf", rt);
    rep.verdicts.push_back(Verdict::below("roundtrip", rt, 1e-12));
    if (verify) {
        const auto pts = sample_points(seed, points, Box::standard());
        const ResidualNorms norms =
            residual_norms(*pushed, consts.with_f(f_dst), HeatingField::zero(), pts);
        rep.metric("pushed_residual_linf", norms.linf_total());
        rep.verdicts.push_back(Verdict::below("pushed_residual", norms.linf_total(), tol));
    }
    return finish(rep, report_path, start);
}

int run_symmetry_check(const CLI::App& app, const json& cfg, std::string field_arg, double f,
                       std::string eps_list, int points, uint64_t seed, std::string report_path) {
    const auto start = std::chrono::steady_clock::now();
    field_arg = pick(app, "--field", cfg, "field", field_arg);
    f = pick(app, "--f", cfg, "f", f);
    eps_list = pick(app, "--eps", cfg, "eps", eps_list);
    points = pick(app, "--points", cfg, "points", points);
    seed = pick(app, "--seed", cfg, "seed", seed);

    const PhysConsts consts = config::parse_consts(consts_of(cfg), f);
    auto fc = config::parse_field(resolve_field_json(field_arg), consts);
    std::vector<double> eps;
    {
        std::stringstream ss(eps_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) eps.push_back(std::stod(tok));
    }
    if (eps.size() < 2) throw std::invalid_argument("symmetry-check: need at least two eps values");
    const auto pts = sample_points(seed, points, Box::standard());

    Report rep;
    rep.command = "symmetry-check";
    rep.settings = {{"field", fc.name}, {"f", f}, {"eps", eps_list},
                    {"points", points}, {"seed", seed}};
    for (const auto& [name, gen] : liealg::standard_generator_set()) {
        const VectorFieldSpec vf = liealg::realize(gen, consts);
        const auto defects = defect_sweep(vf, fc.field, consts, eps, pts);
        rep.metric("defect_" + name + "_first", defects.front());
        rep.metric("defect_" + name + "_last", defects.back());
        Verdict v;
        v.name = "quadratic_" + name;
        v.value = defects.front();
        v.tol = 0.0;
        v.relation = "~eps^2";
        v.pass = quadratic_defect_verdict(defects);
        rep.verdicts.push_back(v);
    }
    return finish(rep, report_path, start);
}

int run_megaideals(const CLI::App& app, const json& cfg, int degree, std::string report_path) {
    const auto start = std::chrono::steady_clock::now();
    degree = pick(app, "--degree", cfg, "degree", degree);
    const auto chain = liealg::megaideal_chain(degree);
    Report rep;
    rep.command = "megaideals";
    rep.settings = {{"degree", degree}};
    json entries = json::array();
    bool all_ok = true;
    for (const auto& e : chain.entries) {
        json gens = json::array();
        {
            std::stringstream ss(e.label);
            std::string tok;
            while (std::getline(ss, tok, ',')) gens.push_back(tok);
        }
        entries.push_back({{"label", e.label},
                           {"generators", gens},
                           {"dim", e.computed.dim()},
                           {"exact_match", e.exact_match},
                           {"interior_match", e.interior_match},
                           {"ideal", e.ideal}});
        all_ok = all_ok && e.interior_match && e.ideal;
        std::cout << "  dim " << std::setw(3) << e.computed.dim() << "  "
                  << (e.exact_match ? "exact   " : "interior") << "  " << e.label << "\n";
    }
    rep.settings["entries"] = entries;
    rep.settings["lift_series_dims"] = chain.lift_series_dims;
    rep.metric("entries", static_cast<double>(chain.entries.size()));
    Verdict v;
    v.name = "chain_matches";
    v.value = all_ok ? 1.0 : 0.0;
    v.tol = 0.5;
    v.relation = ">";
    v.pass = all_ok;
    rep.verdicts.push_back(v);
    return finish(rep, report_path, start);
}

int run_isomorphism(const CLI::App& app, const json& cfg, double f, int points, uint64_t seed,
                    double tol, bool corrupted, std::string report_path) {
    const auto start = std::chrono::steady_clock::now();
    f = pick(app, "--f", cfg, "f", f);
    points = pick(app, "--points", cfg, "points", points);
    seed = pick(app, "--seed", cfg, "seed", seed);
    tol = pick(app, "--tol", cfg, "tol", tol);
    const PhysConsts consts = config::parse_consts(consts_of(cfg), f);
    const double defect = liealg::isomorphism_check(f, points, seed, consts, corrupted);
    Report rep;
    rep.command = "isomorphism";
    rep.settings = {{"f", f}, {"points", points}, {"seed", seed}, {"corrupted", corrupted}};
    rep.metric("commutator_defect", defect);
    rep.verdicts.push_back(corrupted ? Verdict::above("corrupted_defect", defect, 1e-2)
                                     : Verdict::below("commutator_defect", defect, tol));
    return finish(rep, report_path, start);
}

int run_reduce(const CLI::App& app, const json& cfg, std::string spec_arg, double f, bool verify,
               int grid, int points, uint64_t seed, double tol_reduced, double tol_field,
               std::string samples_path, std::string report_path) {
    const auto start = std::chrono::steady_clock::now();
    spec_arg = pick(app, "--spec", cfg, "spec", spec_arg);
    f = pick(app, "--f", cfg, "f", f);
    grid = pick(app, "--grid", cfg, "grid", grid);
    points = pick(app, "--points", cfg, "points", points);
    seed = pick(app, "--seed", cfg, "seed", seed);
    tol_reduced = pick(app, "--tol-reduced", cfg, "tol_reduced", tol_reduced);
    tol_field = pick(app, "--tol-field", cfg, "tol_field", tol_field);

    const PhysConsts consts = config::parse_consts(consts_of(cfg), 0.0);
    const json spec_json =
        spec_arg.empty() ? default_reduction_json() : config::load_json_file(spec_arg);
    const ReductionSpec spec = config::parse_reduction_spec(spec_json, consts);
    auto solution = std::make_shared<ReducedSolution>(spec);

    Report rep;
    rep.command = "reduce";
    rep.settings = {{"f", f},       {"grid", grid},               {"points", points},
                    {"seed", seed}, {"tol_reduced", tol_reduced}, {"tol_field", tol_field}};

    Box box = Box::standard();
    box.t_lo = spec.t_lo;
    box.t_hi = spec.t_hi;

    if (verify) {
        double worst_reduced = 0.0;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                const double t = spec.t_lo + (spec.t_hi - spec.t_lo) * i / (grid - 1.0);
                const double p = box.p_lo + (box.p_hi - box.p_lo) * j / (grid - 1.0);
                for (double r : solution->reduced_residual(t, p))
                    worst_reduced = std::max(worst_reduced, std::abs(r));
            }
        rep.metric("reduced_system_linf", worst_reduced);
        rep.verdicts.push_back(Verdict::below("reduced_system", worst_reduced, tol_reduced));

        const auto pts = sample_points(seed, points, box);
        FieldPtr field = solution;
        if (f != 0.0) field = rotating_family(spec, f);
        const ResidualNorms norms =
            residual_norms(*field, consts.with_f(f), HeatingField::zero(), pts);
        rep.metric("field_residual_linf", norms.linf_total());
        rep.verdicts.push_back(Verdict::below("field_residual", norms.linf_total(), tol_field));
    }

    if (!samples_path.empty()) {
        FieldPtr field = solution;
        if (f != 0.0) field = rotating_family(spec, f);
        std::ofstream out(samples_path);
        if (!out) throw std::invalid_argument("cannot write samples to " + samples_path);
        out << "t,x,y,p,u,v,omega,phi,T\n";
        out << std::setprecision(17);
        for (const auto& z : sample_points(seed, points, box)) {
            const StateValue s = field->eval(z);
            out << z.t << "," << z.x << "," << z.y << "," << z.p << "," << s.u << "," << s.v
                << "," << s.w << "," << s.phi << "," << s.T << "\n";
        }
        rep.metric("samples_written", static_cast<double>(points));
        std::cout << "samples: " << samples_path << "\n";
    }
    return finish(rep, report_path, start);
}

int run_group_verify(const CLI::App& app, const json& cfg, std::string params_arg,
                     std::string field_arg, std::string perturb_arg, double factor, int points,
                     uint64_t seed, double tol, std::string report_path) {
    const auto start = std::chrono::steady_clock::now();
    params_arg = pick(app, "--params", cfg, "params", params_arg);
    field_arg = pick(app, "--field", cfg, "field", field_arg);
    perturb_arg = pick(app, "--perturb", cfg, "perturb", perturb_arg);
    factor = pick(app, "--factor", cfg, "factor", factor);
    points = pick(app, "--points", cfg, "points", points);
    seed = pick(app, "--seed", cfg, "seed", seed);
    tol = pick(app, "--tol", cfg, "tol", tol);

    const PhysConsts consts = config::parse_consts(consts_of(cfg), 0.0);
    const json params_json =
        params_arg.empty() ? default_symmetry_params_json() : config::load_json_file(params_arg);
    const SymmetryParams params = config::parse_symmetry_params(params_json);
    Perturb perturb = Perturb::None;
    if (perturb_arg == "omega-scale")
        perturb = Perturb::OmegaScale;
    else if (perturb_arg == "T-scale")
        perturb = Perturb::TScale;
    else if (!perturb_arg.empty())
        throw std::invalid_argument("group-verify: --perturb must be omega-scale or T-scale");

    auto fc = config::parse_field(resolve_field_json(field_arg), consts);
    const GroupMap map = symmetry_map(params, consts, perturb, factor);
    FieldPtr pushed = pushforward_field(map, fc.field);

    // evaluate the transported field where the source stays in its box
    Box src = Box::standard();
    std::vector<Point4> pts;
    for (const auto& z : sample_points(seed, points, src)) pts.push_back(map.base_fwd(z));
    const ResidualNorms norms = residual_norms(*pushed, consts, HeatingField::zero(), pts);

    Report rep;
    rep.command = "group-verify";
    rep.settings = {{"field", fc.name}, {"perturb", perturb_arg.empty() ? "none" : perturb_arg},
                    {"factor", factor}, {"points", points},
                    {"seed", seed},     {"tol", tol}};
    rep.metric("mapped_residual_linf", norms.linf_total());
    rep.verdicts.push_back(Verdict::below("mapped_residual", norms.linf_total(), tol));
    return finish(rep, report_path, start);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pesym: symmetry toolkit for the adiabatic primitive equations"};
    app.require_subcommand(1);

    std::string config_path, report_path;
    app.add_option("--config", config_path, "JSON config supplying defaults for the flags");
    app.add_option("--report", report_path, "write the JSON report to this path");

    // residual
    auto* c_res = app.add_subcommand("residual", "residual norms of a field");
    std::string r_field = "stratified", r_J = "zero", r_mode = "exact";
    double r_f = 0.0, r_fd = 1e-5, r_tol = 1e-10;
    int r_points = 1000;
    uint64_t r_seed = 1;
    c_res->add_option("--field", r_field, "field config path or builtin name");
    c_res->add_option("--f", r_f, "Coriolis parameter");
    c_res->add_option("--J", r_J, "heating config path or 'zero'");
    c_res->add_option("--points", r_points);
    c_res->add_option("--seed", r_seed);
    c_res->add_option("--mode", r_mode, "exact|fd");
    c_res->add_option("--fd-step", r_fd);
    c_res->add_option("--tol", r_tol);

    // derotate
    auto* c_der = app.add_subcommand("derotate", "transport a field between frames");
    std::string d_field = "inertial", d_dir = "to-rest";
    double d_f = 1.0, d_tol = 1e-8;
    bool d_verify = false;
    int d_points = 300;
    uint64_t d_seed = 2;
    c_der->add_option("--field", d_field);
    c_der->add_option("--f", d_f);
    c_der->add_option("--direction", d_dir, "to-rest|to-rotating");
    c_der->add_flag("--verify", d_verify, "run the residual sweep on the transported field");
    c_der->add_option("--points", d_points);
    c_der->add_option("--seed", d_seed);
    c_der->add_option("--tol", d_tol);

    // symmetry-check
    auto* c_sym = app.add_subcommand("symmetry-check", "first-order generator sweep");
    std::string s_field = "stratified", s_eps = "1e-2,1e-3,1e-4";
    double s_f = 0.0;
    int s_points = 60;
    uint64_t s_seed = 3;
    c_sym->add_option("--field", s_field);
    c_sym->add_option("--f", s_f);
    c_sym->add_option("--eps", s_eps, "comma-separated ladder");
    c_sym->add_option("--points", s_points);
    c_sym->add_option("--seed", s_seed);

    // megaideals
    auto* c_meg = app.add_subcommand("megaideals", "exact megaideal chain");
    int m_degree = 4;
    c_meg->add_option("--degree", m_degree);

    // isomorphism
    auto* c_iso = app.add_subcommand("isomorphism", "redefined-basis commutator check");
    double i_f = 1.0, i_tol = 1e-6;
    int i_points = 100;
    uint64_t i_seed = 4;
    bool i_corrupted = false;
    c_iso->add_option("--f", i_f);
    c_iso->add_option("--points", i_points);
    c_iso->add_option("--seed", i_seed);
    c_iso->add_option("--tol", i_tol);
    c_iso->add_flag("--corrupted", i_corrupted, "drop the rotation correction (negative control)");

    // reduce
    auto* c_red = app.add_subcommand("reduce", "invariant solution family");
    std::string x_spec, x_samples;
    double x_f = 0.0, x_tol_red = 1e-7, x_tol_field = 1e-6;
    bool x_verify = false;
    int x_grid = 50, x_points = 400;
    uint64_t x_seed = 5;
    c_red->add_option("--spec", x_spec, "reduction spec config path");
    c_red->add_option("--f", x_f);
    c_red->add_flag("--verify", x_verify);
    c_red->add_option("--grid", x_grid);
    c_red->add_option("--points", x_points);
    c_red->add_option("--seed", x_seed);
    c_red->add_option("--tol-reduced", x_tol_red);
    c_red->add_option("--tol-field", x_tol_field);
    c_red->add_option("--emit-samples", x_samples, "CSV sample path");

    // group-verify
    auto* c_grp = app.add_subcommand("group-verify", "point-symmetry transport check");
    std::string g_params, g_field = "stratified", g_perturb;
    double g_factor = 1.01, g_tol = 1e-8;
    int g_points = 300;
    uint64_t g_seed = 6;
    c_grp->add_option("--params", g_params, "symmetry parameter config path");
    c_grp->add_option("--field", g_field);
    c_grp->add_option("--perturb", g_perturb, "omega-scale|T-scale");
    c_grp->add_option("--factor", g_factor);
    c_grp->add_option("--points", g_points);
    c_grp->add_option("--seed", g_seed);
    c_grp->add_option("--tol", g_tol);

    try {
        app.parse(argc, argv);
        const json cfg = config_path.empty() ? json() : config::load_json_file(config_path);
        if (*c_res)
            return run_residual(*c_res, cfg, r_field, r_f, r_J, r_points, r_seed, r_mode, r_fd,
                                r_tol, report_path);
        if (*c_der)
            return run_derotate(*c_der, cfg, d_field, d_f, d_dir, d_verify, d_points, d_seed,
                                d_tol, report_path);
        if (*c_sym)
            return run_symmetry_check(*c_sym, cfg, s_field, s_f, s_eps, s_points, s_seed,
                                      report_path);
        if (*c_meg) return run_megaideals(*c_meg, cfg, m_degree, report_path);
        if (*c_iso)
            return run_isomorphism(*c_iso, cfg, i_f, i_points, i_seed, i_tol, i_corrupted,
                                   report_path);
        if (*c_red)
            return run_reduce(*c_red, cfg, x_spec, x_f, x_verify, x_grid, x_points, x_seed,
                              x_tol_red, x_tol_field, x_samples, report_path);
        if (*c_grp)
            return run_group_verify(*c_grp, cfg, g_params, g_field, g_perturb, g_factor, g_points,
                                    g_seed, g_tol, report_path);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
