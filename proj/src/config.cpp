#include "pesym/config.hpp"

#include <fstream>

namespace pesym::config {

void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
    if (!obj.is_object()) throw std::invalid_argument(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return j;
}

ScalarFn parse_scalar_fn(const json& obj) {
    if (obj.is_number()) return ScalarFn::constant(obj.get<double>());
    require_keys(obj, {"type", "value", "coeffs", "amp", "omega", "phase", "expo"}, "scalar function");
    const std::string type = obj.at("type").get<std::string>();
    if (type == "constant") return ScalarFn::constant(obj.at("value").get<double>());
    if (type == "poly") return ScalarFn::poly(obj.at("coeffs").get<std::vector<double>>());
    if (type == "pow") return ScalarFn::powlaw(obj.value("amp", 1.0), obj.at("expo").get<double>());
    if (type == "sin" || type == "cos") {
        const double amp = obj.value("amp", 1.0);
        const double omega = obj.value("omega", 1.0);
        const double phase = obj.value("phase", 0.0);
        return type == "sin" ? ScalarFn::sinusoid(amp, omega, phase)
                             : ScalarFn::cosine(amp, omega, phase);
    }
    throw std::invalid_argument("scalar function: unknown type '" + type + "'");
}

PhysConsts parse_consts(const json& obj, double f) {
    PhysConsts c;
    c.f = f;
    if (!obj.is_null()) {
        require_keys(obj, {"R", "cp", "allow_kappa_one"}, "consts");
        c.R = obj.value("R", c.R);
        c.cp = obj.value("cp", c.cp);
        c.allow_kappa_one = obj.value("allow_kappa_one", false);
    }
    c.validate();
    return c;
}

Box parse_box(const json& obj) {
    Box b;
    if (obj.is_null()) return b;
    require_keys(obj, {"t", "x", "y", "p"}, "box");
    auto pair = [&](const char* key, double& lo, double& hi) {
        if (!obj.contains(key)) return;
        const auto arr = obj.at(key).get<std::vector<double>>();
        if (arr.size() != 2) throw std::invalid_argument("box: expected [lo, hi]");
        lo = arr[0];
        hi = arr[1];
    };
    pair("t", b.t_lo, b.t_hi);
    pair("x", b.x_lo, b.x_hi);
    pair("y", b.y_lo, b.y_hi);
    pair("p", b.p_lo, b.p_hi);
    b.validate();
    return b;
}

namespace {

std::vector<Monomial> parse_monomials(const json& arr, const std::string& where) {
    std::vector<Monomial> out;
    if (arr.is_null()) return out;
    for (const auto& term : arr) {
        require_keys(term, {"c", "t", "x", "y", "p"}, where);
        Monomial m;
        m.c = term.at("c").get<double>();
        m.kt = term.value("t", 0);
        m.kx = term.value("x", 0);
        m.ky = term.value("y", 0);
        m.kp = term.value("p", 0);
        out.push_back(m);
    }
    return out;
}

}  // namespace

FieldConfig parse_field(const json& obj, const PhysConsts& consts) {
    require_keys(obj,
                 {"name", "u0", "v0", "T0", "p_ref", "f", "u", "v", "w", "phi", "T", "spec"},
                 "field");
    const std::string name = obj.at("name").get<std::string>();
    if (name == "stratified" || name == "inertial") {
        const ScalarFn u0 = obj.contains("u0") ? parse_scalar_fn(obj.at("u0")) : ScalarFn();
        const ScalarFn v0 = obj.contains("v0") ? parse_scalar_fn(obj.at("v0")) : ScalarFn();
        const ScalarFn T0 =
            obj.contains("T0") ? parse_scalar_fn(obj.at("T0")) : ScalarFn::constant(1.0);
        const double p_ref = obj.value("p_ref", 1.0);
        if (name == "stratified") return {make_stratified(u0, v0, T0, p_ref, consts), name};
        const double f = obj.value("f", consts.f);
        return {make_inertial(u0, v0, T0, p_ref, f, consts), name};
    }
    if (name == "manufactured-polynomial") {
        return {make_polynomial(parse_monomials(obj.value("u", json()), "field.u"),
                                parse_monomials(obj.value("v", json()), "field.v"),
                                parse_monomials(obj.value("w", json()), "field.w"),
                                parse_monomials(obj.value("phi", json()), "field.phi"),
                                parse_monomials(obj.value("T", json()), "field.T")),
                name};
    }
    if (name == "reduced") {
        return {assemble_solution(parse_reduction_spec(obj.at("spec"), consts)), name};
    }
    throw std::invalid_argument("field: unknown name '" + name + "'");
}

HeatingField parse_heating(const json& obj) {
    if (obj.is_null()) return HeatingField::zero();
    if (obj.is_string()) {
        if (obj.get<std::string>() == "zero") return HeatingField::zero();
        throw std::invalid_argument("heating: unknown shorthand");
    }
    require_keys(obj, {"type", "terms"}, "heating");
    const std::string type = obj.at("type").get<std::string>();
    if (type == "zero") return HeatingField::zero();
    if (type == "monomials") {
        const auto terms = parse_monomials(obj.at("terms"), "heating.terms");
        return HeatingField([terms](const Point4& z) {
            double acc = 0.0;
            for (const auto& m : terms)
                acc += m.c * std::pow(z.t, m.kt) * std::pow(z.x, m.kx) * std::pow(z.y, m.ky) *
                       std::pow(z.p, m.kp);
            return acc;
        });
    }
    throw std::invalid_argument("heating: unknown type '" + type + "'");
}

SymmetryParams parse_symmetry_params(const json& obj) {
    require_keys(obj,
                 {"eps0", "eps1", "eps2", "eps3", "eps4", "angle", "reflect", "beta1", "beta2",
                  "alpha"},
                 "symmetry params");
    SymmetryParams P;
    P.eps0 = obj.value("eps0", 0.0);
    P.eps1 = obj.value("eps1", 1.0);
    P.eps2 = obj.value("eps2", 1.0);
    P.eps3 = obj.value("eps3", 1.0);
    P.eps4 = obj.value("eps4", 0.0);
    P.angle = obj.value("angle", 0.0);
    P.reflect = obj.value("reflect", false);
    if (obj.contains("beta1")) P.beta1 = parse_scalar_fn(obj.at("beta1"));
    if (obj.contains("beta2")) P.beta2 = parse_scalar_fn(obj.at("beta2"));
    if (obj.contains("alpha")) P.alpha = parse_scalar_fn(obj.at("alpha"));
    P.validate();
    return P;
}

ReductionSpec parse_reduction_spec(const json& obj, const PhysConsts& consts) {
    require_keys(obj,
                 {"gamma1", "gamma2", "sigma1", "sigma2", "a1", "a2", "chi", "v0x", "v0y", "T0",
                  "t0", "p0", "t_range", "steps_per_unit", "phi_panels"},
                 "reduction spec");
    ReductionSpec s;
    s.consts = consts;
    s.gamma1 = parse_scalar_fn(obj.at("gamma1"));
    s.gamma2 = parse_scalar_fn(obj.at("gamma2"));
    s.sigma1 = parse_scalar_fn(obj.at("sigma1"));
    s.sigma2 = parse_scalar_fn(obj.at("sigma2"));
    s.a1 = obj.value("a1", 0.0);
    s.a2 = obj.value("a2", 0.0);
    if (obj.contains("chi")) s.chi = parse_scalar_fn(obj.at("chi"));
    if (obj.contains("v0x")) s.v0x = parse_scalar_fn(obj.at("v0x"));
    if (obj.contains("v0y")) s.v0y = parse_scalar_fn(obj.at("v0y"));
    if (obj.contains("T0")) s.T0 = parse_scalar_fn(obj.at("T0"));
    s.t0 = obj.value("t0", 0.0);
    s.p0 = obj.value("p0", 1.0);
    if (obj.contains("t_range")) {
        const auto arr = obj.at("t_range").get<std::vector<double>>();
        if (arr.size() != 2) throw std::invalid_argument("reduction spec: t_range is [lo, hi]");
        s.t_lo = arr[0];
        s.t_hi = arr[1];
    }
    s.steps_per_unit = obj.value("steps_per_unit", 1000);
    s.phi_panels = obj.value("phi_panels", 32);
    s.validate();
    return s;
}

}  // namespace pesym::config
