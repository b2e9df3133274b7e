#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pesym/config.hpp"
#include "pesym/liealg.hpp"

namespace py = pybind11;
using namespace pesym;

namespace {

PhysConsts consts_from(double f, double R, double cp) {
    PhysConsts c;
    c.f = f;
    c.R = R;
    c.cp = cp;
    c.validate();
    return c;
}

FieldPtr field_from_json(const std::string& text, const PhysConsts& consts) {
    return config::parse_field(nlohmann::json::parse(text), consts).field;
}

py::dict norms_to_dict(const ResidualNorms& n) {
    py::dict d;
    const char* comp[5] = {"u", "v", "hyd", "cont", "T"};
    py::dict linf, rms;
    for (int i = 0; i < 5; ++i) {
        linf[comp[i]] = n.linf[i];
        rms[comp[i]] = n.rms[i];
    }
    d["linf"] = linf;
    d["rms"] = rms;
    d["linf_total"] = n.linf_total();
    d["points"] = n.n_points;
    return d;
}

}  // namespace

PYBIND11_MODULE(pesym, m) {
    m.doc() = "Symmetry toolkit for the adiabatic primitive equations in pressure coordinates";

    m.def(
        "residual_norms",
        [](const std::string& field_json, double f, size_t points, uint64_t seed, double R,
           double cp) {
            const PhysConsts consts = consts_from(f, R, cp);
            FieldPtr field = field_from_json(field_json, consts);
            const auto pts = sample_points(seed, points, Box::standard());
            return norms_to_dict(residual_norms(*field, consts, HeatingField::zero(), pts));
        },
        py::arg("field_json"), py::arg("f") = 0.0, py::arg("points") = 200, py::arg("seed") = 1,
        py::arg("R") = 2.0 / 7.0, py::arg("cp") = 1.0,
        "Residual norms of a field configuration over seeded sample points.");

    m.def(
        "derotate_point",
        [](double f, const std::vector<double>& z9, bool inverse) {
            if (z9.size() != 9) throw std::invalid_argument("expected a 9-tuple");
            std::array<double, 9> a;
            std::copy(z9.begin(), z9.end(), a.begin());
            const GroupMap g = derotation(f);
            const Point9 q = Point9::from_flat(a);
            const auto out = (inverse ? g.inv(q) : g.fwd(q)).flat();
            return std::vector<double>(out.begin(), out.end());
        },
        py::arg("f"), py::arg("z9"), py::arg("inverse") = false,
        "Apply the de-rotation map (or its inverse) to a 9-tuple.");

    m.def(
        "derotation_transport_residual",
        [](const std::string& field_json, double f, size_t points, uint64_t seed) {
            const PhysConsts rest = consts_from(0.0, 2.0 / 7.0, 1.0);
            FieldPtr field = field_from_json(field_json, rest);
            FieldPtr pushed = pushforward_field(invert(derotation(f)), field);
            const auto pts = sample_points(seed, points, Box::standard());
            return norms_to_dict(
                residual_norms(*pushed, rest.with_f(f), HeatingField::zero(), pts));
        },
        py::arg("field_json"), py::arg("f") = 1.0, py::arg("points") = 200, py::arg("seed") = 1,
        "Residual of a resting-frame solution transported to a rotating frame.");

    m.def(
        "megaideal_chain",
        [](int degree) {
            const auto chain = liealg::megaideal_chain(degree);
            py::list out;
            for (const auto& e : chain.entries) {
                py::dict d;
                d["label"] = e.label;
                d["dim"] = e.computed.dim();
                d["exact_match"] = e.exact_match;
                d["interior_match"] = e.interior_match;
                d["ideal"] = e.ideal;
                out.append(d);
            }
            return out;
        },
        py::arg("degree") = 4, "Labelled megaideal chain of the truncated invariance algebra.");

    m.def(
        "isomorphism_defect",
        [](double f, size_t points, uint64_t seed, bool corrupted) {
            return liealg::isomorphism_check(f, points, seed, consts_from(f, 2.0 / 7.0, 1.0),
                                             corrupted);
        },
        py::arg("f") = 1.0, py::arg("points") = 20, py::arg("seed") = 1,
        py::arg("corrupted") = false,
        "Worst commutator discrepancy of the redefined rotating-frame basis.");

    m.def(
        "reduced_solution_residual",
        [](const std::string& spec_json, double f, size_t points, uint64_t seed) {
            const PhysConsts consts = consts_from(0.0, 2.0 / 7.0, 1.0);
            const ReductionSpec spec =
                config::parse_reduction_spec(nlohmann::json::parse(spec_json), consts);
            FieldPtr field =
                f == 0.0 ? assemble_solution(spec) : rotating_family(spec, f);
            Box box = Box::standard();
            box.t_lo = spec.t_lo;
            box.t_hi = spec.t_hi;
            const auto pts = sample_points(seed, points, box);
            return norms_to_dict(
                residual_norms(*field, consts.with_f(f), HeatingField::zero(), pts));
        },
        py::arg("spec_json"), py::arg("f") = 0.0, py::arg("points") = 100, py::arg("seed") = 1,
        "Residual of an assembled invariant solution (optionally in a rotating frame).");
}
