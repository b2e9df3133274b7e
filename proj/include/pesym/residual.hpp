#ifndef PESYM_RESIDUAL_HPP
#define PESYM_RESIDUAL_HPP

#include <array>
#include <vector>

#include "pesym/fields.hpp"

namespace pesym {

/// The five residual components of the governing system, every term moved to
/// the left-hand side:
///   r_u    = u_t + u u_x + v u_y + w u_p - f v + phi_x
///   r_v    = v_t + u v_x + v v_y + w v_p + f u + phi_y
///   r_hyd  = phi_p + (R/p) T
///   r_cont = u_x + v_y + w_p
///   r_T    = T_t + u T_x + v T_y + w T_p - kappa (w/p) T - J/cp
struct Residual5 {
    double r_u = 0, r_v = 0, r_hyd = 0, r_cont = 0, r_T = 0;
    double operator[](int i) const;
    double linf() const;
};

Residual5 pe_residual(const StateField& field, const PhysConsts& consts,
                      const HeatingField& J, const Point4& z);

struct ResidualNorms {
    std::array<double, 5> linf{};
    std::array<double, 5> rms{};
    size_t n_points = 0;
    double linf_total() const;
};

ResidualNorms residual_norms(const StateField& field, const PhysConsts& consts,
                             const HeatingField& J, const std::vector<Point4>& pts);

/// An infinitesimal generator: nine coefficient functions of the combined
/// 9-tuple, ordered (tau, xi_x, xi_y, xi_p, eta_u, eta_v, eta_w, eta_phi,
/// eta_T).
struct VectorFieldSpec {
    std::string label;
    std::function<std::array<double, 9>(const Point9&)> coeffs;
};

/// Evolutionary components Q[s^a] = eta^a - tau s^a_t - xi.grad s^a - xi^p s^a_p
/// of the generator's first-order action on a field.
struct Characteristic5 {
    std::array<double, 5> q{};
};

Characteristic5 characteristic(const VectorFieldSpec& vf, const StateField& field,
                               const Point4& z);

/// Field deformed to first order along the generator: s + eps * Q[s].
/// Partials of the deformed field use fourth-order central differences of its
/// evaluation (the base field's own partials stay exact inside Q).
FieldPtr deform_first_order(FieldPtr field, const VectorFieldSpec& vf, double eps);

/// L-infinity residual of the deformed field over the given points. The base
/// field must already solve the system (gate: residual below base_gate),
/// otherwise the deformation error would be conflated with the base error.
double infinitesimal_defect(const VectorFieldSpec& vf, FieldPtr solution,
                            const PhysConsts& consts, double eps,
                            const std::vector<Point4>& pts, double base_gate = 1e-9);

/// Defects for a decreasing ladder of eps values (the quadratic-scaling probe).
std::vector<double> defect_sweep(const VectorFieldSpec& vf, FieldPtr solution,
                                 const PhysConsts& consts, const std::vector<double>& eps,
                                 const std::vector<Point4>& pts, double base_gate = 1e-9);

/// True when successive defect ratios sit in the O(eps^2) band [50,200] per
/// decade, or the defect is at rounding level throughout.
bool quadratic_defect_verdict(const std::vector<double>& defects, double floor = 1e-12);

}  // namespace pesym

#endif
