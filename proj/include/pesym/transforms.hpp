#ifndef PESYM_TRANSFORMS_HPP
#define PESYM_TRANSFORMS_HPP

#include <utility>

#include "pesym/fields.hpp"
#include "pesym/residual.hpp"

namespace pesym {

/// Invertible point transformation of the combined 9-dimensional space.
/// The independent-variable part must not depend on the dependent variables,
/// so fields can be transported through the map. All members are closed
/// forms; `jac` is the 9x9 derivative of `fwd`.
struct GroupMap {
    std::string label;
    std::function<Point9(const Point9&)> fwd;
    std::function<Point9(const Point9&)> inv;
    std::function<Point4(const Point4&)> base_fwd;
    std::function<Point4(const Point4&)> base_inv;
    std::function<Mat9(const Point9&)> jac;
};

GroupMap identity_map();

/// Change of frame that removes a constant Coriolis parameter f: forward maps
/// rotating-frame coordinates to the frame at rest (horizontal rotation at
/// angular rate f/2, matching velocity shift, parabolic geopotential offset).
GroupMap derotation(double f);

/// Parameters of the complete point-symmetry group of the f=0 system.
struct SymmetryParams {
    double eps0 = 0.0;   // time shift
    double eps1 = 1.0;   // time scale, nonzero (negative allowed)
    double eps2 = 1.0;   // horizontal scale, positive
    double eps3 = 1.0;   // pressure scale, positive
    double eps4 = 0.0;   // gauge constant on (phi, T)
    double angle = 0.0;  // rotation angle of the orthogonal block
    bool reflect = false;
    ScalarFn beta1, beta2;  // time-dependent horizontal shifts
    ScalarFn alpha;         // geopotential gauge

    void validate() const;
    Mat2 orth() const;
};

enum class Perturb { None, OmegaScale, TScale };

/// The group element for the given parameters. `perturb`/`factor` scale one
/// coefficient away from its constrained value (negative-control runs).
GroupMap symmetry_map(const SymmetryParams& params, const PhysConsts& consts,
                      Perturb perturb = Perturb::None, double factor = 1.0);

/// The two discrete involutions: simultaneous reversal of time and velocity,
/// and the mirror map in x and u.
std::pair<GroupMap, GroupMap> discrete_involutions();

GroupMap compose(const GroupMap& g1, const GroupMap& g2);
GroupMap invert(const GroupMap& g);

/// Transported field: s~(z~) = dependent part of g.fwd(z, s(z)) with
/// z = g.base_inv(z~). Exact partials via the chain rule when the source has
/// them.
FieldPtr pushforward_field(const GroupMap& g, FieldPtr field);

/// Transported heating: J~ = J o g.base_inv.
HeatingField pushforward_heating(const GroupMap& g, const HeatingField& J);

/// Jacobian of g.fwd applied to the generator's coefficient vector at pt;
/// the result lives at the image point.
std::array<double, 9> pushforward_vf(const GroupMap& g, const VectorFieldSpec& vf,
                                     const Point9& pt);

/// FD probe of the map Jacobian (column-by-column central differences);
/// used to cross-validate the closed forms.
Mat9 jacobian_fd(const GroupMap& g, const Point9& pt, double h);

/// Seeded random group element with nontrivial entries in every parameter
/// (time reversal and reflections included).
SymmetryParams random_symmetry_params(RandomStream& rng);

}  // namespace pesym

#endif
