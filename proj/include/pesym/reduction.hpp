#ifndef PESYM_REDUCTION_HPP
#define PESYM_REDUCTION_HPP

#include "pesym/fields.hpp"
#include "pesym/transforms.hpp"

namespace pesym {

/// Data of the two-generator invariant solution family: a commuting pair of
/// generalized boosts with parameter pairs gamma = (gamma1, gamma2) and
/// sigma = (sigma1, sigma2) (compatibility gamma_tt.sigma - sigma_tt.gamma = 0,
/// delta = gamma1 sigma2 - gamma2 sigma1 > 0), gauge weights a1, a2, the free
/// vertical-velocity profile chi(t), and the profile functions v0, T0 of the
/// invariant label xi.
struct ReductionSpec {
    ScalarFn gamma1, gamma2, sigma1, sigma2;
    double a1 = 0.0, a2 = 0.0;
    ScalarFn chi;
    ScalarFn v0x, v0y, T0;
    double t0 = 0.0;  // anchor time: fundamental matrix is the identity here
    double p0 = 1.0;  // anchor pressure of the hydrostatic quadrature
    double t_lo = 0.0, t_hi = 1.0;
    PhysConsts consts;
    int steps_per_unit = 1000;  // fixed RK4 resolution of the time quadratures
    int phi_panels = 32;        // Simpson panels of the hydrostatic quadrature

    Vec2 gamma(double t) const { return {gamma1(t), gamma2(t)}; }
    Vec2 sigma(double t) const { return {sigma1(t), sigma2(t)}; }
    double delta(double t) const;
    double delta_t(double t) const;
    double delta_tt(double t) const;
    /// Shear matrix of the ansatz: A x = ((sigma_perp . x) gamma_t -
    /// (gamma_perp . x) sigma_t)/delta.
    Mat2 coupling(double t) const;
    Vec2 gauge_weight(double t) const;  // a1 sigma_perp - a2 gamma_perp

    void validate(int n_samples = 257) const;
};

struct CompatReport {
    double max_defect = 0.0;  // max |gamma_tt.sigma - sigma_tt.gamma|
    double min_delta = 0.0;
};

CompatReport check_compatibility(const ReductionSpec& spec, int n_samples);

/// Fundamental matrix table of G' = H(t) G, G(t0) = I, integrated by fixed
/// fourth-order steps with cubic Hermite dense output between nodes. The
/// inverse is integrated alongside.
class FundamentalMatrix {
public:
    FundamentalMatrix(std::function<Mat2(double)> H, double t0, double lo, double hi,
                      int steps_per_unit);
    Mat2 eval(double t) const;
    Mat2 eval_inv(double t) const;
    /// max entry of |G(t_i) Ginv(t_i) - I| over all stored nodes
    double node_consistency() const;
    std::vector<double> nodes() const;

private:
    struct Node {
        double t;
        Mat2 G, Gi, dG, dGi;
    };
    Mat2 interp(double t, bool inv) const;
    std::function<Mat2(double)> H_;
    double t0_;
    std::vector<Node> fwd_, bwd_;  // nodes above / below the anchor
    double h_fwd_ = 0, h_bwd_ = 0;
};

/// Fundamental matrix of the reduced momentum coupling (H = -A, which makes
/// the substitution vhat = G vcheck remove the shear term).
FundamentalMatrix solve_reduced_fundamental(const ReductionSpec& spec, int steps_per_unit);

/// Cumulative rescaled vertical-velocity profile int_{t0}^{t} chi/delta.
double theta(const ReductionSpec& spec, double t);

/// The assembled invariant solution. Construction validates the spec;
/// evaluation and exact partials run the shared fixed-step time quadrature
/// per requested point (immutable, thread-safe).
class ReducedSolution final : public StateField {
public:
    explicit ReducedSolution(ReductionSpec spec);

    StateValue eval(const Point4& z) const override;
    Partials partials(const Point4& z) const override;
    bool has_exact_partials() const override { return true; }

    const ReductionSpec& spec() const { return spec_; }

    // reduced profiles and their derivatives at (t, p)
    Vec2 vhat(double t, double p) const;
    Vec2 vhat_t(double t, double p) const;
    Vec2 vhat_p(double t, double p) const;
    double That(double t, double p) const;
    double That_t(double t, double p) const;
    double That_p(double t, double p) const;
    double omega_hat(double t, double p) const;
    double phihat(double t, double p) const;

    /// Pointwise residual of the reduced system: the two momentum components,
    /// the hydrostatic relation (with an FD probe of the phi quadrature), the
    /// integrated continuity relation and the heat equation.
    std::array<double, 5> reduced_residual(double t, double p) const;

protected:
    double exact_partial(const Point4& z, Var v, Comp c) const override {
        return partials(z).at(c, v);
    }

private:
    struct Trace;  // integration state at (t, xi)
    struct Derivs;
    Trace run(double t, double xi) const;
    Derivs profiles(double t, double p, const Trace& tr) const;
    void batch_run(double t, const std::vector<double>& xis, bool with_derivs,
                   std::vector<double>& That_out, std::vector<double>& That_t_out) const;
    double xi_of(double t, double p) const;
    double Theta(double t) const;  // int chi*delta

    ReductionSpec spec_;
    bool has_gauge_;
};

FieldPtr assemble_solution(ReductionSpec spec);

/// The same family transported to a frame rotating with Coriolis parameter f.
FieldPtr rotating_family(ReductionSpec spec, double f);

}  // namespace pesym

#endif
