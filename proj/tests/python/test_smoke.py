"""Smoke tests of the python bindings against pinned toolkit behavior."""

import json

import pesym

STRATIFIED = json.dumps(
    {
        "name": "stratified",
        "u0": {"type": "poly", "coeffs": [0.3, 0.4]},
        "v0": {"type": "poly", "coeffs": [-0.2, 0.1]},
        "T0": {"type": "poly", "coeffs": [1.0, -0.25]},
        "p_ref": 1.0,
    }
)

ROTATION_SPEC = json.dumps(
    {
        "gamma1": {"type": "cos", "amp": 1.0, "omega": 1.0},
        "gamma2": {"type": "sin", "amp": 1.0, "omega": 1.0},
        "sigma1": {"type": "sin", "amp": -1.0, "omega": 1.0},
        "sigma2": {"type": "cos", "amp": 1.0, "omega": 1.0},
        "v0x": {"type": "poly", "coeffs": [0.0, 1.0]},
        "v0y": 0.0,
        "T0": 0.0,
        "t0": 0.0,
        "p0": 1.0,
        "t_range": [0.0, 1.0],
    }
)


def test_stratified_solution_residual():
    out = pesym.residual_norms(STRATIFIED, f=0.0, points=300, seed=1)
    assert out["points"] == 300
    assert out["linf_total"] < 1e-10
    assert out["linf"]["hyd"] < 1e-12


def test_derotation_round_trip():
    z = [0.4, 0.7, -0.2, 0.6, 0.1, 0.5, -0.3, 0.8, 1.1]
    fwd = pesym.derotate_point(1.3, z)
    back = pesym.derotate_point(1.3, fwd, inverse=True)
    assert max(abs(a - b) for a, b in zip(back, z)) < 1e-12
    ident = pesym.derotate_point(0.0, z)
    assert ident == z


def test_transport_to_rotating_frame():
    out = pesym.derotation_transport_residual(STRATIFIED, f=1.0, points=200, seed=2)
    assert out["linf_total"] < 1e-8


def test_megaideal_chain():
    chain = pesym.megaideal_chain(4)
    assert len(chain) == 11
    assert all(e["interior_match"] and e["ideal"] for e in chain)
    dims = [e["dim"] for e in chain]
    assert dims[0] == 1 and dims[1] == 2 and dims[9] == 2


def test_isomorphism_defect():
    assert pesym.isomorphism_defect(1.0, points=5, seed=3) < 1e-6
    assert pesym.isomorphism_defect(1.0, points=5, seed=3, corrupted=True) > 1e-2


def test_reduced_family_residual():
    out = pesym.reduced_solution_residual(ROTATION_SPEC, f=0.0, points=60, seed=4)
    assert out["linf_total"] < 1e-6
    rot = pesym.reduced_solution_residual(ROTATION_SPEC, f=1.0, points=60, seed=4)
    assert rot["linf_total"] < 1e-6
