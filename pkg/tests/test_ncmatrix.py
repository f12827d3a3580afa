import pytest

from ncsphere import q_sympl
from ncsphere.ncmatrix import (NCMatrix, NotAProjection, ShapeMismatch, bianchi_check, dagger,
                               grassmann_curvature, is_projection, mat_d, UniversalCalculus)
from ncsphere.theta_spheres import dirac_matrices, psi_matrix


def test_unitarity_theta(cfg):
    from ncsphere.theta_spheres import build_theta_spheres

    _, s7 = build_theta_spheres(cfg)
    Psi = psi_matrix(s7)
    assert dagger(Psi) * Psi == NCMatrix.identity(s7, 2)
    assert mat_d(dagger(Psi) * Psi).is_zero()


def test_unitarity_q():
    Psi = q_sympl.psi_q()
    assert dagger(Psi) * Psi == NCMatrix.identity(q_sympl.s7q(), 2)


def test_identity_is_neutral(instanton13):
    p = instanton13.p
    assert NCMatrix.identity(p.ring, 4) * p == p


def test_shape_mismatch(instanton13):
    with pytest.raises(ShapeMismatch):
        instanton13.Psi * instanton13.Psi


def test_dagger(instanton13, cfg13, spheres13):
    p = instanton13.p
    assert dagger(p) == p
    assert dagger(dagger(instanton13.Psi)) == instanton13.Psi
    g0 = dirac_matrices(cfg13, spheres13[0])[0]
    assert dagger(g0) == g0


def test_d_of_identity_vanishes(spheres13):
    assert mat_d(NCMatrix.identity(spheres13[0], 3)).is_zero()


def test_curvature_of_constant_projections(spheres13):
    s4 = spheres13[0]
    eye = NCMatrix.identity(s4, 2)
    diag = NCMatrix(s4, [[s4.one(), s4.zero()], [s4.zero(), s4.zero()]])
    assert grassmann_curvature(eye).is_zero()
    assert grassmann_curvature(diag).is_zero()
    assert bianchi_check(diag)


def test_not_a_projection(spheres13):
    s4 = spheres13[0]
    with pytest.raises(NotAProjection):
        grassmann_curvature(NCMatrix(s4, [[s4["z0"]]]))


def test_curvature_is_a_module_map(instanton13):
    p, F = instanton13.p, instanton13.Fp
    assert p * F * p == F


def test_bianchi_theta(instanton13):
    assert bianchi_check(instanton13.p)


def test_bianchi_q_in_universal_calculus():
    p = q_sympl.build_projection_q().p
    assert is_projection(p)
    P = UniversalCalculus(p.ring).embed_matrix(p)
    assert (P * P - P).is_zero()
    assert bianchi_check(P)


def test_universal_d_squares_to_zero(spheres13):
    calc = UniversalCalculus(q_sympl.s7q())
    a = calc.embed(q_sympl.x(1) * q_sympl.xb(2))
    assert not a.d().is_zero()
    assert a.d().d().is_zero()
