import cmath
from fractions import Fraction

import numpy as np
import pytest

from ncsphere.theta_spheres import (HodgeTable, NotUnitary, ThetaConfig, build_hodge, build_instanton,
                                    build_theta_spheres, classical_oracle_check, self_duality_check,
                                    self_duality_residual, su2_action_check, theta_suite, verify_clifford,
                                    verify_hodge, verify_subalgebra_map)


def test_psi_ratio_is_mubar(cfg13, spheres13):
    s7 = spheres13[1]
    assert s7["psi1"] * s7["psi3"] == s7["psi3"] * s7["psi1"] * cfg13.mubar


def test_form_squares_vanish(spheres13):
    s4 = spheres13[0]
    dz1 = s4["z1"].d()
    assert (dz1 * dz1).is_zero()


def test_exact_root_of_unity_at_quarter():
    cfg = ThetaConfig(Fraction(1, 4))
    assert cfg.exact_mu is not None
    assert abs(complex(cfg.exact_mu) - cmath.exp(1j * cmath.pi / 4)) < 1e-15


def test_subalgebra(cfg):
    rep = verify_subalgebra_map(cfg)
    assert rep.ok, rep.text()


def test_clifford(cfg):
    rep = verify_clifford(cfg)
    assert rep.ok, rep.text()


def test_clifford_displayed_grading_factor(cfg13):
    # -1/4 [g1,g1*][g2,g2*] is 4 g0, not g0
    rep = verify_clifford(cfg13)
    assert rep["clifford.grading_quarter"].ok
    assert rep["clifford.grading"].ok


def test_instanton(cfg):
    data = build_instanton(cfg)
    assert data.report.ok
    s4 = data.p.ring
    assert data.p[0, 2] == s4["z1"] * Fraction(1, 2)


@pytest.mark.parametrize("w", [
    np.eye(2),
    np.diag([cmath.exp(0.3j), cmath.exp(-0.3j)]),
    np.array([[np.cos(0.7), -np.sin(0.7)], [np.sin(0.7), np.cos(0.7)]]),
])
def test_su2_action(w, cfg13):
    assert su2_action_check(w, cfg13).ok


def test_su2_rejects_non_unitary(cfg13):
    with pytest.raises(NotUnitary):
        su2_action_check(np.diag([2.0, 0.5]), cfg13)


def test_hodge_classical_oracle():
    assert classical_oracle_check() <= 1e-10


def test_hodge(cfg):
    assert verify_hodge(cfg).ok


def test_hodge_zero_form_is_self_dual(cfg13):
    h = build_hodge(cfg13, check_oracle=False)
    s4 = h.sys
    assert h.star2(s4.zero()).is_zero()


def test_hodge_involution_on_basis_element(cfg13):
    h = build_hodge(cfg13, check_oracle=False)
    s4 = h.sys
    w = s4["z1"].d() * s4["z2"].d()
    assert h.star2(h.star2(w)) == w


def test_reversed_orientation_is_anti_self_dual(instanton13, cfg13):
    h = build_hodge(cfg13, check_oracle=False)
    assert self_duality_check(instanton13, h)
    assert self_duality_check(instanton13, HodgeTable(cfg13, orientation=-h.orientation), sign=-1)


@pytest.mark.parametrize("theta", [Fraction(1, 4), Fraction(1, 3)])
def test_verbatim_hodge_transport_fails(theta):
    cfg = ThetaConfig(theta)
    h = HodgeTable(cfg, mode="verbatim")
    assert not h.involution_check()[0]
    assert not self_duality_residual(build_instanton(cfg), h)[0]


def test_verbatim_agrees_at_theta_zero():
    cfg = ThetaConfig(Fraction(0))
    assert HodgeTable(cfg, mode="verbatim").involution_check()[0]


def test_theta_suite(cfg):
    rep = theta_suite(cfg)
    assert rep.ok, rep.text()


def test_build_checks_overlaps(cfg):
    assert len(build_theta_spheres(cfg, check=True)) == 2
