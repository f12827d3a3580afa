from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncsphere import q_sympl
from ncsphere.ncalg import (MissingFormGenerator, NonIntegralPhase, StepBudgetExceeded, builtin,
                            check_overlaps, deformation_phase, load_presentation)
from ncsphere.scalars import Scalar, UnitMode

J = [[0, 1], [-1, 0]]
HALF_J = [[0, Fraction(1, 2)], [Fraction(-1, 2), 0]]


def test_s4_quasi_commutation(spheres13):
    s4 = spheres13[0]
    z1, z2 = s4["z1"], s4["z2"]
    lam = s4.u(2)
    assert (z2 * z1 - z1 * z2 * lam.inverse()).is_zero()
    assert (z1 * z2 - z2 * z1 * lam).is_zero()


def test_s7q_x3x2_rule():
    s = q_sympl.s7q()
    q = q_sympl.q
    lhs = s["x3"] * s["x2"]
    rhs = s["x2"] * s["x3"] * q(-2) + s["x1"] * s["x4"] * (q(-2) * (q(-1) - q(1)))
    assert (lhs - rhs).is_zero()


def test_empty_word_is_normal(spheres13):
    s4 = spheres13[0]
    assert s4.one().canonical() == s4.one()


@pytest.mark.parametrize("name", ["s4_theta", "s7_theta", "s7_q", "suq2", "bq"])
def test_shipped_systems_are_confluent(name):
    rep = check_overlaps(builtin(name))
    assert rep.ok, rep.failures
    assert rep.checked > 0


def test_single_rule_system_is_vacuously_confluent():
    sys = load_presentation("system one\nunit real\ngen x 0 0\ngen y 0 0\nrel y*x = q*x*y\n")
    assert check_overlaps(sys).ok


def test_star_of_generators_and_products(spheres13):
    s4, s7 = spheres13
    assert s4["z1"].star() == s4["z1b"]
    p = s7["psi1"] * s7["psi2"]
    assert p.star() == s7["psi2b"] * s7["psi1b"]
    dz = s4["z1"].d() * s4["z2"].d()
    assert dz.star() == -(s4["z2b"].d() * s4["z1b"].d())


def test_differential_examples(spheres13):
    s4 = spheres13[0]
    z1, z2 = s4["z1"], s4["z2"]
    assert (z1 * z2).d() == z1.d() * z2 + z1 * z2.d()
    assert z1.d().d().is_zero()
    sphere = s4["z0"] * s4["z0"] + s4["z1b"] * z1 + s4["z2b"] * z2
    assert sphere == s4.one()
    assert sphere.d().is_zero()


def test_missing_form_generator():
    s = q_sympl.s7q()
    with pytest.raises(MissingFormGenerator):
        s["x1"].d()


def test_step_budget():
    s = builtin("s7_q", step_budget=3)
    x = s["x4"]
    with pytest.raises(StepBudgetExceeded):
        (x * s["x3"] * s["x2"] * s["x1"]).canonical()


def test_deformation_phase_examples():
    assert deformation_phase((1, 0), (0, -1), HALF_J) == Scalar.unit(-1)
    assert deformation_phase((1, 0), (0, 1), HALF_J) == Scalar.unit(1)
    assert deformation_phase((1, 0), (0, 1), J) == Scalar.unit(2)
    assert deformation_phase((2, 3), (2, 3), J).is_one()
    with pytest.raises(NonIntegralPhase):
        deformation_phase((1, 0), (0, 1), [[0, Fraction(1, 4)], [Fraction(-1, 4), 0]])


weights = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@given(weights, weights)
def test_deformation_phase_antisymmetric(r, s):
    assert deformation_phase(r, s, J) * deformation_phase(s, r, J) == Scalar.const(1)


# --- random polynomials ---------------------------------------------------------------


def _poly(sys, draw_words, coeffs):
    gens = [g.index for g in sys.generators if g.degree == 0]
    out = sys.zero()
    for w, (k, c) in zip(draw_words, coeffs):
        out = out + sys.poly({tuple(gens[i % len(gens)] for i in w): sys.u(k) * c})
    return out


words = st.lists(st.lists(st.integers(0, 7), max_size=3), min_size=1, max_size=3)
coeffs = st.lists(st.tuples(st.integers(-2, 2), st.sampled_from([1, -1, 2, Fraction(1, 2)])), min_size=3, max_size=3)


@pytest.fixture(scope="module", params=["S4", "S7", "S7q"])
def system(request, spheres13):
    return {"S4": spheres13[0], "S7": spheres13[1], "S7q": q_sympl.s7q()}[request.param]


@given(words, coeffs, words, coeffs, words, coeffs)
def test_multiplication_is_associative(system, w1, c1, w2, c2, w3, c3):
    a, b, c = (_poly(system, w, k) for w, k in ((w1, c1), (w2, c2), (w3, c3)))
    assert (a * b) * c == a * (b * c)


@given(words, coeffs, words, coeffs)
def test_star_is_antimultiplicative(system, w1, c1, w2, c2):
    a, b = _poly(system, w1, c1), _poly(system, w2, c2)
    assert (a * b).star() == b.star() * a.star()
    assert a.star().star() == a


@given(words, coeffs)
def test_normal_form_is_idempotent(system, w1, c1):
    a = _poly(system, w1, c1)
    n = a.canonical()
    assert n.canonical().terms == n.terms


@given(words, coeffs, words, coeffs)
def test_leibniz(spheres13, w1, c1, w2, c2):
    s7 = spheres13[1]
    a, b = _poly(s7, w1, c1), _poly(s7, w2, c2)
    assert (a * b).d() == a.d() * b + a * b.d()


def test_theta_zero_is_commutative():
    from ncsphere.theta_spheres import ThetaConfig, build_theta_spheres

    s4, s7 = build_theta_spheres(ThetaConfig(Fraction(0)))
    for x in ("z1", "z2", "z1b", "z0"):
        for y in ("z1", "z2", "z2b"):
            assert s4[x] * s4[y] == s4[y] * s4[x]
    assert s7["psi1"] * s7["psi3"] == s7["psi3"] * s7["psi1"]


def test_real_mode_scalars_in_q_system():
    assert q_sympl.s7q().unit_mode is UnitMode.REAL
