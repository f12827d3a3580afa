from fractions import Fraction

import pytest

from ncsphere.theta_spheres import ThetaConfig, build_instanton
from ncsphere.twisted_symmetry import (CONFORMAL, SO5, SymmetryAction, UnknownGenerator, E, G, bracket_check,
                                       conformal_variations, dirac_bracket_check, generator, lift_check,
                                       omega_invariance_check, relation_compatibility, so5_suite, so51_suite,
                                       variation_self_duality, variations_suite)

CFG = ThetaConfig(Fraction(1, 3))


@pytest.fixture(scope="module")
def act():
    return SymmetryAction(CFG)


def test_cartan_on_letters(act):
    s4 = act.s4
    assert act.act("H1", s4["z1"]) == s4["z1"]
    assert act.act("H1", s4["z2"]).is_zero()
    assert act.act("H1", s4.one()).is_zero()


def test_root_generator_respects_relation(act):
    s4 = act.s4
    rel = s4["z1"] * s4["z2"] - s4["z2"] * s4["z1"] * CFG.lam
    assert act.act(E((1, 1)), rel).is_zero()


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        generator("E(+2,+0)")


@pytest.mark.parametrize("pair", [("H1", "E(+1,+1)"), ("E(-1,-1)", "E(+1,+1)"), ("E(-1,+0)", "G(+1,+0)")])
def test_named_brackets(act, pair):
    gens = [generator(n) for n in pair]
    rep, _ = bracket_check(act, gens)
    assert rep.ok, rep.text()


def test_structure_constants_are_theta_independent():
    def consts(theta):
        _, c = bracket_check(SymmetryAction(ThetaConfig(theta)), SO5, spheres=("S4",))
        return {(s.g1, s.g2): str(s.value) for s in c}

    assert consts(Fraction(0)) == consts(Fraction(1, 3))


def test_dirac_brackets_and_printed_form(act):
    rep = dirac_bracket_check(act, printed=True)
    failed = {c.id for c in rep.failures()}
    assert failed == {"dirac.g2g0_printed"}


def test_printed_dirac_form_holds_classically():
    rep = dirac_bracket_check(SymmetryAction(ThetaConfig(Fraction(0))), printed=True)
    assert rep.ok


@pytest.mark.parametrize("name", ["H1", "E(+1,-1)", "E(-1,+1)"])
def test_omega_invariance_examples(act, name):
    rep = omega_invariance_check(act)
    assert rep[f"omega.matrix.{name}"].ok and rep[f"omega.action.{name}"].ok


def test_swapped_e01_breaks_the_lift():
    rep = lift_check(SymmetryAction(CFG, e01_variant="swapped"), [E((0, 1))])
    assert not rep.ok
    assert lift_check(SymmetryAction(CFG), [E((0, 1))]).ok


def test_plus_sign_leibniz_breaks_the_lift():
    rep = lift_check(SymmetryAction(CFG, leibniz_sign=+1), [E((1, 1))])
    assert not rep.ok


def test_compatibility_with_relations(act):
    assert relation_compatibility(act, SO5 + CONFORMAL).ok


def test_printed_delta_F_exponents_fail_off_classical():
    act = SymmetryAction(CFG)
    var = conformal_variations(act, build_instanton(CFG), printed=True)
    failed = {c.id for c in var.report.failures()}
    assert failed == {"variation.F.1", "variation.F.3"}


def test_variations_self_dual(act):
    var = conformal_variations(act)
    assert var.report.ok
    rep = variation_self_duality(act, var)
    assert rep.ok
    assert rep["variation.self_dual.0"].ok and rep["variation.self_dual.3"].ok


def test_delta_F0(act):
    var = conformal_variations(act)
    assert var.report["variation.F.0"].ok
    assert var.report["variation.key.0"].ok


@pytest.mark.parametrize("suite", [so5_suite, so51_suite, variations_suite])
def test_suites(cfg, suite):
    rep = suite(cfg)
    assert rep.ok, rep.text()


def test_conformal_generators_exist():
    assert G((1, 0)).twisted and not generator("H0").twisted
