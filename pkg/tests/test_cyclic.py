import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncsphere import cyclic, q_sympl
from ncsphere.cyclic import Chain, DegreeZero, chern_character, connes_B, hochschild_b
from ncsphere.ncmatrix import NCMatrix


@pytest.fixture(scope="module")
def s4(spheres13):
    return spheres13[0]


def chain(sys, *slots):
    return Chain.from_slots(sys, list(slots))


def test_b_on_degree_one_is_commutator(s4):
    z1, z2 = s4.gen("z1"), s4.gen("z2")
    got = hochschild_b(chain(s4, z1, z2))
    want = Chain(s4, {(w,): c for w, c in s4.reduce_terms((z1 * z2 - z2 * z1).terms).items()})
    assert got == want
    assert not got.is_zero()  # z1, z2 do not commute at theta = 1/3


def test_b_kills_units_and_rejects_degree_zero(s4):
    one = s4.one()
    assert hochschild_b(Chain.from_slots(s4, [one, one], normalized=False)).is_zero()
    with pytest.raises(DegreeZero):
        hochschild_b(chain(s4, s4.gen("z0")))


def test_normalized_complex_drops_units(s4):
    assert chain(s4, s4.gen("z0"), s4.one()).is_zero()
    assert not Chain.from_slots(s4, [s4.gen("z0"), s4.one()], normalized=False).is_zero()


def test_B_on_degree_zero_prepends_unit(s4):
    a = s4.gen("z1")
    assert connes_B(chain(s4, a)) == chain(s4, s4.one(), a)
    assert connes_B(chain(s4, a), "averaged") == chain(s4, s4.one(), a)


def test_unknown_convention(s4):
    with pytest.raises(ValueError):
        cyclic.cyclic_N(chain(s4, s4.gen("z1")), "bogus")


def test_ch0_of_identity_and_instanton(s4, instanton13):
    for n in (1, 3):
        ch = chern_character(NCMatrix.identity(s4, n), 0)
        assert ch == Chain(s4, {((),): s4.scalar(n)})
    assert chern_character(instanton13.p, 0) == Chain(s4, {((),): s4.scalar(2)})


def test_ch0_q():
    proj = q_sympl.build_projection_q()
    s = q_sympl.s7q()
    t = proj.generators["t"]
    expected = s.const(2) - t * (q_sympl.q(-4) * (1 - q_sympl.q(2)) * (1 - q_sympl.q(4)))
    assert chern_character(proj.p, 0) == cyclic.trace_chain(NCMatrix(s, [[expected]]))


def test_ch_higher_degree_capped(s4):
    with pytest.raises(ValueError):
        chern_character(NCMatrix.identity(s4, 1), 3)


def test_closure_trivial_projections(s4):
    one, zero = s4.one(), s4.zero()
    for p in (NCMatrix.identity(s4, 2), NCMatrix(s4, [[one, zero], [zero, zero]])):
        rep = cyclic.closure_check(p, include_ch2=True)
        failed = {c.id for c in rep.checks if not c.ok}
        # degree 3 closes only once unit slots vanish
        assert failed == {"closure.deg3.connes.plain", "closure.deg3.averaged.plain"}


def test_closure_instanton(instanton13):
    rep = cyclic.closure_check(instanton13.p)
    assert rep.ok
    assert ("connes", "normalized") in cyclic.consistent_conventions(rep)


def test_closure_q():
    rep = cyclic.closure_check(q_sympl.build_projection_q().p)
    assert ("connes", "normalized") in cyclic.consistent_conventions(rep)


def test_default_identities(s4, spheres13):
    for sys in (s4, spheres13[1], q_sympl.s7q()):
        rep = cyclic.identities_check(sys, count=25, seed=1)
        assert rep.ok, rep.failures()


def test_averaged_N_breaks_bB(s4):
    rep = cyclic.identities_check(s4, count=25, seed=1, convention="averaged")
    failed = {c.id for c in rep.checks if not c.ok}
    assert f"cyclic.bB.{s4.name}" in failed


def test_plain_complex_breaks_B_squared(s4):
    rep = cyclic.identities_check(s4, count=25, seed=1, normalized=False)
    failed = {c.id for c in rep.checks if not c.ok}
    assert f"cyclic.B2.{s4.name}" in failed
    # the explicit witness: B B(a) = 1 (x) 1 (x) a - 1 (x) a (x) 1 without normalization
    a = Chain.from_slots(s4, [s4.gen("z1")], normalized=False)
    assert not connes_B(connes_B(a)).is_zero()


@settings(max_examples=25)
@given(seed=st.integers(0, 10**6), degree=st.integers(1, 3))
def test_identities_hypothesis(spheres13, seed, degree):
    sys = spheres13[0]
    rng = random.Random(seed)
    c = cyclic.random_chain(sys, rng, degree)
    assert hochschild_b(hochschild_b(c)).is_zero() if degree >= 2 else True
    Bc = connes_B(c)
    assert connes_B(Bc).is_zero()
    assert (hochschild_b(Bc) + connes_B(hochschild_b(c))).is_zero()


@pytest.mark.slow
def test_cyclic_suite(cfg13):
    rep = cyclic.cyclic_suite(cfg13, count=40)
    assert rep.ok, rep.failures()
