import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncsphere import qrep
from ncsphere.qrep import BadParameter, UnknownLetter, build_sigma, letter, represent

Q = 0.5


@pytest.fixture(scope="module")
def rep():
    return build_sigma(Q, 12)


def ket(N, m, n):
    v = np.zeros(N * N)
    v[m * N + n] = 1.0
    return v


def test_vacuum_action(rep):
    N = rep.cutoff
    vac = ket(N, 0, 0)
    assert np.allclose(rep["t"].matrix @ vac, Q ** 4 * vac)
    assert np.allclose(rep["ab"].matrix @ vac, math.sqrt(1 - Q ** 2) * Q * ket(N, 1, 0))
    assert np.allclose(rep["a"].matrix @ vac, 0)
    assert np.allclose(rep["bb"].matrix @ vac, 0)
    assert np.allclose(rep["b"].matrix @ vac, math.sqrt(1 - Q ** 4) * Q ** 4 * ket(N, 0, 1))


def test_generic_basis_vector(rep):
    N, m, n = rep.cutoff, 3, 2
    v = ket(N, m, n)
    assert np.allclose(rep["t"].matrix @ v, Q ** (2 * m + 4 * n + 4) * v)
    assert np.allclose(rep["a"].matrix @ v, math.sqrt(1 - Q ** (2 * m)) * Q ** (m + 2 * n) * ket(N, m - 1, n))
    assert np.allclose(rep["bb"].matrix @ v, math.sqrt(1 - Q ** (4 * n)) * Q ** (2 * (m + n + 1)) * ket(N, m, n - 1))


def test_represent_unit_and_products(rep):
    one = represent(rep, letter("t") * 0 + qrep.letter_system().one())
    assert np.allclose(one.dense(), np.eye(rep.dim))
    t2 = represent(rep, letter("t") * letter("t"))
    assert t2.margin == 2
    assert np.allclose(t2.dense(), np.diag(np.diag(rep["t"].dense()) ** 2))


def test_adjoints(rep):
    assert np.allclose(rep["a"].dense().T, rep["ab"].dense())
    assert np.allclose(rep["b"].dense().T, rep["bb"].dense())


def test_relations(rep):
    r = qrep.relation_residuals(rep)
    assert r.ok, r.failures()


@settings(max_examples=15)
@given(q0=st.floats(0.05, 0.95))
def test_relations_random_q(q0):
    assert qrep.relation_residuals(build_sigma(q0, 10)).ok


def test_trace_small_window():
    assert qrep.trace_t(build_sigma(Q, 4)) == pytest.approx(sum(Q ** (2 * m + 4 * n + 4) for m in range(4) for n in range(4)))
    assert qrep.truncated_trace_t(Q, 1) == pytest.approx(Q ** 4)


def test_closed_form_trace_exact():
    cf = qrep.closed_form_trace()
    assert cf.value(Fraction(1, 2)) == Fraction(4, 45)
    assert qrep.truncated_trace_t(Q, 20) == pytest.approx(float(cf.truncated(Q, 20)), rel=1e-14)


@pytest.mark.parametrize("N", [10, 20, 40])
def test_trace_deficit_within_bound(N):
    cf = qrep.closed_form_trace()
    deficit = float(cf.value(Q)) - qrep.truncated_trace_t(Q, N)
    assert 0 <= deficit <= cf.deficit_bound(Q, N) + 1e-15


@pytest.mark.parametrize("bad", [0, 1, 1.5, -0.2, "abc"])
def test_bad_q(bad):
    with pytest.raises(BadParameter):
        qrep.pair(bad, 10)


def test_bad_cutoff_and_letter(rep):
    with pytest.raises(BadParameter):
        build_sigma(Q, 3)
    with pytest.raises(UnknownLetter):
        rep["z"]
    with pytest.raises(UnknownLetter):
        letter("z")


def test_interior_requires_room():
    small = build_sigma(Q, 4)
    word = small["a"] @ small["ab"] @ small["b"] @ small["bb"]
    with pytest.raises(BadParameter):
        word.interior_norm()


def test_tau0_and_rank():
    assert qrep.tau0(qrep.ch0_letters()) == 2
    assert qrep.rank_pairing() == 2
    assert qrep.tau0(letter("t") * 3) == 0


def test_tau1_of_unit_vanishes(rep):
    assert qrep.tau1(rep, qrep.letter_system().one()) == 0


@pytest.mark.parametrize("q0,N,tol", [(0.5, 40, 1e-12), (0.9, 400, 1e-9), ("1/3", 30, 1e-12)])
def test_pairing_is_minus_one(q0, N, tol):
    res = qrep.pair(q0, N)
    assert res.value == pytest.approx(res.truncated_closed_form, abs=1e-12)
    assert abs(res.value + 1) <= res.tail_bound + tol
    assert res.rank == 2


def test_pairing_converges_from_above():
    vals = [qrep.pair(0.7, N).value for N in (5, 10, 20, 40)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(-1, abs=1e-10)


def test_oracle_pairs():
    rep = qrep.oracle_pairs(count=40, seed=7)
    assert rep.ok, rep.failures()


def test_qrep_suite():
    rep = qrep.qrep_suite()
    assert rep.ok, rep.failures()
