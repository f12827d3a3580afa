import cmath
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncsphere.scalars import FieldElem, NonUnimodular, Scalar, UnitMode, ZeroUnit

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
fields = st.builds(FieldElem, rationals, rationals, rationals, rationals)


@st.composite
def scalars(draw, mode=UnitMode.PHASE):
    terms = draw(st.dictionaries(st.integers(-3, 3), fields, max_size=3))
    return Scalar({k: v for k, v in terms.items()}, mode)


def test_field_units():
    i = FieldElem(0, 1)
    r2 = FieldElem(0, 0, 1)
    assert i * i == FieldElem(-1)
    assert r2 * r2 == FieldElem(2)
    assert FieldElem(1, 1) * FieldElem(1, -1) == FieldElem(2)


def test_conjugation_fixes_sqrt2_negates_i():
    x = FieldElem(1, 2, 3, 4)
    assert x.conj() == FieldElem(1, -2, 3, -4)


@given(fields, fields, fields)
def test_field_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(fields)
def test_field_inverse(a):
    if a.is_zero():
        return
    assert a * a.inverse() == FieldElem(1)
    assert abs(complex(a) * complex(a.inverse()) - 1) < 1e-9


@given(fields, fields)
def test_complex_embedding_is_a_homomorphism(a, b):
    assert abs(complex(a * b) - complex(a) * complex(b)) < 1e-9
    assert abs(complex(a.conj()) - complex(a).conjugate()) < 1e-12


def test_scalar_examples():
    q = Scalar.unit(1, UnitMode.REAL)
    assert (q - q.inverse()) * q == q * q - 1
    mu = Scalar.unit(1)
    assert mu * mu == Scalar.unit(2)
    assert Scalar.const(FieldElem(1, 1)) * Scalar.const(FieldElem(1, -1)) == Scalar.const(2)


def test_star_rules():
    assert Scalar.unit(1).star() == Scalar.unit(-1)
    q = Scalar.unit(1, UnitMode.REAL)
    assert q.star() == q
    iq2 = Scalar.unit(2, UnitMode.REAL, FieldElem(0, 1))
    assert iq2.star() == -iq2


def test_eval_examples_and_errors():
    z = cmath.exp(1j * cmath.pi / 8)
    assert abs(Scalar.unit(1).eval(z) - z) < 1e-15
    q = Scalar.unit(1, UnitMode.REAL)
    assert abs((q * q - 1).eval(0.5) + 0.75) < 1e-15
    with pytest.raises(ZeroUnit):
        q.eval(0)
    with pytest.raises(NonUnimodular):
        Scalar.unit(1).eval(0.5)


def test_no_zero_terms_stored():
    s = Scalar.unit(1) - Scalar.unit(1)
    assert s.is_zero() and not s.terms


@given(scalars(), scalars(), scalars())
def test_scalar_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a


@given(scalars(), scalars())
def test_star_is_involutive_antimultiplicative(a, b):
    assert a.star().star() == a
    assert (a * b).star() == b.star() * a.star()


@given(scalars(), st.floats(0.05, 6.2))
def test_phase_eval_respects_star(a, phi):
    u0 = cmath.exp(1j * phi)
    assert abs(a.star().eval(u0) - a.eval(u0).conjugate()) < 1e-8


@given(scalars(UnitMode.REAL), st.floats(0.1, 3.0))
def test_real_eval_respects_star(a, q0):
    assert abs(a.star().eval(q0) - a.eval(q0).conjugate()) < 1e-6 * (1 + abs(a.eval(q0)))


def test_inverse_of_monomial():
    s = Scalar.unit(3, UnitMode.REAL, FieldElem(Fraction(2)))
    assert s * s.inverse() == Scalar.const(1, UnitMode.REAL)
