"""Exact coefficients: the field Q(i, sqrt2) and Laurent polynomials over it.

A ``Scalar`` is a Laurent polynomial in one formal unit ``u``.  On the toric
side ``u`` is the phase mu (so lambda = u**2 and u* = 1/u); on the symplectic
side ``u`` is the real parameter q (u* = u).
"""

from __future__ import annotations

import ast
import cmath
import enum
from fractions import Fraction
from typing import Mapping, Union

SQRT2 = 2 ** 0.5


class ZeroUnit(ValueError):
    pass


class NonUnimodular(ValueError):
    pass


class NotInvertible(ArithmeticError):
    pass


class UnitMode(enum.Enum):
    PHASE = "phase"
    REAL = "real"


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not exact coefficients")
    return Fraction(x)


class FieldElem:
    """a + b*i + c*sqrt2 + d*i*sqrt2 with rational a, b, c, d."""

    __slots__ = ("a", "b", "c", "d", "_h")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = _frac(a)
        self.b = _frac(b)
        self.c = _frac(c)
        self.d = _frac(d)
        self._h = None

    @classmethod
    def _raw(cls, a, b, c, d) -> "FieldElem":
        x = object.__new__(cls)
        x.a, x.b, x.c, x.d, x._h = a, b, c, d, None
        return x

    @property
    def coefficients(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def __add__(self, o: "FieldElem") -> "FieldElem":
        return FieldElem._raw(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: "FieldElem") -> "FieldElem":
        return FieldElem._raw(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self) -> "FieldElem":
        return FieldElem._raw(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, o: "FieldElem") -> "FieldElem":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = o.a, o.b, o.c, o.d
        if not (b or c or d):
            return FieldElem._raw(a * e, a * f, a * g, a * h)
        if not (f or g or h):
            return FieldElem._raw(a * e, b * e, c * e, d * e)
        return FieldElem._raw(
            a * e - b * f + 2 * (c * g - d * h),
            a * f + b * e + 2 * (c * h + d * g),
            a * g + c * e - b * h - d * f,
            a * h + d * e + b * g + c * f,
        )

    def scale(self, r: Fraction) -> "FieldElem":
        return FieldElem._raw(self.a * r, self.b * r, self.c * r, self.d * r)

    def conj(self) -> "FieldElem":
        return FieldElem._raw(self.a, -self.b, self.c, -self.d)

    def inverse(self) -> "FieldElem":
        # x = A + B*sqrt2 with A, B in Q(i); 1/x = (A - B*sqrt2) / (A^2 - 2 B^2)
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        A = FieldElem._raw(self.a, self.b, Fraction(0), Fraction(0))
        B = FieldElem._raw(self.c, self.d, Fraction(0), Fraction(0))
        n = A * A - (B * B).scale(Fraction(2))
        nn = n.a * n.a + n.b * n.b
        n_inv = FieldElem._raw(n.a / nn, -n.b / nn, Fraction(0), Fraction(0))
        return FieldElem._raw(self.a, self.b, -self.c, -self.d) * n_inv

    def __complex__(self) -> complex:
        return complex(float(self.a) + float(self.c) * SQRT2, float(self.b) + float(self.d) * SQRT2)

    def __eq__(self, o) -> bool:
        if not isinstance(o, FieldElem):
            if isinstance(o, (int, Fraction)):
                return self.is_rational() and self.a == o
            return NotImplemented
        return self.a == o.a and self.b == o.b and self.c == o.c and self.d == o.d

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash((self.a, self.b, self.c, self.d))
        return self._h

    def __repr__(self) -> str:
        return f"FieldElem({self})"

    def __str__(self) -> str:
        parts = []
        for v, tag in ((self.a, ""), (self.b, "i"), (self.c, "sqrt2"), (self.d, "i*sqrt2")):
            if not v:
                continue
            if tag and v == 1:
                parts.append(tag)
            elif tag and v == -1:
                parts.append("-" + tag)
            else:
                parts.append(f"{v}*{tag}" if tag else str(v))
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


F0 = FieldElem._raw(Fraction(0), Fraction(0), Fraction(0), Fraction(0))
F1 = FieldElem._raw(Fraction(1), Fraction(0), Fraction(0), Fraction(0))
I_UNIT = FieldElem._raw(Fraction(0), Fraction(1), Fraction(0), Fraction(0))
SQRT2_ELEM = FieldElem._raw(Fraction(0), Fraction(0), Fraction(1), Fraction(0))

Coercible = Union["Scalar", FieldElem, int, Fraction]


class Scalar:
    """Laurent polynomial sum_k c_k u**k with c_k in Q(i, sqrt2); immutable."""

    __slots__ = ("terms", "mode", "_h")

    def __init__(self, terms: Mapping[int, FieldElem] | None = None, mode: UnitMode = UnitMode.PHASE):
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}
        self.mode = mode
        self._h = None

    @classmethod
    def _raw(cls, terms: dict, mode: UnitMode) -> "Scalar":
        s = object.__new__(cls)
        s.terms, s.mode, s._h = terms, mode, None
        return s

    @classmethod
    def const(cls, c, mode: UnitMode = UnitMode.PHASE) -> "Scalar":
        fe = c if isinstance(c, FieldElem) else FieldElem(c)
        return cls._raw({0: fe} if not fe.is_zero() else {}, mode)

    @classmethod
    def unit(cls, k: int = 1, mode: UnitMode = UnitMode.PHASE, coeff: FieldElem = F1) -> "Scalar":
        return cls._raw({k: coeff}, mode)

    def coerce(self, x: Coercible) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return Scalar.const(x, self.mode)

    def _join_mode(self, o: "Scalar") -> UnitMode:
        if self.mode is o.mode:
            return self.mode
        if not o.terms or set(o.terms) == {0}:
            return self.mode
        if not self.terms or set(self.terms) == {0}:
            return o.mode
        raise ValueError("cannot combine scalars of different unit modes")

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and 0 in self.terms and self.terms[0] == F1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {0}

    def constant_term(self) -> FieldElem:
        return self.terms.get(0, F0)

    def __add__(self, o: Coercible) -> "Scalar":
        o = self.coerce(o)
        mode = self._join_mode(o)
        if len(o.terms) > len(self.terms):
            big, small = o.terms, self.terms
        else:
            big, small = self.terms, o.terms
        out = dict(big)
        for k, v in small.items():
            w = out.get(k)
            if w is None:
                out[k] = v
            else:
                s = w + v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
        return Scalar._raw(out, mode)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw({k: -v for k, v in self.terms.items()}, self.mode)

    def __sub__(self, o: Coercible) -> "Scalar":
        return self + (-self.coerce(o))

    def __rsub__(self, o: Coercible) -> "Scalar":
        return self.coerce(o) - self

    def __mul__(self, o: Coercible) -> "Scalar":
        if not isinstance(o, Scalar):
            if isinstance(o, (int, Fraction)):
                if not o:
                    return Scalar._raw({}, self.mode)
                r = Fraction(o)
                return Scalar._raw({k: v.scale(r) for k, v in self.terms.items()}, self.mode)
            o = self.coerce(o)
        mode = self._join_mode(o)
        if len(o.terms) == 1:
            (k2, v2), = o.terms.items()
            out = {}
            for k, v in self.terms.items():
                out[k + k2] = v * v2
            return Scalar._raw(out, mode)
        out: dict[int, FieldElem] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in o.terms.items():
                k = k1 + k2
                p = v1 * v2
                w = out.get(k)
                out[k] = p if w is None else w + p
        return Scalar._raw({k: v for k, v in out.items() if not v.is_zero()}, mode)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = Scalar.const(1, self.mode)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "Scalar":
        """Inverse of a monomial c*u**k; other Laurent polynomials are not units."""
        if len(self.terms) != 1:
            raise NotInvertible(f"{self} is not a unit of the Laurent ring")
        (k, v), = self.terms.items()
        return Scalar._raw({-k: v.inverse()}, self.mode)

    def star(self) -> "Scalar":
        if self.mode is UnitMode.PHASE:
            return Scalar._raw({-k: v.conj() for k, v in self.terms.items()}, self.mode)
        return Scalar._raw({k: v.conj() for k, v in self.terms.items()}, self.mode)

    def substitute(self, u_value: "Scalar") -> "Scalar":
        """Ring map sending u to ``u_value`` (a unit), keeping field coefficients."""
        out = Scalar._raw({}, u_value.mode)
        for k, v in self.terms.items():
            out = out + (u_value ** k) * Scalar.const(v, u_value.mode)
        return out

    def eval(self, u0: complex) -> complex:
        return scalar_eval(self, u0)

    def __eq__(self, o) -> bool:
        if isinstance(o, Scalar):
            return self.terms == o.terms
        if isinstance(o, (int, Fraction, FieldElem)):
            return self.terms == Scalar.const(o, self.mode).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(frozenset(self.terms.items()))
        return self._h

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        sym = "u" if self.mode is UnitMode.PHASE else "q"
        out = []
        for k in sorted(self.terms):
            c = str(self.terms[k])
            if k == 0:
                out.append(c)
                continue
            mon = sym if k == 1 else f"{sym}^{k}"
            if c == "1":
                out.append(mon)
            elif c == "-1":
                out.append("-" + mon)
            else:
                out.append(f"({c})*{mon}")
        return " + ".join(out).replace("+ -", "- ")

    def to_json(self) -> list:
        return [[k, [str(x) for x in self.terms[k].coefficients]] for k in sorted(self.terms)]


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    if a.mode is not b.mode and not (a.is_constant() or b.is_constant()):
        raise ValueError("scalar_mul requires a common unit mode")
    return a * b


def scalar_star(a: Scalar) -> Scalar:
    return a.star()


def scalar_eval(a: Scalar, u0: complex) -> complex:
    if u0 == 0:
        raise ZeroUnit("unit evaluated at zero")
    if a.mode is UnitMode.PHASE and abs(abs(u0) - 1.0) > 1e-12:
        raise NonUnimodular(f"|u0| = {abs(u0)} for a phase unit")
    total = 0j
    for k, v in a.terms.items():
        total += complex(v) * (u0 ** k)
    return total


def phase_point(theta: float) -> complex:
    """Numeric value of mu = exp(i pi theta)."""
    return cmath.exp(1j * cmath.pi * theta)


# --- literal parsing -------------------------------------------------------

_UNIT_NAMES = {"u", "mu", "q"}


def parse_scalar(text: str, mode: UnitMode = UnitMode.PHASE) -> Scalar:
    """Parse literals such as ``"3/4"``, ``"(1 - i)*mu**-2"`` or ``"q**-2*(q**-1 - q)"``.

    Recognised names: ``i``, ``sqrt2``, the unit (``u``, ``mu`` or ``q``), and
    ``lam`` for u**2.
    """
    env = {
        "i": Scalar.const(I_UNIT, mode),
        "sqrt2": Scalar.const(SQRT2_ELEM, mode),
        "lam": Scalar.unit(2, mode),
    }
    for n in _UNIT_NAMES:
        env[n] = Scalar.unit(1, mode)
    return eval_expression(text, env, lambda c: Scalar.const(c, mode))


def eval_expression(text: str, env: dict, const):
    """Evaluate a restricted arithmetic expression over the values in ``env``.

    Supports + - * / (division by rationals only), unary signs, integer powers
    and integer literals.  Products are evaluated left to right, so the values
    in ``env`` may be noncommutative.
    """
    tree = ast.parse(text.strip(), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return const(node.value)
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise KeyError(f"unknown symbol {node.id!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            if isinstance(node.op, ast.USub):
                return v * const(-1)
            if isinstance(node.op, ast.UAdd):
                return v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                n = _int_literal(node.right)
                return ev(node.left) ** n
            if isinstance(node.op, ast.Div):
                den = _rational_literal(node.right)
                return ev(node.left) * const(Fraction(1) / den)
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        raise ValueError(f"unsupported syntax in {text!r}")

    return ev(tree)


def _int_literal(node) -> int:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_int_literal(node.operand)
    raise ValueError("exponents must be integer literals")


def _rational_literal(node) -> Fraction:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Fraction(node.value)
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
        return _rational_literal(node.left) / _rational_literal(node.right)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_rational_literal(node.operand)
    raise ValueError("division only by rational literals")
