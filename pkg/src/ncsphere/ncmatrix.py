"""Matrices over an algebra, Hermitian structure, Grassmann connection and curvature."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .ncalg import NCPoly, RewriteSystem, _acc
from .tensor import Tensor


class ShapeMismatch(ValueError):
    pass


class NotAProjection(ValueError):
    pass


class NCMatrix:
    """Dense matrix whose entries are elements of one ring (NCPoly or UForm)."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring, rows: Sequence[Sequence]):
        self.ring = ring
        self.rows = [list(r) for r in rows]
        if len({len(r) for r in self.rows}) > 1:
            raise ShapeMismatch("ragged rows")

    @classmethod
    def parse(cls, sys: RewriteSystem, rows: Sequence[Sequence[str]]) -> "NCMatrix":
        return cls(sys, [[sys.parse(x) if isinstance(x, str) else sys.const(x) for x in r] for r in rows])

    @classmethod
    def identity(cls, ring, n: int) -> "NCMatrix":
        return cls(ring, [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, n: int, m: int | None = None) -> "NCMatrix":
        return cls(ring, [[ring.zero() for _ in range(m or n)] for _ in range(n)])

    @property
    def shape(self) -> tuple:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def map(self, f: Callable) -> "NCMatrix":
        return NCMatrix(self.ring, [[f(x) for x in r] for r in self.rows])

    def map_into(self, ring, f: Callable) -> "NCMatrix":
        return NCMatrix(ring, [[f(x) for x in r] for r in self.rows])

    def __add__(self, o: "NCMatrix") -> "NCMatrix":
        if self.shape != o.shape:
            raise ShapeMismatch(f"{self.shape} + {o.shape}")
        return NCMatrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)])

    def __neg__(self) -> "NCMatrix":
        return self.map(lambda x: -x)

    def __sub__(self, o: "NCMatrix") -> "NCMatrix":
        return self + (-o)

    def __mul__(self, o) -> "NCMatrix":
        if isinstance(o, NCMatrix):
            return mat_mul(self, o)
        return self.map(lambda x: x * o)

    def __rmul__(self, o) -> "NCMatrix":
        # scalar or algebra element on the left
        return self.map(lambda x: o * x)

    def left(self, a) -> "NCMatrix":
        """Multiply every entry by the algebra element ``a`` on the left."""
        return self.map(lambda x: a * x)

    def transpose(self) -> "NCMatrix":
        return NCMatrix(self.ring, [list(c) for c in zip(*self.rows)])

    def dagger(self) -> "NCMatrix":
        return dagger(self)

    def d(self) -> "NCMatrix":
        return mat_d(self)

    def trace(self):
        out = self.ring.zero()
        for k in range(min(self.shape)):
            out = out + self.rows[k][k]
        return out

    def column(self, j: int) -> "NCMatrix":
        return NCMatrix(self.ring, [[r[j]] for r in self.rows])

    def nonzero_entries(self) -> list:
        return [(i, j, x) for i, r in enumerate(self.rows) for j, x in enumerate(r) if not x.is_zero()]

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def equals(self, o: "NCMatrix") -> bool:
        return self.shape == o.shape and (self - o).is_zero()

    def __eq__(self, o) -> bool:
        if not isinstance(o, NCMatrix):
            return NotImplemented
        return self.equals(o)

    __hash__ = None

    def canonical(self) -> "NCMatrix":
        return self.map(lambda x: x.canonical())

    def __repr__(self) -> str:
        return "NCMatrix[\n" + "\n".join("  " + " | ".join(str(x) for x in r) for r in self.rows) + "\n]"

    def to_json(self) -> list:
        return [[x.canonical().to_json() for x in r] for r in self.rows]


def mat_mul(A: NCMatrix, B: NCMatrix) -> NCMatrix:
    n, k = A.shape
    k2, m = B.shape
    if k != k2:
        raise ShapeMismatch(f"{A.shape} x {B.shape}")
    ring = A.ring
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ring.zero()
            for l in range(k):
                a, b = A.rows[i][l], B.rows[l][j]
                if not a.terms or not b.terms:
                    continue
                acc = acc + a * b
            row.append(acc)
        out.append(row)
    return NCMatrix(ring, out)


def dagger(A: NCMatrix) -> NCMatrix:
    return NCMatrix(A.ring, [[x.star() for x in col] for col in zip(*A.rows)])


def mat_d(A: NCMatrix) -> NCMatrix:
    return A.map(lambda x: x.d())


def trace(A: NCMatrix):
    return A.trace()


def is_projection(p: NCMatrix) -> bool:
    return (p * p).equals(p) and dagger(p).equals(p)


def grassmann_curvature(p: NCMatrix, check: bool = True) -> NCMatrix:
    """Curvature ``p dp dp`` of the Grassmann connection ``p d`` on ``p A^n``."""
    if check and not is_projection(p):
        raise NotAProjection("p is not a self-adjoint idempotent")
    dp = mat_d(p)
    return p * dp * dp


@dataclass
class BianchiResult:
    ok: bool
    residuals: list

    def __bool__(self) -> bool:
        return self.ok


def bianchi_check(p: NCMatrix, F: NCMatrix | None = None) -> BianchiResult:
    """Check ``[p d, F] = 0`` on the columns ``p e_j`` of the projective module."""
    F = grassmann_curvature(p, check=False) if F is None else F
    residuals = []
    for j in range(p.shape[1]):
        xi = p.column(j)
        lhs = p * mat_d(F * xi)
        rhs = F * (p * mat_d(xi))
        res = lhs - rhs
        if not res.is_zero():
            residuals.append((j, res))
    return BianchiResult(not residuals, residuals)


class HermitianPairing:
    """``<eta, xi> = sum_j eta_j^* xi_j`` on column vectors."""

    def __call__(self, eta: NCMatrix, xi: NCMatrix):
        ring = eta.ring
        out = ring.zero()
        for (e,), (x,) in zip(eta.rows, xi.rows):
            out = out + e.star() * x
        return out


hermitian_pairing = HermitianPairing()


# --- universal differential calculus ----------------------------------------


class UniversalCalculus:
    """Universal forms over a system: ``a0 da1 ... dan`` inside ``A^(n+1)``.

    Used where the algebra has no first-order calculus of its own (the
    symplectic spheres).  ``d`` inserts units with alternating signs, the
    product multiplies the adjacent slots.
    """

    def __init__(self, sys: RewriteSystem):
        self.sys = sys

    def zero(self) -> "UForm":
        return UForm(self, {})

    def one(self) -> "UForm":
        return UForm(self, {((),): self.sys.scalar(1)})

    def embed(self, a: NCPoly) -> "UForm":
        red = self.sys.reduce_terms(a.terms)
        return UForm(self, {(w,): c for w, c in red.items()})

    def embed_matrix(self, A: NCMatrix) -> NCMatrix:
        return A.map_into(self, self.embed)


class UForm(Tensor):
    __slots__ = ("calc",)

    def __init__(self, calc: UniversalCalculus, terms):
        super().__init__(calc.sys, terms)
        self.calc = calc

    def _new(self, terms):
        return UForm(self.calc, terms)

    def __mul__(self, o) -> "UForm":
        if not isinstance(o, UForm):
            return self.scale(o)
        sys = self.sys
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                c = c1 * c2
                mid = sys.reduce_terms({k1[-1] + k2[0]: sys.scalar(1)})
                for w, cc in mid.items():
                    _acc(out, k1[:-1] + (w,) + k2[1:], c * cc)
        return UForm(self.calc, out)

    def __rmul__(self, o) -> "UForm":
        return self.scale(o)

    def d(self) -> "UForm":
        out: dict = {}
        for k, c in self.terms.items():
            for pos in range(len(k) + 1):
                _acc(out, k[:pos] + ((),) + k[pos:], -c if pos % 2 else c)
        return UForm(self.calc, out)

    def canonical(self) -> "UForm":
        return self

    def star(self):
        raise NotImplementedError("the universal calculus is used without an involution")
