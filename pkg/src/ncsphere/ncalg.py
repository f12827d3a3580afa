"""Free graded *-algebras on ordered generators, reduced to normal form by rewriting.

Words are tuples of generator indices and are compared degree-lexicographically.
A system carries

* quadratic rules ``b a -> sum c_w w`` whose right-hand words are smaller than ``b a``;
* optional ideal rules for a central quadratic element ``c = 1`` (the sphere
  relation).  They are applied by division: a normal word containing the
  letters of ``LT(c)`` is traded for ``c`` times the remaining letters, which is
  confluent where a plain length-2 rule is not;
* optionally the tangency relation ``d c = 0`` on forms, handled by the exact
  projection ``w -> iota(T w)`` with ``T = d c`` and ``iota`` the contraction
  sending ``dx`` to ``x/2`` (half the Euler field).
"""

from __future__ import annotations

import itertools
import sys as _sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .scalars import (
    NotInvertible,
    Scalar,
    UnitMode,
    eval_expression,
    I_UNIT,
    SQRT2_ELEM,
)

_sys.setrecursionlimit(max(_sys.getrecursionlimit(), 20000))

Word = tuple

DEFAULT_STEP_BUDGET = 10**6
DATA_DIR = Path(__file__).parent / "data"


class StepBudgetExceeded(RuntimeError):
    pass


class MissingFormGenerator(ValueError):
    pass


class NonIntegralPhase(ValueError):
    pass


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    index: int
    degree: int
    weight: tuple
    star_partner: int
    is_self_adjoint: bool
    d_partner: int | None = None  # degree 0: its differential; degree 1: the function it differentiates


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: "NCPoly"


@dataclass(frozen=True)
class IdealRule:
    lhs: Word
    rhs: "NCPoly"
    tangency: bool = False


# --- polynomials -----------------------------------------------------------


class NCPoly:
    """Linear combination of words; products are reduced in the owning system."""

    __slots__ = ("sys", "terms")

    def __init__(self, sys: "RewriteSystem", terms: Mapping[Word, Scalar] | None = None):
        self.sys = sys
        self.terms = {w: c for w, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def _raw(cls, sys, terms):
        p = object.__new__(cls)
        p.sys, p.terms = sys, terms
        return p

    def _coerce(self, o) -> "NCPoly":
        if isinstance(o, NCPoly):
            return o
        return self.sys.const(o)

    def __add__(self, o) -> "NCPoly":
        return NCPoly._raw(self.sys, _add_terms(self.terms, self._coerce(o).terms))

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly._raw(self.sys, {w: -c for w, c in self.terms.items()})

    def __sub__(self, o) -> "NCPoly":
        return self + (-self._coerce(o))

    def __rsub__(self, o) -> "NCPoly":
        return self._coerce(o) - self

    def __mul__(self, o) -> "NCPoly":
        if isinstance(o, NCPoly):
            return NCPoly._raw(self.sys, self.sys._mul_terms(self.terms, o.terms))
        s = self.sys.scalar(o)
        if s.is_zero():
            return NCPoly._raw(self.sys, {})
        return NCPoly._raw(self.sys, {w: c * s for w, c in self.terms.items()})

    def __rmul__(self, o) -> "NCPoly":
        if isinstance(o, NCPoly):
            return o * self
        return self * o

    def __pow__(self, n: int) -> "NCPoly":
        if n < 0:
            if set(self.terms) != {()}:
                raise ValueError("negative powers only of scalars")
            return self.sys.const(self.terms[()] ** n)
        out = self.sys.one()
        for _ in range(n):
            out = out * self
        return out

    def star(self) -> "NCPoly":
        return self.sys.star(self)

    def d(self) -> "NCPoly":
        return self.sys.differential(self)

    def canonical(self) -> "NCPoly":
        return self.sys.normal_form(self)

    def is_zero(self) -> bool:
        return not self.sys.canonical_terms(self.terms)

    def __eq__(self, o) -> bool:
        if not isinstance(o, NCPoly):
            o = self._coerce(o)
        return (self - o).is_zero()

    __hash__ = None

    def degree(self) -> int | None:
        degs = {self.sys.word_degree(w) for w in self.terms}
        return degs.pop() if len(degs) == 1 else (None if degs else 0)

    def weights(self) -> set:
        return {self.sys.word_weight(w) for w in self.terms}

    def constant_term(self) -> Scalar:
        return self.terms.get((), self.sys.scalar(0))

    def numeric(self, u0: complex, canonical: bool = True) -> dict:
        """Coefficients evaluated at the unit value ``u0``: {word: complex}."""
        terms = self.sys.canonical_terms(self.terms) if canonical else self.terms
        return {w: c.eval(u0) for w, c in terms.items()}

    def residual(self, u0: complex) -> float:
        """Largest evaluated coefficient of the canonical form (0.0 for zero)."""
        return max((abs(v) for v in self.numeric(u0).values()), default=0.0)

    def map_coefficients(self, f) -> "NCPoly":
        return NCPoly(self.sys, {w: f(c) for w, c in self.terms.items()})

    def __repr__(self) -> str:
        return f"NCPoly({self})"

    def __str__(self) -> str:
        return self.sys.format(self.terms)

    def to_json(self) -> list:
        return [[[self.sys.generators[i].name for i in w], c.to_json()] for w, c in sorted(self.terms.items())]


def _add_terms(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for w, c in b.items():
        prev = out.get(w)
        if prev is None:
            out[w] = c
        else:
            s = prev + c
            if s.is_zero():
                del out[w]
            else:
                out[w] = s
    return out


def _acc(out: dict, w: Word, c: Scalar) -> None:
    prev = out.get(w)
    if prev is None:
        out[w] = c
    else:
        s = prev + c
        if s.is_zero():
            del out[w]
        else:
            out[w] = s


def deglex_key(w: Word) -> tuple:
    return (len(w), w)


# --- systems ---------------------------------------------------------------


class RewriteSystem:
    def __init__(
        self,
        name: str,
        generators: Sequence[Generator],
        rules: Mapping[tuple, Mapping[Word, Scalar]],
        unit_mode: UnitMode,
        ideal_rules: Sequence[IdealRule] = (),
        step_budget: int = DEFAULT_STEP_BUDGET,
    ):
        self.name = name
        self.generators = list(generators)
        self.by_name = {g.name: g.index for g in self.generators}
        self.unit_mode = unit_mode
        self.step_budget = step_budget
        self._rules: dict[tuple, dict] = {k: dict(v) for k, v in rules.items()}
        self._degree = [g.degree for g in self.generators]
        self._weight = [tuple(g.weight) for g in self.generators]
        self._quad_cache: dict[Word, dict] = {}
        self._full_cache: dict[Word, dict] = {}
        self._zero = Scalar.const(0, unit_mode)
        self._one = Scalar.const(1, unit_mode)
        self._half = Scalar.const(Fraction(1, 2), unit_mode)
        self.ideal_rules: list[IdealRule] = []
        self._ideal_data: list[tuple] = []
        self._tangent = None
        for r in ideal_rules:
            self.add_ideal_rule(r)

    # construction helpers
    def scalar(self, x) -> Scalar:
        if isinstance(x, Scalar):
            return x
        return Scalar.const(x, self.unit_mode)

    def u(self, k: int = 1) -> Scalar:
        return Scalar.unit(k, self.unit_mode)

    def const(self, x) -> NCPoly:
        s = self.scalar(x)
        return NCPoly._raw(self, {(): s} if not s.is_zero() else {})

    def one(self) -> NCPoly:
        return self.const(1)

    def zero(self) -> NCPoly:
        return NCPoly._raw(self, {})

    def gen(self, name: str) -> NCPoly:
        return NCPoly._raw(self, {(self.by_name[name],): self._one})

    def __getitem__(self, name: str) -> NCPoly:
        return self.gen(name)

    def poly(self, terms: Mapping[Word, Scalar]) -> NCPoly:
        return NCPoly(self, self.reduce_terms(terms))

    def parse(self, text: str) -> NCPoly:
        env = {g.name: self.gen(g.name) for g in self.generators}
        env.update(_scalar_env(self.unit_mode, lambda s: self.const(s)))
        return eval_expression(text, env, self.const)

    @property
    def rules(self) -> list[RewriteRule]:
        return [RewriteRule(k, NCPoly._raw(self, dict(v))) for k, v in sorted(self._rules.items())]

    def rule_table(self) -> dict:
        return self._rules

    def word_degree(self, w: Word) -> int:
        d = self._degree
        return sum(d[i] for i in w)

    def word_weight(self, w: Word) -> tuple:
        if not w:
            return tuple(0 for _ in (self._weight[0] if self._weight else ()))
        return tuple(map(sum, zip(*(self._weight[i] for i in w))))

    def format(self, terms: Mapping[Word, Scalar]) -> str:
        if not terms:
            return "0"
        parts = []
        for w in sorted(terms, key=deglex_key):
            word = "*".join(self.generators[i].name for i in w) or "1"
            parts.append(f"({terms[w]})*{word}")
        return " + ".join(parts)

    # --- reduction ---------------------------------------------------------

    def _budget(self):
        return [self.step_budget]

    def _spend(self, budget):
        budget[0] -= 1
        if budget[0] < 0:
            raise StepBudgetExceeded(f"{self.name}: more than {self.step_budget} rule applications")

    def _nf_quad(self, w: Word, budget) -> dict:
        hit = self._quad_cache.get(w)
        if hit is not None:
            return hit
        rules = self._rules
        for i in range(len(w) - 1):
            rhs = rules.get((w[i], w[i + 1]))
            if rhs is None:
                continue
            self._spend(budget)
            out: dict = {}
            head, tail = w[:i], w[i + 2:]
            for rw, c in rhs.items():
                sub = self._nf_quad(head + rw + tail, budget)
                if c.is_one():
                    for ww, cc in sub.items():
                        _acc(out, ww, cc)
                else:
                    for ww, cc in sub.items():
                        _acc(out, ww, cc * c)
            self._quad_cache[w] = out
            return out
        out = {w: self._one}
        self._quad_cache[w] = out
        return out

    def _nf_full(self, w: Word, budget) -> dict:
        hit = self._full_cache.get(w)
        if hit is not None:
            return hit
        quad = self._nf_quad(w, budget)
        if not self._ideal_data:
            self._full_cache[w] = quad
            return quad
        if len(quad) == 1 and w in quad and quad[w].is_one():
            out = self._divide(w, budget)
        else:
            out = {}
            for ww, c in quad.items():
                for www, cc in self._divide(ww, budget).items():
                    _acc(out, www, cc * c)
        self._full_cache[w] = out
        return out

    def _divide(self, w: Word, budget) -> dict:
        """Reduce a quadratic-normal word modulo the central ideal elements."""
        if not self._ideal_data:
            return {w: self._one}
        hit = self._full_cache.get(("div",) + w)
        if hit is not None:
            return hit
        for lead, rel_terms in self._ideal_data:
            rest = _remove_letters(w, lead)
            if rest is None:
                continue
            self._spend(budget)
            prod: dict = {}
            for rw, c in rel_terms.items():
                for ww, cc in self._nf_quad(rw + rest, budget).items():
                    _acc(prod, ww, cc * c)
            kappa = prod.pop(w, None)
            if kappa is None or not kappa.is_monomial():
                raise NotInvertible(f"{self.name}: leading coefficient of the ideal multiple of {w} is {kappa}")
            k_inv = -kappa.inverse()
            out: dict = {}
            for ww, c in prod.items():
                if deglex_key(ww) >= deglex_key(w):
                    raise PresentationError(f"{self.name}: ideal division does not decrease {w}")
                for www, cc in self._divide(ww, budget).items():
                    _acc(out, www, cc * c * k_inv)
            self._full_cache[("div",) + w] = out
            return out
        out = {w: self._one}
        self._full_cache[("div",) + w] = out
        return out

    def reduce_terms(self, terms: Mapping[Word, Scalar], budget=None, quadratic_only: bool = False) -> dict:
        budget = budget or self._budget()
        nf = self._nf_quad if quadratic_only else self._nf_full
        out: dict = {}
        for w, c in terms.items():
            if c.is_zero():
                continue
            for ww, cc in nf(w, budget).items():
                _acc(out, ww, cc * c)
        return out

    def _mul_terms(self, a: Mapping, b: Mapping) -> dict:
        budget = self._budget()
        out: dict = {}
        for w1, c1 in a.items():
            for w2, c2 in b.items():
                c = c1 * c2
                for ww, cc in self._nf_full(w1 + w2, budget).items():
                    _acc(out, ww, cc * c)
        return out

    def canonical_terms(self, terms: Mapping[Word, Scalar]) -> dict:
        red = self.reduce_terms(terms)
        if self._tangent is None:
            return red
        low = {w: c for w, c in red.items() if self.word_degree(w) == 0}
        high = {w: c for w, c in red.items() if self.word_degree(w) > 0}
        if not high:
            return red
        proj = self.reduce_terms(self._contract(self._mul_terms(self._tangent, high)))
        return _add_terms(low, proj)

    def normal_form(self, p: NCPoly) -> NCPoly:
        return NCPoly._raw(self, self.canonical_terms(p.terms))

    # --- ideal rules ---------------------------------------------------------

    def add_ideal_rule(self, rule: IdealRule) -> None:
        rel = _add_terms({rule.lhs: self._one}, {w: -c for w, c in rule.rhs.terms.items()})
        lead = tuple(sorted(rule.lhs))
        if rule.lhs != lead:
            raise PresentationError("ideal rule lead must be a normal word")
        self.ideal_rules.append(rule)
        self._ideal_data.append((lead, rel))
        self._full_cache.clear()
        if rule.tangency:
            self._set_tangency(rel)

    def _set_tangency(self, rel: dict) -> None:
        for w in rel:
            for i in w:
                if self.generators[i].d_partner is None:
                    raise MissingFormGenerator(self.generators[i].name)
        self._tangent = self.reduce_terms(self._diff_terms(rel))

    @property
    def tangency_form(self) -> NCPoly | None:
        return None if self._tangent is None else NCPoly._raw(self, dict(self._tangent))

    def central_element(self, k: int = 0) -> NCPoly:
        """The ideal rule's relation, lhs - rhs (zero in the algebra)."""
        return NCPoly._raw(self, dict(self._ideal_data[k][1]))

    def _contract(self, terms: Mapping[Word, Scalar]) -> dict:
        """In-place contraction dx -> x/2 with the Koszul sign."""
        out: dict = {}
        gens = self.generators
        for w, c in terms.items():
            odd = 0
            for j, i in enumerate(w):
                if gens[i].degree != 1:
                    continue
                f = gens[i].d_partner
                s = self._half * c
                _acc(out, w[:j] + (f,) + w[j + 1:], -s if odd % 2 else s)
                odd += 1
        return out

    def contract(self, p: NCPoly) -> NCPoly:
        return NCPoly(self, self.reduce_terms(self._contract(p.terms)))

    # --- involution and differential ----------------------------------------

    def _star_terms(self, terms: Mapping) -> dict:
        gens = self.generators
        out: dict = {}
        for w, c in terms.items():
            degs = [gens[i].degree for i in w]
            sign = 0
            odd_seen = 0
            for dg in degs:
                if dg:
                    sign += odd_seen
                    odd_seen += 1
            nw = tuple(gens[i].star_partner for i in reversed(w))
            cc = c.star()
            _acc(out, nw, -cc if sign % 2 else cc)
        return out

    def star(self, p: NCPoly) -> NCPoly:
        return NCPoly._raw(self, self.reduce_terms(self._star_terms(p.terms)))

    def _diff_terms(self, terms: Mapping) -> dict:
        gens = self.generators
        out: dict = {}
        for w, c in terms.items():
            odd = 0
            for j, i in enumerate(w):
                g = gens[i]
                if g.degree == 0:
                    if g.d_partner is None:
                        raise MissingFormGenerator(g.name)
                    _acc(out, w[:j] + (g.d_partner,) + w[j + 1:], -c if odd % 2 else c)
                else:
                    odd += 1
        return out

    def differential(self, p: NCPoly) -> NCPoly:
        return NCPoly._raw(self, self.reduce_terms(self._diff_terms(p.terms)))

    # --- coefficient specialisation -----------------------------------------

    def specialize(self, u_value: Scalar, name: str | None = None) -> "RewriteSystem":
        """Copy of the system with the formal unit replaced by ``u_value``."""
        rules = {k: _drop_zero({w: c.substitute(u_value) for w, c in v.items()}) for k, v in self._rules.items()}
        sysc = RewriteSystem(name or self.name, self.generators, rules, u_value.mode, step_budget=self.step_budget)
        for r in self.ideal_rules:
            rhs = NCPoly(sysc, {w: c.substitute(u_value) for w, c in r.rhs.terms.items()})
            sysc.add_ideal_rule(IdealRule(r.lhs, rhs, r.tangency))
        return sysc

    def with_budget(self, step_budget: int) -> "RewriteSystem":
        self.step_budget = step_budget
        return self


def _drop_zero(d: dict) -> dict:
    return {k: v for k, v in d.items() if not v.is_zero()}


def _remove_letters(w: Word, lead: Word) -> Word | None:
    rest = list(w)
    for x in lead:
        try:
            rest.remove(x)
        except ValueError:
            return None
    return tuple(rest)


def _scalar_env(mode: UnitMode, wrap) -> dict:
    env = {
        "i": wrap(Scalar.const(I_UNIT, mode)),
        "sqrt2": wrap(Scalar.const(SQRT2_ELEM, mode)),
        "lam": wrap(Scalar.unit(2, mode)),
    }
    for n in ("u", "mu", "q"):
        env[n] = wrap(Scalar.unit(1, mode))
    return env


# --- functional interface ---------------------------------------------------


def normal_form(sys: RewriteSystem, p: NCPoly) -> NCPoly:
    return sys.normal_form(p)


def star(sys: RewriteSystem, p: NCPoly) -> NCPoly:
    return sys.star(p)


def differential(sys: RewriteSystem, p: NCPoly) -> NCPoly:
    return sys.differential(p)


def deformation_phase(r: Sequence[int], r2: Sequence[int], theta_matrix, mode: UnitMode = UnitMode.PHASE) -> Scalar:
    """Commutation factor between weight spaces r and r2 as a power of mu.

    ``theta_matrix`` is the antisymmetric deformation matrix in units of theta.
    Two homogeneous elements of weights r, r2 satisfy
    ``f g = exp(2 pi i r.Theta.r2) g f = mu**k g f`` with ``k = 2 r.Theta.r2 / theta``.
    """
    t = [[Fraction(x) for x in row] for row in theta_matrix]
    if t[0][0] or t[1][1] or t[0][1] != -t[1][0]:
        raise ValueError("deformation matrix must be antisymmetric")
    val = sum(Fraction(r[a]) * t[a][b] * Fraction(r2[b]) for a in range(2) for b in range(2))
    k = 2 * val
    if k.denominator != 1:
        raise NonIntegralPhase(f"phase exponent {k} is not an integer power of mu")
    return Scalar.unit(int(k), mode)


# --- overlap checking --------------------------------------------------------


@dataclass
class OverlapReport:
    system: str
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} unresolved"
        return f"{self.system}: {self.checked} checks, {status}"


def check_overlaps(sys: RewriteSystem, include_ideal: bool = True) -> OverlapReport:
    """Diamond-lemma check of the quadratic rules, plus the ideal-rule side conditions.

    For the quadratic part every length-3 overlap ``a b c`` of two left-hand
    sides is reduced both ways.  For each ideal element ``c`` the report checks
    that ``c`` is central (graded) and that the leading coefficient in the
    division step is a unit; with a tangency form ``T`` it checks graded
    centrality of ``T``, ``iota(T) = c`` and that the contraction respects every
    rule.
    """
    rep = OverlapReport(sys.name)
    rules = sys.rule_table()
    budget = [10**7]
    firsts: dict[int, list] = {}
    for (a, b) in rules:
        firsts.setdefault(a, []).append(b)
    for (a, b), rhs_ab in rules.items():
        for c in firsts.get(b, []):
            rhs_bc = rules[(b, c)]
            left: dict = {}
            for w, k in rhs_ab.items():
                for ww, kk in sys._nf_quad(w + (c,), budget).items():
                    _acc(left, ww, kk * k)
            right: dict = {}
            for w, k in rhs_bc.items():
                for ww, kk in sys._nf_quad((a,) + w, budget).items():
                    _acc(right, ww, kk * k)
            rep.checked += 1
            diff = _add_terms(left, {w: -k for w, k in right.items()})
            if diff:
                rep.failures.append(
                    {"overlap": _names(sys, (a, b, c)), "left": sys.format(left), "right": sys.format(right)}
                )
    if not include_ideal:
        return rep
    for lead, rel in sys._ideal_data:
        for g in sys.generators:
            gw = (g.index,)
            lhs = sys.reduce_terms({w + gw: c for w, c in rel.items()}, quadratic_only=True)
            rhs = sys.reduce_terms({gw + w: c for w, c in rel.items()}, quadratic_only=True)
            rep.checked += 1
            diff = _add_terms(lhs, {w: -c for w, c in rhs.items()})
            if diff:
                rep.failures.append({"centrality": g.name, "residual": sys.format(diff)})
        quad = sys.reduce_terms(rel, quadratic_only=True)
        top = max(quad, key=deglex_key)
        rep.checked += 1
        if top != lead or not quad[top].is_monomial():
            rep.failures.append({"ideal_lead": _names(sys, lead), "found": _names(sys, top)})
    if sys._tangent is not None:
        tang = sys._tangent
        for g in sys.generators:
            gw = (g.index,)
            sign = -1 if g.degree % 2 else 1
            lhs = sys.reduce_terms({w + gw: c for w, c in tang.items()})
            rhs = sys.reduce_terms({gw + w: c * sign for w, c in tang.items()})
            rep.checked += 1
            diff = _add_terms(lhs, {w: -c for w, c in rhs.items()})
            if diff:
                rep.failures.append({"tangency_centrality": g.name, "residual": sys.format(diff)})
        it = sys.reduce_terms(_add_terms(sys._contract(tang), {(): -sys._one}))
        rep.checked += 1
        if it:
            rep.failures.append({"contraction_of_tangency": sys.format(it)})
        for (a, b), rhs in rules.items():
            if not (sys._degree[a] or sys._degree[b]):
                continue
            rel_terms = _add_terms({(a, b): sys._one}, {w: -c for w, c in rhs.items()})
            res = sys.reduce_terms(sys._contract(rel_terms))
            rep.checked += 1
            if res:
                rep.failures.append({"contraction_rule": _names(sys, (a, b)), "residual": sys.format(res)})
    return rep


def _names(sys: RewriteSystem, w: Word) -> str:
    return "*".join(sys.generators[i].name for i in w)


# --- presentations -----------------------------------------------------------


class _FreePoly:
    """Unreduced polynomial used while parsing presentations."""

    __slots__ = ("terms", "mode")

    def __init__(self, terms, mode):
        self.terms, self.mode = terms, mode

    def _c(self, o):
        if isinstance(o, _FreePoly):
            return o
        return _FreePoly({(): o if isinstance(o, Scalar) else Scalar.const(o, self.mode)}, self.mode)

    def __add__(self, o):
        return _FreePoly(_add_terms(self.terms, self._c(o).terms), self.mode)

    def __sub__(self, o):
        return self + self._c(o) * Scalar.const(-1, self.mode)

    def __mul__(self, o):
        if isinstance(o, Scalar):
            return _FreePoly({w: c * o for w, c in self.terms.items()}, self.mode)
        o = self._c(o)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in o.terms.items():
                _acc(out, w1 + w2, c1 * c2)
        return _FreePoly(out, self.mode)

    def __pow__(self, n):
        if n < 0:
            if set(self.terms) != {()}:
                raise ValueError("negative powers only of scalars")
            return _FreePoly({(): self.terms[()] ** n}, self.mode)
        out = self._c(Scalar.const(1, self.mode))
        for _ in range(n):
            out = out * self
        return out


@dataclass
class _GenSpec:
    name: str
    weight: tuple
    star: str | None
    form: str | None


def _orient(sys: RewriteSystem, terms: dict, where: str):
    """Turn a relation sum = 0 into (largest word, rhs) with the rhs reduced."""
    if not terms:
        raise PresentationError(f"{where}: trivial relation")
    top = max(terms, key=deglex_key)
    kappa = terms[top]
    if not kappa.is_monomial():
        raise PresentationError(f"{where}: leading coefficient {kappa} is not invertible")
    k_inv = -kappa.inverse()
    rhs = {w: c * k_inv for w, c in terms.items() if w != top}
    return top, rhs


def build_system(
    name: str,
    unit: UnitMode,
    gens: Sequence[_GenSpec],
    relations: Sequence[str] = (),
    conjugate_relations: bool = False,
    twist=None,
    ideal: str | None = None,
    tangency: bool = False,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> RewriteSystem:
    """Assemble a system from generator specs, displayed relations and options.

    ``relations`` are equations ``lhs = rhs`` in the generator names; each is
    oriented towards its largest word.  With ``twist`` (a 2x2 antisymmetric
    matrix in units of theta) every pair of generators quasi-commutes with the
    phase of their weights, forms anticommute, and ``dx dx = 0``.
    """
    names0 = [g.name for g in gens]
    form_names = [g.form for g in gens if g.form]
    all_names = names0 + form_names
    index = {n: k for k, n in enumerate(all_names)}
    star_of: dict[str, str] = {}
    for g in gens:
        star_of[g.name] = g.star or g.name
    for g in gens:
        if g.form:
            partner = next(h for h in gens if h.name == star_of[g.name])
            if partner.form is None:
                raise MissingFormGenerator(partner.name)
            star_of[g.form] = partner.form
    generators = []
    for g in gens:
        generators.append(
            Generator(g.name, index[g.name], 0, tuple(g.weight), index[star_of[g.name]], star_of[g.name] == g.name,
                      index[g.form] if g.form else None)
        )
    for g in gens:
        if g.form:
            generators.append(
                Generator(g.form, index[g.form], 1, tuple(g.weight), index[star_of[g.form]],
                          star_of[g.form] == g.form, index[g.name])
            )
    for g in generators:
        partner = generators[g.star_partner]
        if partner.star_partner != g.index or tuple(-x for x in g.weight) != tuple(partner.weight):
            raise PresentationError(f"{name}: star partner of {g.name} is inconsistent")

    sysm = RewriteSystem(name, generators, {}, unit, step_budget=step_budget)
    rules: dict = {}
    if twist is not None:
        for a, b in itertools.combinations(range(len(generators)), 2):
            ga, gb = generators[a], generators[b]
            # b a = phase(b, a) a b, with an extra sign for two odd letters
            ph = deformation_phase(gb.weight, ga.weight, twist, unit)
            if ga.degree and gb.degree:
                ph = -ph
            rules[(b, a)] = {(a, b): ph}
        for g in generators:
            if g.degree == 1:
                rules[(g.index, g.index)] = {}
    env = {n: _FreePoly({(index[n],): Scalar.const(1, unit)}, unit) for n in all_names}
    env.update(_scalar_env(unit, lambda s: _FreePoly({(): s}, unit)))

    def parse_rel(text: str) -> dict:
        lhs, rhs = text.split("=")
        const = lambda c: _FreePoly({(): Scalar.const(c, unit)}, unit)
        left = eval_expression(lhs, env, const)
        right = eval_expression(rhs, env, const)
        return (left - right).terms

    rel_terms = [parse_rel(r) for r in relations]
    if conjugate_relations:
        tmp = RewriteSystem(name, generators, {}, unit)
        rel_terms += [tmp._star_terms(t) for t in rel_terms]
    # orient relations whose leading coefficient is a unit; reduce the rest by the
    # rules found so far and retry until nothing changes
    pending = list(enumerate(rel_terms))
    while pending:
        progress = False
        waiting = []
        for k, terms in pending:
            terms = sysm.reduce_terms(terms, quadratic_only=True) if rules else terms
            if not terms:
                progress = True  # implied by the rules already oriented
                continue
            top = max(terms, key=deglex_key)
            if not terms[top].is_monomial():
                waiting.append((k, terms))
                continue
            top, rhs = _orient(sysm, terms, f"{name} relation {k}")
            if len(top) != 2:
                raise PresentationError(f"{name}: relation {k} does not lead with a quadratic word")
            rules[top] = rhs
            sysm = RewriteSystem(name, generators, rules, unit, step_budget=step_budget)
            progress = True
        if not progress:
            k, terms = waiting[0]
            _orient(sysm, terms, f"{name} relation {k}")
        pending = waiting
    sysm = RewriteSystem(name, generators, rules, unit, step_budget=step_budget)
    # interreduce right-hand sides; every rhs word is below its lhs, so this terminates
    changed = True
    while changed:
        changed = False
        for key, rhs in list(rules.items()):
            red = sysm.reduce_terms(rhs, quadratic_only=True)
            if red != rhs:
                for w in red:
                    if deglex_key(w) >= deglex_key(key):
                        raise PresentationError(f"{name}: rule {_names(sysm, key)} is not decreasing")
                rules[key] = red
                changed = True
        sysm = RewriteSystem(name, generators, rules, unit, step_budget=step_budget)
    if ideal is not None:
        terms = sysm.reduce_terms(parse_rel(ideal), quadratic_only=True)
        top, rhs = _orient(sysm, terms, f"{name} ideal")
        sysm.add_ideal_rule(IdealRule(top, NCPoly(sysm, rhs), tangency))
    return sysm


def load_presentation(source: str | Path, step_budget: int = DEFAULT_STEP_BUDGET) -> RewriteSystem:
    """Load a system from the declarative text format (see ``data/*.pres``).

    Lines::

        system NAME
        unit phase|real
        twist A               # Theta = A * [[0, 1], [-1, 0]] in units of theta
        gen NAME w1 w2 [star OTHER] [form DNAME]
        rel LHS = RHS         # displayed relation, oriented automatically
        conjugates            # also impose the star-conjugate of every rel
        ideal LHS = RHS       # central sphere relation
        tangency              # impose d(ideal) = 0 on forms
    """
    if isinstance(source, Path) or "\n" not in str(source):
        text = Path(source).read_text()
    else:
        text = str(source)
    name, unit, twist = "system", UnitMode.PHASE, None
    gens: list[_GenSpec] = []
    rels: list[str] = []
    conj = tangency = False
    ideal = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "system":
            name = rest
        elif key == "unit":
            unit = UnitMode(rest)
        elif key == "twist":
            a = Fraction(rest)
            twist = [[0, a], [-a, 0]]
        elif key == "gen":
            tok = rest.split()
            spec = _GenSpec(tok[0], (int(tok[1]), int(tok[2])), None, None)
            opts = tok[3:]
            for j in range(0, len(opts), 2):
                if opts[j] == "star":
                    spec.star = opts[j + 1]
                elif opts[j] == "form":
                    spec.form = opts[j + 1]
                else:
                    raise PresentationError(f"unknown generator option {opts[j]!r}")
            gens.append(spec)
        elif key == "rel":
            rels.append(rest)
        elif key == "conjugates":
            conj = True
        elif key == "ideal":
            ideal = rest
        elif key == "tangency":
            tangency = True
        else:
            raise PresentationError(f"unknown directive {key!r}")
    # fill in missing star partners symmetrically
    declared = {g.name: g for g in gens}
    for g in gens:
        if g.star and declared[g.star].star is None:
            declared[g.star].star = g.name
    return build_system(name, unit, gens, rels, conj, twist, ideal, tangency, step_budget)


def builtin(name: str, step_budget: int = DEFAULT_STEP_BUDGET) -> RewriteSystem:
    return load_presentation(DATA_DIR / f"{name}.pres", step_budget)
