"""Hochschild and cyclic operators on tensor chains, and Chern characters of projections.

Chains live in the normalized complex by default: a tensor with the unit in
any slot past the first is zero.  That is where B = B0 N squares to zero; on
the plain tensor complex it does not (B B(a) = 1/2 (1 x 1 x a - 1 x a x 1)).
``normalized=False`` keeps the plain complex for comparison.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

from .ncalg import NCPoly, RewriteSystem, _acc
from .ncmatrix import NCMatrix
from .report import Report
from .tensor import Tensor, expand_slots

CONVENTIONS = ("connes", "averaged")  # N without / with the 1/(n+1) factor


class DegreeZero(ValueError):
    pass


class Chain(Tensor):
    __slots__ = ("normalized",)

    def __init__(self, sys: RewriteSystem, terms=None, normalized: bool = True):
        super().__init__(sys, terms)
        self.normalized = normalized
        if normalized:
            self.terms = {k: c for k, c in self.terms.items() if all(w for w in k[1:])}

    def _new(self, terms):
        return Chain(self.sys, terms, self.normalized)

    @classmethod
    def from_slots(cls, sys: RewriteSystem, slots, coeff=1, normalized: bool = True) -> "Chain":
        return cls(sys, expand_slots(sys, slots, sys.scalar(coeff)), normalized)

    @property
    def degree(self) -> int | None:
        d = self.degrees()
        if len(d) > 1:
            raise ValueError(f"inhomogeneous chain, degrees {sorted(d)}")
        return next(iter(d)) if d else None


def hochschild_b(c: Chain) -> Chain:
    sys = c.sys
    out: dict = {}
    for key, coeff in c.terms.items():
        n = len(key) - 1
        if n < 1:
            raise DegreeZero("b is defined from degree 1")
        for j in range(n):
            sign = coeff if j % 2 == 0 else -coeff
            for k, cc in c.slot_product(key, j).items():
                _acc(out, k, sign * cc)
        sign = coeff if n % 2 == 0 else -coeff
        for w, cc in sys.reduce_terms({key[-1] + key[0]: sys.scalar(1)}).items():
            _acc(out, (w,) + key[1:-1], sign * cc)
    return c._new(out)


def cyclic_N(c: Chain, convention: str = "connes") -> Chain:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    out: dict = {}
    for key, coeff in c.terms.items():
        n = len(key) - 1
        scale = coeff * Fraction(1, n + 1) if convention == "averaged" else coeff
        for j in range(n + 1):
            _acc(out, key[j:] + key[:j], scale if (n * j) % 2 == 0 else -scale)
    return Chain(c.sys, out, normalized=False) if not c.normalized else c._new(out)


def connes_B(c: Chain, convention: str = "connes") -> Chain:
    """B = B0 N with B0 prepending the unit."""
    Nc = cyclic_N(c, convention)
    return c._new({((),) + k: v for k, v in Nc.terms.items()})


def trace_chain(p: NCMatrix, normalized: bool = True) -> Chain:
    tr = p.ring.reduce_terms(p.trace().terms)
    return Chain(p.ring, {(w,): c for w, c in tr.items()}, normalized)


def chern_character(p: NCMatrix, k: int, normalized: bool = True) -> Chain:
    """ch_0 = tr p; ch_k = (-1)^k (2k)!/k! sum (p - 1/2)_{i0 i1} (x) p_{i1 i2} (x) ... (x) p_{i2k i0}."""
    if k == 0:
        return trace_chain(p, normalized)
    if k > 2:
        raise ValueError("ch_k is capped at k = 2")
    sys = p.ring
    n = p.shape[0]
    half = sys.const(Fraction(1, 2))
    first = [[p[i, j] - half if i == j else p[i, j] for j in range(n)] for i in range(n)]
    coeff = sys.scalar(Fraction((-1) ** k * factorial(2 * k), factorial(k)))
    out: dict = {}

    def walk(idx: list):
        if len(idx) == 2 * k + 1:
            slots = [first[idx[0]][idx[1]]] + [p[idx[m], idx[(m + 1) % len(idx)]] for m in range(1, len(idx))]
            if any(not s.terms for s in slots):
                return
            for key, c in expand_slots(sys, slots, coeff).items():
                _acc(out, key, c)
            return
        for i in range(n):
            walk(idx + [i])

    walk([])
    return Chain(sys, out, normalized)


def closure_check(p: NCMatrix, include_ch2: bool = False) -> Report:
    """(b + B) ch = 0 in degree 1 (and optionally 3), under each convention and complex."""
    rep = Report("Chern character closure")
    for normalized in (True, False):
        ch0 = chern_character(p, 0, normalized)
        ch1 = chern_character(p, 1, normalized)
        bch1 = hochschild_b(ch1)
        ch2 = chern_character(p, 2, normalized) if include_ch2 else None
        for conv in CONVENTIONS:
            cx = "normalized" if normalized else "plain"
            rep.run(f"closure.deg1.{conv}.{cx}", "b ch1 + B ch0 = 0",
                    lambda conv=conv, bch1=bch1, ch0=ch0: _chain_res(bch1 + connes_B(ch0, conv)))
            if ch2 is not None:
                rep.run(f"closure.deg3.{conv}.{cx}", "b ch2 + B ch1 = 0",
                        lambda conv=conv, ch2=ch2, ch1=ch1: _chain_res(hochschild_b(ch2) + connes_B(ch1, conv)))
    return rep


def consistent_conventions(rep: Report) -> list:
    """Conventions (and complex) under which every closure check of ``rep`` passes."""
    out = []
    for conv in CONVENTIONS:
        for cx in ("normalized", "plain"):
            checks = [c for c in rep.checks if c.id.endswith(f".{conv}.{cx}")]
            if checks and all(c.ok for c in checks):
                out.append((conv, cx))
    return out


def _chain_res(c: Chain) -> tuple:
    if c.is_zero():
        return True, 0.0
    return False, float(len(c.terms))


# --- random chains ---------------------------------------------------------------------


def random_element(sys: RewriteSystem, rng: random.Random, letters=None, max_len: int = 2,
                   unit_bias: float = 0.2) -> NCPoly:
    """Small random polynomial in ``letters`` (default: the degree-0 generators); sometimes a scalar."""
    if rng.random() < unit_bias:
        return sys.const(rng.choice([1, -1, 2]))
    if letters is None:
        letters = [NCPoly(sys, {(g.index,): sys.scalar(1)}) for g in sys.generators if g.degree == 0]
    out = sys.zero()
    for _ in range(rng.randint(1, 2)):
        m = sys.one()
        for _ in range(rng.randint(1, max_len)):
            m = m * rng.choice(letters)
        c = sys.u(rng.randint(-2, 2)) * rng.choice([1, -1, 2, Fraction(1, 2)])
        out = out + m * c
    return out


def random_chain(sys: RewriteSystem, rng: random.Random, degree: int, normalized: bool = True,
                 terms: int = 2, letters=None, max_len: int = 2) -> Chain:
    out = Chain(sys, {}, normalized)
    for _ in range(terms):
        slots = [random_element(sys, rng, letters, max_len) for _ in range(degree + 1)]
        out = out + Chain.from_slots(sys, slots, 1, normalized)
    return out


def identities_check(sys: RewriteSystem, count: int = 200, seed: int = 0, max_degree: int = 3,
                     convention: str = "connes", normalized: bool = True, letters=None,
                     label: str | None = None, max_len: int = 2) -> Report:
    """b^2 = 0, B^2 = 0 and bB + Bb = 0 on random chains of degree <= max_degree."""
    label = label or sys.name
    rng = random.Random(seed)
    rep = Report(f"cyclic identities on {label}")
    bad = {"b2": 0, "B2": 0, "bB": 0}
    for _ in range(count):
        n = rng.randint(1, max_degree)
        c = random_chain(sys, rng, n, normalized, letters=letters, max_len=max_len)
        if n >= 2 and not hochschild_b(hochschild_b(c)).is_zero():
            bad["b2"] += 1
        Bc = connes_B(c, convention)
        if not connes_B(Bc, convention).is_zero():
            bad["B2"] += 1
        if not (hochschild_b(Bc) + connes_B(hochschild_b(c), convention)).is_zero():
            bad["bB"] += 1
    for key, anchor in (("b2", "b^2 = 0"), ("B2", "B^2 = 0"), ("bB", "bB + Bb = 0")):
        rep.run(f"cyclic.{key}.{label}", anchor, lambda k=key: (bad[k] == 0, float(bad[k]), f"{bad[k]} of {count} chains fail"))
    return rep


def cyclic_suite(cfg, count: int = 200, seed: int = 0) -> Report:
    """Random-chain identities on S^4_theta, S^7_theta, S^7_q, S^4_q; ch_0 values; closure of (ch_0, ch_1)."""
    from . import q_sympl
    from .theta_spheres import build_instanton, build_theta_spheres

    s4, s7 = build_theta_spheres(cfg)[:2]
    s7q = q_sympl.s7q()
    proj = q_sympl.build_projection_q()
    rep = Report("cyclic")
    # S^4_q letters are binomials in S^7_q, so slots there are single letters to bound the expansion
    for sys, letters, label, ml in ((s4, None, s4.name, 2), (s7, None, s7.name, 2), (s7q, None, s7q.name, 2),
                                    (s7q, list(proj.generators.values()), "S4_q", 1)):
        rep.extend(identities_check(sys, count, seed, letters=letters, label=label, max_len=ml))

    p_theta = build_instanton(cfg).p
    rep.run("cyclic.ch0.theta", "ch0(p_theta) = 2",
            lambda: _chain_res(chern_character(p_theta, 0) - Chain(s4, {((),): s4.scalar(2)})))
    t = proj.generators["t"]
    expected = s7q.const(2) - t * (q_sympl.q(-4) * (1 - q_sympl.q(2)) * (1 - q_sympl.q(4)))
    rep.run("cyclic.ch0.q", "ch0(p_q) = 2 - q^-4 (1-q^2)(1-q^4) t",
            lambda: _chain_res(chern_character(proj.p, 0) - trace_chain(NCMatrix(s7q, [[expected]]))))
    rep.run("cyclic.ch0.q.selfadjoint", "ch0(p_q) is star-fixed",
            lambda: ((proj.p.trace().star() - proj.p.trace()).is_zero(), 0.0))
    for name, p in (("theta", p_theta), ("q", proj.p)):
        cl = closure_check(p)
        conv = consistent_conventions(cl)
        rep.run(f"cyclic.closure.{name}", "(b + B)(ch0, ch1) = 0 under some convention",
                lambda conv=conv: (bool(conv), 0.0, ", ".join(f"{a}/{b}" for a, b in conv) or "none"))
    return rep
