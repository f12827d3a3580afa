"""The sigma and beta representations of A(S^4_q) on a truncated Hilbert space, traces and index pairings.

The basis |m,n> (0 <= m, n < N) is flattened as m*N + n.  Every generator is a
weighted shift, so the window is exact except where a shift would leave it;
relation residuals are therefore measured on columns that stay inside the
window for the whole word (m, n < N - word length).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import q_sympl
from .ncalg import NCPoly, RewriteSystem, load_presentation
from .report import Report
from .scalars import Scalar

LETTERS = ("t", "a", "ab", "b", "bb")  # ab, bb are the adjoints of a, b

_LETTER_PRES = """
system S4_q letters
unit real
gen t 0 0
gen a 0 0 star ab
gen ab 0 0
gen b 0 0 star bb
gen bb 0 0
"""


class BadParameter(ValueError):
    pass


class UnknownLetter(KeyError):
    pass


@lru_cache(maxsize=None)
def letter_system() -> RewriteSystem:
    """Free *-algebra on t, a, abar, b, bbar: the domain of ``represent``."""
    return load_presentation(_LETTER_PRES)


def letter(name: str) -> NCPoly:
    s = letter_system()
    if name not in s.by_name:
        raise UnknownLetter(name)
    return NCPoly(s, {(s.by_name[name],): s.scalar(1)})


def letters() -> dict:
    return {n: letter(n) for n in LETTERS}


@lru_cache(maxsize=None)
def _embedding():
    from .theta_spheres import AlgebraMap

    return AlgebraMap(letter_system(), q_sympl.s7q(), q_sympl.s4q_generators())


def embed(p: NCPoly) -> NCPoly:
    """Image in S^7_q; symbolic equality of letter polynomials is decided there."""
    return _embedding()(p)


def _as_float(q) -> float:
    try:
        v = float(Fraction(q)) if isinstance(q, str) else float(q)
    except (ValueError, ZeroDivisionError) as exc:
        raise BadParameter(f"q = {q!r} is not a number") from exc
    if not 0.0 < v < 1.0:
        raise BadParameter(f"q must lie in (0, 1), got {v}")
    return v


@dataclass(frozen=True)
class TruncatedOperator:
    matrix: sp.csr_matrix
    cutoff: int
    margin: int = 1  # longest word that produced it; columns with m or n >= cutoff - margin may be truncated

    def __matmul__(self, o: "TruncatedOperator") -> "TruncatedOperator":
        return TruncatedOperator((self.matrix @ o.matrix).tocsr(), self.cutoff, self.margin + o.margin)

    def __add__(self, o: "TruncatedOperator") -> "TruncatedOperator":
        return TruncatedOperator((self.matrix + o.matrix).tocsr(), self.cutoff, max(self.margin, o.margin))

    def __sub__(self, o: "TruncatedOperator") -> "TruncatedOperator":
        return TruncatedOperator((self.matrix - o.matrix).tocsr(), self.cutoff, max(self.margin, o.margin))

    def scale(self, c: complex) -> "TruncatedOperator":
        return TruncatedOperator((self.matrix * c).tocsr(), self.cutoff, self.margin)

    def interior_columns(self) -> np.ndarray:
        keep = np.arange(max(self.cutoff - self.margin, 0))
        return (keep[:, None] * self.cutoff + keep[None, :]).ravel()

    def interior_norm(self) -> float:
        """Largest entry among columns that never leave the window."""
        cols = self.interior_columns()
        if cols.size == 0:
            raise BadParameter(f"cutoff {self.cutoff} leaves no interior for words of length {self.margin}")
        block = self.matrix[:, cols]
        return float(abs(block).max()) if block.nnz else 0.0

    def adjoint(self) -> "TruncatedOperator":
        return TruncatedOperator(self.matrix.conj().T.tocsr(), self.cutoff, self.margin)

    def trace(self) -> complex:
        return complex(self.matrix.diagonal().sum())

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def _shift(N: int, coeff, dm: int, dn: int) -> sp.csr_matrix:
    """sum_{m,n} coeff(m, n) |m+dm, n+dn><m, n|, dropping targets outside the window."""
    m, n = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    m, n = m.ravel(), n.ravel()
    tm, tn = m + dm, n + dn
    ok = (tm >= 0) & (tm < N) & (tn >= 0) & (tn < N)
    vals = coeff(m[ok].astype(float), n[ok].astype(float))
    return sp.csr_matrix((vals, (tm[ok] * N + tn[ok], m[ok] * N + n[ok])), shape=(N * N, N * N))


@dataclass
class SigmaRep:
    q: float
    cutoff: int
    generator_matrices: dict = field(default_factory=dict)

    def __getitem__(self, name: str) -> TruncatedOperator:
        try:
            return self.generator_matrices[name]
        except KeyError:
            raise UnknownLetter(name) from None

    @property
    def dim(self) -> int:
        return self.cutoff * self.cutoff

    def identity(self) -> TruncatedOperator:
        return TruncatedOperator(sp.identity(self.dim, format="csr", dtype=float), self.cutoff, 0)


def build_sigma(q, N: int) -> SigmaRep:
    q = _as_float(q)
    if N < 4:
        raise BadParameter(f"cutoff must be at least 4, got {N}")
    s = np.sqrt
    mats = {
        "t": _shift(N, lambda m, n: q ** (2 * m + 4 * n + 4), 0, 0),
        "ab": _shift(N, lambda m, n: s(1 - q ** (2 * m + 2)) * q ** (m + 2 * n + 1), 1, 0),
        "a": _shift(N, lambda m, n: s(1 - q ** (2 * m)) * q ** (m + 2 * n), -1, 0),
        "b": _shift(N, lambda m, n: s(1 - q ** (4 * n + 4)) * q ** (2 * (m + n + 2)), 0, 1),
        "bb": _shift(N, lambda m, n: s(1 - q ** (4 * n)) * q ** (2 * (m + n + 1)), 0, -1),
    }
    return SigmaRep(q, N, {k: TruncatedOperator(v, N, 1) for k, v in mats.items()})


def coefficient_tables(rep: SigmaRep) -> tuple:
    """(a_mn, b_mn): the raising coefficients abar|m,n> = a_mn |m+1,n>, b|m,n> = b_mn |m,n+1>."""
    N, q = rep.cutoff, rep.q
    m, n = np.meshgrid(np.arange(2 * N + 2), np.arange(N), indexing="ij")
    a_tab = np.sqrt(1 - q ** (2 * m + 2)) * q ** (m + 2 * n + 1)
    m, n = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    b_tab = np.sqrt(1 - q ** (4 * n + 4)) * q ** (2 * (m + n + 2))
    # cross-check against the populated matrices
    ab = rep["ab"].matrix
    for mm in range(N - 1):
        for nn in range(N):
            if abs(ab[(mm + 1) * N + nn, mm * N + nn] - a_tab[mm, nn]) > 1e-15:
                raise AssertionError(f"abar coefficient mismatch at {(mm, nn)}")
    return a_tab, b_tab


def represent(rep: SigmaRep, poly: NCPoly) -> TruncatedOperator:
    """Word-by-word product of generator matrices, coefficients evaluated at rep.q."""
    if poly.sys is not letter_system():
        raise UnknownLetter(f"polynomial over {poly.sys.name}, expected the S4_q letters")
    names = [g.name for g in poly.sys.generators]
    out = TruncatedOperator(sp.csr_matrix((rep.dim, rep.dim)), rep.cutoff, 0)
    for w, c in poly.terms.items():
        op = rep.identity()
        for i in w:
            op = op @ rep[names[i]]
        out = out + op.scale(c.eval(rep.q))
    return out


def relation_residuals(rep: SigmaRep, tol: float = 1e-10) -> Report:
    out = Report(f"sigma relations (q = {rep.q}, N = {rep.cutoff})")
    g = letters()
    for name, rel in q_sympl.s4q_relations(g):
        out.run(f"sigma.{name}", "relation holds on the interior", lambda rel=rel: _small(represent(rep, rel).interior_norm(), tol))
    out.run("sigma.t_real", "t is real diagonal", lambda: _small(abs(rep["t"].matrix - rep["t"].adjoint().matrix).max(), 0.0))
    for x, y in (("a", "ab"), ("b", "bb")):
        out.run(f"sigma.adjoint.{x}", f"sigma({y}) = sigma({x})^dagger",
                lambda x=x, y=y: _small(abs(rep[y].matrix - rep[x].adjoint().matrix).max(), 0.0))
    for name in LETTERS:
        # weighted shifts: one entry per row and column, so the operator norm is the largest entry
        out.run(f"sigma.norm.{name}", "operator norm <= 1", lambda name=name: _small(max(abs(rep[name].matrix).max() - 1.0, 0.0), 1e-12))
    out.run("sigma.highest_weight", "a|0,0> = 0 and bbar|0,0> = 0",
            lambda: _small(max(abs(rep["a"].matrix[:, 0]).max(), abs(rep["bb"].matrix[:, 0]).max()), 0.0))

    def recursion():
        a_tab, b_tab = coefficient_tables(rep)
        N, q = rep.cutoff, rep.q
        r1 = np.abs(a_tab[:, 1:] - q ** 2 * a_tab[:, :-1]).max()
        r2 = np.abs(b_tab[1:, :] - q ** 2 * b_tab[:-1, :]).max()
        r3 = max(abs(b_tab[m, n] - q ** 2 * a_tab[2 * n + 1, m]) for m in range(N) for n in range(N))
        return _small(max(r1, r2, r3), 1e-14)

    out.run("sigma.recursion", "a_{m,n+1} = q^2 a_mn, b_{m+1,n} = q^2 b_mn, b_mn = q^2 a_{2n+1,m}", recursion)
    return out


def _small(r: float, tol: float) -> tuple:
    return r <= tol, float(r)


# --- traces and pairings -------------------------------------------------------------


def trace_t(rep: SigmaRep) -> float:
    return rep["t"].trace().real


def truncated_trace_t(q, N: int) -> float:
    """sum_{m,n<N} q^(2m+4n+4), summed directly."""
    q = _as_float(q)
    m = q ** (2 * np.arange(N))
    n = q ** (4 * np.arange(N))
    return float(q ** 4 * m.sum() * n.sum())


@dataclass(frozen=True)
class ClosedFormTrace:
    """Tr t = q^4 / ((1-q^2)(1-q^4)); the N-window keeps the factor (1-q^2N)(1-q^4N)."""

    numerator: Scalar
    denominator: Scalar

    def value(self, q0) -> float | Fraction:
        if isinstance(q0, Fraction):
            return _exact(self.numerator, q0) / _exact(self.denominator, q0)
        return self.numerator.eval(q0).real / self.denominator.eval(q0).real

    def truncated(self, q0, N: int) -> float | Fraction:
        return self.value(q0) * (1 - q0 ** (2 * N)) * (1 - q0 ** (4 * N))

    def deficit_bound(self, q0, N: int) -> float:
        """value - truncated <= value * (q^2N + q^4N)."""
        return float(self.value(q0)) * (float(q0) ** (2 * N) + float(q0) ** (4 * N))


def _exact(s: Scalar, q0: Fraction) -> Fraction:
    out = Fraction(0)
    for k, c in s.terms.items():
        if not c.is_rational():
            raise ValueError("closed form has irrational coefficients")
        out += c.a * q0 ** k
    return out


def closed_form_trace() -> ClosedFormTrace:
    q = q_sympl.q
    return ClosedFormTrace(q(4), (1 - q(2)) * (1 - q(4)))


def ch0_letters() -> NCPoly:
    """tr p_q with p_q in the closed form over the S4_q letters."""
    return q_sympl.projection_formula(letters()).trace()


def tau0(poly: NCPoly) -> Fraction:
    """beta kills every letter and fixes 1, so tau0 is the constant term."""
    c = poly.terms.get((), Scalar.const(0, poly.sys.unit_mode))
    if not c.is_constant() or not c.constant_term().is_rational():
        raise ValueError("tau0 of a polynomial with a non-rational constant term")
    return Fraction(c.constant_term().a)


def tau1(rep: SigmaRep, poly: NCPoly) -> float:
    """Tr(sigma(x) - beta(x)): the constant term cancels against beta, the rest is trace class."""
    rest = NCPoly(poly.sys, {w: c for w, c in poly.terms.items() if w})
    return represent(rep, rest).trace().real


def rank_pairing() -> int:
    v = tau0(ch0_letters())
    if v.denominator != 1:
        raise ValueError(f"rank pairing {v} is not an integer")
    return int(v)


@dataclass
class PairingResult:
    q: float
    cutoff: int
    value: float
    expected: int
    truncated_closed_form: float
    tail_bound: float
    trace_t: float
    trace_t_closed_form: float
    rank: int
    seconds: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def index_pairing(rep: SigmaRep) -> float:
    """<[mu],[p]> = tau1(ch0(p_q)) on the N-window."""
    return tau1(rep, ch0_letters())


def pair(q, cutoff: int) -> PairingResult:
    t0 = time.perf_counter()
    qf = _as_float(q)
    rep = build_sigma(qf, cutoff)
    value = index_pairing(rep)
    cf = closed_form_trace()
    return PairingResult(
        q=qf,
        cutoff=cutoff,
        value=value,
        expected=-1,
        truncated_closed_form=-(1 - qf ** (2 * cutoff)) * (1 - qf ** (4 * cutoff)),
        tail_bound=qf ** (2 * cutoff) + qf ** (4 * cutoff),
        trace_t=trace_t(rep),
        trace_t_closed_form=float(cf.value(qf)),
        rank=rank_pairing(),
        seconds=time.perf_counter() - t0,
    )


# --- numeric equality oracle ---------------------------------------------------------


def _random_letter_poly(rng: random.Random, max_len: int = 3) -> NCPoly:
    s = letter_system()
    out = s.zero()
    for _ in range(rng.randint(1, 3)):
        w = tuple(s.by_name[rng.choice(LETTERS)] for _ in range(rng.randint(0, max_len)))
        c = q_sympl.q(rng.randint(-2, 2)) * rng.choice([1, -1, 2, Fraction(1, 3)])
        out = out + NCPoly(s, {w: c})
    return out


def oracle_pairs(count: int = 100, seed: int = 0, q0: float = 0.5, cutoff: int = 14, tol: float = 1e-9) -> Report:
    """Random pairs (P, P'), half equal modulo the S4_q relations: sigma equality must match symbolic equality."""
    rng = random.Random(seed)
    rep = build_sigma(q0, cutoff)
    rels = [r for _, r in q_sympl.s4q_relations(letters())]
    agree = equal = 0
    mismatches = []
    for k in range(count):
        P = _random_letter_poly(rng)
        if k % 2 == 0:
            x, y = _random_letter_poly(rng, 1), _random_letter_poly(rng, 1)
            P2 = P + x * rng.choice(rels) * y
        else:
            P2 = P + _random_letter_poly(rng, 2)
        symbolic = (embed(P) - embed(P2)).is_zero()
        numeric = represent(rep, P - P2).interior_norm() <= tol
        equal += symbolic
        if symbolic == numeric:
            agree += 1
        else:
            mismatches.append(k)
    out = Report("sigma oracle")
    out.run("oracle.agreement", "sigma equality matches symbolic equality",
            lambda: (agree == count, float(count - agree), f"{agree}/{count} agree, {equal} symbolically equal, mismatches {mismatches[:5]}"))
    return out


def qrep_suite(q0: float = 0.5, cutoff: int = 40, seed: int = 0) -> Report:
    q0 = _as_float(q0)
    out = Report("qrep")
    rep = build_sigma(q0, cutoff)
    out.extend(relation_residuals(rep))
    cf = closed_form_trace()
    out.run("trace.t.truncated", "Tr_N t matches the truncated geometric sum",
            lambda: _small(abs(trace_t(rep) - cf.truncated(q0, cutoff)), 1e-15 * cutoff))
    out.run("trace.t.direct", "matrix trace equals the direct sum", lambda: _small(abs(trace_t(rep) - truncated_trace_t(q0, cutoff)), 1e-15))
    out.run("trace.t.deficit", "limit minus window within the deficit bound",
            lambda: _small(max(float(cf.value(q0)) - trace_t(rep) - cf.deficit_bound(q0, cutoff), 0.0), 1e-15))
    tail = q0 ** (2 * cutoff) + q0 ** (4 * cutoff)
    out.run("pairing.charge", "<[mu],[p]> = -1 up to the truncation tail",
            lambda: (lambda r: (r <= tail + 1e-10, r))(abs(index_pairing(rep) + 1)))
    out.run("pairing.rank", "tau0(ch0 p) = 2", lambda: (rank_pairing() == 2, float(abs(rank_pairing() - 2))))
    out.run("pairing.tau1_one", "tau1(1) = 0", lambda: _small(abs(tau1(rep, letter_system().one())), 0.0))
    out.run("pairing.ch0", "ch0(p_q) = 2 - q^-4 (1-q^2)(1-q^4) t",
            lambda: ((ch0_letters() - _ch0_closed_form()).is_zero(), 0.0))
    out.extend(oracle_pairs(seed=seed, q0=q0))
    return out


def _ch0_closed_form() -> NCPoly:
    q = q_sympl.q
    return letter_system().const(2) - letter("t") * (q(-4) * (1 - q(2)) * (1 - q(4)))

