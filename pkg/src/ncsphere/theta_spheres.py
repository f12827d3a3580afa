"""Toric spheres S^4_theta and S^7_theta', the instanton projection and the Hodge star.

Both algebras come from the presentations in ``data/``.  For theta in Z/4 the
square root mu of lambda = exp(2 pi i theta) lies in Q(i, sqrt2) and the
systems are specialised exactly; otherwise mu stays the formal phase unit.
"""

from __future__ import annotations

import cmath
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np

from .ncalg import NCPoly, RewriteSystem, builtin, check_overlaps, DATA_DIR
from .ncmatrix import NCMatrix, bianchi_check, dagger, grassmann_curvature, mat_d
from .report import InvariantFailed, Report
from .scalars import FieldElem, Scalar

S4_FUNCTIONS = ("z0", "z1b", "z2b", "z1", "z2")


class NotUnitary(ValueError):
    pass


class OracleMismatch(AssertionError):
    pass


def _exact_phase(theta: Fraction) -> FieldElem | None:
    """exp(i pi theta) when it lies in Q(i, sqrt2), else None."""
    k = theta * 4
    if k.denominator != 1:
        return None
    h = Fraction(1, 2)
    return [
        FieldElem(1), FieldElem(0, 0, h, h), FieldElem(0, 1), FieldElem(0, 0, -h, h),
        FieldElem(-1), FieldElem(0, 0, -h, -h), FieldElem(0, -1), FieldElem(0, 0, h, -h),
    ][int(k) % 8]


@dataclass(frozen=True)
class ThetaConfig:
    theta: Fraction
    formal: bool = False  # keep mu symbolic even where an exact value exists

    def __post_init__(self):
        object.__setattr__(self, "theta", Fraction(self.theta))

    @property
    def exact_mu(self) -> FieldElem | None:
        return None if self.formal else _exact_phase(self.theta)

    @property
    def mu(self) -> Scalar:
        e = self.exact_mu
        return Scalar.unit(1) if e is None else Scalar.const(e)

    @property
    def mubar(self) -> Scalar:
        return self.mu.star()

    @property
    def lam(self) -> Scalar:
        return self.mu * self.mu

    @property
    def u0(self) -> complex:
        """Numeric value of mu used whenever coefficients are evaluated."""
        return cmath.exp(1j * cmath.pi * float(self.theta))

    @property
    def lam_table(self) -> list:
        """lambda_{mu nu} for mu, nu in (0, 1, 2)."""
        one = Scalar.const(1)
        t = [[one] * 3 for _ in range(3)]
        t[1][2], t[2][1] = self.lam, self.lam.star()
        return t

    @property
    def lam_prime(self) -> list:
        one, m, mb = Scalar.const(1), self.mu, self.mubar
        return [[one, one, mb, m], [one, one, m, mb], [m, mb, one, one], [mb, m, one, one]]

    @property
    def theta_prime(self) -> list:
        h = self.theta / 2
        pattern = [[0, 0, -1, 1], [0, 0, 1, -1], [1, -1, 0, 0], [-1, 1, 0, 0]]
        return [[h * x for x in row] for row in pattern]


@lru_cache(maxsize=None)
def _systems(theta: Fraction, formal: bool) -> tuple:
    cfg = ThetaConfig(theta, formal)
    s4, s7 = builtin("s4_theta"), builtin("s7_theta")
    if cfg.exact_mu is not None:
        mu = cfg.mu
        s4 = s4.specialize(mu, f"S4_theta[{theta}]")
        s7 = s7.specialize(mu, f"S7_theta[{theta}]")
    return s4, s7


def build_theta_spheres(cfg: ThetaConfig, check: bool = False) -> tuple:
    s4, s7 = _systems(cfg.theta, cfg.formal)
    if check:
        for sys in (s4, s7):
            rep = check_overlaps(sys)
            if not rep.ok:
                raise InvariantFailed(f"{sys.name} overlaps", rep.summary())
    return s4, s7


class AlgebraMap:
    """Multiplicative map ``source -> target`` fixed on degree-0 generators; forms follow by d."""

    def __init__(self, source: RewriteSystem, target: RewriteSystem, images: Mapping[str, NCPoly]):
        self.source, self.target = source, target
        self.images: dict[int, NCPoly] = {}
        for g in source.generators:
            if g.degree == 0:
                self.images[g.index] = images[g.name]
        for g in source.generators:
            if g.degree == 0 and g.d_partner is not None:
                self.images[g.d_partner] = self.images[g.index].d()
        self._cache: dict = {}

    def _word(self, w: tuple) -> NCPoly:
        hit = self._cache.get(w)
        if hit is None:
            hit = self.target.one() if not w else self._word(w[:-1]) * self.images[w[-1]]
            self._cache[w] = hit
        return hit

    def __call__(self, p: NCPoly) -> NCPoly:
        out = self.target.zero()
        for w, c in p.terms.items():
            out = out + self._word(w) * c
        return out

    def matrix(self, A: NCMatrix) -> NCMatrix:
        return A.map_into(self.target, self)


def _residual(p: NCPoly, u0: complex) -> tuple:
    if p.is_zero():
        return True, 0.0
    r = p.residual(u0)
    return False, (r if r > 0 else float(len(p.terms)))


def _matrix_residual(A: NCMatrix, u0: complex) -> tuple:
    worst, ok = 0.0, True
    for row in A.rows:
        for x in row:
            o, r = _residual(x, u0)
            ok &= o
            worst = max(worst, r)
    return ok, worst


# --- the spheres and the subalgebra map ---------------------------------------


def psi_matrix(s7: RewriteSystem) -> NCMatrix:
    return NCMatrix.parse(s7, [["psi1", "-psi2b"], ["psi2", "psi1b"], ["psi3", "-psi4b"], ["psi4", "psi3b"]])


def z_images(cfg: ThetaConfig, s7: RewriteSystem) -> dict:
    """The four-sphere generators as quadratic elements of the seven-sphere."""
    g = s7.gen
    z0 = g("psi1b") * g("psi1") + g("psi2b") * g("psi2") - g("psi3b") * g("psi3") - g("psi4b") * g("psi4")
    z1 = (g("psi3b") * g("psi1") * cfg.mu + g("psi2b") * g("psi4")) * 2
    z2 = (-(g("psi1b") * g("psi4")) + g("psi3b") * g("psi2") * cfg.mubar) * 2
    return {"z0": z0, "z1": z1, "z2": z2, "z1b": z1.star(), "z2b": z2.star()}


def subalgebra_map(cfg: ThetaConfig) -> AlgebraMap:
    s4, s7 = build_theta_spheres(cfg)
    return AlgebraMap(s4, s7, z_images(cfg, s7))


def dirac_matrices(cfg: ThetaConfig, sys: RewriteSystem) -> list:
    """Twisted gamma_0, gamma_1, gamma_2 as constant matrices over ``sys``."""
    m, mb = cfg.mu, cfg.mubar
    z = 0
    g0 = [[1, z, z, z], [z, 1, z, z], [z, z, -1, z], [z, z, z, -1]]
    g1 = [[z, z, z, z], [z, z, z, 2], [m * 2, z, z, z], [z, z, z, z]]
    g2 = [[z, z, z, -2], [z, z, z, z], [z, mb * 2, z, z], [z, z, z, z]]
    return [NCMatrix(sys, [[sys.const(x) for x in r] for r in g]) for g in (g0, g1, g2)]


def _pullback_weight(w: tuple) -> tuple:
    # character of the torus pulled back through (s1, s2) -> (s1 + s2, -s1 + s2)
    return (w[0] - w[1], w[0] + w[1])


def verify_subalgebra_map(cfg: ThetaConfig) -> Report:
    s4, s7 = build_theta_spheres(cfg)
    phi = subalgebra_map(cfg)
    rep = Report(f"subalgebra map, theta={cfg.theta}")
    u0 = cfg.u0

    def relations():
        worst, bad = 0.0, []
        for (a, b), rhs in s4.rule_table().items():
            lhs = s4.poly({}) + NCPoly._raw(s4, {(a, b): s4.scalar(1)})
            diff = phi(lhs) - phi(NCPoly._raw(s4, dict(rhs)))
            ok, r = _residual(diff, u0)
            if not ok:
                bad.append(s4.generators[a].name + "*" + s4.generators[b].name)
            worst = max(worst, r)
        return not bad, worst, ("failing: " + ", ".join(bad)) if bad else f"{len(s4.rule_table())} rules"

    rep.run("subalgebra.relations", "z-relations and their differentials hold for the quadratic images", relations)
    sphere = s4.parse("z1b*z1 + z2b*z2 + z0*z0 - 1")
    rep.run("subalgebra.sphere", "sum z*z = 1 for the images", lambda: _residual(phi(sphere), u0))
    for name in ("z1", "z2"):
        comm = s4.parse(f"z0*{name} - {name}*z0")
        rep.run(f"subalgebra.z0_central.{name}", "z0 commutes with the images", lambda c=comm: _residual(phi(c), u0))
    lam = cfg.lam
    rep.run("subalgebra.z1z2", "z1 z2 = lambda z2 z1 on images",
            lambda: _residual(phi(s4["z1"] * s4["z2"] - s4["z2"] * s4["z1"] * lam), u0))

    gammas = dirac_matrices(cfg, s7)
    Psi_col = [s7.gen(f"psi{a}") for a in range(1, 5)]

    def dirac_form():
        worst, ok = 0.0, True
        for name, gm in zip(("z0", "z1", "z2"), gammas):
            for g_mat, img in ((gm, phi.images[s4.by_name[name]]), (dagger(gm), phi.images[s4.by_name[name]].star())):
                acc = s7.zero()
                for a in range(4):
                    for b in range(4):
                        coeff = g_mat[a, b]
                        if coeff.terms:
                            acc = acc + Psi_col[a].star() * coeff * Psi_col[b]
                o, r = _residual(acc - img, u0)
                ok &= o
                worst = max(worst, r)
        return ok, worst

    rep.run("subalgebra.dirac", "z_mu = sum psi*_a (gamma_mu)_ab psi_b", dirac_form)

    def weights():
        bad = []
        for name in ("z0", "z1", "z2", "z1b", "z2b"):
            want = _pullback_weight(s4.word_weight((s4.by_name[name],)))
            got = phi.images[s4.by_name[name]].weights()
            if got != {want}:
                bad.append(f"{name}: {sorted(got)} != {want}")
        return not bad, float(len(bad)), "; ".join(bad)

    rep.run("subalgebra.weights", "torus weights agree through the double cover", weights)
    return rep


def verify_clifford(cfg: ThetaConfig) -> Report:
    s4, _ = build_theta_spheres(cfg)
    g = dirac_matrices(cfg, s4)
    lt = cfg.lam_table
    u0 = cfg.u0
    rep = Report(f"twisted Clifford relations, theta={cfg.theta}")
    four = NCMatrix.identity(s4, 4) * 4
    zero = NCMatrix.zeros(s4, 4)
    for m in (1, 2):
        for n in (1, 2):
            anti = g[m] * g[n] + g[n] * g[m] * lt[m][n]
            rep.run(f"clifford.gg.{m}{n}", "g_m g_n + lambda_mn g_n g_m = 0",
                    lambda a=anti: _matrix_residual(a, u0))
            mixed = g[m] * dagger(g[n]) + dagger(g[n]) * g[m] * lt[n][m]
            want = four if m == n else zero
            rep.run(f"clifford.gg*.{m}{n}", "g_m g_n* + lambda_nm g_n* g_m = 4 delta_mn",
                    lambda a=mixed, w=want: _matrix_residual(a - w, u0))

    def comm(a, b):
        return a * b - b * a

    prod = comm(g[1], dagger(g[1])) * comm(g[2], dagger(g[2]))
    # with g g* + g* g = 4 the product of the two commutators is -16 g0
    rep.run("clifford.grading", "g0 = -1/16 [g1, g1*][g2, g2*]",
            lambda: _matrix_residual(prod * Scalar.const(Fraction(-1, 16)) - g[0], u0))
    rep.run("clifford.grading_quarter", "-1/4 [g1, g1*][g2, g2*] = 4 g0 (displayed factor is off by 4)",
            lambda: _matrix_residual(prod * Scalar.const(Fraction(-1, 4)) - g[0] * 4, u0))
    return rep


# --- the instanton ------------------------------------------------------------


@dataclass
class InstantonData:
    cfg: ThetaConfig
    Psi: NCMatrix  # 4x2 over S^7
    p: NCMatrix  # 4x4 over S^4
    omega: NCMatrix  # 2x2 one-forms over S^7
    F0: NCMatrix  # 2x2 two-forms d omega + omega^2 over S^7
    Fp: NCMatrix  # 4x4 two-forms p dp dp over S^4
    report: Report


def projection_matrix(cfg: ThetaConfig, s4: RewriteSystem) -> NCMatrix:
    m, mb = cfg.mu, cfg.mubar
    g = s4.gen
    one, z0 = s4.one(), g("z0")
    zero = s4.zero()
    rows = [
        [one + z0, zero, g("z1"), -(g("z2b") * mb)],
        [zero, one + z0, g("z2"), g("z1b") * m],
        [g("z1b"), g("z2b"), one - z0, zero],
        [-(g("z2") * m), g("z1") * mb, zero, one - z0],
    ]
    return NCMatrix(s4, rows) * Scalar.const(Fraction(1, 2))


def build_instanton(cfg: ThetaConfig, strict: bool = True) -> InstantonData:
    """Psi, p, omega and both forms of the curvature, with every invariant checked.

    ``strict`` raises InvariantFailed on the first failing check; otherwise the
    failures are only recorded in ``data.report``.
    """
    s4, s7 = build_theta_spheres(cfg)
    phi = subalgebra_map(cfg)
    u0 = cfg.u0
    rep = Report(f"instanton, theta={cfg.theta}")
    Psi = psi_matrix(s7)
    Psid = dagger(Psi)
    p = projection_matrix(cfg, s4)
    omega = Psid * mat_d(Psi)
    F_omega = mat_d(omega) + omega * omega
    F_p = grassmann_curvature(p, check=False)

    rep.run("instanton.unitary", "Psi^dagger Psi = I_2", lambda: _matrix_residual(Psid * Psi - NCMatrix.identity(s7, 2), u0))
    rep.run("instanton.projection_entries", "Psi Psi^dagger equals the displayed p",
            lambda: _matrix_residual(Psi * Psid - phi.matrix(p), u0))
    rep.run("instanton.idempotent", "p^2 = p", lambda: _matrix_residual(p * p - p, u0))
    rep.run("instanton.selfadjoint", "p^dagger = p", lambda: _matrix_residual(dagger(p) - p, u0))
    rep.run("instanton.trace_free", "omega_11 + omega_22 = 0", lambda: _residual(omega.trace(), u0))
    rep.run("instanton.antihermitian", "omega^dagger = -omega", lambda: _matrix_residual(dagger(omega) + omega, u0))

    def omega_weights():
        bad = {w for row in omega.rows for x in row for w in x.canonical().weights() if any(w)}
        return not bad, float(len(bad))

    rep.run("instanton.omega_invariant", "omega entries have torus weight zero", omega_weights)

    def p_weights():
        bad = []
        for i, row in enumerate(p.rows):
            for j, x in enumerate(row):
                ws = x.canonical().weights()
                if len(ws) > 1:
                    bad.append((i, j))
        return not bad, float(len(bad))

    rep.run("instanton.p_weights", "each entry of p is torus homogeneous", p_weights)
    rep.run("instanton.curvature_left", "p Fp = Fp", lambda: _matrix_residual(p * F_p - F_p, u0))
    rep.run("instanton.curvature_right", "Fp p = Fp", lambda: _matrix_residual(F_p * p - F_p, u0))
    rep.run("instanton.curvature_match", "Psi (d omega + omega^2) Psi^dagger = p dp dp",
            lambda: _matrix_residual(Psi * F_omega * Psid - phi.matrix(F_p), u0))
    if strict and not rep.ok:
        bad = rep.failures()[0]
        raise InvariantFailed(bad.id, bad.residual)
    return InstantonData(cfg, Psi, p, omega, F_omega, F_p, rep)


def _numeric_mul(sys: RewriteSystem, a: dict, b: dict, u0: complex) -> dict:
    out: dict = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            for w, c in sys.reduce_terms({w1 + w2: sys.scalar(1)}).items():
                out[w] = out.get(w, 0) + c1 * c2 * c.eval(u0)
    return out


def _numeric_canonical(sys: RewriteSystem, a: dict, u0: complex) -> dict:
    out: dict = {}
    for w, c in a.items():
        for ww, cc in sys.canonical_terms({w: sys.scalar(1)}).items():
            out[ww] = out.get(ww, 0) + c * cc.eval(u0)
    return out


def _numeric_apply(sys: RewriteSystem, images: dict, p: NCPoly, u0: complex) -> dict:
    """Apply a numeric algebra map given on single letters to a polynomial."""
    out: dict = {}
    for w, c in p.terms.items():
        acc = {(): c.eval(u0)}
        for letter in w:
            acc = _numeric_mul(sys, acc, images[letter], u0)
        for ww, cc in acc.items():
            out[ww] = out.get(ww, 0) + cc
    return _numeric_canonical(sys, out, u0)


def _dist(a: dict, b: dict) -> float:
    keys = set(a) | set(b)
    return max((abs(a.get(k, 0) - b.get(k, 0)) for k in keys), default=0.0)


def su2_action_check(w, cfg: ThetaConfig | None = None, tol: float = 1e-12) -> Report:
    """Numeric check that Psi -> Psi w fixes p and sends omega to w^dagger omega w."""
    cfg = cfg or ThetaConfig(Fraction(1, 3))
    w = np.asarray(w, dtype=complex)
    if w.shape != (2, 2) or np.abs(w.conj().T @ w - np.eye(2)).max() > tol or abs(np.linalg.det(w) - 1) > tol:
        raise NotUnitary("w must be a 2x2 special unitary matrix")
    s4, s7 = build_theta_spheres(cfg)
    u0 = cfg.u0
    Psi = psi_matrix(s7)
    # Psi w, read entrywise, is the image of every generator
    images: dict = {}
    for a in range(4):
        for b in range(2):
            (word, c), = Psi[a, b].terms.items()
            sign = c.eval(u0)
            img: dict = {}
            for k in range(2):
                (wk, ck), = Psi[a, k].terms.items()
                img[wk] = img.get(wk, 0) + ck.eval(u0) * w[k, b]
            images[word[0]] = {k: v / sign for k, v in img.items()}
    for g in s7.generators:
        if g.degree == 0:
            images[g.d_partner] = {(s7.generators[w0[0]].d_partner,): c for w0, c in images[g.index].items()}
    data_p = Psi * dagger(Psi)
    omega = dagger(Psi) * mat_d(Psi)
    rep = Report(f"SU(2) action, theta={cfg.theta}")

    def p_fixed():
        return _max_dist(data_p, lambda x: _numeric_apply(s7, images, x, u0), lambda i, j: data_p[i, j].numeric(u0), tol)

    def omega_covariant():
        om = [[omega[i, j].numeric(u0) for j in range(2)] for i in range(2)]
        wd = w.conj().T

        def target(i, j):
            out: dict = {}
            for k in range(2):
                for l in range(2):
                    for word, c in om[k][l].items():
                        out[word] = out.get(word, 0) + wd[i, k] * c * w[l, j]
            return out

        return _max_dist(omega, lambda x: _numeric_apply(s7, images, x, u0), target, tol)

    rep.run("su2.p_invariant", "entries of p are fixed by the right SU(2) action", p_fixed)
    rep.run("su2.omega_covariant", "omega -> w^dagger omega w + w^dagger dw", omega_covariant)
    return rep


def _max_dist(A: NCMatrix, act, target, tol) -> tuple:
    worst = 0.0
    n, m = A.shape
    for i in range(n):
        for j in range(m):
            worst = max(worst, _dist(act(A[i, j]), target(i, j)))
    return worst <= tol, worst


# --- Hodge star ---------------------------------------------------------------


def _pair(r: tuple, s: tuple) -> int:
    return r[0] * s[1] - r[1] * s[0]


def load_classical_table() -> dict:
    return json.loads((DATA_DIR / "hodge_s4.json").read_text())


class HodgeTable:
    """Star on 2-forms of S^4_theta, left-linear over functions.

    ``mode="transported"`` conjugates the classical table by the deformation
    cocycle; ``mode="verbatim"`` copies its coefficients unchanged.  Both agree
    at theta = 0.
    """

    def __init__(self, cfg: ThetaConfig, mode: str = "transported", orientation: int = 1):
        if mode not in ("transported", "verbatim"):
            raise ValueError(mode)
        self.cfg, self.mode, self.orientation = cfg, mode, orientation
        self.sys, _ = build_theta_spheres(cfg)
        raw = load_classical_table()
        self.classical = raw
        sys = self.sys
        self.star2_table: dict[tuple, NCPoly] = {}
        sign = orientation  # relative to the frozen table
        for key, entries in raw["table"].items():
            a, b = (sys.by_name[x] for x in key.split("*"))
            wa, wb = sys.word_weight((a,)), sys.word_weight((b,))
            out = sys.zero()
            for e in entries:
                coeff = Scalar.const(FieldElem(*[Fraction(x) for x in e["coeff"]]) * FieldElem(sign))
                m = sys.by_name[e["function"]]
                c, d = (sys.by_name[x] for x in e["forms"])
                if mode == "transported":
                    wm, wc, wd = (sys.word_weight((x,)) for x in (m, c, d))
                    k = _pair(wa, wb) - _pair(wm, wc) - _pair(wm, wd) - _pair(wc, wd)
                    coeff = coeff * self.cfg.mu ** k
                out = out + NCPoly._raw(sys, {(m,): coeff}) * sys.gen(e["forms"][0]) * sys.gen(e["forms"][1])
            self.star2_table[(a, b)] = out

    def star2(self, omega: NCPoly) -> NCPoly:
        sys = self.sys
        out = sys.zero()
        for w, c in sys.reduce_terms(omega.terms).items():
            if sys.word_degree(w) != 2 or sys.word_degree(w[-2:]) != 2:
                raise ValueError("star2 acts on 2-forms written with their form letters last")
            out = out + NCPoly._raw(sys, {w[:-2]: c}) * self.star2_table[w[-2:]]
        return out

    __call__ = star2

    def basis(self) -> list:
        return [NCPoly._raw(self.sys, {k: self.sys.scalar(1)}) for k in self.star2_table]

    def involution_check(self) -> tuple:
        worst, ok = 0.0, True
        for b in self.basis():
            o, r = _residual(self.star2(self.star2(b)) - b, self.cfg.u0)
            ok &= o
            worst = max(worst, r)
        return ok, worst

    def equivariance_check(self) -> tuple:
        bad = 0
        for key, img in self.star2_table.items():
            ws = img.weights()
            if ws and ws != {self.sys.word_weight(key)}:
                bad += 1
        return bad == 0, float(bad)


def _form_matrices() -> dict:
    """Each dz_a of the five ambient coordinates as a row vector in the dx basis."""
    i = 1j
    return {
        "dz0": np.array([0, 0, 0, 0, 1], dtype=complex),
        "dz1b": np.array([1, -i, 0, 0, 0]),
        "dz2b": np.array([0, 0, 1, -i, 0]),
        "dz1": np.array([1, i, 0, 0, 0]),
        "dz2": np.array([0, 0, 1, i, 0]),
    }


def _coordinate_values(x: np.ndarray) -> dict:
    return {"z0": x[4], "z1b": x[0] - 1j * x[1], "z2b": x[2] - 1j * x[3], "z1": x[0] + 1j * x[1], "z2": x[2] + 1j * x[3]}


def _wedge(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.outer(a, b) - np.outer(b, a)


def tangent_frame(x: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the tangent space at x, oriented so that det[frame, x] = +1."""
    q, _ = np.linalg.qr(np.column_stack([x, np.eye(5)]))
    frame = q[:, 1:5]
    if np.linalg.det(np.column_stack([frame, x])) < 0:
        frame[:, 0] = -frame[:, 0]
    return frame


def numeric_hodge_oracle(M: np.ndarray, frame: np.ndarray) -> np.ndarray:
    """Hodge star of a 2-form (5x5 antisymmetric array) in an oriented tangent frame, frame components out."""
    A = frame.T @ M @ frame
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        eps[perm] = _perm_sign(perm)
    return 0.5 * np.einsum("abcd,ab->cd", eps, A)


def _perm_sign(p) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def classical_oracle_check(raw: dict | None = None, points: int = 20, seed: int = 0) -> float:
    """Largest deviation of the frozen table from the numeric star at random points of S^4."""
    raw = raw or load_classical_table()
    forms = _form_matrices()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        x = rng.normal(size=5)
        x /= np.linalg.norm(x)
        frame = tangent_frame(x)
        zval = _coordinate_values(x)
        for key, entries in raw["table"].items():
            a, b = key.split("*")
            image = np.zeros((5, 5), dtype=complex)
            for e in entries:
                c = complex(FieldElem(*[Fraction(t) for t in e["coeff"]])) * raw["orientation"]
                image += c * zval[e["function"]] * _wedge(forms[e["forms"][0]], forms[e["forms"][1]])
            want = numeric_hodge_oracle(_wedge(forms[a], forms[b]), frame)
            got = frame.T @ image @ frame
            worst = max(worst, float(np.abs(want - got).max()))
    return worst


# The sign making the basic curvature self-dual; see self_duality_check.
INSTANTON_ORIENTATION = 1


def build_hodge(cfg: ThetaConfig, mode: str = "transported", orientation: int = INSTANTON_ORIENTATION,
                check_oracle: bool = True, tol: float = 1e-10) -> HodgeTable:
    if check_oracle:
        dev = classical_oracle_check()
        if dev > tol:
            raise OracleMismatch(f"frozen star table deviates from the numeric star by {dev:.3g}")
    return HodgeTable(cfg, mode, orientation)


def self_duality_check(data: InstantonData, h: HodgeTable, sign: int = 1) -> bool:
    """True when star2 maps every entry of p dp dp to ``sign`` times itself."""
    return self_duality_residual(data, h, sign)[0]


def self_duality_residual(data: InstantonData, h: HodgeTable, sign: int = 1) -> tuple:
    u0 = data.cfg.u0
    worst, ok = 0.0, True
    for row in data.Fp.rows:
        for x in row:
            o, r = _residual(h.star2(x) - x * sign, u0)
            ok &= o
            worst = max(worst, r)
    return ok, worst


def verify_hodge(cfg: ThetaConfig, mode: str = "transported") -> Report:
    rep = Report(f"Hodge star ({mode}), theta={cfg.theta}")
    rep.run("hodge.oracle", "frozen table = numeric star at 20 random points", lambda: (lambda d: (d <= 1e-10, d))(classical_oracle_check()))
    h = build_hodge(cfg, mode, check_oracle=False)
    rep.run("hodge.involution", "star2 o star2 = id on tangential 2-forms", h.involution_check)
    rep.run("hodge.equivariant", "star2 preserves torus weights", h.equivariance_check)
    data = build_instanton(cfg, strict=False)
    rep.run("hodge.self_dual", "star F = F for F = p dp dp", lambda: self_duality_residual(data, h, 1))
    flipped = HodgeTable(cfg, mode, -h.orientation)
    rep.run("hodge.anti_self_dual", "reversed orientation sends F to -F", lambda: self_duality_residual(data, flipped, -1))
    return rep


def random_su2(seed: int = 0) -> np.ndarray:
    """Haar-random SU(2) element from a random unit quaternion."""
    a, b, c, d = (lambda v: v / np.linalg.norm(v))(np.random.default_rng(seed).normal(size=4))
    return np.array([[a + 1j * b, -c + 1j * d], [c + 1j * d, a - 1j * b]])


def theta_suite(cfg: ThetaConfig, seed: int = 0) -> Report:
    """Rewriting, subalgebra, Clifford, instanton, Bianchi, Hodge and SU(2) checks at one theta."""
    rep = Report(f"theta, theta={cfg.theta}")
    for sys in build_theta_spheres(cfg):
        rep.run(f"overlaps.{sys.name}", "rewriting system is confluent", lambda sys=sys: (lambda o: (o.ok, float(len(o.failures)), o.summary()))(check_overlaps(sys)))
    rep.extend(verify_subalgebra_map(cfg))
    rep.extend(verify_clifford(cfg))
    data = build_instanton(cfg, strict=False)
    rep.extend(data.report)
    rep.run("instanton.bianchi", "[p d, p dp dp] = 0 on p A^4", lambda: (lambda b: (b.ok, float(len(b.residuals))))(bianchi_check(data.p, data.Fp)))
    rep.extend(verify_hodge(cfg))
    rep.extend(su2_action_check(random_su2(seed), cfg))
    return rep
