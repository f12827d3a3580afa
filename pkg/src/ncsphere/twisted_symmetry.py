"""Twisted so(5) and so(5,1) symmetries of the toric spheres.

Each generator acts on S^4_theta through the vector fields of the four-sphere
and on S^7_theta' through 4x4 spinor matrices.  Products are handled by the
twisted Leibniz rule

    X(ab) = X(a) lam^{-r1 H2}(b) + lam^{-r2 H1}(a) X(b)

for a generator of root r, with lam^{H} acting diagonally on weight vectors.
Negative-root generators agree with the adjoints a -> (X(a*))* of the positive
ones on generator letters and obey their own twisted Leibniz rule on products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .ncalg import NCPoly, RewriteSystem
from .ncmatrix import NCMatrix, dagger, mat_d
from .report import Report
from .scalars import FieldElem, Scalar
from .theta_spheres import (
    HodgeTable,
    InstantonData,
    ThetaConfig,
    _matrix_residual,
    _residual,
    build_hodge,
    build_instanton,
    build_theta_spheres,
    dirac_matrices,
    subalgebra_map,
)

SQRT2 = Scalar.const(FieldElem(0, 0, 1))
INV_SQRT2 = Scalar.const(FieldElem(0, 0, Fraction(1, 2)))
HALF = Scalar.const(Fraction(1, 2))

LONG_ROOTS = [(1, 1), (1, -1), (-1, -1), (-1, 1)]
SHORT_ROOTS = [(1, 0), (0, 1), (-1, 0), (0, -1)]
ROOTS = LONG_ROOTS + SHORT_ROOTS


class UnknownGenerator(KeyError):
    pass


class IdentityFailed(AssertionError):
    def __init__(self, what: str, residual=None):
        super().__init__(f"{what}: residual {residual}")
        self.residual = residual


@dataclass(frozen=True)
class TwistedGenerator:
    name: str
    kind: str  # "cartan", "root", "dilation" or "conformal"
    root: tuple | None = None

    @property
    def positive(self) -> bool:
        return self.root is None or self.root > (0, 0)

    @property
    def twisted(self) -> bool:
        return self.root is not None


def _root_name(prefix: str, r: tuple) -> str:
    return f"{prefix}({r[0]:+d},{r[1]:+d})"


SO5 = [TwistedGenerator("H1", "cartan"), TwistedGenerator("H2", "cartan")] + [
    TwistedGenerator(_root_name("E", r), "root", r) for r in ROOTS
]
CONFORMAL = [TwistedGenerator("H0", "dilation")] + [
    TwistedGenerator(_root_name("G", r), "conformal", r) for r in SHORT_ROOTS
]
SO51 = SO5 + CONFORMAL
BY_NAME = {g.name: g for g in SO51}


def generator(name: str) -> TwistedGenerator:
    try:
        return BY_NAME[name]
    except KeyError:
        raise UnknownGenerator(name) from None


def E(r) -> TwistedGenerator:
    return generator(_root_name("E", tuple(r)))


def G(r) -> TwistedGenerator:
    return generator(_root_name("G", tuple(r)))


def _mat(sys: RewriteSystem, entries: dict, n: int = 4) -> NCMatrix:
    rows = [[sys.zero() for _ in range(n)] for _ in range(n)]
    for (i, j), v in entries.items():
        rows[i - 1][j - 1] = v if isinstance(v, NCPoly) else sys.const(v)
    return NCMatrix(sys, rows)


SIGMA_ENTRIES = {(1, 2): -1, (2, 1): 1, (3, 4): -1, (4, 3): 1}


class SymmetryAction:
    """The twisted action of U_theta(so(5,1)) on both spheres for one theta.

    ``e01_variant`` selects the spinor matrix of E(0,+1): "display" has mu-bar
    at entry (1,4), "swapped" moves it to (3,2), which is what a plain
    1/4 [g2, g0] = sqrt2 E(0,+1) would need.  Only "display" lifts the
    vector-field action.  ``leibniz_sign`` = -1 is the printed twisted
    rule; +1 is the variant with lam^{+r2 H1} on the left factor.
    """

    def __init__(self, cfg: ThetaConfig, e01_variant: str = "display", leibniz_sign: int = -1):
        self.cfg = cfg
        self.s4, self.s7 = build_theta_spheres(cfg)
        self.phi = subalgebra_map(cfg)
        self.e01_variant = e01_variant
        self.leibniz_sign = leibniz_sign
        self.mu, self.mubar = cfg.mu, cfg.mubar
        self._letter_cache: dict = {}

    # --- weights and lam^{H} ------------------------------------------------

    def two_h(self, sys: RewriteSystem, word: tuple) -> tuple:
        """Twice the (H1, H2) eigenvalue of a word; integral on both spheres."""
        w = sys.word_weight(word)
        if sys is self.s4:
            return (2 * w[0], 2 * w[1])
        return (w[0] + w[1], -w[0] + w[1])

    def lam_h(self, sys: RewriteSystem, word: tuple, j: int, power: int) -> Scalar:
        """lam^{power * H_j} on a word: mu^{2 h_j power}."""
        return self.mu ** (self.two_h(sys, word)[j - 1] * power)

    def spinor_lam(self, j: int, power: int) -> NCMatrix:
        """lam^{power * H_j} in the spinor representation (diagonal)."""
        s7 = self.s7
        psis = [s7.by_name[f"psi{a}"] for a in range(1, 5)]
        return _mat(s7, {(a + 1, a + 1): s7.const(self.lam_h(s7, (p,), j, power)) for a, p in enumerate(psis)})

    # --- generator tables ---------------------------------------------------

    def _s4_table(self, g: TwistedGenerator) -> dict:
        s = self.s4
        z0, z1, z2, z1b, z2b = (s.gen(n) for n in ("z0", "z1", "z2", "z1b", "z2b"))
        lam, lamb = s.const(self.cfg.lam), s.const(self.cfg.lam.star())
        n = g.name
        if n == "H1":
            return {"z1": z1, "z1b": -z1b}
        if n == "H2":
            return {"z2": z2, "z2b": -z2b}
        if n == "E(+1,+1)":
            return {"z1b": z2, "z2b": -z1}
        if n == "E(+1,-1)":
            return {"z1b": z2b, "z2": -z1}
        if n == "E(+1,+0)":
            return {"z1b": z0 * SQRT2, "z0": -z1 * INV_SQRT2}
        if n == "E(+0,+1)":
            return {"z2b": z0 * SQRT2, "z0": -z2 * INV_SQRT2}
        if n == "H0":
            return {"z0": s.one() - z0 * z0, "z1": -(z0 * z1), "z2": -(z0 * z2), "z1b": -(z0 * z1b), "z2b": -(z0 * z2b)}
        if n == "G(+1,+0)":
            return {"z0": -(z1 * z0), "z1": -(z1 * z1), "z1b": s.const(2) - z1 * z1b,
                    "z2": -(z1 * lamb * z2), "z2b": -(z1 * lam * z2b)}
        if n == "G(+0,+1)":
            return {"z0": -(z2 * z0), "z1": -(z2 * z1), "z1b": -(z2 * z1b), "z2": -(z2 * z2), "z2b": s.const(2) - z2 * z2b}
        raise UnknownGenerator(n)

    def spinor_matrix(self, g: TwistedGenerator) -> NCMatrix:
        """Gamma with psi_a -> sum_b Gamma_ab psi_b (entries act from the left)."""
        if not g.positive:
            pos = self.spinor_matrix(self._positive(g))
            # psi_a -> phase_a (X(psi_a*))* = phase_a sum_b psi_b (tilde Gamma_ab)*;
            # entries are constants only for so(5)
            adj = self.tilde(pos).map(lambda x: x.star())
            s7 = self.s7
            phases = {(a, a): self.negative_phase(g, self.two_h(s7, (s7.by_name[f"psi{a}"],))) for a in range(1, 5)}
            return _mat(s7, phases) * adj
        s7, m, mb = self.s7, self.mu, self.mubar
        half, r2 = Fraction(1, 2), INV_SQRT2
        n = g.name
        if n == "H1":
            return _mat(s7, {(1, 1): half, (2, 2): -half, (3, 3): -half, (4, 4): half})
        if n == "H2":
            return _mat(s7, {(1, 1): -half, (2, 2): half, (3, 3): -half, (4, 4): half})
        if n == "E(+1,+1)":
            return _mat(s7, {(3, 4): -1})
        if n == "E(+1,-1)":
            return _mat(s7, {(2, 1): -m})
        if n == "E(+1,+0)":
            return _mat(s7, {(2, 4): -r2, (3, 1): m * r2})
        if n == "E(+0,+1)":
            if self.e01_variant == "display":
                return _mat(s7, {(1, 4): mb * r2, (3, 2): r2})
            return _mat(s7, {(1, 4): r2, (3, 2): mb * r2})
        gam = dirac_matrices(self.cfg, s7)
        zimg = {k: self.phi.images[self.s4.by_name[k]] for k in ("z0", "z1", "z2")}
        eye = NCMatrix.identity(s7, 4)
        if n == "H0":
            return (eye.left(-zimg["z0"]) + gam[0]) * HALF
        if n == "G(+1,+0)":
            return (self.spinor_lam(2, -1).left(-zimg["z1"]) + gam[1]) * HALF
        if n == "G(+0,+1)":
            return (eye.left(-zimg["z2"]) + self.spinor_lam(1, -1) * gam[2]) * HALF
        raise UnknownGenerator(n)

    def tilde(self, M: NCMatrix) -> NCMatrix:
        sigma = _mat(self.s7, SIGMA_ENTRIES)
        return sigma * M * (-sigma)

    def negative_phase(self, g: TwistedGenerator, two_h: tuple) -> Scalar:
        """Phase between a negative-root letter image and the adjoint of the positive one."""
        r1, r2 = -g.root[0], -g.root[1]
        return self.mu ** (r2 * two_h[0] + r1 * two_h[1] - 2 * r1 * r2)

    def _positive(self, g: TwistedGenerator) -> TwistedGenerator:
        r = (-g.root[0], -g.root[1])
        return generator(_root_name(g.name[0], r))

    def _s7_table(self, g: TwistedGenerator) -> dict:
        s7 = self.s7
        Gm = self.spinor_matrix(g)
        Gt = self.tilde(Gm)
        out = {}
        for a in range(1, 5):
            out[f"psi{a}"] = sum((Gm[a - 1, b - 1] * s7.gen(f"psi{b}") for b in range(1, 5)), s7.zero())
            out[f"psi{a}b"] = sum((Gt[a - 1, b - 1] * s7.gen(f"psi{b}b") for b in range(1, 5)), s7.zero())
        return out

    def letter_images(self, g: TwistedGenerator, sys: RewriteSystem) -> dict:
        """Image of every generator letter (forms via d) under a positive or Cartan generator."""
        key = (g.name, sys.name)
        hit = self._letter_cache.get(key)
        if hit is not None:
            return hit
        out: dict[int, NCPoly] = {}
        if g.positive:
            table = self._s4_table(g) if sys is self.s4 else self._s7_table(g)
            for gen in sys.generators:
                if gen.degree == 0:
                    out[gen.index] = table.get(gen.name, sys.zero())
        else:
            # (X a)^* = S(X)^* a^* with the twisted antipode: on a letter b the
            # adjoint picks up lam^{r2 H1 + r1 H2}(b) lam^{-r1 r2}; products follow the own coproduct
            pos = self.letter_images(self._positive(g), sys)
            for gen in sys.generators:
                if gen.degree == 0:
                    h = self.two_h(sys, (gen.index,))
                    out[gen.index] = pos[gen.star_partner].star() * self.negative_phase(g, h)
        for gen in sys.generators:
            if gen.degree == 0 and gen.d_partner is not None:
                out[gen.d_partner] = out[gen.index].d()
        self._letter_cache[key] = out
        return out

    # --- the action ----------------------------------------------------------

    def act(self, g: TwistedGenerator | str, p: NCPoly) -> NCPoly:
        g = generator(g) if isinstance(g, str) else g
        sys = p.sys
        if sys is not self.s4 and sys is not self.s7:
            raise ValueError("polynomial does not belong to either sphere")
        images = self.letter_images(g, sys)
        out = sys.zero()
        for w, c in sys.reduce_terms(p.terms).items():
            for k, letter in enumerate(w):
                img = images[letter]
                if not img.terms:
                    continue
                coeff = c
                if g.twisted:
                    r1, r2 = g.root
                    coeff = coeff * self.lam_h(sys, w[:k], 1, self.leibniz_sign * r2) * self.lam_h(sys, w[k + 1:], 2, -r1)
                term = NCPoly._raw(sys, {w[:k]: coeff}) * img
                if k + 1 < len(w):
                    term = term * NCPoly._raw(sys, {w[k + 1:]: sys.scalar(1)})
                out = out + term
        return out

    def act_matrix(self, g, A: NCMatrix) -> NCMatrix:
        return A.map(lambda x: self.act(g, x))

    def bracket(self, g1, g2, p: NCPoly) -> NCPoly:
        return self.act(g1, self.act(g2, p)) - self.act(g2, self.act(g1, p))

    def combination(self, combo: dict, p: NCPoly) -> NCPoly:
        out = p.sys.zero()
        for name, c in combo.items():
            out = out + self.act(name, p) * c
        return out

    @cached_property
    def test_elements(self) -> dict:
        """Degree-1 generators of each sphere and their differentials."""
        out = {}
        for sys in (self.s4, self.s7):
            out[sys.name] = [sys.gen(gen.name) for gen in sys.generators]
        return out


# --- bracket tables ------------------------------------------------------------


def _is_root(r) -> bool:
    return tuple(r) in ROOTS


def _is_short(r) -> bool:
    return tuple(r) in SHORT_ROOTS


def expected_bracket(g1: TwistedGenerator, g2: TwistedGenerator):
    """The prescribed [g1, g2]: a dict {name: scalar}, or ("proportional", name) for N-type constants."""
    k1, k2 = g1.kind, g2.kind
    if k1 == "cartan" and k2 == "cartan":
        return {}
    if k1 == "cartan" and g2.root is not None:
        j = int(g1.name[1])
        return {g2.name: Scalar.const(g2.root[j - 1])} if g2.root[j - 1] else {}
    if g1.root is not None and k2 == "cartan":
        sw = expected_bracket(g2, g1)
        return {k: -v for k, v in sw.items()}
    if k1 == "dilation" and k2 == "cartan" or k1 == "cartan" and k2 == "dilation":
        return {}
    if k1 == "dilation" and k2 == "dilation":
        return {}
    if k1 == "dilation" and k2 == "conformal":
        return {E(g2.root).name: SQRT2}
    if k1 == "dilation" and k2 == "root":
        return {G(g2.root).name: INV_SQRT2} if _is_short(g2.root) else {}
    if k2 == "dilation":
        sw = expected_bracket(g2, g1)
        return {k: -v for k, v in sw.items()}
    r, s = g1.root, g2.root
    tot = (r[0] + s[0], r[1] + s[1])
    if k1 == "root" and k2 == "root":
        if tot == (0, 0):
            # [E_{-r}, E_r] = r.H, here g2 = E_r with r = s
            return _cartan_combo(s, 1)
        return ("proportional", E(tot).name) if _is_root(tot) else {}
    if k1 == "conformal" and k2 == "conformal":
        if tot == (0, 0):
            # Jacobi with [H0, G_r] = sqrt2 E_r and [E_r, G_-r] = sqrt2 H0 forces -2 r.H
            return _cartan_combo(s, -2)
        return ("proportional", E(tot).name) if _is_root(tot) else {}
    if k1 == "root" and k2 == "conformal":
        if tot == (0, 0):
            return {"H0": SQRT2}
        return ("proportional", G(tot).name) if _is_short(tot) else {}
    if k1 == "conformal" and k2 == "root":
        sw = expected_bracket(g2, g1)
        if isinstance(sw, tuple):
            return sw
        return {k: -v for k, v in sw.items()}
    raise UnknownGenerator(f"{g1.name}, {g2.name}")


def _cartan_combo(r, factor: int) -> dict:
    out = {}
    for j in (1, 2):
        if r[j - 1]:
            out[f"H{j}"] = Scalar.const(factor * r[j - 1])
    return out


def _proportionality(act: SymmetryAction, g1, g2, target: str, elements) -> tuple:
    """Find c with [g1, g2] = c * target on every test element; None if not proportional."""
    c = None
    for x in elements:
        lhs = act.bracket(g1, g2, x).canonical()
        rhs = act.act(target, x).canonical()
        if not rhs.terms:
            if lhs.terms:
                return None, lhs
            continue
        w = next(iter(sorted(rhs.terms)))
        if w not in lhs.terms:
            return None, lhs
        # ratio of Laurent polynomials: only monomial denominators are handled
        if not rhs.terms[w].is_monomial():
            return None, lhs
        cand = lhs.terms[w] * rhs.terms[w].inverse()
        if c is None:
            c = cand
        if not (lhs - rhs * c).is_zero():
            return None, lhs - rhs * c
    return c, None


@dataclass
class StructureConstant:
    g1: str
    g2: str
    target: str
    value: Scalar | None
    sphere: str

    def __str__(self) -> str:
        return f"[{self.g1}, {self.g2}] = ({self.value}) {self.target} on {self.sphere}"


def bracket_check(act: SymmetryAction, generators=None, spheres=("S4", "S7"), report: Report | None = None) -> tuple:
    """Check every pairwise bracket on generator letters; returns (report, structure constants)."""
    gens = generators or SO51
    rep = report or Report(f"brackets, theta={act.cfg.theta}")
    consts: list = []
    u0 = act.cfg.u0
    systems = {"S4": act.s4, "S7": act.s7}
    for i, g1 in enumerate(gens):
        for g2 in gens[i + 1:]:
            want = expected_bracket(g1, g2)
            for sph in spheres:
                sys = systems[sph]
                elements = act.test_elements[sys.name]
                cid = f"bracket.{sph}.[{g1.name},{g2.name}]"
                if isinstance(want, tuple):
                    def run(g1=g1, g2=g2, target=want[1], elements=elements, sph=sph):
                        c, res = _proportionality(act, g1, g2, target, elements)
                        if c is None:
                            return False, _residual(res, u0)[1], f"not proportional to {target}"
                        consts.append(StructureConstant(g1.name, g2.name, target, c, sph))
                        return True, 0.0, f"= ({c}) {target}"
                    rep.run(cid, "[E_r, E_r'] = N E_{r+r'} (N reported)", run)
                else:
                    def run(g1=g1, g2=g2, want=want, elements=elements):
                        worst, ok = 0.0, True
                        for x in elements:
                            o, r = _residual(act.bracket(g1, g2, x) - act.combination(want, x), u0)
                            ok &= o
                            worst = max(worst, r)
                        return ok, worst
                    rep.run(cid, "Lie bracket table of so(5) / so(5,1)", run)
    return rep, consts


def spinor_bracket_check(act: SymmetryAction, report: Report | None = None) -> Report:
    """so(5) brackets as 4x4 identities Gamma_[X,Y] = Gamma_Y Gamma_X - Gamma_X Gamma_Y."""
    rep = report or Report(f"spinor brackets, theta={act.cfg.theta}")
    u0 = act.cfg.u0
    mats = {g.name: act.spinor_matrix(g) for g in SO5}
    for i, g1 in enumerate(SO5):
        for g2 in SO5[i + 1:]:
            want = expected_bracket(g1, g2)
            lhs = mats[g2.name] * mats[g1.name] - mats[g1.name] * mats[g2.name]
            cid = f"spinor.[{g1.name},{g2.name}]"
            if isinstance(want, tuple):
                target = mats[want[1]]
                rep.run(cid, "[E_r, E_r'] proportional to E_{r+r'} (spinor)", lambda lhs=lhs, t=target: _matrix_proportional(lhs, t, u0))
            else:
                rhs = NCMatrix.zeros(act.s7, 4)
                for name, c in want.items():
                    rhs = rhs + mats[name] * c
                rep.run(cid, "Lie bracket table of so(5) (spinor)", lambda d=lhs - rhs: _matrix_residual(d, u0))
    return rep


def _matrix_proportional(A: NCMatrix, B: NCMatrix, u0: complex) -> tuple:
    c = None
    for i in range(4):
        for j in range(4):
            b = B[i, j].canonical()
            if b.terms:
                (w, cb), = b.terms.items()
                a = A[i, j].canonical()
                c = a.terms.get(w, Scalar.const(0)) * cb.inverse()
                break
        if c is not None:
            break
    if c is None:
        return _matrix_residual(A, u0)
    ok, r = _matrix_residual(A - B * c, u0)
    return ok, r, f"factor {c}"


def dirac_bracket_check(act: SymmetryAction, printed: bool = False) -> Report:
    """The so(5) generators as commutators of twisted gamma matrices; ``printed`` adds the scalar-mubar form."""
    rep = Report(f"Dirac-matrix brackets, theta={act.cfg.theta}")
    s7, u0 = act.s7, act.cfg.u0
    g = dirac_matrices(act.cfg, s7)
    q = Scalar.const(Fraction(1, 4))
    m = act.spinor_matrix
    mm = act.mu + act.mubar

    def comm(a, b):
        return (a * b - b * a) * q

    items = [
        ("dirac.g1*g1", "1/4[g1*, g1] = 2 H1", comm(dagger(g[1]), g[1]), m(generator("H1")) * 2),
        ("dirac.g2*g2", "1/4[g2*, g2] = 2 H2", comm(dagger(g[2]), g[2]), m(generator("H2")) * 2),
        ("dirac.g1g2", "1/4[g1, g2] = (mu + mubar) E(+1,+1)", comm(g[1], g[2]), m(E((1, 1))) * mm),
        ("dirac.g1g2*", "1/4[g1, g2*] = (mu + mubar) E(+1,-1)", comm(g[1], dagger(g[2])), m(E((1, -1))) * mm),
        ("dirac.g1g0", "1/4[g1, g0] = sqrt2 E(+1,0)", comm(g[1], g[0]), m(E((1, 0))) * SQRT2),
    ]
    # the scalar mubar in front of E(0,+1) cannot work once mu^2 != 1; the
    # entries differ by mu at (1,4) and mubar at (3,2), i.e. by lam^{H1}
    items.append(("dirac.g2g0", "1/4[g2, g0] = sqrt2 lam^{H1} E(0,+1)", comm(g[2], g[0]),
                  act.spinor_lam(1, 1) * m(E((0, 1))) * SQRT2))
    if printed:
        items.append(("dirac.g2g0_printed", "1/4[g2, g0] = sqrt2 mubar E(0,+1)", comm(g[2], g[0]),
                      m(E((0, 1))) * (SQRT2 * act.mubar)))
    for cid, anchor, lhs, rhs in items:
        rep.run(cid, anchor, lambda d=lhs - rhs: _matrix_residual(d, u0))
    return rep


def relation_compatibility(act: SymmetryAction, generators=None) -> Report:
    """act(g, lhs - rhs) = 0 for every rewrite rule and the sphere relation of both spheres."""
    rep = Report(f"relation compatibility, theta={act.cfg.theta}")
    u0 = act.cfg.u0
    for g in generators or SO51:
        for sys in (act.s4, act.s7):
            def run(g=g, sys=sys):
                worst, bad = 0.0, []
                rels = [NCPoly._raw(sys, {k: sys.scalar(1)}) - NCPoly._raw(sys, dict(v)) for k, v in sys.rule_table().items()]
                rels += [sys.central_element(k) for k in range(len(sys.ideal_rules))]
                for rel in rels:
                    ok, r = _residual(act.act(g, rel), u0)
                    if not ok:
                        bad.append(rel)
                    worst = max(worst, r)
                return not bad, worst, f"{len(bad)} of {len(rels)} relations fail" if bad else f"{len(rels)} relations"
            rep.run(f"compat.{sys.name.split('[')[0]}.{g.name}", "action respects the commutation relations", run)
    return rep


def lift_check(act: SymmetryAction, generators=None) -> Report:
    """The spinor action on the quadratic z-images reproduces the vector-field action."""
    rep = Report(f"lift to S7, theta={act.cfg.theta}")
    u0 = act.cfg.u0
    phi = act.phi
    for g in generators or SO51:
        def run(g=g):
            worst, bad = 0.0, []
            for name in ("z0", "z1", "z2", "z1b", "z2b"):
                z = act.s4.gen(name)
                ok, r = _residual(act.act(g, phi(z)) - phi(act.act(g, z)), u0)
                if not ok:
                    bad.append(name)
                worst = max(worst, r)
            return not bad, worst, ("mismatch on " + ", ".join(bad)) if bad else ""
        rep.run(f"lift.{g.name}", "spinor action restricts to the vector-field action", run)
    return rep


def hopf_check(act: SymmetryAction) -> Report:
    """Counit and antipode of the root generators as spinor-matrix identities."""
    rep = Report(f"Hopf structure, theta={act.cfg.theta}")
    s7, u0 = act.s7, act.cfg.u0
    one = act.s7.one()
    for g in SO5 + CONFORMAL:
        if not g.twisted or not g.positive or g.kind != "root":
            continue
        r1, r2 = g.root
        X = act.spinor_matrix(g)
        # operators compose in reverse matrix order
        def compose(*ops):
            out = NCMatrix.identity(s7, 4)
            for o in ops:
                out = o * out
            return out

        L21 = act.spinor_lam(1, r2)
        L12 = act.spinor_lam(2, r1)
        S = compose(L21, X, L12) * Scalar.const(-1)
        left = compose(S, act.spinor_lam(2, -r1)) + compose(L21, X)
        right = compose(X, act.spinor_lam(2, r1)) + compose(act.spinor_lam(1, -r2), S)
        rep.run(f"hopf.counit.{g.name}", "eps(E_r) = 0", lambda g=g: _residual(act.act(g, one), u0))
        rep.run(f"hopf.antipode_left.{g.name}", "m(S x id)Delta(E_r) = eps(E_r)", lambda d=left: _matrix_residual(d, u0))
        rep.run(f"hopf.antipode_right.{g.name}", "m(id x S)Delta(E_r) = eps(E_r)", lambda d=right: _matrix_residual(d, u0))
    return rep


# --- invariance of the gauge potential -------------------------------------------


def omega_invariance_check(act: SymmetryAction, data: InstantonData | None = None, leibniz_sign: int | None = None) -> Report:
    data = data or build_instanton(act.cfg)
    rep = Report(f"omega invariance, theta={act.cfg.theta}")
    u0 = act.cfg.u0
    for g in SO5:
        if g.twisted:
            r1, r2 = g.root
        else:
            r1 = r2 = 0
        Gm = act.spinor_matrix(g)
        Gt = act.tilde(Gm)
        ident = Gt.transpose() * act.spinor_lam(2, -r1) + act.spinor_lam(1, r2) * Gm
        rep.run(f"omega.matrix.{g.name}", "Gamma~^t lam^{-r1 H2} + lam^{r2 H1} Gamma = 0", lambda d=ident: _matrix_residual(d, u0))
        rep.run(f"omega.action.{g.name}", "the twisted action kills omega = Psi^dagger dPsi",
                lambda g=g: _matrix_residual(act.act_matrix(g, data.omega), u0))
    return rep


# --- conformal variations ------------------------------------------------------------


VARIATION_GENERATORS = ["H0", "G(+1,+0)", "G(+0,+1)", "G(-1,+0)", "G(+0,-1)"]


@dataclass
class Variations:
    delta_omega: list
    delta_alpha: list
    delta_F: list
    gammas: list
    report: Report


def _gamma_list(cfg: ThetaConfig, sys: RewriteSystem) -> list:
    g = dirac_matrices(cfg, sys)
    return [g[0], g[1], g[2], dagger(g[1]), dagger(g[2])]


def commutation_factor(x: NCPoly, y: NCPoly) -> Scalar:
    """The scalar c with x y = c y x for weight vectors x, y."""
    xy, yx = (x * y).canonical(), (y * x).canonical()
    if not yx.terms:
        return Scalar.const(1)
    w = min(yx.terms)
    c = xy.terms.get(w, Scalar.const(0)) * yx.terms[w].inverse()
    if not (xy - yx * c).is_zero():
        raise IdentityFailed("elements do not quasi-commute", xy - yx * c)
    return c


def conformal_variations(act: SymmetryAction, data: InstantonData | None = None, printed: bool = False) -> Variations:
    """delta omega, delta alpha and delta F for H0 and the four G_r, each checked on the way."""
    cfg, s4, s7, phi = act.cfg, act.s4, act.s7, act.phi
    data = data or build_instanton(cfg)
    u0 = cfg.u0
    rep = Report(f"conformal variations, theta={cfg.theta}")
    Psi, omega, p = data.Psi, data.omega, data.p
    Psid = dagger(Psi)
    g7 = _gamma_list(cfg, s7)
    g4 = _gamma_list(cfg, s4)
    zs = ["z0", "z1", "z2", "z1b", "z2b"]
    eye2 = NCMatrix.identity(s7, 2)
    d_omega, d_alpha, d_F = [], [], []
    dp = mat_d(p)
    F0 = data.Fp
    for i, gname in enumerate(VARIATION_GENERATORS):
        z7 = phi.images[s4.by_name[zs[i]]]
        dz7 = z7.d()
        dom = act.act_matrix(gname, omega)
        zw = omega.left(-z7) if i < 3 else omega.map(lambda x: -(x * z7))
        closed = zw + eye2.left(dz7 * Scalar.const(Fraction(-1, 2))) + Psid * g7[i] * mat_d(Psi)
        rep.run(f"variation.omega.{i}", f"delta omega_{i} closed form", lambda d=dom - closed: _matrix_residual(d, u0))
        d_omega.append(dom)

        # -1/2 Psi dz Psi^dagger = -1/2 beta_a dz p_ab, beta_a from moving dz past row a of Psi
        dz4 = s4.gen(zs[i]).d()
        rows = []
        for a in range(4):
            beta = commutation_factor(Psi[a, 0], dz7)
            rows.append([dz4 * beta * p[a, b] for b in range(4)])
        psidzpsi = NCMatrix(s4, rows)
        rep.run(f"variation.alpha_lift.{i}", "Psi dz Psi^dagger computed on S4 matches S7",
                lambda m=psidzpsi, dz7=dz7: _matrix_residual(phi.matrix(m) - Psi.map(lambda x: x * dz7) * Psid, u0))
        alpha = p * g4[i] * dp * p - psidzpsi * HALF
        rep.run(f"variation.alpha_left.{i}", "p delta alpha = delta alpha", lambda a=alpha: _matrix_residual(p * a - a, u0))
        rep.run(f"variation.alpha_right.{i}", "delta alpha p = delta alpha", lambda a=alpha: _matrix_residual(a * p - a, u0))
        d_alpha.append(alpha)
        key = p * (dp * g4[i] + g4[i] * dp) * dp * p
        rep.run(f"variation.key.{i}", "p (dp g_i + g_i dp) dp p = 0", lambda k=key: _matrix_residual(k, u0))
        # first order of (p d + t alpha)^2 on p A^4; the trailing p restricts to the module
        dF = p * mat_d(alpha) * p
        d_F.append(dF)
        want = _delta_F_formula(act, i, F0, printed)
        rep.run(f"variation.F.{i}", f"delta F_{i} = -2 z lam^(..) F0", lambda d=dF - want: _matrix_residual(d, u0))
    return Variations(d_omega, d_alpha, d_F, g4, rep)


# (j, power) of lam^{power H_j} in delta F_i; the printed exponents differ for i = 1, 3
DELTA_F_LAMBDA = [(1, 0), (2, -1), (1, 1), (2, 1), (1, -1)]
DELTA_F_LAMBDA_PRINTED = [(1, 0), (2, 1), (1, 1), (2, -1), (1, -1)]


def _delta_F_formula(act: SymmetryAction, i: int, F0: NCMatrix, printed: bool = False) -> NCMatrix:
    """-2 z_i lam^{power H_j} F0 with lam^{H} the diagonal spinor matrix acting from the left."""
    s4, s7 = act.s4, act.s7
    z = s4.gen(["z0", "z1", "z2", "z1b", "z2b"][i])
    j, power = (DELTA_F_LAMBDA_PRINTED if printed else DELTA_F_LAMBDA)[i]
    D = _mat(s4, {(k, k): act.lam_h(s7, (s7.by_name[f"psi{k}"],), j, power) for k in range(1, 5)})
    return (D * F0).left(z) * Scalar.const(-2)


def variation_self_duality(act: SymmetryAction, variations: Variations, hodge: HodgeTable | None = None) -> Report:
    h = hodge or build_hodge(act.cfg, check_oracle=False)
    rep = Report(f"variation self-duality, theta={act.cfg.theta}")
    u0 = act.cfg.u0
    for i, dF in enumerate(variations.delta_F):
        def run(dF=dF):
            worst, ok = 0.0, True
            for row in dF.rows:
                for x in row:
                    o, r = _residual(h.star2(x) - x, u0)
                    ok &= o
                    worst = max(worst, r)
            return ok, worst
        rep.run(f"variation.self_dual.{i}", "star delta F_i = delta F_i", run)
    return rep


# --- suites ----------------------------------------------------------------------


def so5_suite(cfg: ThetaConfig) -> Report:
    act = SymmetryAction(cfg)
    rep = Report(f"so5, theta={cfg.theta}")
    bracket_check(act, SO5, report=rep)
    spinor_bracket_check(act, report=rep)
    rep.extend(dirac_bracket_check(act))
    rep.extend(relation_compatibility(act, SO5))
    rep.extend(lift_check(act, SO5))
    rep.extend(hopf_check(act))
    rep.extend(omega_invariance_check(act))
    return rep


def so51_suite(cfg: ThetaConfig) -> Report:
    act = SymmetryAction(cfg)
    rep = Report(f"so51, theta={cfg.theta}")
    extra = [(g1, g2) for i, g1 in enumerate(SO51) for g2 in SO51[i + 1:] if "conformal" in (g1.kind, g2.kind) or "dilation" in (g1.kind, g2.kind)]
    for g1, g2 in extra:
        bracket_check(act, [g1, g2], report=rep)
    rep.extend(relation_compatibility(act, CONFORMAL))
    rep.extend(lift_check(act, CONFORMAL))
    return rep


def variations_suite(cfg: ThetaConfig) -> Report:
    act = SymmetryAction(cfg)
    data = build_instanton(cfg)
    var = conformal_variations(act, data)
    rep = Report(f"variations, theta={cfg.theta}")
    rep.extend(var.report)
    rep.extend(variation_self_duality(act, var))
    return rep
