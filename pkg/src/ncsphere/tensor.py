"""Elements of tensor powers of an algebra with every slot in normal form.

``Tensor`` backs two structures: Hochschild chains (``cyclic``) and the
universal differential calculus (``ncmatrix.UniversalCalculus``), where an
``n``-form ``a0 da1 ... dan`` is realised inside ``A^(n+1)``.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .ncalg import NCPoly, RewriteSystem, _acc
from .scalars import Scalar


def expand_slots(sys: RewriteSystem, slots: Sequence[NCPoly], coeff: Scalar) -> dict:
    """Multilinear expansion of ``coeff * s0 (x) s1 (x) ...`` over normal words."""
    out = {(): coeff}
    for s in slots:
        nxt: dict = {}
        canon = sys.reduce_terms(s.terms)
        for key, c in out.items():
            for w, cc in canon.items():
                _acc(nxt, key + (w,), c * cc)
        out = nxt
    return out


class Tensor:
    """Finite sum of ``coefficient * w0 (x) ... (x) wn`` with normal words ``wi``."""

    __slots__ = ("sys", "terms")

    def __init__(self, sys: RewriteSystem, terms: Mapping[tuple, Scalar] | None = None):
        self.sys = sys
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def from_slots(cls, sys: RewriteSystem, slots: Sequence[NCPoly], coeff=1) -> "Tensor":
        return cls(sys, expand_slots(sys, slots, sys.scalar(coeff)))

    def _new(self, terms):
        return type(self)(self.sys, terms)

    def __add__(self, o: "Tensor") -> "Tensor":
        out = dict(self.terms)
        for k, c in o.terms.items():
            _acc(out, k, c)
        return self._new(out)

    def __neg__(self) -> "Tensor":
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, o: "Tensor") -> "Tensor":
        return self + (-o)

    def scale(self, s) -> "Tensor":
        s = self.sys.scalar(s)
        return self._new({k: c * s for k, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {len(k) - 1 for k in self.terms}

    def slot_product(self, key: tuple, i: int) -> dict:
        """Multiply slots ``i`` and ``i+1`` of one basis tensor."""
        out: dict = {}
        prod = self.sys.reduce_terms({key[i] + key[i + 1]: self.sys.scalar(1)})
        for w, c in prod.items():
            out[key[:i] + (w,) + key[i + 2:]] = c
        return out

    def __eq__(self, o) -> bool:
        if not isinstance(o, Tensor):
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        if not self.terms:
            return f"{type(self).__name__}(0)"
        parts = []
        for k, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            slots = " (x) ".join(self.sys.format({w: self.sys.scalar(1)}).replace("(1)*", "") for w in k)
            parts.append(f"({c}) {slots}")
        return f"{type(self).__name__}(" + " + ".join(parts) + ")"


def tensor_sum(items: Iterable[Tensor], sys: RewriteSystem, cls=Tensor) -> Tensor:
    out: dict = {}
    for t in items:
        for k, c in t.terms.items():
            _acc(out, k, c)
    return cls(sys, out)
