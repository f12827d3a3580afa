"""Regenerate data/hodge_s4.json: the round Hodge star on 2-forms of the unit S^4.

The star of a tangential 2-form is the contraction of the five-dimensional star
with the position vector, (*w)_ij = 1/2 eps_ijklm w_kl x_m, written in the
complex coordinates z1 = x1 + i x2, z2 = x3 + i x4, z0 = x5.  Arithmetic is
exact over Q(i).  ``orientation`` is fixed separately (see theta_spheres).

    python3 tools/build_hodge_table.py [--orientation {1,-1}]
"""

import argparse
import itertools
import json
from fractions import Fraction
from pathlib import Path

from ncsphere.scalars import F0, F1, I_UNIT, FieldElem

NAMES = ["z0", "z1b", "z2b", "z1", "z2"]
HALF = FieldElem(Fraction(1, 2))

# z_n = sum_k ZX[n][k] x_k  and  x_k = sum_n XZ[k][n] z_n  (index k = 0..4 for x1..x5)
ZX = {
    "z0": [F0, F0, F0, F0, F1],
    "z1b": [F1, -I_UNIT, F0, F0, F0],
    "z2b": [F0, F0, F1, -I_UNIT, F0],
    "z1": [F1, I_UNIT, F0, F0, F0],
    "z2": [F0, F0, F1, I_UNIT, F0],
}
NEG_HALF_I = FieldElem(0, Fraction(-1, 2))
HALF_I = FieldElem(0, Fraction(1, 2))
XZ = [
    {"z1": HALF, "z1b": HALF},
    {"z1": NEG_HALF_I, "z1b": HALF_I},
    {"z2": HALF, "z2b": HALF},
    {"z2": NEG_HALF_I, "z2b": HALF_I},
    {"z0": F1},
]


def perm_sign(p) -> int:
    p = list(p)
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def eps(*idx) -> int:
    return 0 if len(set(idx)) < len(idx) else perm_sign(idx)


def add(acc: dict, key, c: FieldElem) -> None:
    v = acc.get(key, F0) + c
    if v.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = v


def wedge_in_x(a: str, b: str) -> dict:
    """dz_a ^ dz_b as {(k, l): coeff} with k < l in the dx basis."""
    out: dict = {}
    for k in range(5):
        for l in range(5):
            if k == l:
                continue
            c = ZX[a][k] * ZX[b][l]
            if c.is_zero():
                continue
            if k < l:
                add(out, (k, l), c)
            else:
                add(out, (l, k), -c)
    return out


def dx_pair_in_z(i: int, j: int) -> dict:
    """dx_i ^ dx_j as {(n1, n2): coeff} with n1 before n2 in the generator order."""
    out: dict = {}
    for n1, c1 in XZ[i].items():
        for n2, c2 in XZ[j].items():
            if n1 == n2:
                continue
            c = c1 * c2
            a, b = NAMES.index(n1), NAMES.index(n2)
            if a < b:
                add(out, (n1, n2), c)
            else:
                add(out, (n2, n1), -c)
    return out


def star_of_pair(a: str, b: str) -> dict:
    """Classical star of dz_a ^ dz_b as {(z_m, dz_c, dz_d): coeff}."""
    out: dict = {}
    for (k, l), c in wedge_in_x(a, b).items():
        for i, j in itertools.combinations(range(5), 2):
            for m in range(5):
                e = eps(i, j, k, l, m)
                if not e:
                    continue
                for zm, cm in XZ[m].items():
                    for (n1, n2), cz in dx_pair_in_z(i, j).items():
                        add(out, (zm, n1, n2), c * cm * cz * FieldElem(e))
    return out


def build(orientation: int) -> dict:
    table = {}
    for a, b in itertools.combinations(NAMES, 2):
        entries = []
        for (zm, c, d), coeff in sorted(star_of_pair(a, b).items()):
            coeff = coeff * FieldElem(orientation)
            entries.append({"coeff": [str(x) for x in coeff.coefficients], "function": zm,
                            "forms": ["d" + c, "d" + d]})
        table[f"d{a}*d{b}"] = entries
    return {"functions": NAMES, "orientation": orientation, "table": table}


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--orientation", type=int, choices=(1, -1), default=-1)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/ncsphere/data/hodge_s4.json")
    args = ap.parse_args()
    args.out.write_text(json.dumps(build(args.orientation), indent=1) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
