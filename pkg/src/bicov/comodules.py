"""Finite-dimensional right comodules over a Hopf cell.

Convention: ``rho(v_i) = sum_k v_k (x) C[k][i]`` where each ``C[k][i]`` is a
dict ``word -> scalar`` in normal form.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional

from .cells import HopfView, oq
from .freealg import add_into, mul_terms
from .linalg import Echelon
from .report import Report
from .scalars import q_binomial

__all__ = [
    "Comodule", "spin_comodule", "tensor_comodule", "coinvariants", "comodule_morphisms",
    "colinear_rows", "verify_comodule", "CellMismatch", "trivial_comodule",
]


class CellMismatch(ValueError):
    pass


def word_product(*parts: dict) -> dict:
    acc = {(w,): c for w, c in parts[0].items()}
    for p in parts[1:]:
        acc = mul_terms(acc, {(w,): c for w, c in p.items()})
    return {k[0]: c for k, c in acc.items()}


@dataclass
class Comodule:
    hopf: HopfView
    matrix: List[List[dict]]
    labels: Optional[List[str]] = None

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def field(self):
        return self.hopf.field

    def coaction(self, vec: Dict[int, object]) -> Dict[tuple, object]:
        """rho of a coordinate vector, as {(basis index, word): coef}."""
        out: dict = {}
        for i, c in vec.items():
            for k in range(self.dim):
                for w, c2 in self.matrix[k][i].items():
                    add_into(out, {(k, w): c * c2})
        return out

    def entry_str(self, k: int, i: int) -> str:
        from .freealg import NCPoly
        return str(NCPoly.from_words(self.field, self.hopf.alphabet, self.matrix[k][i]))

    def to_json(self) -> dict:
        return {"dim": self.dim, "labels": self.labels,
                "coaction": [[self.entry_str(k, i) for i in range(self.dim)] for k in range(self.dim)]}


def trivial_comodule(hopf: HopfView, dim: int = 1) -> Comodule:
    one = hopf.field.one
    return Comodule(hopf, [[{(): one} if k == i else {} for i in range(dim)] for k in range(dim)],
                    [f"e{i}" for i in range(dim)])


def spin_comodule(n: int, hopf: Optional[HopfView] = None) -> Comodule:
    """The (n+1)-dimensional simple comodule V_n over O_q(SL_2)."""
    if n < 0:
        raise ValueError("spin must be non-negative")
    hopf = hopf or oq()
    field = hopf.field
    a, b, c, d = (hopf.alphabet.index(x) for x in "abcd")
    C = [[{} for _ in range(n + 1)] for _ in range(n + 1)]
    for i in range(n + 1):
        for r in range(i + 1):
            for s in range(n - i + 1):
                coef = q_binomial(field, i, r) * q_binomial(field, n - i, s) * field.q_pow((i - r) * s)
                word = (a,) * r + (b,) * s + (c,) * (i - r) + (d,) * (n - i - s)
                add_into(C[r + s][i], {word: coef})
    C = [[hopf.reduce(e) for e in row] for row in C]
    return Comodule(hopf, C, [f"v{i}" for i in range(n + 1)])


def tensor_comodule(V: Comodule, W: Comodule) -> Comodule:
    if V.hopf is not W.hopf:
        raise CellMismatch("comodules over different Hopf cells")
    h = V.hopf
    dv, dw = V.dim, W.dim
    C = [[{} for _ in range(dv * dw)] for _ in range(dv * dw)]
    for k in range(dv):
        for i in range(dv):
            left = V.matrix[k][i]
            if not left:
                continue
            for l in range(dw):
                for j in range(dw):
                    right = W.matrix[l][j]
                    if right:
                        C[k * dw + l][i * dw + j] = h.reduce(word_product(left, right))
    labels = None
    if V.labels and W.labels:
        labels = [f"{x}(x){y}" for x in V.labels for y in W.labels]
    return Comodule(h, C, labels)


def coinvariants(V: Comodule) -> List[Dict[int, object]]:
    """Basis of {theta : rho(theta) = theta (x) 1}, reduced echelon with leading coordinate 1."""
    eqs: Dict[tuple, dict] = defaultdict(dict)
    one = V.field.one
    for i in range(V.dim):
        col: dict = {}
        for k in range(V.dim):
            for w, c in V.matrix[k][i].items():
                add_into(col, {(k, w): c})
        add_into(col, {(i, ()): -one})
        for key, c in col.items():
            eqs[key][i] = c
    ech = Echelon(V.field)
    for key in sorted(eqs, key=_eq_sort):
        ech.add(eqs[key])
    return ech.kernel(V.dim)


def _eq_sort(key):
    return tuple((len(x), x) if isinstance(x, tuple) else (0, x) for x in key)


def colinear_rows(V: Comodule, W: Comodule) -> List[dict]:
    """Equations for T (T[i][j] = coefficient of w_j in T(v_i), unknown i*dimW+j) to be colinear."""
    if V.hopf is not W.hopf:
        raise CellMismatch("comodules over different Hopf cells")
    dv, dw = V.dim, W.dim
    eqs: Dict[tuple, dict] = defaultdict(dict)
    for i in range(dv):
        for l in range(dw):
            for j in range(dw):
                for w, c in W.matrix[l][j].items():
                    add_into(eqs[(i, l, w)], {i * dw + j: c})
            for k in range(dv):
                for w, c in V.matrix[k][i].items():
                    add_into(eqs[(i, l, w)], {k * dw + l: -c})
    return [eqs[k] for k in sorted(eqs, key=_eq_sort) if eqs[k]]


def unknowns_to_matrix(vec: dict, dv: int, dw: int, field) -> List[List[object]]:
    return [[vec.get(i * dw + j, field.zero) for j in range(dw)] for i in range(dv)]


def comodule_morphisms(V: Comodule, W: Comodule) -> List[List[List[object]]]:
    ech = Echelon(V.field)
    for r in colinear_rows(V, W):
        ech.add(r)
    return [unknowns_to_matrix(v, V.dim, W.dim, V.field) for v in ech.kernel(V.dim * W.dim)]


def verify_comodule(V: Comodule, suite: str = "comodules", name: str = "") -> Report:
    """Coassociativity and counit, entrywise after normal form."""
    h = V.hopf
    field = h.field
    rep = Report()
    name = name or f"dim {V.dim}"
    ok_assoc = True
    ok_counit = True
    for k in range(V.dim):
        for i in range(V.dim):
            lhs = h.delta(V.matrix[k][i])
            rhs: dict = {}
            for l in range(V.dim):
                left, right = V.matrix[k][l], V.matrix[l][i]
                for w1, c1 in left.items():
                    for w2, c2 in right.items():
                        add_into(rhs, {(w1, w2): c1 * c2})
            diff = dict(lhs)
            add_into(diff, rhs, -field.one)
            if diff:
                ok_assoc = False
            e = h.counit(V.matrix[k][i])
            if e != (field.one if k == i else field.zero):
                ok_counit = False
    deg = max((len(w) for row in V.matrix for e in row for w in e), default=0)
    rep.add(suite, f"{name} coassociativity", ok_assoc, None, deg)
    rep.add(suite, f"{name} counit", ok_counit, None, deg)
    return rep
