"""Yetter-Drinfeld modules: a comodule plus right action matrices for the generators.

Row convention: ``e_i . x = sum_j M_x[i][j] e_j``, so the matrix of a word
``x y`` is ``M_x M_y``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional

from .cells import HopfView, oq
from .comodules import Comodule, colinear_rows, spin_comodule, tensor_comodule, trivial_comodule, unknowns_to_matrix
from .freealg import Word, add_into
from .linalg import Echelon
from .report import Report
from .scalars import q_int

__all__ = [
    "YDModule", "yd_module", "c_epsilon", "verify_yd", "yd_morphisms", "yd_condition_defect",
    "mat_mul", "mat_identity", "vec_mat",
]


def mat_identity(field, n: int):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def mat_mul(A, B, field):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = [field.zero] * m
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if not a:
                continue
            Bt = B[t]
            for j in range(m):
                b = Bt[j]
                if b:
                    row[j] = row[j] + a * b
        out.append(row)
    return out


def vec_mat(vec: Dict[int, object], M) -> Dict[int, object]:
    """Row vector (sparse) times matrix."""
    out: dict = {}
    for i, c in vec.items():
        for j, m in enumerate(M[i]):
            if m:
                add_into(out, {j: c * m})
    return out


@dataclass
class YDModule:
    comodule: Comodule
    actions: List[List[List[object]]]  # one dim x dim matrix per generator
    label: str = ""

    def __post_init__(self):
        self._word_cache: Dict[Word, list] = {}

    @property
    def hopf(self) -> HopfView:
        return self.comodule.hopf

    @property
    def field(self):
        return self.hopf.field

    @property
    def dim(self) -> int:
        return self.comodule.dim

    def word_matrix(self, w: Word):
        hit = self._word_cache.get(w)
        if hit is None:
            if not w:
                hit = mat_identity(self.field, self.dim)
            elif len(w) == 1:
                hit = self.actions[w[0]]
            else:
                hit = mat_mul(self.word_matrix(w[:-1]), self.actions[w[-1]], self.field)
            self._word_cache[w] = hit
        return hit

    def poly_matrix(self, terms: Dict[Word, object]):
        f = self.field
        out = [[f.zero] * self.dim for _ in range(self.dim)]
        for w, c in terms.items():
            M = self.word_matrix(w)
            for i in range(self.dim):
                for j in range(self.dim):
                    if M[i][j]:
                        out[i][j] = out[i][j] + c * M[i][j]
        return out

    def act(self, vec: Dict[int, object], terms: Dict[Word, object]) -> Dict[int, object]:
        out: dict = {}
        for w, c in terms.items():
            for j, v in vec_mat(vec, self.word_matrix(w)).items():
                add_into(out, {j: c * v})
        return out

    def to_json(self) -> dict:
        names = self.hopf.alphabet.names
        return {"label": self.label, "dim": self.dim,
                "actions": {names[g]: [[str(x) for x in row] for row in M]
                            for g, M in enumerate(self.actions)},
                "comodule": self.comodule.to_json()}


def yd_module(n: int, m: int, eps: int, hopf: Optional[HopfView] = None) -> YDModule:
    """V_{n,m}^eps: the comodule V_n (x) V_m with the standard sign-twisted action."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    hopf = hopf or oq()
    f = hopf.field
    dim = (n + 1) * (m + 1)
    idx = lambda i, j: i * (m + 1) + j  # noqa: E731
    one_minus = f.one - f.q_pow(-2)
    e = f(eps)
    mats = {x: [[f.zero] * dim for _ in range(dim)] for x in "abcd"}
    for i in range(n + 1):
        for j in range(m + 1):
            r = idx(i, j)
            mats["a"][r][r] = e * f.q_half_pow(m - n + 2 * i - 2 * j)
            mats["d"][r][r] = e * f.q_half_pow(n - m + 2 * j - 2 * i)
            if j >= 1:
                mats["b"][r][idx(i, j - 1)] = (-e * f.q_half_pow(-(n + m) + 2 * i + 2 * j + 2)
                                               * one_minus * q_int(f, j))
            if i < n:
                mats["c"][r][idx(i + 1, j)] = (e * f.q_half_pow(m + n - 2 * i - 2 * j)
                                               * one_minus * q_int(f, n - i))
            if j >= 1 and i < n:
                mats["d"][r][idx(i + 1, j - 1)] = (-e * f.q_half_pow(n - m + 2 * j - 2 * i) * f.q
                                                   * one_minus * one_minus
                                                   * q_int(f, j) * q_int(f, n - i))
    names = hopf.alphabet.names
    actions = [mats[x] for x in names]
    C = tensor_comodule(spin_comodule(n, hopf), spin_comodule(m, hopf))
    sign = "+1" if eps == 1 else "-1"
    return YDModule(C, actions, f"V_{{{n},{m}}}^{sign}")


def c_epsilon(hopf: Optional[HopfView] = None) -> YDModule:
    """The one-dimensional module with trivial coaction and action by the counit."""
    hopf = hopf or oq()
    f = hopf.field
    actions = [[[f(hopf.counit_word((g,)))]] for g in range(hopf.ngens)]
    return YDModule(trivial_comodule(hopf), actions, "C_eps")


def yd_condition_defect(V: YDModule, word: Word, basis_index: int) -> dict:
    """rho(v.x) - sum v_(0).x_(2) (x) S(x_(1)) v_(1) x_(3), reduced; empty iff the condition holds."""
    h = V.hopf
    C = V.comodule.matrix
    reduce = h.reduce
    lhs: dict = {}
    row = V.word_matrix(word)[basis_index]
    for j, mval in enumerate(row):
        if not mval:
            continue
        for k in range(V.dim):
            for w, c in C[k][j].items():
                add_into(lhs, {(k, w): mval * c})
    raw: Dict[int, dict] = defaultdict(dict)
    for (u1, u2, u3), c in h.delta2_free(word).items():
        s1 = h.antipode({u1: h.field.one})
        if not s1:
            continue
        M2 = V.word_matrix(u2)
        for k in range(V.dim):
            ckv = C[k][basis_index]
            if not ckv:
                continue
            for l, mval in enumerate(M2[k]):
                if not mval:
                    continue
                coef = c * mval
                acc = raw[l]
                for sw, sc in s1.items():
                    for w, wc in ckv.items():
                        add_into(acc, {sw + w + u3: coef * sc * wc})
    diff = dict(lhs)
    for l, terms in raw.items():
        for w, c in reduce(terms).items():
            add_into(diff, {(l, w): -c})
    return diff


def _relation_terms(h: HopfView) -> List[dict]:
    rels = [r.words() for r in h.cell.relations]
    for lhs, rhs in h.system.rules.items():
        t = {lhs: h.field.one}
        add_into(t, rhs, -h.field.one)
        rels.append(t)
    return rels


def verify_yd(V: YDModule, degree: int = 2, suite: str = "yd") -> Report:
    """Relations act as zero; the YD condition holds on generators and on all words up to ``degree``."""
    rep = Report()
    h = V.hopf
    lab = V.label or f"dim {V.dim}"
    bad_rel = []
    for t in _relation_terms(h):
        M = V.poly_matrix(t)
        if any(x for row in M for x in row):
            bad_rel.append(str(h.cell.poly(t)))
    rep.add(suite, f"{lab} relations act as zero", not bad_rel, {"failing": bad_rel[:3]}, 2)
    n = h.ngens
    words_by_deg = {1: [(g,) for g in range(n)]}
    for d in range(2, degree + 1):
        words_by_deg[d] = [w + (g,) for w in words_by_deg[d - 1] for g in range(n)]
    for d in range(1, degree + 1):
        fails = []
        for w in words_by_deg[d]:
            for v in range(V.dim):
                if yd_condition_defect(V, w, v):
                    fails.append((h.alphabet.format_word(w), v))
        what = "generators" if d == 1 else f"degree-{d} words"
        rep.add(suite, f"{lab} YD condition on {what}", not fails,
                {"failing": [f"{w} on e{v}" for w, v in fails[:5]]}, d)
    return rep


def action_rows(V: YDModule, W: YDModule) -> List[dict]:
    """Equations M^V_x T = T M^W_x for every generator x (T unknown i*dimW+j)."""
    dv, dw = V.dim, W.dim
    rows = []
    for g in range(V.hopf.ngens):
        MV, MW = V.actions[g], W.actions[g]
        for i in range(dv):
            for j in range(dw):
                r: dict = {}
                for k in range(dv):
                    if MV[i][k]:
                        add_into(r, {k * dw + j: MV[i][k]})
                for k in range(dw):
                    if MW[k][j]:
                        add_into(r, {i * dw + k: -MW[k][j]})
                if r:
                    rows.append(r)
    return rows


def yd_morphisms(V: YDModule, W: YDModule):
    """Basis of the linear, colinear, equivariant maps V -> W (row convention)."""
    ech = Echelon(V.field)
    for r in action_rows(V, W):
        ech.add(r)
    for r in colinear_rows(V.comodule, W.comodule):
        ech.add(r)
    return [unknowns_to_matrix(v, V.dim, W.dim, V.field) for v in ech.kernel(V.dim * W.dim)]
