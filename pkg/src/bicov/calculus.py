"""Reduced differential calculi: surjective twisted derivations omega: H -> V into YD modules.

``omega(xy) = omega(x).y + eps(x) omega(y)``; the inner ones are
``omega(x) = theta.x - eps(x) theta`` for a coinvariant ``theta``.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .comodules import Comodule, coinvariants, colinear_rows
from .freealg import Word, add_into
from .linalg import Echelon, solve_affine
from .report import Report
from .rewrite import TruncationExceeded
from .yd import YDModule, action_rows, c_epsilon, verify_yd, yd_module, yd_morphisms

__all__ = [
    "ReducedCalculus", "ExtensionModule", "NotCoinvariant", "NotSurjective", "NotInner",
    "inner_calculus", "table_calculus", "evaluate_omega", "direct_sum", "extension_and_split",
    "d_from_omega", "omega_from_d", "verify_calculus", "classify", "simple_calculus",
    "saturate_rank", "default_max_degree",
]

Vec = Dict[int, object]


class NotCoinvariant(ValueError):
    pass


class NotSurjective(ValueError):
    def __init__(self, message, rank=None, degree=None, pair=None):
        super().__init__(message)
        self.rank = rank
        self.degree = degree
        self.pair = pair


class NotInner(ValueError):
    pass


def _vsub(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for k, v in b.items():
        add_into(out, {k: -v})
    return out


def _vscale(a: Vec, c) -> Vec:
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


@dataclass
class ReducedCalculus:
    module: YDModule
    theta: Optional[Vec] = None
    table: Optional[List[Vec]] = None
    rank: Optional[int] = None
    degree_used: Optional[int] = None
    label: str = ""
    parts: Tuple = ()

    def __post_init__(self):
        self._cache: Dict[Word, Vec] = {}
        if self.table is None and self.theta is None:
            raise ValueError("a calculus needs theta or a generator table")
        if self.table is None:
            self.table = [self._inner_word((g,)) for g in range(self.hopf.ngens)]

    @property
    def hopf(self):
        return self.module.hopf

    @property
    def field(self):
        return self.module.field

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def is_inner(self) -> bool:
        return self.theta is not None

    def _inner_word(self, w: Word) -> Vec:
        V = self.module
        e = self.hopf.counit_word(w)
        out = V.act(self.theta, {w: self.field.one})
        if e:
            out = _vsub(out, self.theta)
        return out

    def _table_word(self, w: Word) -> Vec:
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        if not w:
            out: Vec = {}
        elif len(w) == 1:
            out = dict(self.table[w[0]])
        else:
            # omega(x w') = omega(x).w' + eps(x) omega(w')
            x, rest = w[:1], w[1:]
            out = self.module.act(self.table[x[0]], {rest: self.field.one})
            if self.hopf.counit_word(x):
                add_into(out, self._table_word(rest))
        self._cache[w] = out
        return out

    def omega_word(self, w: Word, form: Optional[str] = None) -> Vec:
        form = form or ("inner" if self.is_inner else "table")
        if form == "inner":
            return self._inner_word(w)
        return self._table_word(w)

    def to_json(self) -> dict:
        names = self.hopf.alphabet.names
        return {
            "label": self.label,
            "parts": [list(p) for p in self.parts],
            "dim": self.dim,
            "theta": None if self.theta is None else {str(k): str(v) for k, v in sorted(self.theta.items())},
            "omega": {names[g]: {str(k): str(v) for k, v in sorted(t.items())}
                      for g, t in enumerate(self.table)},
            "rank": self.rank,
            "degree_used": self.degree_used,
        }


def evaluate_omega(c: ReducedCalculus, terms: Dict[Word, object], form: Optional[str] = None) -> Vec:
    sysd = c.hopf.system.completed_degree
    if sysd is not None and terms and max(len(w) for w in terms) > sysd:
        raise TruncationExceeded(f"degree exceeds completed degree {sysd}")
    out: Vec = {}
    for w, coef in terms.items():
        add_into(out, c.omega_word(w, form), coef)
    return out


def default_max_degree(dim: int) -> int:
    return 2 * math.isqrt(dim) + 2


def saturate_rank(c: ReducedCalculus, max_degree: Optional[int] = None):
    """(rank, degree) reached by omega on normal words of increasing degree.

    Stops when the rank equals dim V, or after two consecutive degrees adding nothing.
    """
    h = c.hopf
    cap = default_max_degree(c.dim) if max_degree is None else max_degree
    sysd = h.system.completed_degree
    if sysd is not None:
        cap = min(cap, sysd)
    ech = Echelon(c.field)
    stale = 0
    for d in range(cap + 1):
        before = ech.rank
        for w in _normal_words(h, d):
            ech.add(c.omega_word(w))
            if ech.rank == c.dim:
                return ech.rank, d, True
        if d > 0:
            stale = stale + 1 if ech.rank == before else 0
            if stale >= 2:
                return ech.rank, d, False
    return ech.rank, cap, ech.rank == c.dim


def _normal_words(h, d):
    from .rewrite import enumerate_normal_words
    return enumerate_normal_words(h.system, d)


def _certify(c: ReducedCalculus, max_degree: Optional[int]):
    rank, deg, ok = saturate_rank(c, max_degree)
    c.rank, c.degree_used = rank, deg
    if not ok:
        raise NotSurjective(f"omega has rank {rank} < dim {c.dim} (checked up to degree {deg})",
                            rank=rank, degree=deg)
    return c


def inner_calculus(V: YDModule, theta: Vec, max_degree: Optional[int] = None,
                   label: str = "", parts: Tuple = ()) -> ReducedCalculus:
    theta = {k: v for k, v in theta.items() if v}
    if not theta:
        raise NotCoinvariant("theta is zero")
    rho = V.comodule.coaction(theta)
    want = {(i, ()): v for i, v in theta.items()}
    if _vsub(rho, want):
        raise NotCoinvariant("theta is not right coinvariant")
    c = ReducedCalculus(V, theta=theta, label=label or f"inner({V.label})", parts=parts)
    return _certify(c, max_degree)


def table_calculus(V: YDModule, table: Sequence[Vec], max_degree: Optional[int] = None,
                   label: str = "", certify: bool = True) -> ReducedCalculus:
    c = ReducedCalculus(V, table=[dict(t) for t in table], label=label)
    return _certify(c, max_degree) if certify else c


_SIMPLE_CACHE: dict = {}


def simple_calculus(n: int, eps: int, hopf=None) -> ReducedCalculus:
    """omega_n^eps on V_n^eps with theta the normalized coinvariant."""
    from .cells import oq
    hopf = hopf or oq()
    key = (id(hopf), n, eps)
    hit = _SIMPLE_CACHE.get(key)
    if hit is None:
        V = yd_module(n, n, eps, hopf)
        basis = coinvariants(V.comodule)
        if len(basis) != 1:
            raise NotCoinvariant(f"V_{n} (x) V_{n} has {len(basis)} coinvariants")
        sign = "+1" if eps == 1 else "-1"
        hit = inner_calculus(V, basis[0], label=f"omega_{n}^{sign}", parts=((n, eps),))
        _SIMPLE_CACHE[key] = hit
    return hit


# ---------------------------------------------------------------------------
# direct sums

def _block_module(mods: Sequence[YDModule]) -> Tuple[YDModule, List[int]]:
    h = mods[0].hopf
    f = h.field
    offsets = []
    total = 0
    for M in mods:
        if M.hopf is not h:
            raise ValueError("summands over different Hopf cells")
        offsets.append(total)
        total += M.dim
    C = [[{} for _ in range(total)] for _ in range(total)]
    acts = [[[f.zero] * total for _ in range(total)] for _ in range(h.ngens)]
    for M, off in zip(mods, offsets):
        for k in range(M.dim):
            for i in range(M.dim):
                C[off + k][off + i] = M.comodule.matrix[k][i]
                for g in range(h.ngens):
                    acts[g][off + k][off + i] = M.actions[g][k][i]
    labels = []
    for M in mods:
        labels.extend(f"{M.label}:{x}" for x in (M.comodule.labels or range(M.dim)))
    label = " + ".join(M.label for M in mods)
    return YDModule(Comodule(h, C, labels), acts, label), offsets


def direct_sum(parts: Sequence[ReducedCalculus], max_degree: Optional[int] = None) -> ReducedCalculus:
    if not parts:
        raise ValueError("empty direct sum")
    for i, j in itertools.combinations(range(len(parts)), 2):
        A, B = parts[i].module, parts[j].module
        if A.dim == B.dim and yd_morphisms(A, B):
            raise NotSurjective(f"summands {parts[i].label} and {parts[j].label} are isomorphic",
                                pair=(i, j))
    V, offsets = _block_module([p.module for p in parts])
    label = " + ".join(p.label for p in parts)
    desc = tuple(x for p in parts for x in p.parts)
    if all(p.is_inner for p in parts):
        theta = {}
        for p, off in zip(parts, offsets):
            theta.update({off + k: v for k, v in p.theta.items()})
        c = ReducedCalculus(V, theta=theta, label=label, parts=desc)
    else:
        table = []
        for g in range(V.hopf.ngens):
            t = {}
            for p, off in zip(parts, offsets):
                t.update({off + k: v for k, v in p.table[g].items()})
            table.append(t)
        c = ReducedCalculus(V, table=table, label=label, parts=desc)
    return _certify(c, max_degree)


# ---------------------------------------------------------------------------
# the extension V_omega and its splitting

@dataclass
class ExtensionModule:
    module: YDModule
    base_dim: int

    def j(self):
        """Inclusion V -> V_omega (row convention)."""
        f = self.module.field
        n = self.base_dim
        return [[f.one if i == k else f.zero for k in range(n + 1)] for i in range(n)]

    def p(self):
        """Projection V_omega -> C_eps."""
        f = self.module.field
        return [[f.zero] for _ in range(self.base_dim)] + [[f.one]]


def extension_module(c: ReducedCalculus) -> ExtensionModule:
    V = c.module
    h = V.hopf
    f = h.field
    n = V.dim
    C = [[{} for _ in range(n + 1)] for _ in range(n + 1)]
    for k in range(n):
        for i in range(n):
            C[k][i] = V.comodule.matrix[k][i]
    C[n][n] = {(): f.one}
    acts = []
    for g in range(h.ngens):
        M = [list(r) + [f.zero] for r in V.actions[g]]
        om = c.table[g]
        M.append([om.get(j, f.zero) for j in range(n)] + [f(h.counit_word((g,)))])
        acts.append(M)
    labels = list(V.comodule.labels or [f"e{i}" for i in range(n)]) + ["1"]
    return ExtensionModule(YDModule(Comodule(h, C, labels), acts, f"{V.label}_omega"), n)


def _is_yd_map(V: YDModule, W: YDModule, T) -> bool:
    dw = W.dim
    vec = {i * dw + j: T[i][j] for i in range(V.dim) for j in range(dw) if T[i][j]}
    for r in action_rows(V, W) + colinear_rows(V.comodule, W.comodule):
        acc = V.field.zero
        for k, c in r.items():
            v = vec.get(k)
            if v:
                acc = acc + c * v
        if acc:
            return False
    return True


def extension_and_split(c: ReducedCalculus, check_yd: bool = True):
    """Build V_omega, check it, and look for a YD retraction r with r o j = id.

    Returns (extension, r, theta, report); raises NotInner when no retraction exists.
    """
    ext = extension_module(c)
    Vw = ext.module
    V = c.module
    f = c.field
    n = V.dim
    rep = Report()
    if check_yd:
        rep.extend(verify_yd(Vw, degree=1, suite="calculus"))
    ce = c_epsilon(V.hopf)
    rep.add("calculus", f"{c.label}: j is a YD morphism", _is_yd_map(V, Vw, ext.j()))
    rep.add("calculus", f"{c.label}: p is a YD morphism", _is_yd_map(Vw, ce, ext.p()))
    pj = [[sum((ext.j()[i][k] * ext.p()[k][0] for k in range(n + 1)), f.zero)] for i in range(n)]
    rep.add("calculus", f"{c.label}: p o j = 0", not any(x[0] for x in pj))
    rows = action_rows(Vw, V) + colinear_rows(Vw.comodule, V.comodule)
    rhs = [f.zero] * len(rows)
    for i in range(n):
        for j in range(n):
            rows.append({i * n + j: f.one})
            rhs.append(f.one if i == j else f.zero)
    sol = solve_affine(f, rows, rhs, (n + 1) * n)
    if sol is None:
        raise NotInner(f"{c.label}: the extension does not split")
    r = [[sol.get(i * n + j, f.zero) for j in range(n)] for i in range(n + 1)]
    theta = {j: r[n][j] for j in range(n) if r[n][j]}
    ok = True
    for g in range(V.hopf.ngens):
        val = V.act(theta, {(g,): f.one})
        if V.hopf.counit_word((g,)):
            val = _vsub(val, theta)
        if _vsub(val, c.table[g]):
            ok = False
    rep.add("calculus", f"{c.label}: recovered theta gives omega", ok)
    return ext, r, theta, rep


# ---------------------------------------------------------------------------
# realization inside H (x) V

def d_from_omega(c: ReducedCalculus, terms: Dict[Word, object]) -> Dict[Tuple[Word, int], object]:
    """d(x) = sum x_(1) (x) omega(x_(2)), first leg in normal form."""
    h = c.hopf
    raw: Dict[int, dict] = defaultdict(dict)
    for w, coef in terms.items():
        for (w1, w2), c2 in h.delta_free(w).items():
            om = c.omega_word(w2)
            for k, v in om.items():
                add_into(raw[k], {w1: coef * c2 * v})
    out: dict = {}
    for k, t in raw.items():
        for w, v in h.reduce(t).items():
            out[(w, k)] = v
    return out


def omega_from_d(c: ReducedCalculus, terms: Dict[Word, object]) -> Vec:
    """sum S(x_(1)) d(x_(2)); must land in 1 (x) V."""
    h = c.hopf
    raw: Dict[int, dict] = defaultdict(dict)
    one = h.field.one
    for w, coef in terms.items():
        for (w1, w2), c2 in h.delta_free(w).items():
            s1 = h.antipode({w1: one})
            if not s1:
                continue
            for (u, k), v in d_from_omega(c, {w2: one}).items():
                for sw, sc in s1.items():
                    add_into(raw[k], {sw + u: coef * c2 * sc * v})
    out: Vec = {}
    for k, t in raw.items():
        t = h.reduce(t)
        for w, v in t.items():
            if w:
                raise ValueError("omega_d left the subspace 1 (x) V")
            out[k] = v
    return out


def _hv_left(h, x: Dict[Word, object], hv: dict) -> dict:
    raw: Dict[int, dict] = defaultdict(dict)
    for (u, k), v in hv.items():
        for w, c in x.items():
            add_into(raw[k], {w + u: c * v})
    return {(w, k): v for k, t in raw.items() for w, v in h.reduce(t).items()}


def _hv_right(c: ReducedCalculus, hv: dict, z: Dict[Word, object]) -> dict:
    """(h (x) v).z = sum h z_(1) (x) v.z_(2)."""
    h = c.hopf
    V = c.module
    raw: Dict[int, dict] = defaultdict(dict)
    for w, cz in z.items():
        for (z1, z2), c2 in h.delta_free(w).items():
            for (u, k), v in hv.items():
                for j, m in V.act({k: v}, {z2: h.field.one}).items():
                    add_into(raw[j], {u + z1: cz * c2 * m})
    return {(w, k): v for k, t in raw.items() for w, v in h.reduce(t).items()}


def leibniz_defect_d(c: ReducedCalculus, x: Word, y: Word) -> dict:
    one = c.field.one
    lhs = d_from_omega(c, {x + y: one})
    rhs = _hv_left(c.hopf, {x: one}, d_from_omega(c, {y: one}))
    add_into(rhs, _hv_right(c, d_from_omega(c, {x: one}), {y: one}))
    diff = dict(lhs)
    add_into(diff, rhs, -one)
    return diff


# ---------------------------------------------------------------------------
# verification

def _words_upto(n: int, d: int) -> List[Word]:
    out: List[Word] = [()]
    layer: List[Word] = [()]
    for _ in range(d):
        layer = [w + (g,) for w in layer for g in range(n)]
        out.extend(layer)
    return out


def equivariance_defect(c: ReducedCalculus, w: Word) -> dict:
    """rho(omega(x)) - sum omega(x_(2)) (x) S(x_(1)) x_(3)."""
    h = c.hopf
    one = h.field.one
    lhs = c.module.comodule.coaction(c.omega_word(w))
    raw: Dict[int, dict] = defaultdict(dict)
    for (u1, u2, u3), co in h.delta2_free(w).items():
        om = c.omega_word(u2)
        if not om:
            continue
        s1 = h.antipode({u1: one})
        for k, v in om.items():
            for sw, sc in s1.items():
                add_into(raw[k], {sw + u3: co * v * sc})
    diff = dict(lhs)
    for k, t in raw.items():
        for ww, v in h.reduce(t).items():
            add_into(diff, {(k, ww): -v})
    return diff


def verify_calculus(c: ReducedCalculus, *, leibniz_degree: int = 2, equivariance_degree: int = 1,
                    roundtrip_degree: Optional[int] = None, cross_check_degree: Optional[int] = None,
                    suite: str = "calculus") -> Report:
    h = c.hopf
    f = c.field
    one = f.one
    rep = Report()
    lab = c.label
    rep.add(suite, f"{lab}: omega(1) = 0", not c.omega_word(()))
    words = _words_upto(h.ngens, leibniz_degree)
    bad = []
    for x in words:
        for y in words:
            if len(x) + len(y) > leibniz_degree or not x or not y:
                continue
            lhs = c.omega_word(x + y)
            rhs = c.module.act(c.omega_word(x), {y: one})
            if h.counit_word(x):
                add_into(rhs, c.omega_word(y))
            if _vsub(lhs, rhs):
                bad.append((x, y))
    rep.add(suite, f"{lab}: twisted Leibniz rule", not bad,
            {"pairs_failing": len(bad)}, leibniz_degree)
    rel_ok = all(not evaluate_omega(c, r.words()) for r in h.cell.relations)
    rep.add(suite, f"{lab}: omega vanishes on relations", rel_ok, None, 2)
    eq_bad = [w for w in _words_upto(h.ngens, equivariance_degree) if equivariance_defect(c, w)]
    rep.add(suite, f"{lab}: equivariance", not eq_bad,
            {"failing": [h.alphabet.format_word(w) for w in eq_bad[:5]]}, equivariance_degree)
    rank, deg, ok = saturate_rank(c)
    rep.add(suite, f"{lab}: surjectivity by rank saturation", ok,
            {"rank": rank, "dim": c.dim}, deg)
    if cross_check_degree and c.is_inner:
        tab = ReducedCalculus(c.module, table=c.table)
        bad = [w for w in _words_upto(h.ngens, cross_check_degree)
               if _vsub(c.omega_word(w, "inner"), tab.omega_word(w, "table"))]
        rep.add(suite, f"{lab}: inner and table forms agree", not bad, None, cross_check_degree)
    if roundtrip_degree:
        bad = []
        for w in _words_upto(h.ngens, roundtrip_degree):
            try:
                if _vsub(omega_from_d(c, {w: one}), c.omega_word(w)):
                    bad.append(w)
            except ValueError:
                bad.append(w)
        rep.add(suite, f"{lab}: omega_d of d_omega recovers omega", not bad,
                {"words_failing": len(bad)}, roundtrip_degree)
        ld = [(x, y) for x in _words_upto(h.ngens, 1) for y in _words_upto(h.ngens, 1)
              if x and y and leibniz_defect_d(c, x, y)]
        rep.add(suite, f"{lab}: Leibniz rule for d_omega in H (x) V", not ld, None, 2)
    return rep


# ---------------------------------------------------------------------------
# classification

def _candidates(max_dim: int) -> List[Tuple[int, int]]:
    out = []
    n = 0
    while (n + 1) ** 2 <= max_dim:
        for eps in (-1, 1):
            out.append((n, eps))
        n += 1
    return out


def classify(max_dim: int, include_zero: bool = False, verify: bool = True,
             roundtrip_degree: Optional[int] = None) -> List[dict]:
    """All multiplicity-free sums of the omega_n^eps with total dimension at most max_dim."""
    if max_dim < 1:
        raise ValueError("max_dim must be at least 1")
    cands = _candidates(max_dim)
    subsets = []
    for k in range(0 if include_zero else 1, len(cands) + 1):
        for sub in itertools.combinations(cands, k):
            if sum((n + 1) ** 2 for n, _ in sub) <= max_dim:
                subsets.append(sub)
    subsets.sort(key=lambda s: (len(s), s))
    out = []
    for sub in subsets:
        dim = sum((n + 1) ** 2 for n, _ in sub)
        entry = {"parts": [list(p) for p in sub], "dim": dim,
                 "kind": "zero" if not sub else ("simple" if len(sub) == 1 else "sum")}
        if sub:
            try:
                calc = direct_sum([simple_calculus(n, e) for n, e in sub]) if len(sub) > 1 \
                    else simple_calculus(*sub[0])
            except NotSurjective:
                continue
        if sub and verify:
            rep = verify_calculus(calc, roundtrip_degree=roundtrip_degree)
            entry["rank"] = calc.rank
            entry["degree_used"] = calc.degree_used
            entry["status"] = rep.status
        out.append(entry)
    return out
