"""Transport along a cogroupoid: V |-> V cotensor_{B(X,X)} B(X,Y).

Cotensor elements are sparse dicts keyed by ``(i, word)``: basis index of V
and a normal word of B(X,Y).  The transported action of ``b`` in B(Y,Y) is

    (sum v_i (x) a_i) <| b = sum v_i . b_(2) (x) S_{Y,X}(b_(1)) a_i b_(3)

with ``b_(1)`` in B(Y,X), ``b_(2)`` in B(X,X), ``b_(3)`` in B(X,Y); the
coaction is ``id (x) Delta^Y_{X,Y}``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .calculus import ReducedCalculus, inner_calculus, table_calculus, verify_calculus
from .cells import OQ_NAMES, OQ_PRECEDENCE, Cogroupoid, e_q
from .comodules import Comodule, colinear_rows
from .freealg import Word, add_into
from .linalg import Echelon, Matrix, solve_affine
from .report import Report
from .yd import YDModule, action_rows

__all__ = [
    "CotensorModule", "DimensionUnstable", "BasisEscape", "cotensor", "transported_action",
    "transport_yd", "transport_calculus", "roundtrip_check", "transport_cogroupoid",
    "fusion_dims",
]

Key = Tuple[int, Word]


class DimensionUnstable(RuntimeError):
    pass


class BasisEscape(RuntimeError):
    pass


def transport_cogroupoid(E: Matrix, D: int) -> Cogroupoid:
    """Objects X = E_q (cell B(X,X) named a,b,c,d) and Y = E over E's field."""
    field = E.field
    return Cogroupoid(field, {"X": e_q(field), "Y": E}, D, cell_options={
        ("X", "X"): {"names": OQ_NAMES, "precedence": OQ_PRECEDENCE, "label": "O_q(SL_2)"}})


def fusion_dims(m: int, kmax: int) -> List[int]:
    out = [1, m]
    while len(out) <= kmax:
        out.append(m * out[-1] - out[-2])
    return out[:kmax + 1]


@dataclass
class CotensorModule:
    source: Comodule
    Y: str
    D: int
    basis: List[Dict[Key, object]]
    pivots: List[Key]
    comodule: Optional[Comodule] = None

    @property
    def cog(self) -> Cogroupoid:
        return self.source.hopf.cog

    @property
    def X(self) -> str:
        return self.source.hopf.X

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def field(self):
        return self.source.field

    def coordinates(self, vec: Dict[Key, object]) -> Dict[int, object]:
        coords = {}
        resid = dict(vec)
        for t, p in enumerate(self.pivots):
            c = vec.get(p)
            if c:
                coords[t] = c
                add_into(resid, self.basis[t], -c)
        if resid:
            raise BasisEscape(f"element leaves the cotensor basis computed at degree {self.D}")
        return coords

    def element(self, coords: Dict[int, object]) -> Dict[Key, object]:
        out: dict = {}
        for t, c in coords.items():
            add_into(out, self.basis[t], c)
        return out

    def format_element(self, vec: Dict[Key, object]) -> str:
        from .freealg import NCPoly
        cell = self.cog.cell(self.X, self.Y)
        labels = self.source.labels or [f"e{i}" for i in range(self.source.dim)]
        by_i: Dict[int, dict] = defaultdict(dict)
        for (i, w), c in vec.items():
            by_i[i][w] = c
        parts = [f"{labels[i]} (x) ({NCPoly.from_words(self.field, cell.alphabet, t)})"
                 for i, t in sorted(by_i.items())]
        return " + ".join(parts) or "0"


def _max_degree(V: Comodule) -> int:
    return max((len(w) for row in V.matrix for e in row for w in e), default=0)


def _solve_cotensor(V: Comodule, Y: str, D: int) -> Tuple[List[dict], List[Key]]:
    h = V.hopf
    cog, X = h.cog, h.X
    cell = cog.cell(X, Y)
    cell.system.check_degree(D)
    words = cell.normal_words_upto(D)
    cols: List[Key] = [(i, u) for i in range(V.dim) for u in words]
    eqs: Dict[tuple, dict] = defaultdict(dict)
    one = h.field.one
    for idx, (i, u) in enumerate(cols):
        for k in range(V.dim):
            for cw, c in V.matrix[k][i].items():
                add_into(eqs[(k, cw, u)], {idx: c})
        for (w1, w2), c in cog.delta_terms(X, Y, X, {u: one}).items():
            add_into(eqs[(i, w1, w2)], {idx: -c})
    ech = Echelon(h.field)
    for key in sorted(eqs, key=lambda k: (k[0], len(k[1]), k[1], len(k[2]), k[2])):
        if eqs[key]:
            ech.add(eqs[key])
    kernel = ech.kernel(len(cols))
    basis = [{cols[j]: c for j, c in v.items()} for v in kernel]
    pivots = [cols[min(v)] for v in kernel]
    return basis, pivots


def cotensor(V: Comodule, Y: str, D: Optional[int] = None, probe: bool = True) -> CotensorModule:
    """V cotensor B(X,Y) truncated at degree D (default: degree of V's matrix coefficients).

    With ``probe`` the system is also solved at D+1 and a dimension change raises
    :class:`DimensionUnstable`.
    """
    if D is None:
        D = _max_degree(V)
    basis, pivots = _solve_cotensor(V, Y, D)
    if probe:
        bigger, _ = _solve_cotensor(V, Y, D + 1)
        if len(bigger) != len(basis):
            raise DimensionUnstable(f"cotensor dimension {len(basis)} at degree {D} "
                                    f"but {len(bigger)} at degree {D + 1}")
    cot = CotensorModule(V, Y, D, basis, pivots)
    cot.comodule = _transported_coaction(cot)
    return cot


def _transported_coaction(cot: CotensorModule) -> Comodule:
    cog, X, Y = cot.cog, cot.X, cot.Y
    hY = cog.hopf(Y)
    one = cot.field.one
    n = cot.dim
    C = [[{} for _ in range(n)] for _ in range(n)]
    for s, b in enumerate(cot.basis):
        groups: Dict[Word, dict] = defaultdict(dict)
        for (i, a), c in b.items():
            for (w1, w2), c2 in cog.delta_terms(X, Y, Y, {a: one}).items():
                add_into(groups[w2], {(i, w1): c * c2})
        for beta, vec in groups.items():
            if not vec:
                continue
            for t, c in cot.coordinates(vec).items():
                add_into(C[t][s], {beta: c})
    labels = [f"w{t}" for t in range(n)]
    return Comodule(hY, C, labels)


def transported_action(V: YDModule, cot: CotensorModule, vec: Dict[Key, object],
                       b: Dict[Word, object]) -> Dict[Key, object]:
    """vec <| b for b given as word terms over B(Y,Y); returns an element of V (x) B(X,Y)."""
    out: dict = {}
    for w, c in b.items():
        cur = dict(vec)
        for g in w:
            cur = _act_generator(V, cot, cur, g)
        add_into(out, cur, c)
    return out


def _act_generator(V: YDModule, cot: CotensorModule, vec: Dict[Key, object], g: int) -> Dict[Key, object]:
    cog, X, Y = cot.cog, cot.X, cot.Y
    f = cot.field
    one = f.one
    yy = cog.cell(Y, Y)
    yx = cog.cell(Y, X)
    xy = cog.cell(X, Y)
    xx = cog.cell(X, X)
    p, q = yy.alphabet.position(g)
    mx = xx.shape[0]
    raw: Dict[int, dict] = defaultdict(dict)
    for k in range(mx):
        s = cog.antipode_terms(Y, X, {(yx.gen(p, k),): one})
        if not s:
            continue
        for l in range(mx):
            M = V.actions[xx.gen(k, l)]
            tail = (xy.gen(l, q),)
            for (i, a), c in vec.items():
                for j, m in enumerate(M[i]):
                    if not m:
                        continue
                    cm = c * m
                    acc = raw[j]
                    for sw, sc in s.items():
                        add_into(acc, {sw + a + tail: cm * sc})
    out: dict = {}
    for j, t in raw.items():
        for w, c in xy.reduce(t).items():
            out[(j, w)] = c
    return out


def transport_yd(V: YDModule, Y: str, D: Optional[int] = None,
                 cot: Optional[CotensorModule] = None) -> Tuple[CotensorModule, YDModule]:
    """The transported YD module over B(Y,Y), expressed in the cotensor basis."""
    if cot is None:
        cot = cotensor(V.comodule, Y, D)
    ng = len(cot.cog.cell(Y, Y).alphabet)
    f = cot.field
    acts = []
    for g in range(ng):
        M = [[f.zero] * cot.dim for _ in range(cot.dim)]
        for s, b in enumerate(cot.basis):
            for t, c in cot.coordinates(_act_generator(V, cot, b, g)).items():
                M[s][t] = c
        acts.append(M)
    W = YDModule(cot.comodule, acts, f"{V.label} transported to {Y}")
    return cot, W


def omega_bar(c: ReducedCalculus, cot: CotensorModule, g: int) -> Dict[Key, object]:
    """sum omega(b_(2)) (x) S_{Y,X}(b_(1)) b_(3) for a generator b of B(Y,Y)."""
    cog, X, Y = cot.cog, cot.X, cot.Y
    one = cot.field.one
    yy, yx, xy, xx = cog.cell(Y, Y), cog.cell(Y, X), cog.cell(X, Y), cog.cell(X, X)
    p, q = yy.alphabet.position(g)
    mx = xx.shape[0]
    raw: Dict[int, dict] = defaultdict(dict)
    for k in range(mx):
        s = cog.antipode_terms(Y, X, {(yx.gen(p, k),): one})
        for l in range(mx):
            om = c.omega_word((xx.gen(k, l),))
            for j, v in om.items():
                for sw, sc in s.items():
                    add_into(raw[j], {sw + (xy.gen(l, q),): v * sc})
    return {(j, w): c2 for j, t in raw.items() for w, c2 in xy.reduce(t).items()}


def transport_calculus(c: ReducedCalculus, Y: str, D: Optional[int] = None,
                       transported: Optional[Tuple[CotensorModule, YDModule]] = None,
                       verify: bool = True, suite: str = "transport"):
    """(eta, cotensor, report): the transported calculus, inner with theta (x) 1."""
    cot, W = transported or transport_yd(c.module, Y, D)
    rep = Report()
    f = c.field
    lab = f"{c.label} -> {Y}"
    if c.is_inner:
        theta1 = cot.coordinates({(i, ()): v for i, v in c.theta.items()})
        eta = inner_calculus(W, theta1, label=lab, parts=c.parts)
    else:
        table = [cot.coordinates(omega_bar(c, cot, g)) for g in range(W.hopf.ngens)]
        eta = table_calculus(W, table, label=lab)
    ok = True
    escaped = False
    for g in range(W.hopf.ngens):
        try:
            val = cot.coordinates(omega_bar(c, cot, g))
        except BasisEscape:
            escaped = True
            ok = False
            continue
        diff = dict(val)
        add_into(diff, eta.table[g], -f.one)
        if diff:
            ok = False
    rep.add(suite, f"{lab}: omega-bar lands in the cotensor", not escaped, None, cot.D + 2)
    rep.add(suite, f"{lab}: inner form agrees with omega-bar on generators", ok, None, cot.D + 2)
    if verify:
        rep.extend(verify_calculus(eta, leibniz_degree=2, equivariance_degree=1, suite=suite))
    rep.data["dim"] = cot.dim
    return eta, cot, rep


def _matrix_rank(rows, field) -> int:
    ech = Echelon(field)
    for r in rows:
        ech.add({j: x for j, x in enumerate(r) if x})
    return ech.rank


def roundtrip_check(V: YDModule, Y: str, D: Optional[int] = None, D2: Optional[int] = None,
                    calculus: Optional[ReducedCalculus] = None, suite: str = "transport") -> Report:
    """theta_V: V -> (V cotensor B(X,Y)) cotensor B(Y,X) is a YD isomorphism (and a calculus map)."""
    h = V.hopf
    cog, X = h.cog, h.X
    f = h.field
    one = f.one
    rep = Report()
    cot1, W = transport_yd(V, Y, D)
    cot2, U = transport_yd(W, X, D2)
    rep.add(suite, f"{V.label}: double cotensor dimension", cot2.dim == V.dim,
            {"dim_V": V.dim, "dim_W": cot1.dim, "dim_U": cot2.dim}, cot2.D)
    # expand U's basis into V (x) B(X,Y) (x) B(Y,X)
    expanded = []
    for b in cot2.basis:
        e: dict = {}
        for (t, beta), c in b.items():
            for (i, alpha), c2 in cot1.basis[t].items():
                add_into(e, {(i, alpha, beta): c * c2})
        expanded.append(e)
    keys = sorted({k for e in expanded for k in e}, key=lambda k: (k[0], len(k[1]), k[1], len(k[2]), k[2]))
    kidx = {k: n for n, k in enumerate(keys)}
    theta = []
    escaped = False
    for j in range(V.dim):
        target: dict = {}
        for k in range(V.dim):
            for w, c in V.comodule.matrix[k][j].items():
                for (w1, w2), c2 in cog.delta_terms(X, X, Y, {w: one}).items():
                    add_into(target, {(k, w1, w2): c * c2})
        if any(k not in kidx for k in target):
            escaped = True
            theta.append([f.zero] * cot2.dim)
            continue
        rows = []
        rhs = []
        for key in keys:
            rows.append({s: e[key] for s, e in enumerate(expanded) if key in e})
            rhs.append(target.get(key, f.zero))
        sol = solve_affine(f, rows, rhs, cot2.dim)
        if sol is None:
            escaped = True
            sol = {}
        theta.append([sol.get(s, f.zero) for s in range(cot2.dim)])
    rep.add(suite, f"{V.label}: theta_V lands in the double cotensor", not escaped, None, cot2.D)
    square = cot2.dim == V.dim
    rank = _matrix_rank(theta, f)
    rep.add(suite, f"{V.label}: theta_V bijective", square and rank == V.dim, {"rank": rank}, None)
    vec = {i * U.dim + j: theta[i][j] for i in range(V.dim) for j in range(U.dim) if theta[i][j]}

    def satisfied(rows):
        for r in rows:
            acc = f.zero
            for k, c in r.items():
                v = vec.get(k)
                if v:
                    acc = acc + c * v
            if acc:
                return False
        return True

    rep.add(suite, f"{V.label}: theta_V colinear", satisfied(colinear_rows(V.comodule, U.comodule)))
    rep.add(suite, f"{V.label}: theta_V equivariant", satisfied(action_rows(V, U)))
    if calculus is not None:
        eta, _, r1 = transport_calculus(calculus, Y, transported=(cot1, W), verify=False)
        eta2, _, r2 = transport_calculus(eta, X, transported=(cot2, U), verify=False)
        rep.extend(r1)
        rep.extend(r2)
        ok = True
        for g in range(h.ngens):
            om = calculus.omega_word((g,))
            img: dict = {}
            for i, c in om.items():
                for s, t in enumerate(theta[i]):
                    if t:
                        add_into(img, {s: c * t})
            diff = dict(img)
            add_into(diff, eta2.table[g], -one)
            if diff:
                ok = False
        rep.add(suite, f"{calculus.label}: theta_V o omega equals the doubly transported omega", ok)
    rep.data["theta_V"] = [[str(x) for x in row] for row in theta]
    return rep
