"""Verification suites run by ``bicov verify``.

Each suite is a list of independent tasks (top-level functions with plain
arguments) so that they can be farmed out to worker processes; reports are
merged in task order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

from .calculus import (NotSurjective, classify, direct_sum, extension_and_split, inner_calculus,
                       simple_calculus, verify_calculus)
from .cells import (Cogroupoid, e_q, load_matrix, oq, oq_rules_system,
                    verify_cogroupoid_axioms)
from .comodules import (coinvariants, comodule_morphisms, spin_comodule, tensor_comodule,
                        verify_comodule)
from .linalg import Matrix
from .report import Report
from .rewrite import certify_confluence, enumerate_normal_words
from .scalars import FieldConfig
from .transport import (cotensor, fusion_dims, roundtrip_check, transport_calculus,
                        transport_cogroupoid, transport_yd)
from .yd import c_epsilon, verify_yd, yd_module, yd_morphisms

__all__ = ["SUITES", "run_suite", "default_matrices", "load_entry"]

SIMPLES = [(0, -1), (1, 1), (1, -1), (2, 1), (2, -1)]


def _sign(e: int) -> str:
    return "+1" if e == 1 else "-1"


# matrices are passed to workers as (kind, payload) so they pickle cheaply
def default_matrices() -> List[tuple]:
    return [("doc", {"field": {"mode": "symbolic"}, "rows": [["1", "s + s^-1"], ["0", "1"]]}),
            ("doc", {"field": {"mode": "quadratic"}, "rows": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]})]


def load_entry(entry: tuple) -> Tuple[Matrix, FieldConfig]:
    kind, payload = entry
    return load_matrix(payload)


def _describe(E: Matrix) -> list:
    return [[str(x) for x in r] for r in E.rows]


# ---------------------------------------------------------------------------
# oq-core

def task_rewriting(max_degree: int) -> Report:
    rep = Report()
    suite = "oq-core"
    H = oq()
    sysm = H.system
    hand = oq_rules_system(H.field)
    rep.add(suite, "completion yields the 7-rule system", len(sysm) == 7 and sysm.rules == hand.rules,
            {"rules": sysm.format_rules()})
    conf = certify_confluence(sysm, max_degree)
    rep.add(suite, "critical pairs resolve", conf.passed, {"checked": conf.checked}, max_degree)
    counts = [len(enumerate_normal_words(sysm, d)) for d in range(6)]
    rep.add(suite, "normal word counts (d+1)^2", counts == [(d + 1) ** 2 for d in range(6)],
            {"counts": counts}, 5)
    nf = H.cell.poly(H.reduce({H.alphabet.word("dab"): H.field.one}))
    rep.add(suite, "normal form of dab", str(nf) == "b + q*b^2c", {"nf": str(nf)}, 3)
    return rep


def task_hopf(max_degree: int) -> Report:
    H = oq()
    rep = verify_cogroupoid_axioms(H.cog, suite="oq-core")
    f = H.field
    a = H.alphabet.index("a")
    left: dict = {}
    for (w1, w2), c in H.delta({(a,): f.one}).items():
        for s, cs in H.antipode({w1: f.one}).items():
            left[s + w2] = left.get(s + w2, f.zero) + c * cs
    val = H.reduce({k: v for k, v in left.items() if v})
    rep.add("oq-core", "antipode law on a", val == {(): f.one}, {"value": str(H.cell.poly(val))}, 2)
    return rep


def task_comodules(max_n: int) -> Report:
    rep = Report()
    suite = "oq-core"
    for n in range(max_n + 1):
        rep.extend(verify_comodule(spin_comodule(n), suite=suite, name=f"V_{n}"))
    dims = []
    ok = True
    for n in range(4):
        row = []
        for m in range(4):
            d = len(coinvariants(tensor_comodule(spin_comodule(n), spin_comodule(m))))
            row.append(d)
            ok &= d == (1 if n == m else 0)
        dims.append(row)
    rep.add(suite, "coinvariant dimensions of V_n (x) V_m", ok, {"dims": dims})
    th = coinvariants(tensor_comodule(spin_comodule(1), spin_comodule(1)))
    H = oq()
    want = {1: H.field.one, 2: -H.field.q}
    rep.add(suite, "theta_1 = v0(x)v1 - q v1(x)v0", len(th) == 1 and th[0] == want,
            {"theta": {str(k): str(v) for k, v in th[0].items()} if th else None})
    schur = [len(comodule_morphisms(spin_comodule(n), spin_comodule(n))) for n in range(4)]
    rep.add(suite, "End(V_n) is one-dimensional", schur == [1] * 4, {"dims": schur})
    return rep


# ---------------------------------------------------------------------------
# yd

def task_yd_module(n: int, m: int, eps: int) -> Report:
    V = yd_module(n, m, eps)
    rep = verify_yd(V, degree=2)
    rep.add("yd", f"{V.label} End is one-dimensional", len(yd_morphisms(V, V)) == 1)
    return rep


def task_yd_cross() -> Report:
    rep = Report()
    mods = [(n, m, e) for n in range(3) for m in range(3) for e in (1, -1)]
    built = {k: yd_module(*k) for k in mods}
    bad = []
    for i, A in enumerate(mods):
        for B in mods[i + 1:]:
            if yd_morphisms(built[A], built[B]):
                bad.append([list(A), list(B)])
    rep.add("yd", "cross Homs vanish for n,m <= 2", not bad, {"nonzero": bad})
    ce = c_epsilon()
    rep.extend(verify_yd(ce, degree=2))
    rep.add("yd", "Hom(V_{0,0}^+1, C_eps) is one-dimensional",
            len(yd_morphisms(yd_module(0, 0, 1), ce)) == 1)
    bad_mod = yd_module(1, 1, 1)
    bad_mod.actions[0][0][0] = -bad_mod.actions[0][0][0]
    neg = verify_yd(bad_mod, degree=1)
    rep.add("yd", "corrupted action is rejected", not neg.passed)
    return rep


# ---------------------------------------------------------------------------
# calculus

def task_calculus_simple(n: int, eps: int, roundtrip_degree: int) -> Report:
    rep = Report()
    c = simple_calculus(n, eps)
    rep.add("calculus", f"{c.label} full rank", c.rank == (n + 1) ** 2,
            {"rank": c.rank}, c.degree_used)
    rep.extend(verify_calculus(c, roundtrip_degree=roundtrip_degree, cross_check_degree=3))
    _, _, theta, split = extension_and_split(c)
    rep.extend(split)
    rep.add("calculus", f"{c.label} recovered theta equals theta_{n}", theta == c.theta)
    return rep


def task_calculus_global(roundtrip_degree: int) -> Report:
    rep = Report()
    max_dim = 9
    suite = "calculus"
    try:
        simple_calculus(0, 1)
        rep.add(suite, "V_0^+1 is not surjective", False)
    except NotSurjective as exc:
        rep.add(suite, "V_0^+1 is not surjective", True, {"rank": exc.rank})
    res = classify(max_dim)
    nonzero = [r for r in res if r["kind"] != "zero"]
    simples = [r for r in nonzero if r["kind"] == "simple"]
    rep.add(suite, f"classify({max_dim}): 9 calculi, 5 of them simple",
            (len(nonzero), len(simples)) == (9, 5), {"calculi": [r["parts"] for r in nonzero]})
    rep.add(suite, f"classify({max_dim}) members verify", all(r.get("status") == "pass" for r in nonzero))
    try:
        direct_sum([simple_calculus(1, 1), simple_calculus(1, 1)])
        rep.add(suite, "duplicated summand rejected", False)
    except NotSurjective as exc:
        rep.add(suite, "duplicated summand rejected", True, {"pair": list(exc.pair)})
    for r in nonzero:
        if r["kind"] != "sum":
            continue
        c = direct_sum([simple_calculus(n, e) for n, e in r["parts"]])
        rep.extend(verify_calculus(c, roundtrip_degree=roundtrip_degree))
        _, _, _, split = extension_and_split(c)
        rep.extend(split)
    return rep


# ---------------------------------------------------------------------------
# cogroupoid / transport

def task_cogroupoid(entry: tuple, truncation: int) -> Report:
    E, cfg = load_entry(entry)
    field = E.field
    cog = Cogroupoid(field, {"E_q": e_q(field), "E": E}, truncation)
    rep = verify_cogroupoid_axioms(cog)
    rep.data.setdefault("matrices", []).append({"E": _describe(E), "field": cfg.to_json()})
    return rep


def task_transport_dims(entry: tuple, truncation: int) -> Report:
    E, cfg = load_entry(entry)
    cog = transport_cogroupoid(E, truncation)
    hX = cog.hopf("X")
    m = E.size
    dims = [cotensor(spin_comodule(n, hX), "Y").dim for n in range(3)]
    want = fusion_dims(m, 2)
    rep = Report()
    rep.add("transport", f"cotensor dimensions for E={_describe(E)}", dims == want,
            {"dims": dims, "expected": want, "field": cfg.to_json()}, 3)
    return rep


def task_transport_calculus(entry: tuple, n: int, eps: int, truncation: int) -> Report:
    E, cfg = load_entry(entry)
    cog = transport_cogroupoid(E, truncation)
    hX = cog.hopf("X")
    V = yd_module(n, n, eps, hX)
    c = inner_calculus(V, coinvariants(V.comodule)[0], label=f"omega_{n}^{_sign(eps)}")
    eta, cot, rep = transport_calculus(c, "Y")
    rep.add("transport", f"eta_{n}^{_sign(eps)} full rank for E={_describe(E)}",
            eta.rank == cot.dim, {"rank": eta.rank, "dim": cot.dim}, eta.degree_used)
    return rep


def task_transport_distinct(entry: tuple, truncation: int) -> Report:
    """Transported simple modules stay pairwise non-isomorphic."""
    E, cfg = load_entry(entry)
    cog = transport_cogroupoid(E, truncation)
    hX = cog.hopf("X")
    keys = [(0, -1), (1, 1), (1, -1)]
    mods = {k: transport_yd(yd_module(k[0], k[0], k[1], hX), "Y")[1] for k in keys}
    bad = [[list(A), list(B)] for i, A in enumerate(keys) for B in keys[i + 1:]
           if mods[A].dim == mods[B].dim and yd_morphisms(mods[A], mods[B])]
    rep = Report()
    rep.add("transport", f"transported simples pairwise non-isomorphic for E={_describe(E)}",
            not bad, {"isomorphic": bad})
    return rep


def task_roundtrip(entry: tuple, n: int, eps: int, truncation: int) -> Report:
    E, cfg = load_entry(entry)
    cog = transport_cogroupoid(E, truncation)
    hX = cog.hopf("X")
    V = yd_module(n, n, eps, hX)
    c = inner_calculus(V, coinvariants(V.comodule)[0], label=f"omega_{n}^{_sign(eps)}")
    rep = roundtrip_check(V, "Y", calculus=c)
    rep.data.pop("theta_V", None)
    return rep


def suite_tasks(name: str, *, max_degree: int = 4, truncation: Optional[int] = None,
                matrices: Optional[Sequence[tuple]] = None) -> List[Tuple[Callable, tuple]]:
    mats = list(matrices) if matrices else default_matrices()
    if name == "oq-core":
        return [(task_rewriting, (max_degree,)), (task_hopf, (max_degree,)), (task_comodules, (4,))]
    if name == "yd":
        return [(task_yd_module, (n, m, e)) for n in range(3) for m in range(3) for e in (1, -1)] + \
               [(task_yd_cross, ())]
    if name == "calculus":
        return [(task_calculus_simple, (n, e, 3)) for n, e in SIMPLES] + \
               [(task_calculus_global, (3,))]
    if name == "cogroupoid":
        return [(task_cogroupoid, (m, truncation or max_degree)) for m in mats]
    if name == "transport":
        t = truncation or 6
        tasks = []
        for m in mats:
            tasks.append((task_transport_dims, (m, t)))
            for n, e in [(0, -1), (1, 1), (1, -1)]:
                tasks.append((task_transport_calculus, (m, n, e, t)))
            tasks.append((task_transport_distinct, (m, t)))
            tasks.append((task_roundtrip, (m, 1, -1, t)))
        return tasks
    raise KeyError(name)


SUITES = ("oq-core", "yd", "calculus", "cogroupoid", "transport")


def _run(task):
    fn, args = task
    return fn(*args)


def run_suite(name: str, jobs: int = 1, **kw) -> Report:
    tasks = suite_tasks(name, **kw)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_run, tasks))
    else:
        parts = [_run(t) for t in tasks]
    rep = Report()
    for p in parts:
        rep.extend(p)
    rep.data["suite"] = name
    return rep
