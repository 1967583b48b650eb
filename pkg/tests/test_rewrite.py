from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bicov.cells import OQ_NAMES, oq, oq_rules_system
from bicov.freealg import Alphabet, NCPoly
from bicov.rewrite import (MonomialOrder, RewriteSystem, TruncationExceeded, CoefficientBlowup,
                           certify_confluence, complete, enumerate_normal_words, normal_form)
from bicov.scalars import SymbolicField

F = SymbolicField()
XY = Alphabet(("x", "y"), label="XY")
x, y = (NCPoly.gen(F, XY, n) for n in "xy")


def braid_classes(d: int) -> int:
    """Number of classes of length-d words under xyx <-> yxy, by flood fill."""
    seen = set()
    classes = 0
    for w in product("xy", repeat=d):
        w = "".join(w)
        if w in seen:
            continue
        classes += 1
        stack = [w]
        seen.add(w)
        while stack:
            u = stack.pop()
            for i in range(len(u) - 2):
                sub = u[i:i + 3]
                if sub in ("xyx", "yxy"):
                    v = u[:i] + ("yxy" if sub == "xyx" else "xyx") + u[i + 3:]
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
    return classes


def test_quantum_plane():
    s = complete([y * x - F.q * x * y], MonomialOrder.natural(2), 3)
    assert s.globally_confluent
    assert s.format_rules() == ["yx -> q*xy"]
    assert [len(enumerate_normal_words(s, d)) for d in range(6)] == [1, 2, 3, 4, 5, 6]
    assert normal_form(s, y * y * x) == F.q ** 2 * x * y * y


def test_braid_relation_truncated_completion():
    for D in (5, 7):
        s = complete([y * x * y - x * y * x], MonomialOrder.natural(2), D)
        assert not s.globally_confluent
        assert s.completed_degree == D
        # the infinite family y x^k y x -> x y x^2 y^(k-1), k >= 2
        assert len(s) == D - 3
        assert [len(enumerate_normal_words(s, d)) for d in range(D + 1)] == \
            [braid_classes(d) for d in range(D + 1)]
        assert certify_confluence(s, D).passed
    with pytest.raises(TruncationExceeded):
        s.reduce_terms({(1, 0, 0, 0, 0, 0, 0, 1, 0): F.one})


def test_oq_completion_is_the_seven_rules():
    H = oq()
    hand = oq_rules_system(F)
    assert len(H.system) == 7
    assert H.system.rules == hand.rules
    assert H.system.globally_confluent
    assert H.system.format_rules() == [
        "cb -> bc", "ab -> q^-1*ba", "ac -> q^-1*ca", "ad -> 1 + q^-1*bc",
        "db -> q*bd", "dc -> q*cd", "da -> 1 + q*bc"]


def test_oq_confluence_and_counts():
    s = oq().system
    rep = certify_confluence(s, 4)
    assert rep.passed and rep.checked > 0
    assert [len(enumerate_normal_words(s, d)) for d in range(6)] == [(d + 1) ** 2 for d in range(6)]


def test_oq_normal_form_examples():
    H = oq()
    assert str(H.cell.nf(H.cell.poly("dab"))) == "b + q*b^2c"
    assert str(H.cell.nf(H.cell.poly("ad"))) == "1 + q^-1*bc"


def test_broken_system_fails_certification():
    A = Alphabet.grid(2, 2, names=OQ_NAMES)
    order = MonomialOrder.from_precedence(A, "bcad")
    # drop the da rule's q: ad and da no longer agree on overlaps
    rules = {"cb": {"bc": 1}, "ab": {"ba": F.q.inverse()}, "ac": {"ca": F.q.inverse()},
             "ad": {"": 1, "bc": F.q.inverse()}, "db": {"bd": F.q}, "dc": {"cd": F.q},
             "da": {"": 1, "bc": 1}}
    s = RewriteSystem.from_rules(F, A, order, rules)
    rep = certify_confluence(s, 3)
    assert not rep.passed
    assert rep.failures


def test_rules_must_decrease():
    with pytest.raises(ValueError):
        RewriteSystem.from_rules(F, XY, MonomialOrder.natural(2), {"x": {"y": 1}})


def test_blowup_guard():
    with pytest.raises(CoefficientBlowup):
        complete([y * x * y - x * y * x], MonomialOrder.natural(2), 12, max_rules=3)


oq_words = st.lists(st.sampled_from(range(4)), max_size=4).map(tuple)


@given(oq_words, oq_words)
def test_nf_idempotent_and_multiplicative(u, v):
    s = oq().system
    nu, nv = s.nf_word(u), s.nf_word(v)
    assert s.reduce_terms(nu) == nu
    prod: dict = {}
    for w1, c1 in nu.items():
        for w2, c2 in nv.items():
            prod[w1 + w2] = prod.get(w1 + w2, F.zero) + c1 * c2
    assert s.reduce_terms({k: c for k, c in prod.items() if c}) == s.nf_word(u + v)


@given(oq_words)
def test_normal_words_are_irreducible(u):
    s = oq().system
    for w in s.nf_word(u):
        assert s.is_normal(w)
