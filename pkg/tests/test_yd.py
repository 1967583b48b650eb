import pytest

from bicov.cells import oq
from bicov.yd import (YDModule, c_epsilon, mat_mul, verify_yd, yd_condition_defect, yd_module,
                      yd_morphisms)

H = oq()
F = H.field
q = F.q
IDX = {g: H.alphabet.index(g) for g in "abcd"}


def test_v00_is_sign_character():
    for eps in (1, -1):
        V = yd_module(0, 0, eps)
        assert V.dim == 1
        assert V.actions[IDX["a"]] == [[F(eps)]]
        assert V.actions[IDX["d"]] == [[F(eps)]]
        assert V.actions[IDX["b"]] == [[0]] and V.actions[IDX["c"]] == [[0]]


def test_v11_diagonal_action():
    # e_(i,j) . a = q^(i-j) e_(i,j) for eps = +1
    V = yd_module(1, 1, 1)
    A = V.actions[IDX["a"]]
    assert [A[r][r] for r in range(4)] == [F.one, q.inverse(), q, F.one]
    assert all(not A[r][c] for r in range(4) for c in range(4) if r != c)


def test_words_multiply_in_row_convention():
    V = yd_module(1, 1, -1)
    w = H.alphabet.word("abd")
    M = mat_mul(mat_mul(V.actions[IDX["a"]], V.actions[IDX["b"]], F), V.actions[IDX["d"]], F)
    assert V.word_matrix(w) == M


@pytest.mark.parametrize("n,m", [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)])
@pytest.mark.parametrize("eps", [1, -1])
def test_yd_condition(n, m, eps):
    rep = verify_yd(yd_module(n, m, eps), degree=2)
    assert rep.passed, [c.name for c in rep.failures()]


def test_c_epsilon():
    ce = c_epsilon()
    assert verify_yd(ce, degree=2).passed
    assert len(yd_morphisms(yd_module(0, 0, 1), ce)) == 1
    assert yd_morphisms(yd_module(0, 0, -1), ce) == []


def test_corrupted_module_fails():
    V = yd_module(1, 1, 1)
    acts = [[row[:] for row in M] for M in V.actions]
    acts[IDX["a"]][0][0] = -acts[IDX["a"]][0][0]
    bad = YDModule(V.comodule, acts, "bad")
    rep = verify_yd(bad, degree=1)
    assert not rep.passed


def test_defect_is_empty_exactly_when_condition_holds():
    V = yd_module(1, 0, 1)
    for g in range(4):
        for v in range(V.dim):
            assert yd_condition_defect(V, (g,), v) == {}
    acts = [[row[:] for row in M] for M in V.actions]
    acts[IDX["b"]][1][0] = acts[IDX["b"]][1][0] + 1
    bad = YDModule(V.comodule, acts)
    assert any(yd_condition_defect(bad, (IDX["b"],), v) for v in range(V.dim))


def test_endomorphisms_and_cross_homs():
    mods = [(n, m, e) for n in range(2) for m in range(2) for e in (1, -1)]
    built = {k: yd_module(*k) for k in mods}
    for A in mods:
        for B in mods:
            assert len(yd_morphisms(built[A], built[B])) == (1 if A == B else 0)


def test_bad_epsilon():
    with pytest.raises(ValueError):
        yd_module(1, 1, 0)
