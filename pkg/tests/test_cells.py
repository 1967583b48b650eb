from fractions import Fraction

import pytest

from bicov.cells import (Cogroupoid, InvalidObject, TraceMismatch, e_q, hilbert_count, load_matrix,
                         make_cell, oq, solve_q, verify_cogroupoid_axioms)
from bicov.linalg import Matrix, SingularMatrix
from bicov.scalars import QuadraticField, RootOfUnity, SymbolicField

F = SymbolicField()
T3 = QuadraticField(3)
FIB = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]


def test_hilbert_oracle():
    # size 2 gives k+1; size 3 gives every other Fibonacci number
    for k in range(6):
        assert hilbert_count(2, 2, k) == (k + 1) ** 2
        assert hilbert_count(3, 3, k) == FIB[2 * k + 1] ** 2
        assert hilbert_count(2, 3, k) == (k + 1) * FIB[2 * k + 1]
    assert [hilbert_count(3, 3, k) for k in range(4)] == [1, 9, 64, 441]


def test_oq_hopf_structure_on_generators():
    H = oq()
    f = H.field
    q = f.q
    idx = {g: H.alphabet.index(g) for g in "abcd"}

    def S(g):
        return H.antipode({(idx[g],): f.one})

    assert S("a") == {(idx["d"],): f.one}
    assert S("d") == {(idx["a"],): f.one}
    assert S("b") == {(idx["b"],): -q}
    assert S("c") == {(idx["c"],): -q.inverse()}
    assert H.delta({(idx["b"],): f.one}) == {((idx["a"],), (idx["b"],)): f.one,
                                             ((idx["b"],), (idx["d"],)): f.one}
    assert [H.counit({(idx[g],): f.one}) for g in "abcd"] == [1, 0, 0, 1]


def test_antipode_is_antimultiplicative():
    H = oq()
    f = H.field
    w = H.alphabet.word("abd")
    lhs = H.antipode({w: f.one})
    # S(abd) = S(d) S(b) S(a) = a (-q b) d
    rhs = H.reduce({H.alphabet.word("abd"): -f.q})
    assert lhs == rhs


def test_oq_axioms_pass():
    rep = verify_cogroupoid_axioms(oq().cog)
    assert rep.passed, [c.name for c in rep.failures()]


def test_i3_cells_are_finite_and_match_counts():
    cog = Cogroupoid(T3, {"Eq": e_q(T3), "I3": Matrix.identity(T3, 3)}, 4)
    sizes = {"Eq": 2, "I3": 3}
    rules = {("Eq", "I3"): 16, ("I3", "Eq"): 16, ("I3", "I3"): 60, ("Eq", "Eq"): 7}
    for (X, Y), n in rules.items():
        cell = cog.cell(X, Y)
        assert cell.system.globally_confluent
        assert len(cell.system) == n
        counts = [len(cell.normal_words(k)) for k in range(5)]
        assert counts == [hilbert_count(sizes[X], sizes[Y], k) for k in range(5)]


def test_symbolic_cells_are_truncated():
    E = Matrix(F, [[1, F.s + F.s.inverse()], [0, 1]])
    cell = make_cell(e_q(F), E, 6)
    assert not cell.system.globally_confluent
    assert cell.system.completed_degree == 6
    assert [len(cell.normal_words(k)) for k in range(7)] == [(k + 1) ** 2 for k in range(7)]


def test_relation_count():
    # F^-1 a^t E a = I_n and a F^-1 a^t E = I_m: n^2 + m^2 entries
    cell = make_cell(e_q(T3), Matrix.identity(T3, 3), 2)
    assert len(cell.relations) == 4 + 9
    assert all(not cell.reduce(r.words()) for r in cell.relations)


def test_solve_q():
    assert solve_q(e_q(F)).mode == "symbolic"
    assert solve_q(Matrix.identity(F, 3)).trace == 3
    E = Matrix(F, [[1, F.s + F.s.inverse()], [0, 1]])
    assert solve_q(E).mode == "symbolic"
    with pytest.raises(RootOfUnity):
        solve_q(Matrix.identity(F, 2))
    with pytest.raises(TraceMismatch):
        solve_q(Matrix(F, [[1, F.s], [0, 1]]))


def test_load_matrix_documents():
    E, cfg = load_matrix({"field": {"mode": "quadratic", "trace": "3"},
                          "rows": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]})
    assert cfg.trace == Fraction(3) and E.field == T3
    E, cfg = load_matrix({"field": {"mode": "symbolic"}, "rows": [["1", "s + s^-1"], ["0", "1"]]})
    assert cfg.mode == "symbolic" and E.rows[0][1] == F.s + F.s.inverse()
    with pytest.raises(TraceMismatch):
        load_matrix({"field": {"mode": "symbolic"}, "rows": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]})
    with pytest.raises(TraceMismatch):
        load_matrix({"field": {"mode": "quadratic", "trace": "4"},
                     "rows": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]})
    with pytest.raises(ValueError):
        load_matrix({"field": {"mode": "quadratic"}, "rows": [["1", "q"], ["0", "1"]]})
    with pytest.raises(RootOfUnity):
        load_matrix({"field": {"mode": "quadratic"}, "rows": [["1", "1"], ["0", "1"]]})


def test_invalid_objects():
    with pytest.raises(InvalidObject):
        make_cell(Matrix(F, [[1]]), e_q(F), 2)
    with pytest.raises(InvalidObject):
        make_cell(Matrix(F, [[1, 0, 0], [0, 1, 0]]), e_q(F), 2)
    with pytest.raises(SingularMatrix):
        make_cell(Matrix(F, [[1, 1], [1, 1]]), e_q(F), 2)


def test_cogroupoid_trace_mismatch():
    with pytest.raises(TraceMismatch):
        Cogroupoid(T3, {"Eq": e_q(T3), "I2": Matrix.identity(T3, 2)}, 2)
