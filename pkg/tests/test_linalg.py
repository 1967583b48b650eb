from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bicov.linalg import Echelon, Matrix, SingularMatrix, canonical_basis, nullspace, solve_affine
from bicov.report import Check, Report
from bicov.scalars import QuadraticField, SymbolicField

F = SymbolicField()
T3 = QuadraticField(3)

entries = st.integers(-3, 3)


def dense_rows(rows):
    return [{j: F(x) for j, x in enumerate(r) if x} for r in rows]


@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_rank_nullity_and_kernel(nrows, ncols, data):
    rows = data.draw(st.lists(st.lists(entries, min_size=ncols, max_size=ncols),
                              min_size=nrows, max_size=nrows))
    ech = Echelon(F)
    for r in dense_rows(rows):
        ech.add(r)
    ker = nullspace(F, dense_rows(rows), ncols)
    assert ech.rank + len(ker) == ncols
    for v in ker:
        for r in rows:
            assert sum((x * v.get(j, 0) for j, x in enumerate(r)), F.zero) == 0


@given(st.lists(st.lists(entries, min_size=3, max_size=3), min_size=1, max_size=4))
def test_canonical_basis_is_order_independent(rows):
    vecs = dense_rows(rows)
    assert canonical_basis(F, vecs) == canonical_basis(F, list(reversed(vecs)))


def test_solve_affine():
    rows = [{0: F.one, 1: F.one}, {1: F.one}]
    assert solve_affine(F, rows, [F(3), F(1)], 2) == {0: F(2), 1: F(1)}
    assert solve_affine(F, [{0: F.one}, {0: F.one}], [F(1), F(2)], 1) is None


@given(st.lists(st.lists(entries, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_and_det(rows):
    M = Matrix(T3, rows)
    if M.det():
        assert M @ M.inverse() == Matrix.identity(T3, 3)
        assert (M @ M).det() == M.det() * M.det()
    else:
        with pytest.raises(SingularMatrix):
            M.inverse()
    assert M.transpose().det() == M.det()


def test_matrix_over_q():
    E = Matrix(F, [[0, 1], [-F.q.inverse(), 0]])
    assert (E.inverse() @ E.transpose()).trace() == -(F.q + F.q.inverse())
    assert E.to_strings() == [["0", "1"], ["-q^-1", "0"]]
    with pytest.raises(ValueError):
        Matrix(F, [[1], [1, 2]])


def test_report_json_is_stable():
    r = Report()
    r.add("s", "b", True, {"z": 1, "a": 2}, 3)
    r.add("s", "a", "skipped")
    r.data["x"] = [Fraction(1, 2).numerator]
    text = r.to_json()
    assert text == r.to_json() and text.endswith("\n")
    assert text.index('"a": 2') < text.index('"z": 1')
    assert r.passed
    r.add("s", "c", False)
    assert r.status == "fail" and [c.name for c in r.failures()] == ["c"]
    with pytest.raises(ValueError):
        Check("s", "n", "maybe")
