import pytest

from bicov.cells import oq
from bicov.comodules import (CellMismatch, Comodule, coinvariants, comodule_morphisms,
                             spin_comodule, tensor_comodule, trivial_comodule, verify_comodule)
from bicov.scalars import QuadraticField


def _entry(V, k, i):
    return V.entry_str(k, i)


def test_v1_is_the_matrix_coaction():
    V = spin_comodule(1)
    assert [[_entry(V, k, i) for i in range(2)] for k in range(2)] == [["d", "c"], ["b", "a"]]


def test_v2_first_column():
    V = spin_comodule(2)
    assert [_entry(V, k, 0) for k in range(3)] == ["d^2", "(q^2 + 1)*bd", "b^2"]


@pytest.mark.parametrize("n", range(5))
def test_spin_comodules_are_comodules(n):
    rep = verify_comodule(spin_comodule(n))
    assert rep.passed


def test_broken_coaction_detected():
    H = oq()
    V = spin_comodule(1)
    M = [row[:] for row in V.matrix]
    M[0][0], M[1][1] = M[1][1], M[0][0]
    assert not verify_comodule(Comodule(H, M)).passed


@pytest.mark.parametrize("n", range(4))
@pytest.mark.parametrize("m", range(4))
def test_coinvariant_dimensions(n, m):
    V = tensor_comodule(spin_comodule(n), spin_comodule(m))
    assert len(coinvariants(V)) == (1 if n == m else 0)


def test_theta_one():
    H = oq()
    th = coinvariants(tensor_comodule(spin_comodule(1), spin_comodule(1)))
    # v0 (x) v1 - q v1 (x) v0
    assert th == [{1: H.field.one, 2: -H.field.q}]


def test_schur_and_clebsch_gordan():
    V = [spin_comodule(n) for n in range(4)]
    for n in range(4):
        assert len(comodule_morphisms(V[n], V[n])) == 1
    assert comodule_morphisms(V[1], V[2]) == []
    V11 = tensor_comodule(V[1], V[1])
    # V_1 (x) V_1 = V_0 + V_2
    assert len(comodule_morphisms(V11, V[0])) == 1
    assert len(comodule_morphisms(V[2], V11)) == 1
    assert len(comodule_morphisms(V11, V11)) == 2


def test_morphisms_are_colinear():
    V11 = tensor_comodule(spin_comodule(1), spin_comodule(1))
    (T,) = comodule_morphisms(V11, spin_comodule(0))
    th = coinvariants(V11)[0]
    # the projection to V_0 does not kill theta_1
    assert sum((c * T[i][0] for i, c in th.items()), V11.field.zero) != 0


def test_trivial_comodule():
    H = oq()
    C = trivial_comodule(H, 2)
    assert verify_comodule(C).passed
    assert len(coinvariants(C)) == 2


def test_cell_mismatch():
    other = oq(QuadraticField(3))
    with pytest.raises(CellMismatch):
        tensor_comodule(spin_comodule(1), spin_comodule(1, other))


def test_negative_spin():
    with pytest.raises(ValueError):
        spin_comodule(-1)
