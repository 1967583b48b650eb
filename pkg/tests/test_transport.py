import pytest

from bicov.calculus import inner_calculus
from bicov.cells import load_matrix, oq
from bicov.comodules import coinvariants, spin_comodule, verify_comodule
from bicov.linalg import Matrix
from bicov.scalars import QuadraticField, SymbolicField
from bicov.transport import (BasisEscape, DimensionUnstable, cotensor, fusion_dims, roundtrip_check,
                             transport_calculus, transport_cogroupoid, transport_yd)
from bicov.yd import verify_yd, yd_module

T3 = QuadraticField(3)
S = SymbolicField()


@pytest.fixture(scope="module")
def i3():
    return transport_cogroupoid(Matrix.identity(T3, 3), 6)


@pytest.fixture(scope="module")
def esym():
    E, _ = load_matrix({"field": {"mode": "symbolic"}, "rows": [["1", "s + s^-1"], ["0", "1"]]})
    return transport_cogroupoid(E, 6)


def _calc(hX, n, eps):
    V = yd_module(n, n, eps, hX)
    return inner_calculus(V, coinvariants(V.comodule)[0], label=f"omega_{n}^{eps}")


def test_fusion_dims():
    assert fusion_dims(2, 4) == [1, 2, 3, 4, 5]
    assert fusion_dims(3, 3) == [1, 3, 8, 21]
    for m in range(2, 6):
        assert fusion_dims(m, 2) == [1, m, m * m - 1]


@pytest.mark.parametrize("cog_name,m", [("i3", 3), ("esym", 2)])
def test_cotensor_dimensions(cog_name, m, request):
    cog = request.getfixturevalue(cog_name)
    hX = cog.hopf("X")
    assert [cotensor(spin_comodule(n, hX), "Y").dim for n in range(3)] == [1, m, m * m - 1]


def test_cotensor_with_itself_is_identity():
    # transporting along Y = X leaves the dimension unchanged
    cog = transport_cogroupoid(oq().cog.objects["Eq"], 6)
    hX = cog.hopf("X")
    for n in range(3):
        assert cotensor(spin_comodule(n, hX), "Y").dim == n + 1


def test_transported_comodule_is_a_comodule(i3):
    cot = cotensor(spin_comodule(1, i3.hopf("X")), "Y")
    assert verify_comodule(cot.comodule).passed
    assert cot.comodule.hopf is i3.hopf("Y")


def test_dimension_probe(i3):
    with pytest.raises(DimensionUnstable):
        cotensor(spin_comodule(1, i3.hopf("X")), "Y", D=0)


def test_basis_escape(i3):
    cot = cotensor(spin_comodule(1, i3.hopf("X")), "Y")
    with pytest.raises(BasisEscape):
        cot.coordinates({(0, ()): T3.one})
    assert cot.coordinates(cot.basis[0]) == {0: T3.one}


def test_transported_yd_module(i3):
    V = yd_module(1, 1, -1, i3.hopf("X"))
    cot, W = transport_yd(V, "Y")
    assert W.dim == 9
    assert verify_yd(W, degree=1).passed


@pytest.mark.parametrize("n,eps", [(0, -1), (1, 1), (1, -1)])
def test_transported_calculus_i3(i3, n, eps):
    eta, cot, rep = transport_calculus(_calc(i3.hopf("X"), n, eps), "Y")
    assert rep.passed, [c.name for c in rep.failures()]
    assert eta.rank == cot.dim == fusion_dims(3, 2)[n] ** 2


def test_transported_calculus_symbolic(esym):
    eta, cot, rep = transport_calculus(_calc(esym.hopf("X"), 1, 1), "Y")
    assert rep.passed
    assert eta.rank == cot.dim == 4


def test_roundtrip_i3(i3):
    hX = i3.hopf("X")
    V = yd_module(1, 1, -1, hX)
    rep = roundtrip_check(V, "Y", calculus=_calc(hX, 1, -1))
    assert rep.passed, [c.name for c in rep.failures()]
    assert len(rep.data["theta_V"]) == 4


def test_roundtrip_along_the_identity():
    cog = transport_cogroupoid(oq().cog.objects["Eq"], 6)
    hX = cog.hopf("X")
    rep = roundtrip_check(yd_module(1, 1, 1, hX), "Y", calculus=_calc(hX, 1, 1))
    assert rep.passed


def test_calculus_roundtrip_omega_0_i3(i3):
    hX = i3.hopf("X")
    rep = roundtrip_check(yd_module(0, 0, -1, hX), "Y", calculus=_calc(hX, 0, -1))
    assert rep.passed
    assert any("doubly transported omega" in c.name for c in rep.checks)


def test_transported_simples_stay_distinct(i3):
    from bicov.yd import yd_morphisms
    hX = i3.hopf("X")
    keys = [(0, -1), (1, 1), (1, -1)]
    W = {k: transport_yd(yd_module(k[0], k[0], k[1], hX), "Y")[1] for k in keys}
    for A in keys:
        for B in keys:
            if W[A].dim == W[B].dim:
                assert len(yd_morphisms(W[A], W[B])) == (1 if A == B else 0)
