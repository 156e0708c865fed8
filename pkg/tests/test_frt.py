from fractions import Fraction

import pytest

from ckquantum.classical import Signature, Sym, build_C0, identity_perm, prime
from ckquantum.frt import (
    antipode_matrix,
    apply_counit,
    build_C_matrix,
    build_R_matrix,
    build_rho,
    build_T_sigma,
    counit_values,
    exact_matrix,
    numeric_matrix,
    orthogonality_residual,
    q_power,
    rtt_residual,
    yang_baxter_residual,
    yang_baxter_residual_float,
)
from ckquantum.matrix import SparseMatrix
from ckquantum.nilpotent import Pim, Q2i, monomial

F = Fraction


def test_rho():
    assert build_rho(5) == (F(3, 2), F(1, 2), 0, F(-1, 2), F(-3, 2))
    assert build_rho(4) == (1, 0, 0, -1)
    assert build_rho(3) == (F(1, 2), 0, F(-1, 2))
    for N in range(3, 8):
        rho = build_rho(N)
        assert all(rho[k - 1] == -rho[prime(k, N) - 1] for k in range(1, N + 1))


def test_q_power():
    v = Pim.v()
    i1 = Pim.iota(1)
    assert q_power(F(1, 2), monomial(1)) == 1 + v * i1 * F(1, 2)
    assert q_power(0, 0) == 1
    assert q_power(1, 0) == Pim.exp_rate(1)


def test_C_matrix_N3():
    # entry (i, i') carries q**rho_{i'}
    C = build_C_matrix(3)
    assert C[(1, 3)] == Pim.exp_rate(F(-1, 2))
    assert C[(2, 2)] == 1
    assert C[(3, 1)] == Pim.exp_rate(F(1, 2))
    Cj = build_C_matrix(3, J=monomial(1))
    v, i1 = Pim.v(), Pim.iota(1)
    assert Cj[(1, 3)] == 1 - v * i1 * F(1, 2)
    assert Cj[(3, 1)] == 1 + v * i1 * F(1, 2)


@pytest.mark.parametrize("N", [3, 4, 5, 6, 7])
def test_C_matrix_limit_and_involution(N):
    C = build_C_matrix(N)
    assert C.map(lambda x: x.drop_exponentials()) == build_C0(N)
    assert (C @ C - SparseMatrix.identity(N, Pim.scalar(1))).is_zero()


@pytest.mark.parametrize("N", [3, 4])
def test_R_classical_limit(N):
    R = build_R_matrix(N).map(lambda x: x.drop_exponentials())
    assert (R - SparseMatrix.identity(N * N, Pim.scalar(1))).is_zero()


def test_R_contracted_entries_truncate():
    R = build_R_matrix(3, J=monomial(1))
    for x in R.entries.values():
        assert all(k[2] == 0 for k in x.terms)  # no exponentials survive


def test_yang_baxter_formal_N3():
    assert yang_baxter_residual(build_R_matrix(3), 3).is_zero()


def test_yang_baxter_specialised_N3():
    R = exact_matrix(build_R_matrix(3), F(13, 10))
    assert yang_baxter_residual(R, 3, Q2i.ONE).is_zero()


def test_yang_baxter_contracted_N3():
    assert yang_baxter_residual(build_R_matrix(3, J=monomial(1)), 3).is_zero()


def test_yang_baxter_float():
    assert yang_baxter_residual_float(4, 1.3) < 1e-12
    R = numeric_matrix(build_R_matrix(3), 1.3)
    assert R.shape == (9, 9)


def test_counit():
    eps = counit_values(5)
    assert eps[Sym(0, 1, 1)] == 1
    assert eps[Sym(0, 3, 3)] == 1
    assert eps[Sym(2, 1, 1)] == 0
    assert eps[Sym(0, 1, 2)] == 0
    for N in (3, 4, 5):
        I = SparseMatrix.identity(N, Pim.scalar(1))
        for sig in Signature.all(N):
            assert (apply_counit(build_T_sigma(N, identity_perm(N), sig), N) - I).is_zero()


def _shifted(T, N, J):
    rho = build_rho(N)
    out = {}
    for i in range(1, N + 1):
        for k in range(1, N + 1):
            c = q_power(rho[prime(i, N) - 1] + rho[k - 1], J)
            cell = {g: x * c for g, x in T[(prime(k, N), prime(i, N))].items()}
            out[(i, k)] = {g: x for g, x in cell.items() if x}
    return out


@pytest.mark.parametrize("N,sigma,nil,J", [
    (3, (1, 2, 3), {1}, 0),
    (4, (1, 3, 4, 2), {1, 2}, monomial(1)),
    (5, (1, 2, 3, 4, 5), {2, 3}, monomial(2, 3)),
])
def test_antipode_is_shifted_transpose(N, sigma, nil, J):
    sig = Signature(N, nil)
    T = build_T_sigma(N, sigma, sig)
    S = antipode_matrix(T, build_C_matrix(N, sig, J))
    expect = _shifted(T, N, J)
    assert {p: c for p, c in S.items() if c} == {p: c for p, c in expect.items() if c}


def test_antipode_anti_diagonal_cell():
    N = 5
    T = build_T_sigma(N, identity_perm(N), Signature(N))
    S = antipode_matrix(T, build_C_matrix(N))
    rho = build_rho(N)
    for k in range(1, N + 1):
        factor = q_power(2 * rho[k - 1], 0)
        assert S[(prime(k, N), k)] == {g: x * factor for g, x in T[(prime(k, N), k)].items()}


def test_orthogonality_residual_shapes():
    T = build_T_sigma(3, identity_perm(3), Signature(3))
    first, second = orthogonality_residual(T, build_C_matrix(3))
    assert len(first) == len(second) == 9
    # -C sits in the empty word of anti-diagonal entries only
    assert () in first[(1, 3)] and () not in first[(1, 1)]


def test_rtt_residual_keys():
    T = build_T_sigma(3, identity_perm(3), Signature(3))
    res = rtt_residual(T, build_R_matrix(3), 3)
    assert all(1 <= r <= 9 and 1 <= c <= 9 for r, c in res)
