from math import comb

import pytest

from koszul_tower.linalg import ExactMatrix, kernel_basis
from koszul_tower.model import (coaction, model_basis, model_differential, sym_monomials, term_rank,
                                verify_colinearity, verify_model_exactness)
from koszul_tower.modules import ideal_power
from koszul_tower.polyring import RingContext
from koszul_tower.tor import tor

from conftest import F2, F5, QQ, ZZ
from oracles import snf_invariants


def test_sym_monomials_order():
    assert sym_monomials(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert sym_monomials(3, 0) == ((0, 0, 0),)
    assert len(sym_monomials(3, 3)) == comb(5, 2)


def test_basis_order():
    assert model_basis(2, 1, 1) == (((1, 0), (0,)), ((1, 0), (1,)), ((0, 1), (0,)), ((0, 1), (1,)))
    assert model_basis(2, -1, 0) == ()


def test_model_differential_examples():
    assert model_differential(1, 0, 1, ZZ).to_dense() == [[1]]
    assert model_differential(2, 0, 1, ZZ) == ExactMatrix.identity(2, ZZ)
    # e1 ^ e2 -> f1 (x) e2 - f2 (x) e1
    col = model_differential(2, 0, 2, ZZ).column(0)
    tgt = model_basis(2, 1, 1)
    assert {tgt[i]: v for i, v in col.items()} == {((1, 0), (1,)): 1, ((0, 1), (0,)): -1}
    assert model_differential(3, 2, 0, ZZ).shape == (0, term_rank(3, 2, 0))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_differentials_compose_to_zero(n):
    for s in range(3):
        for k in range(2, n + 1):
            assert (model_differential(n, s + 1, k - 1, ZZ) @ model_differential(n, s, k, ZZ)).is_zero()


@pytest.mark.parametrize("base", [ZZ, QQ, F2, F5])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_exactness_and_colinearity(base, n):
    rep = verify_model_exactness(n, 4, base)
    assert rep.passed, rep.witness
    assert verify_colinearity(n, 4, base).passed


def test_kernels_over_integers_are_direct_summands():
    for n in (2, 3):
        for s in range(3):
            for k in range(1, n + 1):
                K = kernel_basis(model_differential(n, s, k, ZZ))
                if K.cols:
                    assert snf_invariants(K.to_dense()) == [1] * K.cols


def test_exactness_detects_broken_differential():
    import koszul_tower.model as model
    original = model.model_differential

    def broken(n, s, k, base):
        M = original(n, s, k, base)
        return M.scale(2) if (s, k) == (0, 1) else M

    try:
        model.model_differential = broken
        assert not verify_model_exactness(2, 2, ZZ).passed
    finally:
        model.model_differential = original


def test_coaction_is_counital():
    co = coaction(2, 1, 2, ZZ)
    assert co.cols == term_rank(2, 1, 2)
    assert all(len(co.column(c)) == 4 for c in range(co.cols))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_kernel_ranks_match_tor_of_powers(n):
    """rank ker(∂^s on Sym^s ⊗ Λ_k) equals rank Tor_k(S, I^s) for the variable sequence."""
    ctx = RingContext.variables(n)
    rep = verify_model_exactness(n, 3, ZZ)
    for s in range(1, 3):
        groups = tor(ctx, ideal_power(ctx, s, s + n + 1))
        for k in range(n + 1):
            K = kernel_basis(model_differential(n, s, k, ZZ))
            assert groups[k].total_rank() == K.cols
            assert rep.payload["kernel_ranks"][f"{s},{k}"] == K.cols
