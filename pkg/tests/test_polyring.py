import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Poly, symbols

from koszul_tower.exterior import random_polynomial
from koszul_tower.polyring import (PolyRing, Polynomial, RingContext, check_regular_sequence,
                                   graded_piece_basis, mult_matrix)

from conftest import ZZ, make_ctx


def test_graded_piece_basis_examples():
    ctx = RingContext.variables(2)
    assert graded_piece_basis(ctx, 2) == [(2, 0), (1, 1), (0, 2)]
    assert graded_piece_basis(RingContext.variables(1), 5) == [(5,)]
    weighted = PolyRing(ZZ, ["x", "y"], [1, 2])
    assert graded_piece_basis(weighted, 4) == [(4, 0), (2, 1), (0, 2)]
    assert graded_piece_basis(ctx, 0) == [(0, 0)]


def _series_coefficients(weights, upto):
    coeffs = [1] + [0] * upto
    for w in weights:
        # multiply by 1 / (1 - t^w)
        for d in range(w, upto + 1):
            coeffs[d] += coeffs[d - w]
    return coeffs


@pytest.mark.parametrize("weights", [(1,), (1, 1), (1, 2), (2, 3, 1), (1, 1, 1, 1)])
def test_piece_sizes_match_generating_function(weights):
    ring = PolyRing(ZZ, [f"v{i}" for i in range(len(weights))], list(weights))
    expected = _series_coefficients(weights, 20)
    assert [len(ring.monomials(d)) for d in range(21)] == expected


def test_mult_matrix_examples():
    ctx = RingContext.variables(2)
    x, y = ctx.ring.gens()
    assert mult_matrix(ctx, ctx.ring.one(), 3).to_dense() == [[1, 0, 0, 0], [0, 1, 0, 0],
                                                              [0, 0, 1, 0], [0, 0, 0, 1]]
    assert mult_matrix(ctx, x, 1).to_dense() == [[1, 0], [0, 1], [0, 0]]
    assert mult_matrix(ctx, x + y, 1).to_dense() == [[1, 0], [1, 1], [0, 1]]
    with pytest.raises(ValueError):
        mult_matrix(ctx, x + y * y, 1)


def test_polynomial_arithmetic_matches_sympy():
    X, Y = symbols("x y")
    ring = PolyRing(ZZ, ["x", "y"])
    x, y = ring.gens()
    p = (x + 2 * y) ** 3 - x * y * (x - y)
    q = Poly((X + 2 * Y) ** 3 - X * Y * (X - Y), X, Y)
    assert {m: c for m, c in p.terms.items()} == {m: int(c) for m, c in q.terms()}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 2**31))
def test_mult_matrix_is_multiplicative(df, dg, d, seed):
    ctx = make_ctx(["x", "y"], weights=[1, 2])
    rng = random.Random(seed)
    f = random_polynomial(ctx, rng, degree=df)
    g = random_polynomial(ctx, rng, degree=dg)
    if f.is_zero() or g.is_zero():
        return
    lhs = mult_matrix(ctx, f * g, d)
    rhs = mult_matrix(ctx, f, d + dg) @ mult_matrix(ctx, g, d)
    assert lhs == rhs


def test_context_validation():
    ring = PolyRing(ZZ, ["x", "y"])
    x, y = ring.gens()
    with pytest.raises(ValueError):
        RingContext(ring, [x + y * y, y])
    with pytest.raises(ValueError):
        RingContext(ring, [ring.zero(), y])


def test_regularity_examples():
    assert check_regular_sequence(RingContext.variables(2), 8).passed
    rep = check_regular_sequence(make_ctx(["x", "x"]), 4)
    assert not rep.passed
    assert rep.witness["j"] == 2 and rep.witness["witness"] == "1"
    assert check_regular_sequence(make_ctx(["x**2", "y**3"]), 8).passed


def test_regularity_detects_proper_ideal_failure():
    rep = check_regular_sequence(make_ctx(["x*y", "x"]), 4)
    assert not rep.passed


def test_regularity_invariant_under_permutation():
    ctx = RingContext.variables(3)
    for perm in itertools.permutations(ctx.sequence):
        assert check_regular_sequence(RingContext(ctx.ring, perm), 6).passed


def test_mixed_sequence_regular():
    assert check_regular_sequence(make_ctx(["x**2 + y**2", "x*y"]), 8).passed
    assert not check_regular_sequence(make_ctx(["x**2", "x*y"]), 8).passed
