import random
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Poly, symbols

from koszul_tower.linalg import ExactMatrix, ModuleInvariants
from koszul_tower.modules import (build_ses, cached_ideal_power, cached_quotient, canonical_morphism,
                                  filtration_quotient, ideal_power, identity_morphism, zero_morphism)
from koszul_tower.polyring import RingContext
from koszul_tower.tor import (ConnectingMap, check_koszul_resolution, connecting_map, induced_map,
                              tor, tor_product, verify_leibniz)

from conftest import F2, F5, QQ, make_ctx
from oracles import homology_reference


def free_ranks(groups):
    return [g.total_rank() for g in groups]


# -- group computations ------------------------------------------------------


def test_tor_of_s_with_itself():
    ctx = RingContext.variables(2)
    S = filtration_quotient(ctx, 0, 1, 4)
    groups = tor(ctx, S)
    assert free_ranks(groups) == [1, 2, 1]
    assert groups[1].ranks() == {0: 0, 1: 2, 2: 0, 3: 0, 4: 0}
    assert groups[2].ranks()[2] == 1


def test_tor_of_free_module_is_s():
    ctx = RingContext.variables(3)
    groups = tor(ctx, ideal_power(ctx, 0, 5))
    assert free_ranks(groups) == [1, 0, 0, 0]


def test_tor_of_first_graded_piece():
    ctx = RingContext.variables(2)
    groups = tor(ctx, filtration_quotient(ctx, 1, 2, 4))
    assert free_ranks(groups) == [2, 4, 2]


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("s", [0, 1, 2])
def test_tor_of_graded_pieces_has_binomial_ranks(n, s):
    ctx = RingContext.variables(n)
    groups = tor(ctx, filtration_quotient(ctx, s, s + 1, s + n + 1))
    for k, g in enumerate(groups):
        assert g.is_free()
        assert g.total_rank() == comb(n, k) * comb(n + s - 1, n - 1)
        assert g.ranks()[s + k] == g.total_rank()


def test_prime_field_and_rational_ranks_match_integers():
    for base in (QQ, F2, F5):
        ctx = RingContext.variables(2, base)
        groups = tor(ctx, filtration_quotient(ctx, 1, 3, 5))
        zctx = RingContext.variables(2)
        ref = tor(zctx, filtration_quotient(zctx, 1, 3, 5))
        assert free_ranks(groups) == free_ranks(ref)


def test_torsion_appears_for_non_monic_sequence():
    ctx = make_ctx(["2*x", "y"])
    groups = tor(ctx, ideal_power(ctx, 0, 3))
    assert groups[0].torsion_cells()[1] == (2,)


def test_threads_give_the_same_cells():
    ctx = RingContext.variables(3)
    a = tor(ctx, filtration_quotient(ctx, 1, 3, 5), threads=4)
    ctx2 = RingContext.variables(3)
    b = tor(ctx2, filtration_quotient(ctx2, 1, 3, 5))
    assert [g.summary() for g in a] == [g.summary() for g in b]


def _oracle_koszul(seq_strs, names, D):
    """Koszul homology of R built from sympy polynomials."""
    gens = symbols(names)
    env = dict(zip(names, gens))
    seq = [Poly(eval(s, {}, env), *gens) for s in seq_strs]
    n = len(seq)

    def monos(d):
        return sorted((m for m in Poly(sum(gens) ** d, *gens).monoms()), reverse=True) if d >= 0 else []

    def basis(k, d):
        return [(T, m) for T in combinations(range(n), k)
                for m in monos(d - sum(seq[j].total_degree() for j in T))]

    def diff(k, d):
        src, tgt = basis(k, d), basis(k - 1, d)
        idx = {b: i for i, b in enumerate(tgt)}
        rows = [[0] * len(src) for _ in tgt]
        for c, (T, m) in enumerate(src):
            mono = Poly(dict([(m, 1)]), *gens)
            for pos, j in enumerate(T):
                prod = mono * seq[j]
                U = T[:pos] + T[pos + 1:]
                for mm, coeff in prod.terms():
                    rows[idx[(U, mm)]][c] += (-1) ** pos * int(coeff)
        return rows, len(tgt), len(src)

    out = {}
    for d in range(D + 1):
        for k in range(n + 1):
            m = len(basis(k, d))
            d_out = diff(k, d)[0] if k >= 1 else []
            d_in = diff(k + 1, d)[0] if k < n else [[] for _ in range(m)]
            out[(k, d)] = homology_reference(d_in, d_out, m) if m else (0, ())
    return out


@pytest.mark.parametrize("seq", [["x", "y"], ["x", "x"], ["x**2", "x*y"], ["2*x", "y"],
                                 ["x**2 + y**2", "x*y"], ["x*y", "x*y"]])
def test_koszul_homology_matches_sympy_oracle(seq):
    D = 5
    ctx = make_ctx(seq)
    groups = tor(ctx, ideal_power(ctx, 0, D))
    ref = _oracle_koszul(seq, ["x", "y"], D)
    for (k, d), (free, tors) in ref.items():
        assert groups[k].invariants(d) == ModuleInvariants(free, tors), (k, d)


def test_koszul_resolution_check():
    assert check_koszul_resolution(RingContext.variables(3), 6).passed
    assert check_koszul_resolution(make_ctx(["x**2", "y**3"]), 8).passed
    rep = check_koszul_resolution(make_ctx(["x", "x"]), 4)
    assert not rep.passed
    assert rep.witness["k"] == 1
    assert rep.witness["cycle"] in ("(1)*e1 + (-1)*e2", "(-1)*e1 + (1)*e2")


# -- induced maps ------------------------------------------------------------


def test_induced_identity_and_zero():
    ctx = RingContext.variables(2)
    Q = filtration_quotient(ctx, 1, 3, 4)
    tor(ctx, Q)
    for (k, d), M in induced_map(ctx, identity_morphism(Q)).items():
        assert M == ExactMatrix.identity(M.rows, ctx.base)
    R = ideal_power(ctx, 0, 4)
    tor(ctx, R)
    assert all(M.is_zero() for M in induced_map(ctx, zero_morphism(Q, R)).values())


def test_induced_projection_in_degree_one():
    """p_1: I -> I/I^2 is an isomorphism on Tor_0 in degree 1 for the variable sequence."""
    ctx = RingContext.variables(2)
    I, Q = ideal_power(ctx, 1, 4), filtration_quotient(ctx, 1, 2, 4)
    tor(ctx, I), tor(ctx, Q)
    M = induced_map(ctx, canonical_morphism(I, Q))[(0, 1)]
    assert M.shape == (2, 2) and abs(M.to_dense()[0][0] * M.to_dense()[1][1] -
                                     M.to_dense()[0][1] * M.to_dense()[1][0]) == 1


# -- connecting maps ---------------------------------------------------------


def _det(M):
    from sympy import Matrix
    return Matrix(M.to_dense()).det() if M.rows else 1


def test_connecting_map_of_r_over_i():
    ctx = RingContext.variables(2)
    ses = build_ses(ctx, "R_OVER_I", 0, 4)
    for g in (ses.A, ses.B, ses.C):
        tor(ctx, g)
    cm = connecting_map(ses)
    # delta: Tor_1(S, S) -> Tor_0(S, I) sends e_j to -{x_j}
    M = cm.matrix(1, 1)
    assert M == ExactMatrix.identity(2, ctx.base).scale(-1)
    for k in (1, 2):
        for d in range(5):
            M = cm.matrix(k, d)
            assert M.rows == M.cols
            assert abs(_det(M)) == 1


def test_connecting_map_is_independent_of_lift_strategy():
    ctx = make_ctx(["x**2", "y**3"])
    for s in (0, 1, 2):
        for tag in ("E", "F"):
            ses = build_ses(ctx, tag, s, 8)
            for g in (ses.A, ses.B, ses.C):
                tor(ctx, g)
            a, b = connecting_map(ses), connecting_map(ses, "reversed")
            for k in (1, 2):
                for d in range(9):
                    assert a.matrix(k, d) == b.matrix(k, d)


def _exact(f, g, rel_mid):
    """im f == ker g in a free middle module over Z (relations empty)."""
    from koszul_tower.linalg import Homology
    h = Homology(f, g, rel_mid=rel_mid, check=True)
    return h.invariants.is_zero


def test_long_exact_sequence_at_tor_c():
    """im(p_*) = ker(delta) on Tor_k(S, C) for E^1 of the variable sequence."""
    ctx = RingContext.variables(2)
    ses = build_ses(ctx, "E", 1, 5)
    for g in (ses.A, ses.B, ses.C):
        tor(ctx, g)
    cm = connecting_map(ses)
    from koszul_tower.tor import InducedMap
    pstar = InducedMap(ses.p)
    for k in (1, 2):
        for d in range(6):
            P, Dm = pstar.matrix(k, d), cm.matrix(k, d)
            assert (Dm @ P).is_zero()
            assert _exact(P, Dm, ExactMatrix.zero(P.rows, 0, ctx.base))


def test_mutated_connecting_sign_is_visible():
    ctx = RingContext.variables(2)
    ses = build_ses(ctx, "R_OVER_I", 0, 3)
    for g in (ses.A, ses.B, ses.C):
        tor(ctx, g)
    original = ConnectingMap.SIGN
    try:
        ConnectingMap.SIGN = 1
        M = ConnectingMap(ses).matrix(1, 1)
    finally:
        ConnectingMap.SIGN = original
    assert M == ExactMatrix.identity(2, ctx.base)


# -- products ----------------------------------------------------------------


def test_products_in_tor_of_s():
    ctx = RingContext.variables(2)
    S = cached_quotient(ctx, 0, 1, 4)
    G = tor(ctx, S)
    one = G[0].basis_class(0, 0)
    e1, e2 = G[1].basis_class(1, 0), G[1].basis_class(1, 1)
    top = tor_product(ctx, S, e1, e2)
    assert top.k == 2 and abs(top.coords[0]) == 1
    assert tor_product(ctx, S, e2, e1).coords == tuple(-c for c in top.coords)
    assert tor_product(ctx, S, e1, e1).is_zero()
    assert tor_product(ctx, S, one, e1).coords == e1.coords


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_products_are_associative(seed):
    ctx = RingContext.variables(3)
    S = cached_quotient(ctx, 0, 1, 4)
    G = tor(ctx, S)
    rng = random.Random(seed)
    cls = []
    for _ in range(3):
        k = rng.randint(0, 1)
        cls.append(G[k].basis_class(k, rng.randrange(G[k].ngens(k))))
    a, b, c = cls
    assert tor_product(ctx, S, tor_product(ctx, S, a, b), c).coords == \
        tor_product(ctx, S, a, tor_product(ctx, S, b, c)).coords


@pytest.mark.parametrize("base", [None, F2])
def test_leibniz_rule(base):
    ctx = RingContext.variables(2, base) if base else RingContext.variables(2)
    rep = verify_leibniz(ctx, build_ses(ctx, "SINGEXP", 3, 6))
    assert rep.passed, rep.witness
    assert rep.payload["pairs_checked"] > 0


def test_leibniz_on_weighted_sequence():
    ctx = make_ctx(["x**2", "y**3"])
    assert verify_leibniz(ctx, build_ses(ctx, "SINGEXP", 2, 8)).passed


def test_leibniz_refuses_non_algebra():
    ctx = RingContext.variables(2)
    with pytest.raises(ValueError):
        verify_leibniz(ctx, build_ses(ctx, "E", 1, 4))
