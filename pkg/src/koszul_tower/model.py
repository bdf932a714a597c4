"""The model complex ``Sym^s(W) ⊗ Λ_k(V)`` with differential ``Σ f_i ⊗ ∂/∂e_i``.

Built straight over the base ring from exponent tuples and index subsets,
without the polynomial-ring layer, so it can serve as an independent oracle.
Bases of ``Sym^s ⊗ Λ_k`` are ordered monomial first (decreasing lex on
exponent tuples), then subset (``itertools.combinations`` order).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

from .linalg import BaseRing, ExactMatrix, Homology, Quotient
from .report import CheckReport


@lru_cache(maxsize=None)
def sym_monomials(n: int, s: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples of total degree ``s`` in ``n`` letters, decreasing lex."""
    if n == 0:
        return ((),) if s == 0 else ()
    out = []
    for a in range(s, -1, -1):
        for rest in sym_monomials(n - 1, s - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def model_basis(n: int, s: int, k: int) -> tuple:
    """``[(alpha, T)]`` indexing ``Sym^s ⊗ Λ_k``."""
    if s < 0 or not 0 <= k <= n:
        return ()
    return tuple((a, T) for a in sym_monomials(n, s) for T in combinations(range(n), k))


@lru_cache(maxsize=None)
def _index(n: int, s: int, k: int) -> dict:
    return {b: i for i, b in enumerate(model_basis(n, s, k))}


def _shuffle_sign(L, R) -> int:
    """Sign of the permutation sorting the concatenation ``L + R`` (disjoint)."""
    inv = sum(1 for a in L for b in R if a > b)
    return -1 if inv % 2 else 1


def model_differential(n: int, s: int, k: int, base: BaseRing) -> ExactMatrix:
    """``∂^s: Sym^s ⊗ Λ_k -> Sym^{s+1} ⊗ Λ_{k-1}``."""
    if not 0 <= k <= n or s < 0:
        raise ValueError("need 0 <= k <= n and s >= 0")
    src = model_basis(n, s, k)
    tgt = _index(n, s + 1, k - 1) if k >= 1 else {}
    cols = []
    for alpha, T in src:
        col = {}
        for pos, i in enumerate(T):
            beta = alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]
            col[tgt[(beta, T[:pos] + T[pos + 1:])]] = base(-1 if pos % 2 else 1)
        cols.append(col)
    return ExactMatrix.from_columns(len(tgt), cols, base)


def term_rank(n: int, s: int, k: int) -> int:
    return comb(n + s - 1, n - 1) * comb(n, k) if s >= 0 and 0 <= k <= n else 0


def _unit_map(n: int, base: BaseRing) -> ExactMatrix:
    """``ε: S -> Λ_0 = Sym^0 ⊗ Λ_0``."""
    return ExactMatrix.identity(1, base)


def verify_model_exactness(n: int, s_max: int, base: BaseRing) -> CheckReport:
    """Exactness at every node ``(s, k)`` with ``s < s_max`` of each diagonal ``s + k = m``.

    Nodes at ``s = s_max`` are exempt: their outgoing map leaves the
    truncation.  Over ``Z`` the cokernel of every ``∂^s`` is also checked to be
    torsion free, so kernels are direct summands.
    """
    rep = CheckReport("MODEL_EXACT")
    if s_max < 1:
        raise ValueError("s_max must be at least 1")
    for s in range(s_max):
        for k in range(n + 1):
            if k >= 1 and s + 1 <= s_max:
                prod = model_differential(n, s + 1, k - 1, base) @ model_differential(n, s, k, base)
                if not prod.is_zero():
                    return rep.fail({"s": s, "k": k, "reason": "consecutive differentials do not compose to zero"})
    kernel_ranks = {}
    for m in range(n + s_max + 1):
        for s in range(0, min(m, s_max - 1) + 1):
            k = m - s
            if k > n:
                continue
            size = term_rank(n, s, k)
            if s == 0:
                d_in = _unit_map(n, base) if k == 0 else ExactMatrix.zero(size, 0, base)
            else:
                d_in = model_differential(n, s - 1, k + 1, base) if k + 1 <= n else \
                    ExactMatrix.zero(size, 0, base)
            d_out = model_differential(n, s, k, base)
            h = Homology(d_in, d_out)
            kernel_ranks[f"{s},{k}"] = h.cycles.cols
            if not h.invariants.is_zero:
                return rep.fail({"s": s, "k": k, "homology": h.invariants.to_json()})
    if not base.is_field:
        for s in range(s_max):
            for k in range(1, n + 1):
                M = model_differential(n, s, k, base)
                q = Quotient(M.rows, M.columns(), base)
                if q.invariants.torsion:
                    return rep.fail({"s": s, "k": k, "cokernel_torsion": list(q.invariants.torsion)})
    for m in range(1, min(s_max, n + s_max) + 1):
        alt = sum((-1) ** s * term_rank(n, s, m - s) for s in range(m + 1))
        if alt != 0:
            return rep.fail({"diagonal": m, "alternating_rank_sum": alt})
    rep.payload.update({"n": n, "s_max": s_max, "base": str(base), "kernel_ranks": kernel_ranks,
                        "truncation": f"nodes with s = {s_max} exempt"})
    return rep


def coaction(n: int, s: int, k: int, base: BaseRing) -> ExactMatrix:
    """``1 ⊗ Δ: Sym^s ⊗ Λ_k -> Sym^s ⊗ (Λ ⊗ Λ)_k``; target indexed by ``split_basis``."""
    tgt = _split_index(n, s, k)
    cols = []
    for alpha, T in model_basis(n, s, k):
        col = {}
        for a in range(k + 1):
            for L in combinations(T, a):
                R = tuple(i for i in T if i not in L)
                col[tgt[(alpha, L, R)]] = base(_shuffle_sign(L, R))
        cols.append(col)
    return ExactMatrix.from_columns(len(tgt), cols, base)


@lru_cache(maxsize=None)
def split_basis(n: int, s: int, k: int) -> tuple:
    """``[(alpha, L, R)]`` with ``|L| + |R| = k`` indexing ``Sym^s ⊗ (Λ ⊗ Λ)_k``."""
    out = []
    for alpha in sym_monomials(n, s):
        for a in range(k + 1):
            for L in combinations(range(n), a):
                for R in combinations(range(n), k - a):
                    out.append((alpha, L, R))
    return tuple(out)


@lru_cache(maxsize=None)
def _split_index(n: int, s: int, k: int) -> dict:
    return {b: i for i, b in enumerate(split_basis(n, s, k))}


def _diff_tensor_one(n: int, s: int, k: int, base: BaseRing) -> ExactMatrix:
    """``∂^s ⊗ 1`` on ``Sym^s ⊗ Λ ⊗ Λ`` (acting on the left exterior factor)."""
    tgt = _split_index(n, s + 1, k - 1)
    cols = []
    for alpha, L, R in split_basis(n, s, k):
        col = {}
        for pos, i in enumerate(L):
            beta = alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]
            col[tgt[(beta, L[:pos] + L[pos + 1:], R)]] = base(-1 if pos % 2 else 1)
        cols.append(col)
    return ExactMatrix.from_columns(len(tgt), cols, base)


def _counit_right(n: int, s: int, k: int, base: BaseRing) -> ExactMatrix:
    """``1 ⊗ 1 ⊗ ε``: keep the terms whose right factor is empty."""
    tgt = _index(n, s, k)
    cols = []
    for alpha, L, R in split_basis(n, s, k):
        cols.append({tgt[(alpha, L)]: base(1)} if not R else {})
    return ExactMatrix.from_columns(len(tgt), cols, base)


def _coassoc_sides(n: int, s: int, k: int, base: BaseRing):
    """Both composites ``Sym^s ⊗ Λ_k -> Sym^s ⊗ Λ^{⊗3}`` as dicts of columns."""
    left, right = [], []
    for alpha, T in model_basis(n, s, k):
        lc, rc = {}, {}
        for a in range(k + 1):
            for L in combinations(T, a):
                R = tuple(i for i in T if i not in L)
                sg = _shuffle_sign(L, R)
                for b in range(len(L) + 1):
                    for L1 in combinations(L, b):
                        L2 = tuple(i for i in L if i not in L1)
                        key = (alpha, L1, L2, R)
                        lc[key] = lc.get(key, 0) + sg * _shuffle_sign(L1, L2)
                for b in range(len(R) + 1):
                    for R1 in combinations(R, b):
                        R2 = tuple(i for i in R if i not in R1)
                        key = (alpha, L, R1, R2)
                        rc[key] = rc.get(key, 0) + sg * _shuffle_sign(R1, R2)
        p = base.modulus
        left.append({kk: v % p if p else v for kk, v in lc.items() if (v % p if p else v)})
        right.append({kk: v % p if p else v for kk, v in rc.items() if (v % p if p else v)})
    return left, right


def verify_colinearity(n: int, s_max: int, base: BaseRing) -> CheckReport:
    """``(1⊗Δ)∘∂^s = (∂^s⊗1)∘(1⊗Δ)`` for ``s <= s_max``, plus comodule laws and ``ε``."""
    rep = CheckReport("MODEL_COLINEAR")
    if s_max < 1:
        raise ValueError("s_max must be at least 1")
    for s in range(s_max + 1):
        for k in range(n + 1):
            co = coaction(n, s, k, base)
            if not (_counit_right(n, s, k, base) @ co) == ExactMatrix.identity(co.cols, base):
                return rep.fail({"s": s, "k": k, "law": "counit"})
            lft, rgt = _coassoc_sides(n, s, k, base)
            if lft != rgt:
                return rep.fail({"s": s, "k": k, "law": "coassociativity"})
            if k == 0 or s >= s_max:
                continue
            lhs = coaction(n, s + 1, k - 1, base) @ model_differential(n, s, k, base)
            rhs = _diff_tensor_one(n, s, k, base) @ co
            if lhs != rhs:
                diff = lhs - rhs
                j = next(c for c in range(diff.cols) if diff.column(c))
                alpha, T = model_basis(n, s, k)[j]
                return rep.fail({"s": s, "k": k, "basis_element": [list(alpha), list(T)]})
    # ε: S -> Λ_0 against the trivial coaction s ↦ s ⊗ 1
    eps = _unit_map(n, base)
    if coaction(n, 0, 0, base) @ eps != ExactMatrix.identity(1, base):
        return rep.fail({"law": "unit map is not colinear"})
    rep.payload.update({"n": n, "s_max": s_max, "base": str(base)})
    return rep


__all__ = [
    "sym_monomials",
    "model_basis",
    "model_differential",
    "term_rank",
    "coaction",
    "split_basis",
    "verify_model_exactness",
    "verify_colinearity",
]
