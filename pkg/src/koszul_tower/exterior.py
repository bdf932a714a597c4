"""The exterior algebra on ``e_1..e_n`` over ``R``: wedge, Koszul differential, coproduct.

Elements are sparse maps from index subsets (sorted tuples, 0-based) to
polynomial coefficients.  Sign conventions:

* ``e_S ^ e_T`` carries the parity of the merge permutation of ``S`` then ``T``;
* ``d(c e_S) = sum_{j in S} (-1)^pos(j,S) c r_j e_{S - j}`` where ``pos`` counts
  the indices of ``S`` below ``j``;
* the twist is ``tau(e (x) f) = (-1)^{|e||f|} f (x) e``, homological degree only.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Mapping

from .polyring import Polynomial, RingContext
from .report import CheckReport

Subset = tuple


def merge_sign(S: Subset, T: Subset) -> int:
    """Sign of the shuffle putting ``S + T`` in order; 0 if they overlap."""
    if set(S) & set(T):
        return 0
    inv = sum(1 for s in S for t in T if s > t)
    return -1 if inv % 2 else 1


def all_subsets(n: int) -> Iterator[Subset]:
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)


def _add_into(terms: dict, key, coeff: Polynomial) -> None:
    cur = terms.get(key)
    new = coeff if cur is None else cur + coeff
    if new.is_zero():
        terms.pop(key, None)
    else:
        terms[key] = new


class ExteriorElement:
    """A sum of ``c_S e_S`` with polynomial coefficients ``c_S``."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingContext, terms: Mapping[Subset, Polynomial] | None = None):
        self.ctx = ctx
        clean = {}
        for S, c in (terms or {}).items():
            S = tuple(S)
            if list(S) != sorted(set(S)) or any(not 0 <= j < ctx.n for j in S):
                raise ValueError(f"bad index subset {S}")
            if not isinstance(c, Polynomial):
                c = ctx.ring.const(c)
            if not c.is_zero():
                clean[S] = c
        self.terms = clean

    @classmethod
    def basis(cls, ctx: RingContext, S: Subset) -> "ExteriorElement":
        return cls(ctx, {tuple(S): ctx.ring.one()})

    @classmethod
    def unit(cls, ctx: RingContext) -> "ExteriorElement":
        return cls.basis(ctx, ())

    @classmethod
    def gen(cls, ctx: RingContext, j: int) -> "ExteriorElement":
        return cls.basis(ctx, (j,))

    def is_zero(self) -> bool:
        return not self.terms

    def homological_degrees(self) -> set[int]:
        return {len(S) for S in self.terms}

    @property
    def hdeg(self) -> int:
        ks = self.homological_degrees()
        if len(ks) > 1:
            raise ValueError("element is not homogeneous in homological degree")
        return ks.pop() if ks else 0

    def homogeneous_bidegree(self):
        """``(k, internal degree)`` if all terms agree, else None."""
        degs = set()
        for S, c in self.terms.items():
            if not c.is_homogeneous():
                return None
            degs.add((len(S), c.degree + self.ctx.subset_degree(S)))
        return degs.pop() if len(degs) == 1 else None

    def __eq__(self, other):
        if not isinstance(other, ExteriorElement):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "ExteriorElement") -> "ExteriorElement":
        out = dict(self.terms)
        for S, c in other.terms.items():
            _add_into(out, S, c)
        return ExteriorElement(self.ctx, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExteriorElement":
        return ExteriorElement(self.ctx, {S: v * c for S, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ExteriorElement):
            return wedge(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __repr__(self):
        return f"ExteriorElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for S in sorted(self.terms, key=lambda S: (len(S), S)):
            e = "^".join(f"e{j + 1}" for j in S) or "1"
            parts.append(f"({self.terms[S]})*{e}")
        return " + ".join(parts)


class TensorElement:
    """An element of ``Lambda (x)_R Lambda``: map ``(S, T) -> coefficient``."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingContext, terms: Mapping[tuple[Subset, Subset], Polynomial] | None = None):
        self.ctx = ctx
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        return TensorElement(self.ctx, out)

    def scale(self, c) -> "TensorElement":
        return TensorElement(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "TensorElement(0)"
        parts = []
        for (S, T), c in sorted(self.terms.items()):
            a = "^".join(f"e{j + 1}" for j in S) or "1"
            b = "^".join(f"e{j + 1}" for j in T) or "1"
            parts.append(f"({c})*{a}(x){b}")
        return "TensorElement(" + " + ".join(parts) + ")"


def wedge(a: ExteriorElement, b: ExteriorElement) -> ExteriorElement:
    out: dict = {}
    for S, c in a.terms.items():
        for T, c2 in b.terms.items():
            sgn = merge_sign(S, T)
            if sgn:
                _add_into(out, tuple(sorted(S + T)), c * c2 * sgn)
    return ExteriorElement(a.ctx, out)


def koszul_diff(a: ExteriorElement) -> ExteriorElement:
    """The derivation with ``e_j -> r_j``."""
    seq = a.ctx.sequence
    out: dict = {}
    for S, c in a.terms.items():
        for pos, j in enumerate(S):
            coeff = c * seq[j]
            _add_into(out, S[:pos] + S[pos + 1:], coeff if pos % 2 == 0 else -coeff)
    return ExteriorElement(a.ctx, out)


def _subset_coproduct(S: Subset):
    for k in range(len(S) + 1):
        for L in itertools.combinations(S, k):
            R = tuple(j for j in S if j not in L)
            yield L, R, merge_sign(L, R)


def coproduct(a: ExteriorElement) -> TensorElement:
    """Algebra map with ``Delta(e_j) = 1 (x) e_j + e_j (x) 1``."""
    out: dict = {}
    for S, c in a.terms.items():
        for L, R, sgn in _subset_coproduct(S):
            _add_into(out, (L, R), c * sgn)
    return TensorElement(a.ctx, out)


def tensor_product(x: TensorElement, y: TensorElement) -> TensorElement:
    """Multiplication in ``Lambda (x) Lambda``: ``(a(x)b)(c(x)d) = (-1)^{|b||c|} ac (x) bd``."""
    out: dict = {}
    for (A, B), c1 in x.terms.items():
        for (C, Dd), c2 in y.terms.items():
            s1 = merge_sign(A, C)
            s2 = merge_sign(B, Dd)
            if not (s1 and s2):
                continue
            sgn = s1 * s2 * (-1 if (len(B) * len(C)) % 2 else 1)
            _add_into(out, (tuple(sorted(A + C)), tuple(sorted(B + Dd))), c1 * c2 * sgn)
    return TensorElement(x.ctx, out)


def twist(t: TensorElement) -> TensorElement:
    out: dict = {}
    for (S, T), c in t.terms.items():
        _add_into(out, (T, S), c if (len(S) * len(T)) % 2 == 0 else -c)
    return TensorElement(t.ctx, out)


def diff_tensor_one(t: TensorElement) -> TensorElement:
    """``d (x) 1``."""
    seq = t.ctx.sequence
    out: dict = {}
    for (S, T), c in t.terms.items():
        for pos, j in enumerate(S):
            coeff = c * seq[j]
            _add_into(out, (S[:pos] + S[pos + 1:], T), coeff if pos % 2 == 0 else -coeff)
    return TensorElement(t.ctx, out)


def tensor_diff(t: TensorElement) -> TensorElement:
    """``d(e (x) f) = d(e) (x) f + (-1)^{|e|} e (x) d(f)``."""
    seq = t.ctx.sequence
    out: dict = {}
    for (S, T), c in t.terms.items():
        for pos, j in enumerate(S):
            coeff = c * seq[j]
            _add_into(out, (S[:pos] + S[pos + 1:], T), coeff if pos % 2 == 0 else -coeff)
        sign_e = -1 if len(S) % 2 else 1
        for pos, j in enumerate(T):
            coeff = c * seq[j] * sign_e
            _add_into(out, (S, T[:pos] + T[pos + 1:]), coeff if pos % 2 == 0 else -coeff)
    return TensorElement(t.ctx, out)


def counit_left(t: TensorElement) -> ExteriorElement:
    """``(epsilon (x) 1)``: keep terms whose left factor is the unit."""
    return ExteriorElement(t.ctx, {T: c for (S, T), c in t.terms.items() if not S})


def counit_right(t: TensorElement) -> ExteriorElement:
    return ExteriorElement(t.ctx, {S: c for (S, T), c in t.terms.items() if not T})


def random_polynomial(ctx: RingContext, rng: random.Random, max_degree: int = 4,
                      coeff_range: int = 5, degree: int | None = None) -> Polynomial:
    """Random polynomial of (weighted) degree ``<= max_degree`` with coefficients in ``[-c, c]``.

    With ``degree`` given, the result is homogeneous of that degree.
    """
    ring = ctx.ring
    degrees = [degree] if degree is not None else range(max_degree + 1)
    mons = [m for d in degrees for m in ring.monomials(d)]
    chosen = rng.sample(mons, k=min(len(mons), rng.randint(1, 4)))
    return Polynomial(ring, {m: rng.randint(-coeff_range, coeff_range) for m in chosen})


def random_element(ctx: RingContext, rng: random.Random, k: int | None = None) -> ExteriorElement:
    """Random element, homogeneous of homological degree ``k`` if given."""
    subsets = list(all_subsets(ctx.n)) if k is None else list(itertools.combinations(range(ctx.n), k))
    chosen = rng.sample(subsets, k=min(len(subsets), rng.randint(1, 3)))
    return ExteriorElement(ctx, {S: random_polynomial(ctx, rng) for S in chosen})


IDENTITIES = ("d_squared", "derivation", "coproduct_colinear", "tensor_diff_coproduct",
              "cocommutative")


def _identity_failures(ctx: RingContext, a: ExteriorElement, b: ExteriorElement):
    """Yield the names of the identities violated by ``a`` (and the pair ``a, b``)."""
    da = koszul_diff(a)
    if not koszul_diff(da).is_zero():
        yield "d_squared"
    ka = a.hdeg
    lhs = koszul_diff(wedge(a, b))
    rhs = wedge(da, b) + (wedge(a, koszul_diff(b)) if ka % 2 == 0 else -wedge(a, koszul_diff(b)))
    if lhs != rhs:
        yield "derivation"
    delta = coproduct(a)
    delta_d = coproduct(da)
    if delta_d != diff_tensor_one(delta):
        yield "coproduct_colinear"
    if tensor_diff(delta) != delta_d.scale(2):
        yield "tensor_diff_coproduct"
    if twist(delta) != delta:
        yield "cocommutative"


def verify_bialgebra_identities(ctx: RingContext, trials: int = 100, seed: int = 0) -> CheckReport:
    """Check ``d^2 = 0``, the derivation rule, ``Delta d = (d(x)1) Delta``,
    ``d^(x) Delta = 2 Delta d`` and ``tau Delta = Delta``.

    First on all basis elements (all pairs for the derivation rule), then on
    ``trials`` seeded random elements with polynomial coefficients.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    report = CheckReport("BIALGEBRA", payload={"trials": trials, "seed": seed,
                                               "identities": list(IDENTITIES)})
    subsets = list(all_subsets(ctx.n))
    for S in subsets:
        for T in subsets:
            a = ExteriorElement.basis(ctx, S)
            b = ExteriorElement.basis(ctx, T)
            for name in _identity_failures(ctx, a, b):
                return report.fail({"identity": name, "element": str(a), "other": str(b)})
    rng = random.Random(seed)
    for _ in range(trials):
        k = rng.randint(0, ctx.n)
        a = random_element(ctx, rng, k)
        b = random_element(ctx, rng)
        for name in _identity_failures(ctx, a, b):
            return report.fail({"identity": name, "element": str(a), "other": str(b)})
    report.payload["basis_elements"] = len(subsets)
    return report
