"""Positively graded polynomial rings ``S[x_1..x_n]`` and regular-sequence contexts."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .linalg import BaseRing, ExactMatrix, NO_SOLUTION, Solver, kernel_basis
from .report import CheckReport

Monomial = tuple  # exponent vector


@lru_cache(maxsize=None)
def _monomials(weights: tuple[int, ...], d: int) -> tuple[Monomial, ...]:
    """Exponent vectors of weighted degree ``d``, in decreasing lex order."""
    if d < 0:
        return ()
    n = len(weights)
    if n == 0:
        return ((),) if d == 0 else ()
    w = weights[0]
    out = []
    for a in range(d // w, -1, -1):
        for rest in _monomials(weights[1:], d - a * w):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_index(weights: tuple[int, ...], d: int) -> dict:
    return {m: i for i, m in enumerate(_monomials(weights, d))}


class PolyRing:
    """``base[x_1..x_n]`` with positive integer weights."""

    def __init__(self, base: BaseRing, names: Sequence[str], weights: Sequence[int] | None = None):
        names = tuple(names)
        if not names:
            raise ValueError("need at least one variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        weights = tuple(int(w) for w in (weights or [1] * len(names)))
        if len(weights) != len(names) or any(w <= 0 for w in weights):
            raise ValueError("weights must be positive, one per variable")
        self.base = base
        self.names = names
        self.weights = weights

    @property
    def n(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.base == other.base
                and self.names == other.names and self.weights == other.weights)

    def __hash__(self):
        return hash((self.base, self.names, self.weights))

    def __repr__(self):
        return f"PolyRing({self.base}[{','.join(self.names)}], weights={list(self.weights)})"

    def monomial_degree(self, m: Monomial) -> int:
        return sum(w * a for w, a in zip(self.weights, m))

    def monomials(self, d: int) -> tuple[Monomial, ...]:
        return _monomials(self.weights, d)

    def monomial_index(self, d: int) -> dict:
        return _monomial_index(self.weights, d)

    def gen(self, i: int) -> "Polynomial":
        e = [0] * self.n
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.n)]

    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * self.n: 1})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.n: c})

    def from_coords(self, d: int, vec: Mapping[int, object]) -> "Polynomial":
        mons = self.monomials(d)
        return Polynomial(self, {mons[i]: v for i, v in vec.items()})


class Polynomial:
    """Sparse polynomial; ``terms`` maps exponent tuples to nonzero scalars."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, object] | None = None):
        self.ring = ring
        base = ring.base
        clean = {}
        for m, c in (terms or {}).items():
            c = base(c)
            if c:
                if len(m) != ring.n:
                    raise ValueError(f"exponent {m} does not match {ring.n} variables")
                clean[tuple(m)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, ring: PolyRing, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        return self.ring.const(other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.base.modulus
        out = dict(self.terms)
        for m, c in other.terms.items():
            t = out.get(m, 0) + c
            if p:
                t %= p
            if t:
                out[m] = t
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ring.base(other)
            p = self.ring.base.modulus
            if not c:
                return self.ring.zero()
            return Polynomial._raw(self.ring, {m: (v * c % p if p else v * c)
                                               for m, v in self.terms.items()})
        other = self._coerce(other)
        p = self.ring.base.modulus
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t = out.get(m, 0) + c1 * c2
                if p:
                    t %= p
                if t:
                    out[m] = t
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        out = self.ring.one()
        for _ in range(e):
            out = out * self
        return out

    def degrees(self) -> set[int]:
        return {self.ring.monomial_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        """Degree of a nonzero homogeneous polynomial."""
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError(f"{self} is not a nonzero homogeneous polynomial")
        return next(iter(ds))

    def coords(self, d: int | None = None) -> dict:
        """Sparse coordinates in the basis :func:`graded_piece_basis` of degree ``d``."""
        if d is None:
            d = self.degree if self.terms else 0
        idx = self.ring.monomial_index(d)
        try:
            return {idx[m]: c for m, c in self.terms.items()}
        except KeyError:
            raise ValueError(f"{self} has terms outside degree {d}") from None

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (self.ring.monomial_degree(m), m), reverse=True):
            c = self.terms[m]
            mon = "*".join(f"{x}^{a}" if a > 1 else x for x, a in zip(self.ring.names, m) if a)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


class RingContext:
    """The ring ``R``, its base ring and the homogeneous sequence ``r_1..r_n``."""

    def __init__(self, ring: PolyRing, sequence: Sequence[Polynomial]):
        seq = tuple(sequence)
        if not seq:
            raise ValueError("the sequence must have at least one element")
        for j, r in enumerate(seq):
            if r.ring != ring:
                raise ValueError(f"r_{j + 1} lives in another ring")
            if r.is_zero():
                raise ValueError(f"r_{j + 1} is zero")
            if not r.is_homogeneous():
                raise ValueError(f"r_{j + 1} = {r} is not homogeneous")
        self.ring = ring
        self.sequence = seq
        self.seq_degrees = tuple(r.degree for r in seq)
        self._cache: dict = {}

    @classmethod
    def variables(cls, n: int, base: BaseRing | None = None) -> "RingContext":
        """``base[x_1..x_n]`` with the sequence of variables."""
        base = base or BaseRing.integers()
        names = ["x", "y", "z", "w"][:n] if n <= 4 else [f"x{i + 1}" for i in range(n)]
        ring = PolyRing(base, names)
        return cls(ring, ring.gens())

    @property
    def base(self) -> BaseRing:
        return self.ring.base

    @property
    def n(self) -> int:
        return len(self.sequence)

    def subset_degree(self, subset: Iterable[int]) -> int:
        return sum(self.seq_degrees[j] for j in subset)

    def with_base(self, base: BaseRing) -> "RingContext":
        ring = PolyRing(base, self.ring.names, self.ring.weights)
        return RingContext(ring, [Polynomial(ring, r.terms) for r in self.sequence])

    def describe(self) -> dict:
        return {"base": str(self.base), "vars": list(self.ring.names),
                "weights": list(self.ring.weights), "sequence": [str(r) for r in self.sequence]}

    def __repr__(self):
        return f"RingContext({self.ring!r}, {[str(r) for r in self.sequence]})"


def _ring_of(ctx) -> PolyRing:
    return ctx.ring if isinstance(ctx, RingContext) else ctx


def graded_piece_basis(ctx, d: int) -> list[Monomial]:
    """Monomials of degree ``d`` in deglex order (degree, then lex, largest first)."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return list(_ring_of(ctx).monomials(d))


def mult_matrix(ctx, f: Polynomial, d: int) -> ExactMatrix:
    """Matrix of multiplication by the homogeneous ``f`` from ``R_d`` to ``R_{d+deg f}``."""
    ring = _ring_of(ctx)
    if not f.is_homogeneous():
        raise ValueError(f"{f} is not homogeneous")
    e = f.degree if f.terms else 0
    src = ring.monomials(d)
    tgt = ring.monomial_index(d + e)
    cols = []
    p = ring.base.modulus
    for m in src:
        col: dict = {}
        for fm, c in f.terms.items():
            i = tgt[tuple(a + b for a, b in zip(m, fm))]
            t = col.get(i, 0) + c
            if p:
                t %= p
            if t:
                col[i] = t
            else:
                col.pop(i, None)
        cols.append(col)
    return ExactMatrix.from_columns(len(tgt), cols, ring.base)


def _relations(ctx: RingContext, upto: int, d: int) -> ExactMatrix:
    """Columns spanning ``(r_1..r_upto)_d`` inside ``R_d``."""
    ring = ctx.ring
    blocks = []
    for i in range(upto):
        e = ctx.seq_degrees[i]
        if d - e >= 0:
            blocks.append(mult_matrix(ctx, ctx.sequence[i], d - e))
    size = len(ring.monomials(d))
    out = ExactMatrix.zero(size, 0, ring.base)
    return out.hstack(*blocks) if blocks else out


def check_regular_sequence(ctx: RingContext, D: int) -> CheckReport:
    """Degreewise test that each ``r_j`` is a nonzerodivisor on ``R/(r_1..r_{j-1})``.

    Injectivity is tested in source degrees ``d <= D - deg r_j``.  Also checks
    that the ideal is proper in degree 0.  A failure carries ``(j, d, witness)``
    with ``witness`` a polynomial killed by ``r_j`` modulo the earlier ones.
    """
    report = CheckReport("REGULARITY", payload={"degree_bound": D})
    if D < max(ctx.seq_degrees):
        raise ValueError("degree bound below the sequence degrees")
    rel0 = _relations(ctx, ctx.n, 0)
    if rel0.rows and Solver(rel0).solve({0: 1}) is not NO_SOLUTION:
        return report.fail({"reason": "ideal is the whole ring"})
    ring = ctx.ring
    for j in range(ctx.n):
        e = ctx.seq_degrees[j]
        rj = ctx.sequence[j]
        for d in range(0, D - e + 1):
            A = mult_matrix(ctx, rj, d)
            rel_hi = _relations(ctx, j, d + e)
            rel_lo = _relations(ctx, j, d)
            K = kernel_basis(A.hstack(rel_hi))
            size = A.cols
            solver = Solver(rel_lo) if rel_lo.cols else None
            for col in K.columns():
                x = {k: v for k, v in col.items() if k < size}
                if not x:
                    continue
                if solver is None or solver.solve(x) is NO_SOLUTION:
                    return report.fail({"j": j + 1, "d": d,
                                        "witness": str(ring.from_coords(d, x))})
    return report


def monomial_combinations(n: int, s: int):
    """Multisets of size ``s`` from ``range(n)`` as exponent tuples, decreasing lex."""
    return _monomials((1,) * n, s)


def products_of_sequence(ctx: RingContext, s: int) -> list[tuple[tuple, Polynomial]]:
    """``(alpha, r^alpha)`` for all exponent vectors ``alpha`` with ``|alpha| = s``."""
    key = ("seqpow", s)
    if key not in ctx._cache:
        out = []
        for alpha in monomial_combinations(ctx.n, s):
            p = ctx.ring.one()
            for r, a in zip(ctx.sequence, alpha):
                for _ in range(a):
                    p = p * r
            out.append((alpha, p))
        ctx._cache[key] = out
    return ctx._cache[key]


__all__ = [
    "PolyRing",
    "Polynomial",
    "RingContext",
    "Monomial",
    "graded_piece_basis",
    "mult_matrix",
    "check_regular_sequence",
    "products_of_sequence",
    "monomial_combinations",
]
