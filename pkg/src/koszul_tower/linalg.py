"""Exact linear algebra over the integers, the rationals and prime fields.

Everything here works on sparse column vectors (``dict`` from index to a
nonzero scalar).  Over the integers all arithmetic uses Python ints, so there
is no overflow anywhere; over ``F_p`` scalars are ints in ``[0, p)``.

The workhorse is :class:`_Echelon`, a sparse row-echelon routine with
deterministic pivoting.  Kernels, solving, quotients and homology are all built
on it; :func:`smith_normal_form` is a small dense routine used on the (usually
tiny) non-unimodular remainders.
"""

from __future__ import annotations

import hashlib
import heapq
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

__all__ = [
    "BaseRing",
    "ExactMatrix",
    "ModuleInvariants",
    "NO_SOLUTION",
    "Homology",
    "Quotient",
    "Solver",
    "smith_normal_form",
    "hermite_basis",
    "kernel_basis",
    "solve_in_image",
    "in_image",
    "rank",
    "subquotient_homology",
    "homology",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


class BaseRing:
    """One of ZZ, QQ or F_p."""

    INTEGERS = "INTEGERS"
    RATIONALS = "RATIONALS"
    PRIME_FIELD = "PRIME_FIELD"

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind not in (self.INTEGERS, self.RATIONALS, self.PRIME_FIELD):
            raise ValueError(f"unknown base ring kind {kind!r}")
        if kind == self.PRIME_FIELD:
            if p is None or not (2 <= p < 2**31) or not _is_prime(p):
                raise ValueError(f"{p} is not a prime below 2^31")
        else:
            p = None
        self.kind = kind
        self.p = p

    @classmethod
    def integers(cls) -> "BaseRing":
        return cls(cls.INTEGERS)

    @classmethod
    def rationals(cls) -> "BaseRing":
        return cls(cls.RATIONALS)

    @classmethod
    def prime_field(cls, p: int) -> "BaseRing":
        return cls(cls.PRIME_FIELD, p)

    @classmethod
    def parse(cls, text: str) -> "BaseRing":
        """Accepts ``Z``, ``Q``, ``Fp 5``, ``F5``, ``GF(5)`` and the long names."""
        t = text.strip()
        u = t.upper().replace(" ", "")
        if u in ("Z", "ZZ", "INTEGERS"):
            return cls.integers()
        if u in ("Q", "QQ", "RATIONALS"):
            return cls.rationals()
        for prefix in ("PRIME_FIELD", "GF", "FP", "F"):
            if u.startswith(prefix):
                rest = u[len(prefix):].strip("()")
                if rest.isdigit():
                    return cls.prime_field(int(rest))
                break
        raise ValueError(f"cannot parse base ring {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != self.INTEGERS

    @property
    def modulus(self) -> int:
        """The characteristic for F_p, else 0."""
        return self.p or 0

    def __eq__(self, other):
        return isinstance(other, BaseRing) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"BaseRing({self})"

    def __str__(self):
        if self.kind == self.INTEGERS:
            return "Z"
        if self.kind == self.RATIONALS:
            return "Q"
        return f"F{self.p}"

    def __call__(self, x):
        """Coerce an int or Fraction into this ring."""
        if self.kind == self.INTEGERS:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if self.kind == self.RATIONALS:
            x = Fraction(x)
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, a):
        if self.kind == self.INTEGERS:
            if a in (1, -1):
                return a
            raise ZeroDivisionError(f"{a} is not a unit in Z")
        if self.kind == self.RATIONALS:
            return 1 / Fraction(a)
        return pow(a, -1, self.p)

    def is_unit(self, a) -> bool:
        if self.kind == self.INTEGERS:
            return a == 1 or a == -1
        return a != 0

    def exact_quotient(self, a, b):
        """``a / b`` if it lies in the ring, else None."""
        if self.kind == self.INTEGERS:
            q, r = divmod(a, b)
            return q if r == 0 else None
        if self.kind == self.RATIONALS:
            q = Fraction(a) / b
            return q.numerator if q.denominator == 1 else q
        return a * pow(b, -1, self.p) % self.p


def _addmul(y: dict, c, x: dict, p: int) -> None:
    """In place ``y += c * x``; ``p`` is the modulus (0 for ZZ and QQ)."""
    if p:
        for k, v in x.items():
            t = (y.get(k, 0) + c * v) % p
            if t:
                y[k] = t
            else:
                y.pop(k, None)
    else:
        for k, v in x.items():
            t = y.get(k, 0) + c * v
            if t:
                y[k] = t
            else:
                y.pop(k, None)


def _scaled(x: dict, c, p: int) -> dict:
    if p:
        return {k: v * c % p for k, v in x.items() if v * c % p}
    return {k: v * c for k, v in x.items()} if c else {}


def _norm_scalar(v):
    # Fractions with denominator 1 are stored as ints so equality and JSON are stable.
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


class ExactMatrix:
    """A sparse matrix stored column by column.

    ``rows`` and ``cols`` are the dimensions; ``column(j)`` gives the j-th
    column as a dict.  Instances are treated as immutable.
    """

    __slots__ = ("base", "rows", "cols", "_cols")

    def __init__(self, rows: int, cols: int, entries: dict | None = None,
                 base: BaseRing | None = None):
        self.base = base or BaseRing.integers()
        self.rows = rows
        self.cols = cols
        self._cols = [dict() for _ in range(cols)]
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            v = _norm_scalar(self.base(v))
            if v:
                self._cols[j][i] = v

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[dict], base: BaseRing) -> "ExactMatrix":
        m = cls.__new__(cls)
        m.base = base
        m.rows = rows
        p = base.modulus
        cols = []
        for c in columns:
            if p:
                cols.append({i: v % p for i, v in c.items() if v % p})
            else:
                cols.append({i: _norm_scalar(v) for i, v in c.items() if v})
        m._cols = cols
        m.cols = len(cols)
        return m

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], base: BaseRing | None = None,
                   cols: int | None = None) -> "ExactMatrix":
        base = base or BaseRing.integers()
        nrows = len(data)
        ncols = len(data[0]) if nrows else (cols or 0)
        columns = [{i: base(data[i][j]) for i in range(nrows) if base(data[i][j])}
                   for j in range(ncols)]
        return cls.from_columns(nrows, columns, base)

    @classmethod
    def identity(cls, n: int, base: BaseRing | None = None) -> "ExactMatrix":
        base = base or BaseRing.integers()
        return cls.from_columns(n, ({j: 1} for j in range(n)), base)

    @classmethod
    def zero(cls, rows: int, cols: int, base: BaseRing | None = None) -> "ExactMatrix":
        base = base or BaseRing.integers()
        return cls.from_columns(rows, ({} for _ in range(cols)), base)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> dict:
        return {(i, j): v for j, c in enumerate(self._cols) for i, v in c.items()}

    def column(self, j: int) -> dict:
        return dict(self._cols[j])

    def columns(self) -> list[dict]:
        return [dict(c) for c in self._cols]

    def __getitem__(self, ij):
        i, j = ij
        return self._cols[j].get(i, 0)

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def apply(self, x: dict) -> dict:
        """Matrix times the sparse column vector ``x``."""
        y: dict = {}
        p = self.base.modulus
        for j, c in x.items():
            if c:
                _addmul(y, c, self._cols[j], p)
        return y

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return ExactMatrix.from_columns(self.rows, (self.apply(c) for c in other._cols), self.base)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        p = self.base.modulus
        cols = []
        for a, b in zip(self._cols, other._cols):
            c = dict(a)
            _addmul(c, 1, b, p)
            cols.append(c)
        return ExactMatrix.from_columns(self.rows, cols, self.base)

    def __neg__(self) -> "ExactMatrix":
        return self.scale(-1)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        p = self.base.modulus
        return ExactMatrix.from_columns(self.rows, (_scaled(col, c, p) for col in self._cols), self.base)

    def transpose(self) -> "ExactMatrix":
        cols: list[dict] = [dict() for _ in range(self.rows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                cols[i][j] = v
        return ExactMatrix.from_columns(self.cols, cols, self.base)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def select_columns(self, idx: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix.from_columns(self.rows, (self._cols[j] for j in idx), self.base)

    def select_rows(self, idx: Sequence[int]) -> "ExactMatrix":
        pos = {i: k for k, i in enumerate(idx)}
        cols = [{pos[i]: v for i, v in c.items() if i in pos} for c in self._cols]
        return ExactMatrix.from_columns(len(idx), cols, self.base)

    def hstack(self, *others: "ExactMatrix") -> "ExactMatrix":
        cols = list(self._cols)
        for o in others:
            if o.rows != self.rows:
                raise ValueError("hstack needs equal row counts")
            cols.extend(o._cols)
        return ExactMatrix.from_columns(self.rows, cols, self.base)

    @staticmethod
    def block_diag(blocks: Sequence["ExactMatrix"], base: BaseRing) -> "ExactMatrix":
        cols = []
        r0 = 0
        for b in blocks:
            for c in b._cols:
                cols.append({i + r0: v for i, v in c.items()})
            r0 += b.rows
        return ExactMatrix.from_columns(r0, cols, base)

    def is_zero(self) -> bool:
        return not any(self._cols)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.base == other.base
                and self._cols == other._cols)

    __hash__ = None

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} over {self.base}, {self.to_dense()})"

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[i, j, str(v)] for (i, j), v in sorted(self.entries.items())]}

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


class _Echelon:
    """Sparse row echelon form with deterministic pivoting.

    Rows are dicts; only columns ``< width`` are pivot candidates, higher
    columns ride along (augmentation).  Over ZZ each column is cleared by
    repeated division with the row of minimal absolute value (ties: earliest
    row); over a field the first row is the pivot and is scaled to 1.

    After construction, ``pivots`` is a list of ``(column, row)`` in
    increasing column order and ``zero_rows`` the rows with nothing below
    ``width``.  With ``reduce=True`` entries above pivots are reduced (into
    ``[0, pivot)`` over ZZ, to 0 over a field), giving a canonical Hermite form.
    """

    def __init__(self, rows: Iterable[dict], width: int, base: BaseRing, *, reduce: bool = False):
        p = base.modulus
        field = base.is_field
        buckets: dict[int, list[dict]] = {}
        heap: list[int] = []
        zero_rows: list[dict] = []

        def push(r: dict) -> None:
            lead = min((k for k in r if k < width), default=None)
            if lead is None:
                zero_rows.append(r)
                return
            b = buckets.get(lead)
            if b is None:
                buckets[lead] = [r]
                heapq.heappush(heap, lead)
            else:
                b.append(r)

        for r in rows:
            push(dict(r))

        pivots: list[tuple[int, dict]] = []
        while heap:
            c = heapq.heappop(heap)
            group = buckets.pop(c)
            if field:
                piv = group[0]
                a = piv[c]
                if a != 1:
                    inv = base.inv(a)
                    for k in list(piv):
                        piv[k] = piv[k] * inv % p if p else _norm_scalar(piv[k] * inv)
                for r in group[1:]:
                    _addmul(r, -r[c], piv, p)
                    push(r)
            else:
                while len(group) > 1:
                    group.sort(key=lambda r: abs(r[c]))
                    piv = group[0]
                    a = piv[c]
                    rest = [piv]
                    for r in group[1:]:
                        _addmul(r, -(r[c] // a), piv, 0)
                        if c in r:
                            rest.append(r)
                        else:
                            push(r)
                    group = rest
                piv = group[0]
                if piv[c] < 0:
                    for k in piv:
                        piv[k] = -piv[k]
            pivots.append((c, piv))

        if reduce:
            for j, (cj, rj) in enumerate(pivots):
                a = rj[cj]
                for i in range(j):
                    ri = pivots[i][1]
                    v = ri.get(cj)
                    if v is None:
                        continue
                    q = v // a if not field else v
                    if q:
                        _addmul(ri, -q, rj, p)

        self.width = width
        self.base = base
        self.pivots = pivots
        self.zero_rows = zero_rows

    @property
    def rank(self) -> int:
        return len(self.pivots)


def hermite_basis(vectors: Iterable[dict], width: int, base: BaseRing) -> list[dict]:
    """A canonical basis (fully reduced echelon form) of the span of ``vectors``."""
    return [r for _, r in _Echelon(vectors, width, base, reduce=True).pivots]


NO_SOLUTION = None
"""Returned by the solving routines when the right-hand side is not in the image."""


class Solver:
    """Repeated exact solves ``M x = b`` for a fixed matrix ``M``.

    Built from the echelon form of ``[M^T | I]``: each pivot row carries a
    combination ``v`` of the columns of ``M`` and its image ``M v``.  The
    ``"reversed"`` strategy feeds the columns in the opposite order, which
    changes pivot choices and hence the particular solution returned.
    """

    def __init__(self, M: ExactMatrix, strategy: str = "standard"):
        if strategy not in ("standard", "reversed"):
            raise ValueError(f"unknown strategy {strategy!r}")
        r = M.rows
        order = range(M.cols) if strategy == "standard" else range(M.cols - 1, -1, -1)
        rows = []
        for j in order:
            row = dict(M._cols[j])
            row[r + j] = 1
            rows.append(row)
        ech = _Echelon(rows, r, M.base)
        self.matrix = M
        self.base = M.base
        self._pivots = []
        for c, row in ech.pivots:
            h = {k: v for k, v in row.items() if k < r}
            x = {k - r: v for k, v in row.items() if k >= r}
            self._pivots.append((c, h, x))
        self._kernel = [{k - r: v for k, v in row.items()} for row in ech.zero_rows]
        self.rank = len(self._pivots)

    def solve(self, b: dict):
        """Return ``x`` (sparse) with ``M x = b`` exactly, or :data:`NO_SOLUTION`."""
        base = self.base
        p = base.modulus
        res = {k: v for k, v in b.items() if v}
        x: dict = {}
        for c, h, v in self._pivots:
            t = res.get(c)
            if t is None:
                continue
            q = base.exact_quotient(t, h[c])
            if q is None:
                return NO_SOLUTION
            _addmul(res, -q, h, p)
            _addmul(x, q, v, p)
        if res:
            return NO_SOLUTION
        return x

    def kernel_vectors(self) -> list[dict]:
        return [dict(v) for v in self._kernel]


def kernel_basis(M: ExactMatrix) -> ExactMatrix:
    """Basis of ker(M) as columns.

    Over ZZ this is the saturated kernel lattice (the transform of ``[M^T|I]``
    is unimodular), returned in Hermite form so the basis is canonical.
    """
    vecs = Solver(M).kernel_vectors()
    basis = hermite_basis(vecs, M.cols, M.base)
    return ExactMatrix.from_columns(M.cols, basis, M.base)


def solve_in_image(M: ExactMatrix, b, strategy: str = "standard"):
    """Solve ``M x = b``; ``b`` may be a dict or a sequence.

    Returns a list of length ``M.cols`` or :data:`NO_SOLUTION`.  Over ZZ an
    integral solution is required.
    """
    if not isinstance(b, dict):
        if len(b) != M.rows:
            raise ValueError(f"right-hand side has {len(b)} entries, expected {M.rows}")
        b = {i: M.base(v) for i, v in enumerate(b) if M.base(v)}
    x = Solver(M, strategy).solve(b)
    if x is NO_SOLUTION:
        return NO_SOLUTION
    return [x.get(j, 0) for j in range(M.cols)]


def in_image(M: ExactMatrix, b: dict) -> bool:
    return Solver(M).solve(b) is not NO_SOLUTION


def rank(M: ExactMatrix) -> int:
    return _Echelon(M.columns(), M.rows, M.base).rank


# --------------------------------------------------------------------------
# Smith normal form


def _snf_dense(A: list[list], base: BaseRing, track: bool = True):
    """Diagonalise a dense matrix in place.

    Returns ``(A, U, Uinv, V)`` with ``U @ A0 @ V == A`` diagonal, the diagonal
    forming a divisibility chain with nonnegative entries (ones over a field).
    Pivot: nonzero entry of minimal absolute value, ties lowest row then column.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    p = base.modulus
    field = base.is_field

    def red(x):
        return x % p if p else x

    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    Ui = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def size(x):
        return abs(x) if not field else (0 if x == 0 else 1)

    def row_op(i, j, c):  # row_i += c * row_j
        if not c:
            return
        Ai, Aj = A[i], A[j]
        for k in range(n):
            if Aj[k]:
                Ai[k] = red(Ai[k] + c * Aj[k])
        if track:
            Ui_, Uj_ = U[i], U[j]
            for k in range(m):
                if Uj_[k]:
                    Ui_[k] = red(Ui_[k] + c * Uj_[k])
            for row in Ui:  # inverse: col_j -= c * col_i
                if row[i]:
                    row[j] = red(row[j] - c * row[i])

    def col_op(i, j, c):  # col_i += c * col_j
        if not c:
            return
        for row in A:
            if row[j]:
                row[i] = red(row[i] + c * row[j])
        if track:
            for row in V:
                if row[j]:
                    row[i] = red(row[i] + c * row[j])

    def swap_rows(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def scale_row(i, u):  # u a unit
        A[i] = [red(x * u) for x in A[i]]
        if track:
            U[i] = [red(x * u) for x in U[i]]
            ui = base.inv(u)
            for row in Ui:
                row[i] = red(row[i] * ui)

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = A[i][j]
                if x and (best is None or size(x) < best[0]):
                    best = (size(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            a = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = base.exact_quotient(A[i][t], a) if field else A[i][t] // a
                    row_op(i, t, -q)
            for j in range(t + 1, n):
                if A[t][j]:
                    q = base.exact_quotient(A[t][j], a) if field else A[t][j] // a
                    col_op(j, t, -q)
            cand = [(size(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            cand += [(size(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if cand:
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            if not field:
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % a:
                            bad = i
                            break
                    if bad is not None:
                        break
            if bad is None:
                break
            row_op(t, bad, 1)
        a = A[t][t]
        if field and a != 1:
            scale_row(t, base.inv(a))
        elif not field and a < 0:
            scale_row(t, -1)
        t += 1
    return A, U, Ui, V


def smith_normal_form(M: ExactMatrix):
    """Return ``(U, D, V)`` with ``U @ M @ V == D``, U and V unimodular.

    ``D`` is diagonal with ``d_1 | d_2 | ...`` and ``d_i >= 0``.  Over a field
    the nonzero diagonal entries are all 1.

    >>> U, D, V = smith_normal_form(ExactMatrix.from_dense([[2, 4], [6, 8]]))
    >>> D.to_dense()
    [[2, 0], [0, 4]]
    """
    base = M.base
    if M.rows == 0 or M.cols == 0:
        return (ExactMatrix.identity(M.rows, base), ExactMatrix.zero(M.rows, M.cols, base),
                ExactMatrix.identity(M.cols, base))
    D, U, _, V = _snf_dense(M.to_dense(), base)
    return (ExactMatrix.from_dense(U, base), ExactMatrix.from_dense(D, base),
            ExactMatrix.from_dense(V, base))


# --------------------------------------------------------------------------
# Quotients and homology


@dataclass(frozen=True)
class ModuleInvariants:
    """Isomorphism type ``base^free_rank ⊕ ⊕ base/(d_i)`` of a finitely generated module."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        t = tuple(self.torsion)
        object.__setattr__(self, "torsion", t)
        for d in t:
            if d < 2:
                raise ValueError(f"torsion coefficient {d} < 2")
        for a, b in zip(t, t[1:]):
            if b % a:
                raise ValueError(f"torsion {t} is not a divisibility chain")

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def num_generators(self) -> int:
        return self.free_rank + len(self.torsion)

    @staticmethod
    def direct_sum(parts: Iterable["ModuleInvariants"]) -> "ModuleInvariants":
        parts = list(parts)
        free = sum(x.free_rank for x in parts)
        tors = [d for x in parts for d in x.torsion]
        if not tors:
            return ModuleInvariants(free)
        D, *_ = _snf_dense([[tors[i] if i == j else 0 for j in range(len(tors))]
                            for i in range(len(tors))], BaseRing.integers(), track=False)
        return ModuleInvariants(free, tuple(D[i][i] for i in range(len(tors)) if D[i][i] != 1))

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


class Quotient:
    """The module ``base^m / span(relations)`` with explicit coordinates.

    Generators are listed free ones first, then one per torsion coefficient.
    ``coords`` maps any vector to its coordinates (torsion coordinates reduced
    modulo their order); ``lift`` is a section.

    Relations whose Hermite pivot is a unit just eliminate a coordinate; only
    the rest goes through a (small) dense Smith normal form.
    """

    def __init__(self, m: int, relations: Iterable[dict], base: BaseRing):
        self.m = m
        self.base = base
        ech = _Echelon(relations, m, base, reduce=True)
        unit, hard = [], []
        for c, row in ech.pivots:
            (unit if base.is_unit(row[c]) else hard).append((c, row))
        self._unit = unit
        unit_cols = {c for c, _ in unit}
        keep = [c for c in range(m) if c not in unit_cols]
        self._keep = keep
        self._pos = {c: i for i, c in enumerate(keep)}
        q = len(keep)
        if not hard:
            self._U = None
            self._free_idx = list(range(q))
            self._tors_idx: list[int] = []
            self._orders: list[int] = []
            self._gens_local = [{i: 1} for i in range(q)]
            self.invariants = ModuleInvariants(q)
        else:
            N = [[0] * len(hard) for _ in range(q)]
            for j, (_, row) in enumerate(hard):
                for c, v in row.items():
                    N[self._pos[c]][j] = v
            D, U, Ui, _ = _snf_dense(N, base)
            r = sum(1 for i in range(min(q, len(hard))) if D[i][i])
            self._U = U
            self._tors_idx = [i for i in range(r) if D[i][i] != 1]
            self._orders = [D[i][i] for i in self._tors_idx]
            self._free_idx = list(range(r, q))
            self._gens_local = []
            for i in self._free_idx + self._tors_idx:
                self._gens_local.append({k: Ui[k][i] for k in range(q) if Ui[k][i]})
            self.invariants = ModuleInvariants(len(self._free_idx), tuple(self._orders))
        self.generators = [{keep[k]: v for k, v in g.items()} for g in self._gens_local]

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def orders(self) -> list[int]:
        """Order of each generator (0 for free ones)."""
        return [0] * len(self._free_idx) + list(self._orders)

    def coords(self, x: dict) -> tuple:
        p = self.base.modulus
        y = dict(x)
        for c, row in self._unit:
            t = y.get(c)
            if t:
                _addmul(y, -t, row, p)
        local = {self._pos[c]: v for c, v in y.items()}
        if self._U is None:
            return tuple(_norm_scalar(local.get(i, 0)) for i in range(len(self._keep)))
        U = self._U
        out = []
        for i in self._free_idx:
            out.append(sum(U[i][k] * v for k, v in local.items()))
        for i, d in zip(self._tors_idx, self._orders):
            out.append(sum(U[i][k] * v for k, v in local.items()) % d)
        if p:
            out = [v % p for v in out]
        return tuple(_norm_scalar(v) for v in out)

    def lift(self, coords: Sequence) -> dict:
        y: dict = {}
        p = self.base.modulus
        for c, g in zip(coords, self.generators):
            if c:
                _addmul(y, c, g, p)
        return y

    def reduce_coords(self, coords: Sequence) -> tuple:
        """Normalise a coordinate tuple (torsion entries modulo their order)."""
        out = []
        for c, d in zip(coords, self.orders):
            out.append(c % d if d else c)
        return tuple(_norm_scalar(v) for v in out)

    def projection(self) -> ExactMatrix:
        """Matrix of ``coords`` (torsion rows not reduced)."""
        cols = []
        for j in range(self.m):
            cols.append(dict(enumerate(self.coords({j: 1}))))
        return ExactMatrix.from_columns(self.ngens, cols, self.base)

    def section(self) -> ExactMatrix:
        return ExactMatrix.from_columns(self.m, self.generators, self.base)


class Homology:
    """``ker(d_out) / im(d_in)`` on a middle space, optionally itself presented.

    ``rel_mid`` (columns in the middle space) and ``rel_out`` (columns in the
    target of ``d_out``) present the middle and outgoing terms as quotients;
    then cycles are vectors mapped into ``im rel_out`` and boundaries
    ``im d_in + im rel_mid``.
    """

    def __init__(self, d_in: ExactMatrix, d_out: ExactMatrix,
                 rel_mid: ExactMatrix | None = None, rel_out: ExactMatrix | None = None,
                 check: bool = True):
        base = d_out.base
        m = d_out.cols
        if d_in.rows != m:
            raise ValueError(f"d_in lands in rank {d_in.rows}, d_out starts at rank {m}")
        self.base = base
        self.d_out = d_out
        self.m = m
        self._rel_out = rel_out if rel_out is not None and rel_out.cols else None
        if self._rel_out is None:
            Z = kernel_basis(d_out)
        else:
            K = kernel_basis(d_out.hstack(self._rel_out))
            Z = ExactMatrix.from_columns(
                m, hermite_basis(K.select_rows(range(m)).columns(), m, base), base)
        self._out_solver = Solver(self._rel_out) if self._rel_out is not None else None
        if check:
            for j in range(d_in.cols):
                if not self._is_cycle(d_in.column(j)):
                    raise ValueError("d_out . d_in != 0")
        self.cycles = Z
        self._zsolver = Solver(Z)
        bnd = d_in.columns()
        if rel_mid is not None:
            bnd += rel_mid.columns()
        coords = []
        for b in bnd:
            y = self._zsolver.solve(b)
            if y is NO_SOLUTION:
                raise ValueError("boundary or relation is not a cycle")
            coords.append(y)
        self._quot = Quotient(Z.cols, coords, base)
        self.invariants = self._quot.invariants
        self.cycle_basis = ExactMatrix.from_columns(
            m, (Z.apply(g) for g in self._quot.generators), base)

    def _is_cycle(self, x: dict) -> bool:
        y = self.d_out.apply(x)
        if not y:
            return True
        if self._out_solver is None:
            return False
        return self._out_solver.solve(y) is not NO_SOLUTION

    @property
    def ngens(self) -> int:
        return self._quot.ngens

    @property
    def orders(self) -> list[int]:
        return self._quot.orders

    def is_cycle(self, x) -> bool:
        if not isinstance(x, dict):
            x = {i: v for i, v in enumerate(x) if v}
        return self._is_cycle(x)

    def class_of(self, x) -> tuple:
        """Coordinates of the class of the cycle ``x``; raises on non-cycles."""
        if not isinstance(x, dict):
            x = {i: self.base(v) for i, v in enumerate(x) if v}
        if not self._is_cycle(x):
            raise ValueError("not a cycle")
        y = self._zsolver.solve(x)
        if y is NO_SOLUTION:
            raise ValueError("cycle not in the cycle lattice")
        return self._quot.coords(y)

    def reduce_coords(self, coords: Sequence) -> tuple:
        return self._quot.reduce_coords(coords)

    def representative(self, coords: Sequence) -> dict:
        y: dict = {}
        p = self.base.modulus
        for c, j in zip(coords, range(self.cycle_basis.cols)):
            if c:
                _addmul(y, c, self.cycle_basis._cols[j], p)
        return y


def homology(d_in: ExactMatrix, d_out: ExactMatrix, rel_mid: ExactMatrix | None = None,
             rel_out: ExactMatrix | None = None) -> Homology:
    return Homology(d_in, d_out, rel_mid, rel_out)


def subquotient_homology(d_in: ExactMatrix, d_out: ExactMatrix) -> tuple[
        ModuleInvariants, ExactMatrix, Callable[[Sequence], tuple]]:
    """Invariants, cycle basis and class map of ``ker(d_out) / im(d_in)``."""
    h = Homology(d_in, d_out)
    return h.invariants, h.cycle_basis, h.class_of
