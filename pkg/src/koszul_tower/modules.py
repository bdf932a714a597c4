"""Degreewise presentations of ``I^s``, ``I^s/I^t`` and direct sums of them.

Every module here is a direct sum of *slots*.  A slot ``(label, low, high)``
stands for ``I^low / I^high`` (``high=None`` meaning no quotient); in degree
``d`` its generators are a Hermite basis of ``(I^low)_d`` inside ``R_d`` and
its relations are the coordinates of a basis of ``(I^high)_d``.  The label is
the filtration index used for the bigrading of the direct sums and for
products (slot ``a`` times slot ``b`` lands in slot ``a + b``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import (NO_SOLUTION, ExactMatrix, Quotient, Solver, hermite_basis,
                     kernel_basis)
from .polyring import Polynomial, RingContext, mult_matrix, products_of_sequence
from .report import CheckReport


# ---------------------------------------------------------------------------
# ideal powers inside R_d


def ideal_basis(ctx: RingContext, s: int, d: int) -> ExactMatrix:
    """Hermite basis of ``(I^s)_d`` as columns in the monomial basis of ``R_d``."""
    key = ("ideal", s, d)
    cache = ctx._cache
    if key not in cache:
        ring = ctx.ring
        size = len(ring.monomials(d))
        if s == 0:
            B = ExactMatrix.identity(size, ring.base)
        else:
            gens = []
            for _, r in products_of_sequence(ctx, s):
                e = r.degree
                if d - e >= 0:
                    gens.extend(mult_matrix(ctx, r, d - e).columns())
            B = ExactMatrix.from_columns(size, hermite_basis(gens, size, ring.base), ring.base)
        cache[key] = B
    return cache[key]


def _ideal_solver(ctx: RingContext, s: int, d: int) -> Solver:
    key = ("ideal_solver", s, d)
    if key not in ctx._cache:
        ctx._cache[key] = Solver(ideal_basis(ctx, s, d))
    return ctx._cache[key]


def ideal_coords(ctx: RingContext, s: int, d: int, vec: dict) -> dict:
    """Coordinates of an ``R_d`` vector in the basis of ``(I^s)_d``; raises if outside."""
    x = _ideal_solver(ctx, s, d).solve(vec)
    if x is NO_SOLUTION:
        raise ValueError(f"vector is not in (I^{s})_{d}")
    return x


def _inclusion(ctx: RingContext, s: int, t: int, d: int) -> ExactMatrix:
    """Coordinates of the basis of ``(I^s)_d`` in the basis of ``(I^t)_d`` (``s >= t``)."""
    key = ("incl", s, t, d)
    if key not in ctx._cache:
        B = ideal_basis(ctx, s, d)
        cols = [ideal_coords(ctx, t, d, c) for c in B.columns()]
        ctx._cache[key] = ExactMatrix.from_columns(ideal_basis(ctx, t, d).cols, cols, ctx.base)
    return ctx._cache[key]


def _ideal_action(ctx: RingContext, s: int, j: int, d: int) -> ExactMatrix:
    """Multiplication by ``r_j`` from ``(I^s)_d`` to ``(I^s)_{d+e_j}`` in ideal bases."""
    key = ("iact", s, j, d)
    if key not in ctx._cache:
        e = ctx.seq_degrees[j]
        M = mult_matrix(ctx, ctx.sequence[j], d) @ ideal_basis(ctx, s, d)
        cols = [ideal_coords(ctx, s, d + e, c) for c in M.columns()]
        ctx._cache[key] = ExactMatrix.from_columns(ideal_basis(ctx, s, d + e).cols, cols, ctx.base)
    return ctx._cache[key]


# ---------------------------------------------------------------------------
# graded modules


@dataclass(frozen=True)
class Slot:
    label: int
    low: int
    high: int | None = None

    def __str__(self):
        top = f"I^{self.low}" if self.low else "R"
        return top if self.high is None else f"{top}/I^{self.high}"


@dataclass
class Piece:
    generators: int
    relations: ExactMatrix
    offsets: tuple[int, ...]  # start of each slot's generators


class GradedModule:
    """A direct sum of slots, presented degree by degree up to ``D``.

    ``pieces[d]`` holds the generator count and relation matrix in degree
    ``d``; ``action(j, d)`` is the matrix of ``r_j`` from degree ``d`` to
    ``d + deg r_j``.  Generators are polynomials, so ``polynomial`` and
    ``multiply`` give the ring structure where one exists.
    """

    def __init__(self, ctx: RingContext, slots: Sequence[Slot], D: int, label: str):
        if D < 0:
            raise ValueError("degree bound must be nonnegative")
        for sl in slots:
            if sl.low < 0 or (sl.high is not None and sl.high <= sl.low):
                raise ValueError(f"bad slot {sl}")
        self.ctx = ctx
        self.slots = tuple(slots)
        self.D = D
        self.label = label
        self.pieces: dict[int, Piece] = {}
        for d in range(D + 1):
            offsets, blocks, total = [], [], 0
            for sl in self.slots:
                offsets.append(total)
                g = ideal_basis(ctx, sl.low, d).cols
                if sl.high is None:
                    blocks.append(ExactMatrix.zero(g, 0, ctx.base))
                else:
                    blocks.append(_inclusion(ctx, sl.high, sl.low, d))
                total += g
            self.pieces[d] = Piece(total, ExactMatrix.block_diag(blocks, ctx.base), tuple(offsets))
        self._actions: dict = {}
        self._cache: dict = {}

    def __repr__(self):
        return f"GradedModule({self.label})"

    def slot_index(self, label: int):
        for i, sl in enumerate(self.slots):
            if sl.label == label:
                return i
        return None

    def piece(self, d: int) -> Piece:
        return self.pieces[d]

    def ngens(self, d: int) -> int:
        return self.pieces[d].generators if 0 <= d <= self.D else 0

    def relations(self, d: int) -> ExactMatrix:
        return self.pieces[d].relations

    def action(self, j: int, d: int) -> ExactMatrix:
        """Matrix of ``r_j`` on generators, degree ``d`` to ``d + deg r_j``."""
        key = (j, d)
        if key not in self._actions:
            e = self.ctx.seq_degrees[j]
            if d + e > self.D:
                raise ValueError(f"action of r_{j + 1} from degree {d} leaves the bound {self.D}")
            blocks = [_ideal_action(self.ctx, sl.low, j, d) for sl in self.slots]
            self._actions[key] = ExactMatrix.block_diag(blocks, self.ctx.base) if blocks else \
                ExactMatrix.zero(0, 0, self.ctx.base)
        return self._actions[key]

    def slot_of(self, d: int, g: int) -> int:
        offs = self.pieces[d].offsets
        i = 0
        while i + 1 < len(offs) and offs[i + 1] <= g:
            i += 1
        return i

    def split(self, d: int, x: dict) -> dict[int, dict]:
        """Split a generator vector into per-slot local vectors."""
        offs = self.pieces[d].offsets + (self.pieces[d].generators,)
        out: dict[int, dict] = {}
        for g, v in x.items():
            i = self.slot_of(d, g)
            out.setdefault(i, {})[g - offs[i]] = v
        return out

    def polynomial(self, d: int, x: dict) -> dict[int, Polynomial]:
        """Per-slot polynomial represented by the generator vector ``x``."""
        out = {}
        for i, local in self.split(d, x).items():
            B = ideal_basis(self.ctx, self.slots[i].low, d)
            out[i] = self.ctx.ring.from_coords(d, B.apply(local))
        return out

    def element(self, d: int, slot: int, poly: Polynomial) -> dict:
        """Generator vector of ``poly`` placed in slot index ``slot``; raises if not in ``I^low``."""
        sl = self.slots[slot]
        local = ideal_coords(self.ctx, sl.low, d, poly.coords(d)) if poly.terms else {}
        off = self.pieces[d].offsets[slot]
        return {g + off: v for g, v in local.items()}

    def is_zero_element(self, d: int, x: dict) -> bool:
        if not x:
            return True
        rel = self.pieces[d].relations
        if not rel.cols:
            return False
        key = ("relsolver", d)
        if key not in self._cache:
            self._cache[key] = Solver(rel)
        return self._cache[key].solve(x) is not NO_SOLUTION

    def quotient(self, d: int) -> Quotient:
        """The piece in degree ``d`` as an explicit quotient module."""
        key = ("quot", d)
        if key not in self._cache:
            pc = self.pieces[d]
            self._cache[key] = Quotient(pc.generators, pc.relations.columns(), self.ctx.base)
        return self._cache[key]


def multiply(left: GradedModule, d: int, x: dict, right: GradedModule, e: int, y: dict,
             target: GradedModule) -> dict:
    """Product of ``x`` (degree ``d``) and ``y`` (degree ``e``) in ``target``.

    Slot labels add; a product whose label has no slot in ``target`` is zero
    (this is how truncated direct sums stay algebras).
    """
    out: dict = {}
    if d + e > target.D:
        raise ValueError("product leaves the degree bound")
    px = left.polynomial(d, x)
    py = right.polynomial(e, y)
    for i, f in px.items():
        for k, g in py.items():
            t = target.slot_index(left.slots[i].label + right.slots[k].label)
            if t is None:
                continue
            prod = f * g
            if prod.is_zero():
                continue
            for gi, v in target.element(d + e, t, prod).items():
                nv = out.get(gi, 0) + v
                if target.ctx.base.modulus:
                    nv %= target.ctx.base.modulus
                if nv:
                    out[gi] = nv
                else:
                    out.pop(gi, None)
    return out


def ideal_power(ctx: RingContext, s: int, D: int) -> GradedModule:
    """``I^s`` in degrees ``0..D`` (``I^0 = R``)."""
    if s < 0:
        raise ValueError("negative power")
    return GradedModule(ctx, [Slot(0, s)], D, "R" if s == 0 else f"I^{s}")


def filtration_quotient(ctx: RingContext, s: int, t: int, D: int) -> GradedModule:
    """``I^s / I^t`` for ``t > s >= 0``."""
    if not t > s >= 0:
        raise ValueError("need t > s >= 0")
    name = ("R" if s == 0 else f"I^{s}") + f"/I^{t}"
    if s == 0 and t == 1:
        name = "S"
    return GradedModule(ctx, [Slot(0, s, t)], D, name)


def _direct_sum(ctx, slots, D, label):
    return GradedModule(ctx, slots, D, label)


# ---------------------------------------------------------------------------
# morphisms and short exact sequences


class ModuleMorphism:
    """Degreewise matrices on generators."""

    def __init__(self, source: GradedModule, target: GradedModule, maps: dict[int, ExactMatrix],
                 label: str = ""):
        self.source = source
        self.target = target
        self.maps = maps
        self.label = label

    def __repr__(self):
        return f"ModuleMorphism({self.label}: {self.source.label} -> {self.target.label})"

    def __getitem__(self, d: int) -> ExactMatrix:
        return self.maps[d]

    def check(self) -> CheckReport:
        """Relations go to relations and the map commutes with every ``r_j``."""
        rep = CheckReport("MORPHISM")
        src, tgt = self.source, self.target
        ctx = src.ctx
        for d in range(src.D + 1):
            f = self.maps[d]
            for col in src.relations(d).columns():
                if not tgt.is_zero_element(d, f.apply(col)):
                    return rep.fail({"d": d, "reason": "relation not preserved"})
            for j, e in enumerate(ctx.seq_degrees):
                if d + e > src.D:
                    continue
                lhs = tgt.action(j, d) @ f
                rhs = self.maps[d + e] @ src.action(j, d)
                diff = lhs - rhs
                for col in diff.columns():
                    if not tgt.is_zero_element(d + e, col):
                        return rep.fail({"d": d, "j": j + 1, "reason": "does not commute with r_j"})
        return rep


def canonical_morphism(source: GradedModule, target: GradedModule,
                       slot_map: dict[int, int] | None = None, label: str = "") -> ModuleMorphism:
    """The map induced by inclusions ``I^a -> I^b`` (``a >= b``) between slots.

    ``slot_map`` sends source slot indices to target slot indices; by
    default slots are matched by label.
    """
    ctx = source.ctx
    if slot_map is None:
        slot_map = {}
        for i, sl in enumerate(source.slots):
            t = target.slot_index(sl.label)
            if t is not None:
                slot_map[i] = t
    for i, t in slot_map.items():
        a, b = source.slots[i], target.slots[t]
        if a.low < b.low:
            raise ValueError(f"{a} does not map into {b}")
        if a.high is not None and (b.high is None or a.high < b.high):
            raise ValueError(f"{a} -> {b} is not well defined")
    maps = {}
    for d in range(min(source.D, target.D) + 1):
        ps, pt = source.piece(d), target.piece(d)
        cols: list[dict] = [dict() for _ in range(ps.generators)]
        for i, t in slot_map.items():
            inc = _inclusion(ctx, source.slots[i].low, target.slots[t].low, d)
            for c, col in enumerate(inc.columns()):
                cols[ps.offsets[i] + c] = {r + pt.offsets[t]: v for r, v in col.items()}
        maps[d] = ExactMatrix.from_columns(pt.generators, cols, ctx.base)
    return ModuleMorphism(source, target, maps, label)


def zero_morphism(source: GradedModule, target: GradedModule) -> ModuleMorphism:
    maps = {d: ExactMatrix.zero(target.ngens(d), source.ngens(d), source.ctx.base)
            for d in range(min(source.D, target.D) + 1)}
    return ModuleMorphism(source, target, maps, "0")


def identity_morphism(module: GradedModule) -> ModuleMorphism:
    maps = {d: ExactMatrix.identity(module.ngens(d), module.ctx.base) for d in range(module.D + 1)}
    return ModuleMorphism(module, module, maps, "id")


def _stack(M: ExactMatrix, rel: ExactMatrix) -> ExactMatrix:
    return M.hstack(rel) if rel.cols else M


def verify_exactness(i: ModuleMorphism, p: ModuleMorphism) -> CheckReport:
    """Degreewise: ``i`` injective, ``p`` surjective, ``ker p = im i`` (modulo relations)."""
    rep = CheckReport("EXACTNESS")
    A, B, C = i.source, i.target, p.target
    for d in range(min(A.D, B.D, C.D) + 1):
        relA, relB, relC = A.relations(d), B.relations(d), C.relations(d)
        n_a, n_b = A.ngens(d), B.ngens(d)
        # injectivity of i
        K = kernel_basis(_stack(i[d], relB))
        solver_a = Solver(relA) if relA.cols else None
        for col in K.columns():
            x = {k: v for k, v in col.items() if k < n_a}
            if x and (solver_a is None or solver_a.solve(x) is NO_SOLUTION):
                return rep.fail({"d": d, "reason": "i not injective"})
        # p o i = 0
        for col in (p[d] @ i[d]).columns():
            if not C.is_zero_element(d, col):
                return rep.fail({"d": d, "reason": "p o i != 0"})
        # surjectivity of p
        sp = Solver(_stack(p[d], relC))
        for g in range(C.ngens(d)):
            if sp.solve({g: 1}) is NO_SOLUTION:
                return rep.fail({"d": d, "reason": "p not surjective"})
        # ker p inside im i
        K = kernel_basis(_stack(p[d], relC))
        si = Solver(_stack(i[d], relB))
        for col in K.columns():
            x = {k: v for k, v in col.items() if k < n_b}
            if x and si.solve(x) is NO_SOLUTION:
                return rep.fail({"d": d, "reason": "ker p not in im i"})
    return rep


class ShortExactSequence:
    """``0 -> A -i-> B -p-> C -> 0`` with exactness verified degreewise at construction.

    ``algebra`` marks sequences whose middle and right terms carry products
    (slot labels add), which is what the Leibniz machinery needs.
    """

    def __init__(self, i: ModuleMorphism, p: ModuleMorphism, tag: str, algebra: bool = False,
                 verify: bool = True):
        if i.target is not p.source:
            raise ValueError("i and p do not compose")
        self.i = i
        self.p = p
        self.tag = tag
        self.algebra = algebra
        if verify:
            rep = verify_exactness(i, p)
            if not rep.passed:
                raise RuntimeError(f"{tag} is not exact: {rep.witness}")

    @property
    def A(self) -> GradedModule:
        return self.i.source

    @property
    def B(self) -> GradedModule:
        return self.i.target

    @property
    def C(self) -> GradedModule:
        return self.p.target

    def __repr__(self):
        return f"ShortExactSequence({self.tag}: 0 -> {self.A.label} -> {self.B.label} -> {self.C.label} -> 0)"


class _ModuleCache:
    """Shares module objects per (ctx, D) so Tor computations are reused."""

    @staticmethod
    def get(ctx: RingContext, key, D: int, build):
        full = ("module", key, D)
        if full not in ctx._cache:
            ctx._cache[full] = build()
        return ctx._cache[full]


def cached_ideal_power(ctx: RingContext, s: int, D: int) -> GradedModule:
    return _ModuleCache.get(ctx, ("I", s), D, lambda: ideal_power(ctx, s, D))


def cached_quotient(ctx: RingContext, s: int, t: int, D: int) -> GradedModule:
    return _ModuleCache.get(ctx, ("Q", s, t), D, lambda: filtration_quotient(ctx, s, t, D))


def singexp_modules(ctx: RingContext, s_max: int, D: int):
    """``(J, B, C)`` = sums over ``s <= s_max`` of ``I^{s+1}/I^{s+2}``, ``I^s/I^{s+2}``, ``I^s/I^{s+1}``."""
    def build():
        J = _direct_sum(ctx, [Slot(s, s + 1, s + 2) for s in range(s_max + 1)], D,
                        f"sum I^(s+1)/I^(s+2), s<={s_max}")
        B = _direct_sum(ctx, [Slot(s, s, s + 2) for s in range(s_max + 1)], D,
                        f"sum I^s/I^(s+2), s<={s_max}")
        C = _direct_sum(ctx, [Slot(s, s, s + 1) for s in range(s_max + 1)], D,
                        f"gr<={s_max}")
        return J, B, C
    return _ModuleCache.get(ctx, ("singexp", s_max), D, build)


def build_ses(ctx: RingContext, tag: str, s: int = 0, D: int = 8) -> ShortExactSequence:
    """Build one of the tagged sequences.

    ``DEFSES`` / ``E``: ``0 -> I^{s+1} -> I^s -> I^s/I^{s+1} -> 0``;
    ``F``: ``0 -> I^{s+1}/I^{s+2} -> I^s/I^{s+2} -> I^s/I^{s+1} -> 0``;
    ``R_OVER_I``: ``0 -> I -> R -> S -> 0``;
    ``SINGEXP``: direct sum of the ``F(t)`` for ``t <= s`` (here ``s`` is ``s_max``).
    """
    key = ("ses", tag, s, D)
    if key in ctx._cache:
        return ctx._cache[key]
    if tag in ("DEFSES", "E", "R_OVER_I"):
        if tag == "R_OVER_I":
            s = 0
        A = cached_ideal_power(ctx, s + 1, D)
        B = cached_ideal_power(ctx, s, D)
        C = cached_quotient(ctx, s, s + 1, D)
        ses = ShortExactSequence(canonical_morphism(A, B, label="incl"),
                                 canonical_morphism(B, C, label=f"p_{s}"), tag,
                                 algebra=(s == 0))
    elif tag == "F":
        A = cached_quotient(ctx, s + 1, s + 2, D)
        B = cached_quotient(ctx, s, s + 2, D)
        C = cached_quotient(ctx, s, s + 1, D)
        ses = ShortExactSequence(canonical_morphism(A, B, label="incl"),
                                 canonical_morphism(B, C, label="proj"), tag,
                                 algebra=(s == 0))
    elif tag == "SINGEXP":
        J, B, C = singexp_modules(ctx, s, D)
        ses = ShortExactSequence(canonical_morphism(J, B, label="incl"),
                                 canonical_morphism(B, C, label="proj"), tag, algebra=True)
    else:
        raise ValueError(f"unknown sequence tag {tag!r}")
    ctx._cache[key] = ses
    return ses


class SESMorphism:
    """A morphism of short exact sequences, given by its three vertical maps."""

    def __init__(self, top: ShortExactSequence, bottom: ShortExactSequence,
                 left: ModuleMorphism, middle: ModuleMorphism, right: ModuleMorphism):
        self.top, self.bottom = top, bottom
        self.left, self.middle, self.right = left, middle, right


def e_to_f(ctx: RingContext, s: int, D: int) -> SESMorphism:
    """``E^s -> F^s``: ``p_{s+1}``, the projection ``I^s -> I^s/I^{s+2}`` and the identity."""
    E = build_ses(ctx, "E", s, D)
    F = build_ses(ctx, "F", s, D)
    left = canonical_morphism(E.A, F.A, label=f"p_{s + 1}")
    middle = canonical_morphism(E.B, F.B, label="proj")
    right = canonical_morphism(E.C, F.C, label="id")
    return SESMorphism(E, F, left, middle, right)


def check_pushout(mor: SESMorphism) -> CheckReport:
    """Squares commute and the bottom middle term is the pushout of the top-left span."""
    rep = CheckReport("PUSHOUT")
    E, F = mor.top, mor.bottom
    for d in range(E.A.D + 1):
        sq1 = F.i[d] @ mor.left[d] - mor.middle[d] @ E.i[d]
        sq2 = F.p[d] @ mor.middle[d] - mor.right[d] @ E.p[d]
        for col in sq1.columns():
            if not F.B.is_zero_element(d, col):
                return rep.fail({"d": d, "reason": "left square does not commute"})
        for col in sq2.columns():
            if not F.C.is_zero_element(d, col):
                return rep.fail({"d": d, "reason": "right square does not commute"})
        # (F.A (+) E.B) / E.A  ->  F.B  is an isomorphism
        glue = F.i[d].hstack(mor.middle[d])
        relFB = F.B.relations(d)
        solver = Solver(_stack(glue, relFB))
        for g in range(F.B.ngens(d)):
            if solver.solve({g: 1}) is NO_SOLUTION:
                return rep.fail({"d": d, "reason": "pushout map not surjective"})
        n1, n2 = F.A.ngens(d), E.B.ngens(d)
        K = kernel_basis(_stack(glue, relFB))
        # image of E.A under (p_{s+1}, -i) plus relations of both summands
        span = [{**mor.left[d].apply(c), **{k + n1: -v for k, v in E.i[d].apply(c).items()}}
                for c in ExactMatrix.identity(E.A.ngens(d), E.A.ctx.base).columns()]
        span += [dict(c) for c in F.A.relations(d).columns()]
        span += [{k + n1: v for k, v in c.items()} for c in E.B.relations(d).columns()]
        ssolver = Solver(ExactMatrix.from_columns(n1 + n2, span, E.A.ctx.base))
        for col in K.columns():
            x = {k: v for k, v in col.items() if k < n1 + n2}
            if x and ssolver.solve(x) is NO_SOLUTION:
                return rep.fail({"d": d, "reason": "pushout map not injective"})
    return rep


def check_singular(ses: ShortExactSequence, D: int | None = None) -> CheckReport:
    """``J * J = 0`` in the middle algebra, tested on pairs of kernel basis vectors."""
    rep = CheckReport("SINGULAR")
    if not ses.algebra:
        raise ValueError(f"{ses.tag} carries no algebra structure")
    B = ses.B
    D = B.D if D is None else min(D, B.D)
    img = {d: [c for c in ses.i[d].columns() if c] for d in range(D + 1)}
    pairs = 0
    for d in range(D + 1):
        for e in range(d, D - d + 1):
            for a in img[d]:
                for b in img[e]:
                    pairs += 1
                    prod = multiply(B, d, a, B, e, b, B)
                    if not B.is_zero_element(d + e, prod):
                        pa = {k: str(v) for k, v in B.polynomial(d, a).items()}
                        pb = {k: str(v) for k, v in B.polynomial(e, b).items()}
                        return rep.fail({"degrees": [d, e], "left": pa, "right": pb})
    rep.payload["pairs_checked"] = pairs
    return rep


# ---------------------------------------------------------------------------
# the Sym-side basis of I^s/I^{s+1}


def standard_monomials(ctx: RingContext, e: int):
    """Monomials giving a base-ring basis of ``S_e = R_e / I_e``, or None if there is none.

    They exist exactly when every Hermite pivot of ``I_e`` is a unit.
    """
    key = ("std", e)
    if key not in ctx._cache:
        if e < 0:
            ctx._cache[key] = []
        else:
            size = len(ctx.ring.monomials(e))
            q = Quotient(size, ideal_basis(ctx, 1, e).columns(), ctx.base)
            if q.invariants.torsion or any(len(g) != 1 or next(iter(g.values())) != 1
                                           for g in q.generators):
                ctx._cache[key] = None
            else:
                ctx._cache[key] = [next(iter(g)) for g in q.generators]
    return ctx._cache[key]


def sym_spanning_set(ctx: RingContext, s: int, d: int):
    """``[(alpha, m, vector)]``: the elements ``m r^alpha`` of ``(I^s)_d`` with ``|alpha| = s``
    and ``m`` a standard monomial, as ``R_d`` coordinate vectors.  None if ``S`` has no
    monomial basis in some needed degree.
    """
    ring = ctx.ring
    out = []
    for alpha, r in products_of_sequence(ctx, s):
        e = d - r.degree
        if e < 0:
            continue
        std = standard_monomials(ctx, e)
        if std is None:
            return None
        mons = ring.monomials(e)
        for idx in std:
            m = Polynomial(ring, {mons[idx]: 1})
            out.append((alpha, mons[idx], (m * r).coords(d)))
    return out


__all__ = [
    "Slot",
    "Piece",
    "GradedModule",
    "ModuleMorphism",
    "ShortExactSequence",
    "SESMorphism",
    "ideal_basis",
    "ideal_coords",
    "ideal_power",
    "filtration_quotient",
    "cached_ideal_power",
    "cached_quotient",
    "singexp_modules",
    "canonical_morphism",
    "zero_morphism",
    "identity_morphism",
    "verify_exactness",
    "build_ses",
    "e_to_f",
    "check_pushout",
    "check_singular",
    "multiply",
    "standard_monomials",
    "sym_spanning_set",
]
