"""Orchestration of all checks and the certificate they produce."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Any, Iterable

from .exterior import merge_sign, verify_bialgebra_identities
from .linalg import NO_SOLUTION, ExactMatrix, Homology, ModuleInvariants, Quotient, Solver
from .model import model_basis, model_differential, verify_colinearity, verify_model_exactness
from .modules import (build_ses, cached_ideal_power, cached_quotient, canonical_morphism,
                      check_pushout, check_singular, e_to_f, ideal_basis, ideal_coords, multiply,
                      standard_monomials, sym_spanning_set)
from .polyring import Polynomial, RingContext, check_regular_sequence, products_of_sequence
from .report import FAIL, PASS, SKIPPED, CheckReport
from .tor import (InducedMap, TorClass, check_koszul_resolution, connecting_map, koszul_complex,
                  tor, tor_product, verify_leibniz)


class CheckId(str, Enum):
    REGULARITY = "REGULARITY"
    BIALGEBRA = "BIALGEBRA"
    KOSZUL_RESOLUTION = "KOSZUL_RESOLUTION"
    COR_TOR = "COR_TOR"
    PROP_GR = "PROP_GR"
    MODEL_EXACT = "MODEL_EXACT"
    MODEL_COLINEAR = "MODEL_COLINEAR"
    SINGULAR = "SINGULAR"
    LEIBNIZ = "LEIBNIZ"
    DELTA0 = "DELTA0"
    PROP_SEQUENCE = "PROP_SEQUENCE"
    FACTORIZATION = "FACTORIZATION"
    LONG_SEQUENCE = "LONG_SEQUENCE"
    THEOREM1 = "THEOREM1"

    def __str__(self):
        return self.value


# Enum order is the run order.
RUN_ORDER = list(CheckId)

PREREQUISITES: dict[CheckId, tuple[CheckId, ...]] = {
    CheckId.COR_TOR: (CheckId.REGULARITY,),
    CheckId.PROP_GR: (CheckId.REGULARITY,),
    CheckId.LEIBNIZ: (CheckId.SINGULAR,),
    CheckId.DELTA0: (CheckId.REGULARITY,),
    CheckId.PROP_SEQUENCE: (CheckId.REGULARITY, CheckId.PROP_GR),
    CheckId.FACTORIZATION: (CheckId.REGULARITY,),
    CheckId.LONG_SEQUENCE: (CheckId.REGULARITY,),
    CheckId.THEOREM1: (CheckId.REGULARITY,),
}

DESCRIPTIONS = {
    CheckId.REGULARITY: "r_1..r_n is a regular sequence (degreewise up to the bound)",
    CheckId.BIALGEBRA: "exterior algebra identities: d^2 = 0, derivation, coproduct laws",
    CheckId.KOSZUL_RESOLUTION: "Koszul complex is acyclic in positive degrees with H_0 = R/I",
    CheckId.COR_TOR: "Tor(S, S) is S ⊗ Λ as an algebra",
    CheckId.PROP_GR: "I/I^2 is free on the r_j and gr_I(R) is the symmetric algebra",
    CheckId.MODEL_EXACT: "model complex is exact through the truncation",
    CheckId.MODEL_COLINEAR: "model differentials are comodule maps",
    CheckId.SINGULAR: "the direct-sum extension has square-zero kernel",
    CheckId.LEIBNIZ: "connecting map of the singular extension is a derivation",
    CheckId.DELTA0: "delta^0(e_j) = -{r_j}",
    CheckId.PROP_SEQUENCE: "delta^s matches the model differential under psi",
    CheckId.FACTORIZATION: "delta^s = (p_{s+1})_* . eps^s",
    CheckId.LONG_SEQUENCE: "0 -> S -> Tor(S,S) -> Tor(S,I/I^2) -> ... is exact",
    CheckId.THEOREM1: "0 -> Tor(S,I^s) -> Tor(S,I^s/I^{s+1}) -> Tor(S,I^{s+1}) -> 0 exact and free",
}

CONNECTING_SIGN = "snake-lemma map times a global -1"


def parse_check_id(text: str) -> CheckId:
    try:
        return CheckId(text.strip().upper().replace("-", "_"))
    except ValueError:
        raise ValueError(f"unknown check {text!r}; known: {', '.join(c.value for c in CheckId)}") from None


# ---------------------------------------------------------------------------
# certificate


def jsonable(x: Any) -> Any:
    """Convert payloads to plain JSON values (exact rationals become strings)."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, ModuleInvariants):
        return x.to_json()
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


@dataclass
class CheckResult:
    id: CheckId
    status: str
    elapsed_ms: float | None = None
    witness: Any = None
    payload: dict = field(default_factory=dict)

    def to_json(self, timings: bool = False) -> dict:
        out = {"id": self.id.value, "status": self.status,
               "elapsed_ms": round(self.elapsed_ms, 3) if timings and self.elapsed_ms is not None else None}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.payload:
            out["payload"] = jsonable(self.payload)
        return out


@dataclass
class Certificate:
    instance: dict
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def overall(self) -> str:
        return PASS if all(c.status == PASS for c in self.checks) else FAIL

    def result(self, cid: CheckId) -> CheckResult | None:
        for c in self.checks:
            if c.id == cid:
                return c
        return None

    def to_dict(self, timings: bool = False) -> dict:
        return {"instance": jsonable(self.instance),
                "checks": [c.to_json(timings) for c in self.checks],
                "overall": self.overall}

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, ensure_ascii=False) + "\n"

    def to_text(self, timings: bool = False) -> str:
        inst = self.instance
        lines = [f"instance: {inst.get('base')}[{', '.join(inst.get('vars', []))}] "
                 f"weights={inst.get('weights')} sequence=({', '.join(inst.get('sequence', []))}) "
                 f"s_max={inst.get('s_max')} degree_max={inst.get('degree_max')} seed={inst.get('seed')}"]
        width = max([len(c.id.value) for c in self.checks] + [5])
        for c in self.checks:
            line = f"{c.id.value:<{width}}  {c.status}"
            if timings and c.elapsed_ms is not None:
                line += f"  {c.elapsed_ms:.1f} ms"
            lines.append(line)
            if c.witness is not None:
                lines.append(f"  witness: {json.dumps(jsonable(c.witness), ensure_ascii=False)}")
            reason = c.payload.get("reason") if c.payload else None
            if reason:
                lines.append(f"  reason: {reason}")
        lines.append(f"overall: {self.overall}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# instance helpers


@dataclass
class Bounds:
    s_max: int = 3
    degree_max: int = 8


def is_variable_sequence(ctx: RingContext) -> bool:
    gens = ctx.ring.gens()
    return ctx.n == ctx.ring.n and all(r == g for r, g in zip(ctx.sequence, gens))


def _digest(obj) -> str:
    blob = json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _orders_matrix(orders: list[int], base) -> ExactMatrix:
    cols = [{i: o} for i, o in enumerate(orders) if o]
    return ExactMatrix.from_columns(len(orders), cols, base)


def _exact_at(f_in: ExactMatrix, f_out: ExactMatrix, mid_orders, out_orders, base) -> ModuleInvariants:
    """Homology at the middle of ``f_in`` then ``f_out`` between presented groups."""
    h = Homology(f_in, f_out, rel_mid=_orders_matrix(mid_orders, base),
                 rel_out=_orders_matrix(out_orders, base))
    return h.invariants


def _zero(rows: int, cols: int, base) -> ExactMatrix:
    return ExactMatrix.zero(rows, cols, base)


def _quotient_ring_free(ctx: RingContext, D: int) -> bool:
    return all(standard_monomials(ctx, e) is not None for e in range(D + 1))


class _Run:
    """State shared by the checks of one run (all heavy data sits in ``ctx._cache``)."""

    def __init__(self, ctx: RingContext, bounds: Bounds, seed: int, threads: int = 1):
        self.ctx = ctx
        self.s_max = bounds.s_max
        self.D = bounds.degree_max
        self.seed = seed
        self.threads = threads

    def tor(self, M):
        return tor(self.ctx, M, self.D, threads=self.threads)

    # -- individual checks -------------------------------------------------

    def regularity(self) -> CheckReport:
        return check_regular_sequence(self.ctx, self.D)

    def bialgebra(self) -> CheckReport:
        return verify_bialgebra_identities(self.ctx, trials=100, seed=self.seed)

    def koszul_resolution(self) -> CheckReport:
        return check_koszul_resolution(self.ctx, self.D)

    def cor_tor(self) -> CheckReport:
        ctx, D, n = self.ctx, self.D, self.ctx.n
        rep = CheckReport("COR_TOR")
        S = cached_quotient(ctx, 0, 1, D)
        T = self.tor(S)
        ranks = {}
        for k in range(n + 1):
            for d in range(D + 1):
                parts = []
                for sub in combinations(range(n), k):
                    e = d - ctx.subset_degree(sub)
                    if e >= 0:
                        parts.append(S.quotient(e).invariants)
                expected = ModuleInvariants.direct_sum(parts)
                got = T[k].invariants(d)
                if got != expected:
                    return rep.fail({"k": k, "d": d, "got": got.to_json(), "expected": expected.to_json()})
            ranks[k] = T[k].total_rank()
        # products of the classes e_A match the wedge product
        cx = koszul_complex(S)
        one = S.element(0, 0, ctx.ring.one())

        def e_class(sub) -> TorClass | None:
            d = ctx.subset_degree(sub)
            if d > D:
                return None
            z = cx.to_min(len(sub), d, {tuple(sub): one})
            return T[len(sub)].class_of(d, z)

        subsets = [sub for k in range(n + 1) for sub in combinations(range(n), k)]
        products = 0
        for A in subsets:
            for B in subsets:
                a, b = e_class(A), e_class(B)
                if a is None or b is None or a.d + b.d > D:
                    continue
                got = tor_product(ctx, S, a, b)
                sign = merge_sign(A, B)
                if sign:
                    u = e_class(tuple(sorted(A + B)))
                    want = T[u.k].cell(u.d).reduce_coords([ctx.base(sign * c) for c in u.coords])
                else:
                    want = tuple(0 for _ in got.coords)
                if tuple(got.coords) != tuple(want):
                    return rep.fail({"left": list(A), "right": list(B), "got": list(got.coords),
                                     "expected": list(want)})
                products += 1
        # graded commutativity on all basis classes
        basis = [(k, d, g) for k in range(n + 1) for d in range(D + 1) for g in range(T[k].ngens(d))]
        for i, (k, d, g) in enumerate(basis):
            for (k2, d2, g2) in basis[i:]:
                if k + k2 > n or d + d2 > D:
                    continue
                a, b = T[k].basis_class(d, g), T[k2].basis_class(d2, g2)
                ab = tor_product(ctx, S, a, b)
                ba = tor_product(ctx, S, b, a)
                sgn = -1 if (k * k2) % 2 else 1
                h = T[k + k2].cell(d + d2)
                if ab.coords != h.reduce_coords([ctx.base(sgn * c) for c in ba.coords]):
                    return rep.fail({"alpha": [k, d, g], "beta": [k2, d2, g2], "reason": "not graded commutative"})
        rep.payload.update({"total_ranks": ranks, "wedge_products_checked": products,
                            "binomial_pattern": [comb(n, k) for k in range(n + 1)]})
        return rep

    def _gm(self, s: int, d: int):
        """Columns: minimal coordinates in ``(I^s/I^{s+1})_d`` of ``m r^alpha``; plus labels."""
        ctx = self.ctx
        key = ("gm", s, d, self.D)
        if key not in ctx._cache:
            C = cached_quotient(ctx, s, s + 1, self.D)
            span = sym_spanning_set(ctx, s, d)
            if span is None:
                ctx._cache[key] = None
            else:
                q = C.quotient(d)
                cols, labels = [], []
                for alpha, m, vec in span:
                    x = ideal_coords(ctx, s, d, vec)
                    cols.append({i: v for i, v in enumerate(q.coords(x)) if v})
                    labels.append((alpha, m))
                G = ExactMatrix.from_columns(q.ngens, cols, ctx.base)
                ctx._cache[key] = (G, labels, q)
        return ctx._cache[key]

    def prop_gr(self) -> CheckReport:
        ctx, D = self.ctx, self.D
        rep = CheckReport("PROP_GR")
        if not _quotient_ring_free(ctx, D):
            rep.status = SKIPPED
            rep.payload["reason"] = "R/I has no monomial basis over the base ring"
            return rep
        smax = self.s_max
        ranks = {}
        for s in range(smax + 2):
            for d in range(D + 1):
                G, labels, q = self._gm(s, d)
                if q.invariants.torsion:
                    return rep.fail({"s": s, "d": d, "torsion": list(q.invariants.torsion)})
                if G.rows != G.cols:
                    return rep.fail({"s": s, "d": d, "rank": G.rows, "sym_rank": G.cols})
                sv = Solver(G)
                for i in range(G.rows):
                    if sv.solve({i: 1}) is NO_SOLUTION:
                        return rep.fail({"s": s, "d": d, "reason": "m r^alpha do not span"})
                if G.cols:
                    ranks[f"{s},{d}"] = G.cols
        # multiplicativity: (m r^a)(m' r^b) = (m m') r^(a+b) with m m' reduced in R/I
        checked = 0
        for s in range(smax + 1):
            for t in range(smax + 1 - s):
                Cs = cached_quotient(ctx, s, s + 1, D)
                Ct = cached_quotient(ctx, t, t + 1, D)
                Cst = cached_quotient(ctx, s + t, s + t + 1, D)
                for d in range(D + 1):
                    for e in range(D + 1 - d):
                        Gd, Ld, qd = self._gm(s, d)
                        Ge, Le, qe = self._gm(t, e)
                        Gt, Lt, qt = self._gm(s + t, d + e)
                        index = {lab: i for i, lab in enumerate(Lt)}
                        for i in range(Gd.cols):
                            x = qd.lift([Gd[(r, i)] for r in range(Gd.rows)])
                            for j in range(Ge.cols):
                                y = qe.lift([Ge[(r, j)] for r in range(Ge.rows)])
                                got = qt.coords(multiply(Cs, d, x, Ct, e, y, Cst))
                                (a, m), (b, m2) = Ld[i], Le[j]
                                mm = tuple(u + v for u, v in zip(m, m2))
                                deg_mm = ctx.ring.monomial_degree(mm)
                                red = Quotient(len(ctx.ring.monomials(deg_mm)),
                                               ideal_basis(ctx, 1, deg_mm).columns(), ctx.base)
                                std = standard_monomials(ctx, deg_mm)
                                mons = ctx.ring.monomials(deg_mm)
                                coeffs = red.coords({ctx.ring.monomial_index(deg_mm)[mm]: 1})
                                ab = tuple(u + v for u, v in zip(a, b))
                                want: dict = {}
                                for c, idx in zip(coeffs, std):
                                    if c:
                                        col = Gt.column(index[(ab, mons[idx])])
                                        for r, v in col.items():
                                            want[r] = want.get(r, 0) + c * v
                                want_t = qt.reduce_coords([want.get(r, 0) for r in range(Gt.rows)])
                                if tuple(got) != want_t:
                                    return rep.fail({"left": [list(a), list(m)], "right": [list(b), list(m2)],
                                                     "reason": "product does not match Sym"})
                                checked += 1
        rep.payload.update({"ranks": ranks, "products_checked": checked})
        return rep

    def model_exact(self) -> CheckReport:
        return verify_model_exactness(self.ctx.n, max(self.s_max, 1), self.ctx.base)

    def model_colinear(self) -> CheckReport:
        return verify_colinearity(self.ctx.n, max(self.s_max, 1), self.ctx.base)

    def singular(self) -> CheckReport:
        return check_singular(build_ses(self.ctx, "SINGEXP", self.s_max, self.D))

    def leibniz(self) -> CheckReport:
        rep = verify_leibniz(self.ctx, build_ses(self.ctx, "SINGEXP", self.s_max, self.D), self.D)
        rep.payload["connecting_sign"] = CONNECTING_SIGN
        return rep

    def delta0(self) -> CheckReport:
        ctx, D, n = self.ctx, self.D, self.ctx.n
        rep = CheckReport("DELTA0")
        F0 = build_ses(ctx, "F", 0, D)
        S, A = F0.C, F0.A
        self.tor(S), self.tor(A)
        cS, cA = koszul_complex(S), koszul_complex(A)
        delta = connecting_map(F0)
        TA = self.tor(A)
        on_generators = {}
        checked = 0
        for j in range(n):
            ej = ctx.seq_degrees[j]
            for d in range(ej, D + 1):
                e = d - ej
                q = S.quotient(e)
                for gi, g in enumerate(q.generators):
                    z = cS.to_min(1, d, {(j,): g})
                    got = delta.apply_cycle(1, d, z)
                    poly = S.polynomial(e, g).get(0, ctx.ring.zero()) * ctx.sequence[j]
                    x = A.element(d, 0, -poly) if not poly.is_zero() else {}
                    want = TA[0].cell(d).class_of(cA.to_min(0, d, {(): x}))
                    if tuple(got) != tuple(want):
                        return rep.fail({"j": j + 1, "d": d, "generator": str(S.polynomial(e, g).get(0)),
                                         "got": list(got), "expected": list(want)})
                    checked += 1
                    if e == 0 and gi == 0:
                        on_generators[f"e{j + 1}"] = {"delta0": list(got), "-{r_j}": list(want)}
        rep.payload.update({"values": on_generators, "cells_checked": checked,
                            "connecting_sign": CONNECTING_SIGN})
        return rep

    def prop_sequence(self) -> CheckReport:
        ctx, D, n = self.ctx, self.D, self.ctx.n
        rep = CheckReport("PROP_SEQUENCE")
        variable = is_variable_sequence(ctx)
        signed_perm = True
        digests = {}
        for s in range(self.s_max + 1):
            F = build_ses(ctx, "F", s, D)
            C, A = F.C, F.A
            TC, TA = self.tor(C), self.tor(A)
            cC, cA = koszul_complex(C), koszul_complex(A)
            delta = connecting_map(F)
            sgn_src = -1 if s % 2 else 1
            for k in range(1, n + 1):
                observed = {}
                for idx, (alpha, T) in enumerate(model_basis(n, s, k)):
                    r_alpha = ctx.ring.one()
                    for j, a in enumerate(alpha):
                        r_alpha = r_alpha * ctx.sequence[j] ** a
                    base_deg = ctx.subset_degree(T) + r_alpha.degree
                    expected_col = model_differential(n, s, k, ctx.base).column(idx)
                    tgt_basis = model_basis(n, s + 1, k - 1)
                    for d in range(base_deg, D + 1):
                        e_m = d - base_deg
                        std = standard_monomials(ctx, e_m)
                        mons = ctx.ring.monomials(e_m)
                        for mi in std:
                            m = mons[mi]
                            mono = Polynomial(ctx.ring, {m: 1})
                            x = C.element(d - ctx.subset_degree(T), 0, (mono * r_alpha) * sgn_src)
                            z = cC.to_min(k, d, {T: x})
                            cls = delta.apply_cycle(k, d, z)
                            chain = TA[k - 1].representative(d, cls)
                            got = self._to_sym(s + 1, k - 1, d, chain, cA)
                            got = {key: ctx.base(-v if s % 2 == 0 else v) for key, v in got.items()}
                            want = {(tgt_basis[r][0], tgt_basis[r][1], m): v for r, v in expected_col.items()}
                            if got != want:
                                return rep.fail({"s": s, "k": k, "source": [list(alpha), list(T), list(m)],
                                                 "got": sorted((list(a), list(t), list(mm), v) for (a, t, mm), v in got.items()),
                                                 "expected": sorted((list(a), list(t), list(mm), v) for (a, t, mm), v in want.items())})
                            observed[(alpha, T, m)] = got
                digests[f"{s},{k}"] = _digest(sorted((str(kk), str(sorted(v.items()))) for kk, v in observed.items()))
            for d in range(D + 1):
                G = self._gm(s, d)[0]
                if not _signed_permutation(G):
                    signed_perm = False
        if variable and not signed_perm:
            return rep.fail({"reason": "change of basis is not a signed permutation"})
        # η corresponds to the unit S -> Λ_0
        eta = self._eta()
        if eta.matrix(0, 0) != ExactMatrix.identity(1, ctx.base):
            return rep.fail({"reason": "eta is not the unit at (0, 0)", "eta": eta.matrix(0, 0).to_dense()})
        rep.payload.update({"psi": "{r_j} -> -f_j, e_j -> e_j; Sym degree s carries (-1)^s",
                            "psi_change_of_basis_signed_permutation": signed_perm,
                            "strict": variable, "matrix_digests": digests,
                            "connecting_sign": CONNECTING_SIGN})
        return rep

    def _to_sym(self, s: int, k: int, d: int, chain: dict, cx) -> dict:
        """Decompose a chain of ``Λ_k ⊗ I^s/I^{s+1}`` on the basis ``e_T ⊗ m r^alpha``."""
        ctx = self.ctx
        blocks, owner, _ = cx.layout(k, d)
        per_block: dict = {}
        for g, v in chain.items():
            T, e, i = owner[g]
            per_block.setdefault(T, {})[i] = v
        out = {}
        for T, vec in per_block.items():
            e = blocks[T][0]
            G, labels, q = self._gm(s, e)
            x = Solver(G).solve(vec)
            if x is NO_SOLUTION:
                raise RuntimeError("chain is not in the span of m r^alpha")
            for i, v in x.items():
                if v:
                    alpha, m = labels[i]
                    out[(alpha, T, m)] = v
        return out

    def _eta(self) -> InducedMap:
        ses = build_ses(self.ctx, "R_OVER_I", 0, self.D)
        self.tor(ses.B), self.tor(ses.C)
        key = ("eta", self.D)
        if key not in self.ctx._cache:
            self.ctx._cache[key] = InducedMap(ses.p)
        return self.ctx._cache[key]

    def factorization(self) -> CheckReport:
        ctx, D, n = self.ctx, self.D, self.ctx.n
        rep = CheckReport("FACTORIZATION")
        compared = 0
        for s in range(self.s_max + 1):
            mor = e_to_f(ctx, s, D)
            pr = check_pushout(mor)
            if not pr.passed:
                return rep.fail({"s": s, "pushout": pr.witness})
            E, F = mor.top, mor.bottom
            for M in (E.A, E.C, F.A):
                self.tor(M)
            dE, dF = connecting_map(E), connecting_map(F)
            p_star = InducedMap(mor.left)
            TFA = self.tor(F.A)
            for k in range(1, n + 1):
                for d in range(D + 1):
                    lhs = dF.matrix(k, d)
                    rhs = p_star.matrix(k - 1, d) @ dE.matrix(k, d)
                    h = TFA[k - 1].cell(d)
                    for c in range(lhs.cols):
                        a = h.reduce_coords([lhs[(r, c)] for r in range(lhs.rows)])
                        b = h.reduce_coords([rhs[(r, c)] for r in range(rhs.rows)])
                        if a != b:
                            return rep.fail({"s": s, "k": k, "d": d, "column": c,
                                             "delta": list(a), "composite": list(b)})
                    compared += 1
        rep.payload.update({"cells_compared": compared, "connecting_sign": CONNECTING_SIGN})
        return rep

    def long_sequence(self) -> CheckReport:
        ctx, D, n = self.ctx, self.D, self.ctx.n
        rep = CheckReport("LONG_SEQUENCE")
        base = ctx.base
        eta = self._eta()
        R_tor = self.tor(eta.f.source)
        grs = [cached_quotient(ctx, s, s + 1, D) for s in range(self.s_max + 2)]
        T = [self.tor(M) for M in grs]
        deltas = [connecting_map(build_ses(ctx, "F", s, D)) for s in range(self.s_max + 1)]
        nodes = 0
        for d in range(D + 1):
            # η injective
            E = eta.matrix(0, d)
            if not _exact_at(_zero(R_tor[0].ngens(d), 0, base), E, R_tor[0].cell(d).orders,
                             T[0][0].cell(d).orders, base).is_zero:
                return rep.fail({"d": d, "node": "S", "reason": "eta not injective"})
            for s in range(self.s_max + 1):
                for k in range(n + 1):
                    mid = T[s][k].cell(d)
                    if s == 0:
                        f_in = eta.matrix(0, d) if k == 0 else _zero(mid.ngens, 0, base)
                    elif k + 1 <= n:
                        f_in = deltas[s - 1].matrix(k + 1, d)
                    else:
                        f_in = _zero(mid.ngens, 0, base)
                    if k >= 1:
                        f_out = deltas[s].matrix(k, d)
                        out_orders = T[s + 1][k - 1].cell(d).orders
                    else:
                        f_out = _zero(0, mid.ngens, base)
                        out_orders = []
                    inv = _exact_at(f_in, f_out, mid.orders, out_orders, base)
                    if not inv.is_zero:
                        return rep.fail({"d": d, "s": s, "k": k, "homology": inv.to_json()})
                    nodes += 1
        rep.payload.update({"nodes_checked": nodes, "stages": self.s_max,
                            "connecting_sign": CONNECTING_SIGN})
        return rep

    def theorem1(self) -> CheckReport:
        ctx, D, n = self.ctx, self.D, self.ctx.n
        rep = CheckReport("THEOREM1")
        base = ctx.base
        free_S = _quotient_ring_free(ctx, D)
        table = {}
        for s in range(self.s_max + 1):
            E = build_ses(ctx, "E", s, D)
            Is, C, Is1 = E.B, E.C, E.A
            TI, TC, TI1 = self.tor(Is), self.tor(C), self.tor(Is1)
            p_s = canonical_morphism(Is, C, label=f"p_{s}")
            p_star = InducedMap(p_s)
            eps = connecting_map(E)
            for k in range(n + 1):
                for name, grp in (("Tor(S,I^s)", TI[k]), ("Tor(S,I^s/I^(s+1))", TC[k])) + \
                        ((("Tor(S,I^(s+1))", TI1[k - 1]),) if k >= 1 else ()):
                    tc = grp.torsion_cells()
                    if tc:
                        return rep.fail({"s": s, "k": k, "group": name, "torsion": tc})
                hilb = {}
                for d in range(D + 1):
                    a, b = TI[k].cell(d), TC[k].cell(d)
                    P = p_star.matrix(k, d)
                    if k >= 1:
                        c = TI1[k - 1].cell(d)
                        Ep = eps.matrix(k, d)
                        c_orders, c_n = c.orders, c.ngens
                    else:
                        Ep = _zero(0, b.ngens, base)
                        c_orders, c_n = [], 0
                    checks = (
                        ("injective", _exact_at(_zero(a.ngens, 0, base), P, a.orders, b.orders, base)),
                        ("middle", _exact_at(P, Ep, b.orders, c_orders, base)),
                        ("surjective", _exact_at(Ep, _zero(0, c_n, base), c_orders, [], base)),
                    )
                    for where, inv in checks:
                        if not inv.is_zero:
                            return rep.fail({"s": s, "k": k, "d": d, "at": where, "homology": inv.to_json()})
                    ra, rb = a.invariants.free_rank, b.invariants.free_rank
                    rc = c.invariants.free_rank if k >= 1 else 0
                    if ra + rc != rb:
                        return rep.fail({"s": s, "k": k, "d": d, "ranks": [ra, rb, rc]})
                    if rb:
                        hilb[d] = rb
                total = sum(hilb.values())
                entry = {"rank_Tor_k(S,gr_s)": total, "hilbert": hilb,
                         "rank_Tor_k(S,I^s)": TI[k].total_rank(),
                         "rank_Tor_k-1(S,I^s+1)": TI1[k - 1].total_rank() if k >= 1 else 0}
                if free_S:
                    want = _expected_gr_tor_rank(ctx, s, k, D)
                    entry["expected"] = want
                    if total != want:
                        return rep.fail({"s": s, "k": k, "rank": total, "expected": want})
                table[f"{s},{k}"] = entry
        rep.payload.update({"ranks": table, "connecting_sign": CONNECTING_SIGN,
                            "free_check": "empty torsion in every (k, d) cell"})
        return rep


def _signed_permutation(G: ExactMatrix) -> bool:
    if G.rows != G.cols:
        return False
    seen = set()
    for c in range(G.cols):
        col = G.column(c)
        if len(col) != 1:
            return False
        (r, v), = col.items()
        if r in seen or v not in (1, -1) and not (G.base.modulus and v % G.base.modulus in (1, G.base.modulus - 1)):
            return False
        seen.add(r)
    return True


def _expected_gr_tor_rank(ctx: RingContext, s: int, k: int, D: int) -> int:
    """Number of ``e_T ⊗ m r^alpha`` (``|T| = k``, ``|alpha| = s``, ``m`` standard) of degree <= D."""
    total = 0
    for T in combinations(range(ctx.n), k):
        for _, r in products_of_sequence(ctx, s):
            base_deg = ctx.subset_degree(T) + r.degree
            for e in range(0, D - base_deg + 1):
                total += len(standard_monomials(ctx, e))
    return total


_RUNNERS = {
    CheckId.REGULARITY: _Run.regularity,
    CheckId.BIALGEBRA: _Run.bialgebra,
    CheckId.KOSZUL_RESOLUTION: _Run.koszul_resolution,
    CheckId.COR_TOR: _Run.cor_tor,
    CheckId.PROP_GR: _Run.prop_gr,
    CheckId.MODEL_EXACT: _Run.model_exact,
    CheckId.MODEL_COLINEAR: _Run.model_colinear,
    CheckId.SINGULAR: _Run.singular,
    CheckId.LEIBNIZ: _Run.leibniz,
    CheckId.DELTA0: _Run.delta0,
    CheckId.PROP_SEQUENCE: _Run.prop_sequence,
    CheckId.FACTORIZATION: _Run.factorization,
    CheckId.LONG_SEQUENCE: _Run.long_sequence,
    CheckId.THEOREM1: _Run.theorem1,
}


def _closure(selection: Iterable[CheckId]) -> list[CheckId]:
    need = set(selection)
    stack = list(need)
    while stack:
        c = stack.pop()
        for p in PREREQUISITES.get(c, ()):
            if p not in need:
                need.add(p)
                stack.append(p)
    return [c for c in RUN_ORDER if c in need]


def _execute(run: _Run, cid: CheckId, results: dict) -> CheckResult:
    failed = [p for p in PREREQUISITES.get(cid, ()) if results[p].status != PASS]
    if failed:
        names = ", ".join(f"{p.value} {results[p].status}" for p in failed)
        return CheckResult(cid, SKIPPED, 0.0, None, {"reason": f"prerequisite not passed: {names}"})
    t0 = time.perf_counter()
    try:
        rep = _RUNNERS[cid](run)
    except Exception as exc:  # a crash is reported as a failure, never aborts the suite
        rep = CheckReport(cid.value, FAIL, {"error": f"{type(exc).__name__}: {exc}"})
    elapsed = (time.perf_counter() - t0) * 1000.0
    return CheckResult(cid, rep.status, elapsed, rep.witness, dict(rep.payload))


def run_check(cid: CheckId, ctx: RingContext, bounds: Bounds, seed: int = 0,
              threads: int = 1) -> CheckResult:
    """Run one check (and, silently, its prerequisites)."""
    return run_all(ctx, bounds, seed, [cid], threads).checks[0]


def instance_description(ctx: RingContext, bounds: Bounds, seed: int) -> dict:
    out = ctx.describe()
    out.update({"s_max": bounds.s_max, "degree_max": bounds.degree_max, "seed": seed})
    return out


def run_all(ctx: RingContext, bounds: Bounds, seed: int = 0,
            selection: Iterable[CheckId] | None = None, threads: int = 1) -> Certificate:
    """Run the selection (default: every check) in dependency order."""
    selection = list(RUN_ORDER) if selection is None else [CheckId(c) for c in selection]
    chosen = set(selection)
    run = _Run(ctx, bounds, seed, threads)
    results: dict[CheckId, CheckResult] = {}
    for cid in _closure(selection):
        results[cid] = _execute(run, cid, results)
    cert = Certificate(instance_description(ctx, bounds, seed))
    for cid in RUN_ORDER:
        if cid in chosen:
            res = results[cid]
            internal = [p for p in PREREQUISITES.get(cid, ()) if p not in chosen]
            if internal:
                res.payload = dict(res.payload)
                res.payload["prerequisites_run_internally"] = {p.value: results[p].status for p in internal}
            cert.checks.append(res)
    return cert


__all__ = [
    "CheckId",
    "RUN_ORDER",
    "PREREQUISITES",
    "DESCRIPTIONS",
    "Bounds",
    "CheckResult",
    "Certificate",
    "run_check",
    "run_all",
    "is_variable_sequence",
    "instance_description",
    "jsonable",
    "parse_check_id",
]
