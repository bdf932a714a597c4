"""Acceptance criteria 1-9, each reported as one PASS/FAIL line.

Every criterion is an ordinary test; the outcome is also recorded in
``RESULTS`` and printed by the terminal-summary hook in ``conftest.py`` (and
directly when this file is run as a script).
"""

import functools
import json
import os
import random
import sys
import time
from math import comb

from koszul_tower.cli import main as cli_main
from koszul_tower.linalg import BaseRing, ExactMatrix, Homology, kernel_basis, subquotient_homology
from koszul_tower.model import model_differential, verify_colinearity, verify_model_exactness
from koszul_tower.modules import build_ses
from koszul_tower.polyring import PolyRing, RingContext
from koszul_tower.suite import Bounds, CheckId, run_all
from koszul_tower.tor import connecting_hom, tor

sys.path.insert(0, os.path.dirname(__file__))
from oracles import homology_reference, snf_invariants  # noqa: E402

ZZ = BaseRing.integers()
F2 = BaseRing.prime_field(2)
CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")
RESULTS: dict[int, tuple[str, str]] = {}

TITLES = {
    1: "Tor short exact sequences exact, free, ranks C(n,k)C(n+s-1,n-1) (n<=3, s<=3, D=8)",
    2: "delta^0(e_j) = -{r_j} on the three canonical instances",
    3: "psi-conjugated delta^s equals the model differential; long sequence exact",
    4: "Leibniz rule on the singular extension over Z and F2 (n<=3, D=8)",
    5: "exterior bialgebra identities and Koszul acyclicity",
    6: "model complex exact and colinear (n<=4, s_max=4, Z/Q/F2/F5), free kernels",
    7: "negative control (x, x)",
    8: "byte-identical JSON certificates",
    9: "homology oracle on 200 random pairs; lift-strategy invariance",
}


def criterion(number):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            status = "FAIL"
            try:
                fn(*args, **kwargs)
                status = "PASS"
            finally:
                RESULTS[number] = (status, TITLES[number])
                print(line(number))
        return run
    return wrap


def line(number):
    status, title = RESULTS[number]
    return f"criterion {number}: {status}  {title}"


def ctx_of(seq, names, base=ZZ):
    ring = PolyRing(base, list(names))
    g = dict(zip(names, ring.gens()))
    return RingContext(ring, [eval(s, {}, dict(g)) for s in seq])


CANONICAL = [(["x"], ["x"]), (["x", "y"], ["x", "y"]), (["x**2", "y**3"], ["x", "y"])]


def failures(cert):
    return [(c.id.value, c.status, c.witness, c.payload.get("error")) for c in cert.checks
            if c.status != "PASS"]


@criterion(1)
def test_criterion_1_theorem():
    t0 = time.perf_counter()
    for n in (1, 2, 3):
        cert = run_all(RingContext.variables(n), Bounds(3, 8), selection=[CheckId.THEOREM1])
        assert cert.overall == "PASS", failures(cert)
        ranks = cert.checks[0].payload["ranks"]
        for s in range(4):
            for k in range(n + 1):
                assert ranks[f"{s},{k}"]["rank_Tor_k(S,gr_s)"] == comb(n, k) * comb(n + s - 1, n - 1)
    assert time.perf_counter() - t0 < 60


@criterion(2)
def test_criterion_2_delta0():
    for seq, names in CANONICAL:
        ctx = ctx_of(seq, names)
        cert = run_all(ctx, Bounds(3, 8), selection=[CheckId.DELTA0])
        assert cert.overall == "PASS", failures(cert)
        values = cert.checks[0].payload["values"]
        assert len(values) == ctx.n
        for v in values.values():
            assert v["delta0"] == v["-{r_j}"]
        if seq == names:
            for j in range(ctx.n):
                assert values[f"e{j + 1}"]["delta0"] == [-1 if i == j else 0 for i in range(ctx.n)]


@criterion(3)
def test_criterion_3_model_identification():
    for n in (1, 2, 3):
        cert = run_all(RingContext.variables(n), Bounds(3, 8),
                       selection=[CheckId.PROP_SEQUENCE, CheckId.LONG_SEQUENCE])
        assert cert.overall == "PASS", failures(cert)
        assert cert.checks[0].payload["strict"] is True
        assert cert.checks[0].payload["psi_change_of_basis_signed_permutation"] is True


@criterion(4)
def test_criterion_4_leibniz():
    for base in (ZZ, F2):
        for n in (1, 2, 3):
            cert = run_all(RingContext.variables(n, base), Bounds(3, 8), selection=[CheckId.LEIBNIZ])
            assert cert.overall == "PASS", failures(cert)
            assert cert.checks[0].payload["pairs_checked"] > 0


@criterion(5)
def test_criterion_5_identities_and_acyclicity():
    for seq, names in CANONICAL + [(["x", "y", "z"], ["x", "y", "z"])]:
        cert = run_all(ctx_of(seq, names), Bounds(3, 8),
                       selection=[CheckId.BIALGEBRA, CheckId.KOSZUL_RESOLUTION])
        assert cert.overall == "PASS", failures(cert)
        assert cert.checks[0].payload["trials"] == 100


@criterion(6)
def test_criterion_6_model_complex():
    for base in (ZZ, BaseRing.rationals(), F2, BaseRing.prime_field(5)):
        for n in (1, 2, 3, 4):
            assert verify_model_exactness(n, 4, base).passed
            assert verify_colinearity(n, 4, base).passed
    for n in (1, 2, 3, 4):
        for s in range(5):
            for k in range(1, n + 1):
                K = kernel_basis(model_differential(n, s, k, ZZ))
                if K.cols:
                    assert snf_invariants(K.to_dense()) == [1] * K.cols


@criterion(7)
def test_criterion_7_negative_control():
    cert = run_all(ctx_of(["x", "x"], ["x", "y"]), Bounds(3, 8))
    st = {c.id: c for c in cert.checks}
    assert st[CheckId.REGULARITY].status == "FAIL" and st[CheckId.REGULARITY].witness
    assert st[CheckId.KOSZUL_RESOLUTION].status == "FAIL"
    assert st[CheckId.KOSZUL_RESOLUTION].witness["k"] == 1
    for cid in (CheckId.COR_TOR, CheckId.PROP_GR, CheckId.DELTA0, CheckId.PROP_SEQUENCE,
                CheckId.FACTORIZATION, CheckId.LONG_SEQUENCE, CheckId.THEOREM1):
        assert st[cid].status == "SKIPPED"
    assert cli_main(["verify", "--config", os.path.join(CONFIGS, "negative_xx.cfg"),
                     "--out", os.devnull]) == 1


@criterion(8)
def test_criterion_8_determinism(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert cli_main(["verify", "--config", os.path.join(CONFIGS, "z_x2_y3.cfg"),
                         "--out", str(p)]) == 0
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    json.loads(a)


def _random_pair(rng):
    m = rng.randint(1, 12)
    c = rng.randint(0, 12)
    d_out = ExactMatrix.from_columns(c, [{i: rng.randint(-4, 4) for i in range(c) if rng.random() < 0.5}
                                         for _ in range(m)], ZZ)
    K = kernel_basis(d_out)
    a = rng.randint(0, 12)
    X = ExactMatrix.from_columns(K.cols, [{i: rng.randint(-3, 3) for i in range(K.cols)
                                           if rng.random() < 0.6} for _ in range(a)], ZZ)
    return K @ X, d_out, m


@criterion(9)
def test_criterion_9_oracles():
    rng = random.Random(2024)
    for _ in range(200):
        d_in, d_out, m = _random_pair(rng)
        assert (d_out @ d_in).is_zero()
        inv, _, _ = subquotient_homology(d_in, d_out)
        din_rows = d_in.to_dense() if d_in.cols else [[] for _ in range(m)]
        dout_rows = d_out.to_dense() if d_out.rows else []
        assert (inv.free_rank, inv.torsion) == homology_reference(din_rows, dout_rows, m)
        assert Homology(d_in, d_out).invariants == inv
    for n in (1, 2, 3):
        ctx = RingContext.variables(n)
        for s in range(4):
            for tag in ("E", "F"):
                ses = build_ses(ctx, tag, s, 8)
                for M in (ses.A, ses.B, ses.C):
                    tor(ctx, M, 8)
                assert connecting_hom(ctx, ses, 8) == connecting_hom(ctx, ses, 8, strategy="reversed")


if __name__ == "__main__":
    import inspect
    import pathlib
    import tempfile

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                if "tmp_path" in inspect.signature(fn).parameters:
                    with tempfile.TemporaryDirectory() as d:
                        fn(pathlib.Path(d))
                else:
                    fn()
            except AssertionError:
                pass
    sys.exit(0 if all(s == "PASS" for s, _ in RESULTS.values()) else 1)
