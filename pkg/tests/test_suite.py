import json
from math import comb

import pytest

from koszul_tower.polyring import RingContext
from koszul_tower.suite import (PREREQUISITES, RUN_ORDER, Bounds, CheckId, parse_check_id, run_all,
                                run_check)
from koszul_tower.tor import ConnectingMap

from conftest import F2, F5, QQ, make_ctx

SMALL = Bounds(s_max=2, degree_max=6)


def statuses(cert):
    return {c.id: c.status for c in cert.checks}


def test_parse_check_id():
    assert parse_check_id("theorem1") == CheckId.THEOREM1
    assert parse_check_id("prop-sequence") == CheckId.PROP_SEQUENCE
    with pytest.raises(ValueError):
        parse_check_id("NOPE")


def test_prerequisites_precede_dependents():
    for cid, pres in PREREQUISITES.items():
        for p in pres:
            assert RUN_ORDER.index(p) < RUN_ORDER.index(cid)


@pytest.mark.parametrize("seq", [["x"], ["x", "y"], ["x**2", "y**3"]])
def test_canonical_instances_pass(seq):
    names = ("x",) if len(seq) == 1 else ("x", "y")
    cert = run_all(make_ctx(seq, names), SMALL)
    assert cert.overall == "PASS", [(c.id, c.witness, c.payload.get("error")) for c in cert.checks
                                    if c.status != "PASS"]
    assert [c.id for c in cert.checks] == RUN_ORDER


def test_theorem1_ranks_for_two_variables():
    res = run_check(CheckId.THEOREM1, RingContext.variables(2), Bounds(3, 8))
    assert res.status == "PASS"
    for s in range(4):
        for k in range(3):
            assert res.payload["ranks"][f"{s},{k}"]["rank_Tor_k(S,gr_s)"] == comb(2, k) * (s + 1)


def test_delta0_values_for_variable_sequence():
    res = run_check(CheckId.DELTA0, RingContext.variables(2), SMALL)
    assert res.status == "PASS"
    assert res.payload["values"]["e1"]["delta0"] == [-1, 0]
    assert res.payload["values"]["e2"]["delta0"] == [0, -1]


def test_negative_control():
    cert = run_all(make_ctx(["x", "x"]), Bounds(2, 4))
    st = statuses(cert)
    assert st[CheckId.REGULARITY] == "FAIL"
    assert cert.result(CheckId.REGULARITY).witness["witness"] == "1"
    assert st[CheckId.KOSZUL_RESOLUTION] == "FAIL"
    for cid in (CheckId.COR_TOR, CheckId.PROP_GR, CheckId.DELTA0, CheckId.PROP_SEQUENCE,
                CheckId.FACTORIZATION, CheckId.LONG_SEQUENCE, CheckId.THEOREM1):
        assert st[cid] == "SKIPPED"
        assert "REGULARITY" in cert.result(cid).payload["reason"]
    assert st[CheckId.MODEL_EXACT] == "PASS"
    assert cert.overall == "FAIL"


def test_empty_selection():
    cert = run_all(RingContext.variables(1), SMALL, selection=[])
    assert cert.checks == [] and cert.overall == "PASS"


def test_prerequisites_run_internally():
    cert = run_all(RingContext.variables(2), SMALL, selection=[CheckId.LEIBNIZ])
    assert [c.id for c in cert.checks] == [CheckId.LEIBNIZ]
    assert cert.checks[0].payload["prerequisites_run_internally"] == {"SINGULAR": "PASS"}


def test_certificate_is_deterministic():
    a = run_all(make_ctx(["x**2", "y**3"]), SMALL, seed=3).to_json()
    b = run_all(make_ctx(["x**2", "y**3"]), SMALL, seed=3).to_json()
    assert a == b
    data = json.loads(a)
    assert set(data) == {"instance", "checks", "overall"}
    assert all(c["elapsed_ms"] is None for c in data["checks"])


def test_timings_are_opt_in():
    cert = run_all(RingContext.variables(1), SMALL, selection=[CheckId.REGULARITY])
    assert json.loads(cert.to_json(timings=True))["checks"][0]["elapsed_ms"] is not None


def test_text_report_lists_statuses():
    cert = run_all(make_ctx(["x", "x"]), Bounds(1, 3))
    text = cert.to_text()
    for c in cert.checks:
        assert f"{c.id.value}" in text
    assert text.rstrip().endswith("overall: FAIL")


@pytest.mark.parametrize("base", [F2, F5, QQ])
@pytest.mark.parametrize("seq", [["x", "y"], ["x**2", "y**3"]])
def test_field_instances(base, seq):
    cert = run_all(make_ctx(seq, base=base), SMALL)
    assert cert.overall == "PASS", [(c.id, c.witness) for c in cert.checks if c.status != "PASS"]


def test_weighted_instance():
    cert = run_all(make_ctx(["x**2", "y"], weights=[1, 2]), SMALL)
    assert cert.overall == "PASS", [(c.id, c.witness, c.payload.get("error")) for c in cert.checks
                                    if c.status != "PASS"]


def test_flipped_connecting_sign_is_caught():
    original = ConnectingMap.SIGN
    try:
        ConnectingMap.SIGN = 1
        cert = run_all(RingContext.variables(2), SMALL,
                       selection=[CheckId.DELTA0, CheckId.PROP_SEQUENCE])
    finally:
        ConnectingMap.SIGN = original
    st = statuses(cert)
    assert st[CheckId.DELTA0] == "FAIL"
    assert st[CheckId.PROP_SEQUENCE] == "FAIL"
