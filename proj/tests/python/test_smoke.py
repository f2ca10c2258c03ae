"""Smoke tests for the python bindings.

The heavy correctness work lives in the C++ suites; these only prove the
module imports and each exported call round-trips sensible values.
"""

import json
import math

import ghzt


def test_run_clean_session():
    out = ghzt.run(3, 1, seed=7)
    assert math.isclose(out["fidelity"], 1.0, abs_tol=1e-9)
    transcript = json.loads(out["transcript"])
    assert transcript["config"]["m"] == 3
    assert transcript["config"]["n"] == 1
    assert any(e["type"] == "result" for e in transcript["events"])


def test_run_fixed_message_with_withheld_bit():
    fid = ghzt.branch_average_fidelity(3, 1, withheld={2}, amplitudes=[0.6, 0.8])
    assert math.isclose(fid, 0.5392, abs_tol=1e-9)


def test_verify_enumerates_every_branch():
    report = ghzt.verify(3, 1)
    assert report["ok"] is True
    assert report["branches_checked"] == 8
    assert report["failures"] == []


def test_table_lists_the_full_correction_row():
    text = ghzt.table(3, 1)
    assert "ZXZ" in text
    md = ghzt.table(3, 1, format="md")
    assert "α\\|0⟩ + β\\|1⟩" in md


def test_random_message_is_deterministic_and_normalized():
    a = ghzt.random_message(2, seed=11)
    b = ghzt.random_message(2, seed=11)
    assert a == b
    assert len(a) == 4
    assert math.isclose(sum(abs(z) ** 2 for z in a), 1.0, abs_tol=1e-12)
    assert a != ghzt.random_message(2, seed=12)


def test_audit_reports_sampled_fidelities():
    report = ghzt.audit(3, 2, seed=5, trials=10)
    assert report["trials"] == 10
    assert len(report["fidelities"]) == 10
    assert report["min_fidelity"] >= 1.0 - 1e-10
    assert math.isclose(report["mean_fidelity"], sum(report["fidelities"]) / 10, abs_tol=1e-12)


def test_hinton_svg_renders_a_transcript():
    out = ghzt.run(3, 1, seed=7)
    svg = ghzt.hinton_svg(out["transcript"])
    assert svg.startswith("<svg ")
    assert "ρ_in Re" in svg and "ρ_out Im" in svg
