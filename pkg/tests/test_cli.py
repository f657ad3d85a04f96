import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import huygens.signaling
from huygens.cli import CSV_COLUMNS, main
from huygens.config import DetectorBlock, RunConfig, SweepSpec, apply_overrides, parse_config, serialize_config
from huygens.errors import ConfigError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# huygens-channel v")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


# --- configuration ---------------------------------------------------------

finite = st.floats(0.01, 50.0, allow_nan=False)
blocks = st.builds(DetectorBlock, omega=st.floats(0, 100), coupling=st.floats(-5, 5), switch_on=finite, duration=finite)
sweeps = st.builds(
    SweepSpec,
    variable=st.sampled_from(["T_iB", "Omega", "Delta", "R", "P"]),
    min=finite,
    max=finite,
    points=st.integers(1, 500),
    scale=st.sampled_from(["lin", "log"]),
)


@given(
    st.sampled_from(["matter", "lambda"]),
    finite,
    st.one_of(st.none(), finite),
    blocks,
    blocks,
    st.sampled_from(["comoving", "proper"]),
    st.floats(0, 10),
    st.sampled_from(["auto", "closed", "quadrature"]),
    sweeps,
    st.one_of(st.none(), st.sampled_from(["out.csv", "runs/a b.json"])),
)
@settings(max_examples=100, deadline=None)
def test_config_round_trip(kind, anchor, sqrt_lambda, alice, bob, mode, value, method, sweep, path):
    cfg = RunConfig(
        cosmology=kind,
        anchor=anchor,
        sqrt_lambda=sqrt_lambda,
        alice=alice,
        bob=bob,
        separation_mode=mode,
        separation_value=value,
        method=method,
        sweep=sweep,
        output_path=path,
    )
    text = serialize_config(cfg)
    again = parse_config(text)
    assert again == cfg
    assert serialize_config(again) == text


def test_fractions_and_comments():
    cfg = parse_config("# run\nalice.switch_on = 2/3  # anchor\n\nbob.duration = 1/100\n")
    assert cfg.alice.switch_on == 2.0 / 3.0
    assert cfg.bob.duration == 0.01


@pytest.mark.parametrize(
    "text,line",
    [
        ("alice.omega = 10\nbob.omega = ten\n", 2),
        ("method = auto\n\nnonsense\n", 3),
        ("alice.omega = 1\nalice.omega = 2\n", 2),
        ("cosmology.kind = radiation\n", 1),
        ("bob.colour = red\n", 1),
        ("sweep.points = 0\n", 1),
    ],
)
def test_malformed_config_reports_line(text, line):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert str(info.value).startswith(f"line {line}:")


def test_malformed_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("alice.omega = 10\nbob.switch_on = soon\n")
    code, _, err = run(capsys, "capacity", "--config", str(bad))
    assert code == 2
    assert "line 2" in err


def test_missing_config_file(tmp_path, capsys):
    code, _, _ = run(capsys, "capacity", "--config", str(tmp_path / "nope.cfg"))
    assert code == 2


def test_overrides():
    cfg = apply_overrides(RunConfig(), ["bob.omega=5", "cosmology.kind = lambda"])
    assert cfg.bob.omega == 5.0 and cfg.cosmology == "lambda"
    with pytest.raises(ConfigError):
        apply_overrides(RunConfig(), ["bob.omega"])


def test_config_subcommand(capsys):
    code, out, _ = run(capsys, "config", "--set", "alice.omega=3")
    assert code == 0
    assert parse_config(out).alice.omega == 3.0


# --- capacity --------------------------------------------------------------


def test_capacity_lambda_defaults(capsys):
    code, out, _ = run(capsys, "capacity", "--set", "cosmology.kind=lambda")
    rec = json.loads(out)
    assert code == 0
    assert rec["causal_class"] == "B5_StrictTimelike"
    assert rec["method"] == "ClosedForm"
    assert rec["C"] > 0
    assert rec["I_delta"] == 0.0
    assert rec["S2"] == pytest.approx(rec["I_theta"] / (4 * math.pi), rel=1e-15)
    assert set(rec) >= {"causal_class", "I_delta", "I_theta", "S2", "C", "method", "err_est", "warnings"}


def test_capacity_spacelike(capsys):
    code, out, _ = run(capsys, "capacity", "--set", "separation.value=100")
    rec = json.loads(out)
    assert code == 0
    assert rec["causal_class"] == "B1_Spacelike"
    assert rec["C"] == 0.0


def test_capacity_csv_and_out(tmp_path, capsys):
    target = tmp_path / "one.csv"
    code, out, _ = run(capsys, "capacity", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    rows = read_csv(target.read_text())
    assert len(rows) == 1 and rows[0]["method"] == "ClosedForm"


def test_proper_separation_warning(capsys):
    code, out, _ = run(capsys, "capacity", "--set", "separation.mode=proper", "--set", "bob.switch_on=1.2")
    assert code == 0
    assert json.loads(out)["warnings"]


# --- sweep -----------------------------------------------------------------


def test_single_point_sweep_equals_capacity(capsys):
    _, out, _ = run(capsys, "capacity", "--set", "bob.switch_on=3")
    rec = json.loads(out)
    code, out, _ = run(capsys, "sweep", "--set", "sweep.points=1", "--set", "sweep.min=3")
    row = read_csv(out)[0]
    assert code == 0
    assert list(row) == list(CSV_COLUMNS)
    assert float(row["capacity"]) == rec["C"]
    assert float(row["S2"]) == rec["S2"]
    assert row["causal_class"] == rec["causal_class"]


def test_sqrt_lambda_sweep_ratio(capsys, monkeypatch):
    monkeypatch.setenv("HUYGENS_THREADS", "1")
    code, out, _ = run(
        capsys, "sweep", "--set", "cosmology.kind=lambda", "--set", "sweep.variable=sqrt_lambda",
        "--set", "separation.value=0.1",
        "--set", "sweep.min=1", "--set", "sweep.max=2", "--set", "sweep.points=2",
    )
    rows = read_csv(out)
    assert code == 0
    assert all(r["causal_class"] == "B5_StrictTimelike" for r in rows)
    assert float(rows[1]["capacity"]) / float(rows[0]["capacity"]) == pytest.approx(16.0, rel=1e-12)


def test_sweep_records_errors_per_row(capsys, monkeypatch):
    monkeypatch.setenv("HUYGENS_THREADS", "1")
    # the negative proper separation is rejected for its row only
    code, out, _ = run(
        capsys, "sweep", "--set", "sweep.variable=P", "--set", "sweep.min=-1", "--set", "sweep.max=0.5",
        "--set", "sweep.points=2",
    )
    rows = read_csv(out)
    assert code == 0
    assert rows[0]["error"] and rows[0]["capacity"] == ""
    assert rows[1]["error"] == "" and float(rows[1]["capacity"]) > 0


def test_sweep_marks_non_timelike_rows(capsys, monkeypatch):
    monkeypatch.setenv("HUYGENS_THREADS", "1")
    code, out, _ = run(capsys, "sweep", "--set", "sweep.min=1.2", "--set", "sweep.max=2", "--set", "sweep.points=5")
    rows = read_csv(out)
    assert code == 0
    assert rows[0]["causal_class"] != "B5_StrictTimelike" and rows[0]["method"] == "Quadrature"
    assert rows[-1]["method"] == "ClosedForm"


def test_bad_thread_count(capsys, monkeypatch):
    monkeypatch.setenv("HUYGENS_THREADS", "many")
    code, _, _ = run(capsys, "sweep", "--set", "sweep.points=2")
    assert code == 2


def _sweep_bytes(tmp_path, threads, name):
    out = tmp_path / name
    env = dict(os.environ, HUYGENS_THREADS=str(threads))
    args = [
        sys.executable, "-m", "huygens", "sweep", "--out", str(out),
        "--set", "sweep.min=1.2", "--set", "sweep.max=4", "--set", "sweep.points=16",
    ]
    subprocess.run(args, check=True, env=env)
    return out.read_bytes()


def test_sweep_deterministic_across_threads(tmp_path):
    one = _sweep_bytes(tmp_path, 1, "a.csv")
    assert one == _sweep_bytes(tmp_path, 1, "b.csv")
    assert one == _sweep_bytes(tmp_path, 8, "c.csv")


# --- timing and verify ----------------------------------------------------


def test_timing_defaults(capsys):
    code, out, _ = run(capsys, "timing")
    rec = json.loads(out)
    assert code == 0
    assert rec["matter"]["T_min_comoving"] == pytest.approx(1.3177, abs=1e-3)
    assert rec["lambda"]["T_min_comoving"] == pytest.approx(1.3799, abs=1e-3)
    assert rec["matter"]["T_min_proper"] == pytest.approx(1.1050, abs=1e-3)
    assert rec["lambda"]["T_min_proper"] == pytest.approx(1.08213, abs=1e-4)
    for kind in ("matter", "lambda"):
        assert rec[kind]["T_min_proper"] < rec[kind]["T_min_comoving"]
    assert len(rec["samples"]["t"]) == len(rec["samples"]["a_matter"]) == len(rec["samples"]["a_lambda"])


def test_timing_unreachable_is_null(capsys):
    code, out, _ = run(capsys, "timing", "--set", "separation.value=1.5")
    rec = json.loads(out)
    assert code == 0
    assert rec["lambda"]["T_min_comoving"] is None
    assert "horizon" in rec["lambda"]["T_min_comoving_reason"]
    assert rec["matter"]["T_min_comoving"] is not None


def test_verify_fast_passes(capsys):
    code, out, _ = run(capsys, "verify", "--fast")
    assert code == 0
    assert "FAIL" not in out
    assert "commutator-reconstruction" not in out
    assert "closed-vs-quadrature-matter" in out


def test_verify_catches_wrong_prefactor(capsys, monkeypatch):
    original = huygens.signaling.i_theta_closed_matter
    monkeypatch.setattr(huygens.signaling, "i_theta_closed_matter", lambda a, b, approximate=False: 2 * original(a, b))
    code, out, _ = run(capsys, "verify", "--fast")
    assert code == 1
    assert "FAIL closed-vs-quadrature-matter" in out
    assert "PASS closed-vs-quadrature-lambda" in out
