"""Command-line front end: ``huygens {capacity,sweep,timing,verify}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .capacity import evaluate
from .causality import (
    comoving_separation,
    max_timelike_comoving_separation,
    min_timelike_switch_on_comoving,
    min_timelike_switch_on_proper,
)
from .config import RunConfig, apply_overrides, load_config, serialize_config
from .cosmology import normalized_pair, scale_factor
from .errors import ConfigError, ConvergenceError, DomainError
from .verify import run_checks

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

CSV_COLUMNS = ("sweep_value", "causal_class", "I_delta", "I_theta", "S2", "capacity", "err_est", "method", "error")


def _num(x: float) -> str:
    return format(float(x), ".17g")


def capacity_record(cfg: RunConfig) -> dict:
    """One evaluation as a JSON-ready dict."""
    try:
        model = cfg.model()
        pair = cfg.pair()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    ev = evaluate(model, pair, method=cfg.method)
    return {
        "cosmology": cfg.cosmology,
        "causal_class": ev.signal.causal_class.value,
        "comoving_separation": comoving_separation(model, pair),
        "I_delta": ev.signal.i_delta,
        "I_theta": ev.signal.i_theta,
        "S2": ev.signal.s2,
        "C": ev.capacity.capacity_bits,
        "method": ev.signal.method.value,
        "err_est": ev.capacity.err_est,
        "warnings": list(ev.warnings),
    }


def sweep_row(cfg: RunConfig, value: float) -> dict:
    """Evaluate one sweep point; failures land in the ``error`` column."""
    row = {"sweep_value": _num(value)}
    try:
        rec = capacity_record(cfg.with_sweep_value(value))
    except (ValueError, ConvergenceError, ArithmeticError) as exc:
        row.update({c: "" for c in CSV_COLUMNS[1:]})
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    row.update(_record_columns(rec))
    return row


def _record_columns(rec: dict) -> dict:
    return dict(
        causal_class=rec["causal_class"],
        I_delta=_num(rec["I_delta"]),
        I_theta=_num(rec["I_theta"]),
        S2=_num(rec["S2"]),
        capacity=_num(rec["C"]),
        err_est=_num(rec["err_est"]),
        method=rec["method"],
        error="",
    )


def _row_job(args):
    cfg, value = args
    return sweep_row(cfg, value)


def sweep_workers() -> int:
    raw = os.environ.get("HUYGENS_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"HUYGENS_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError("HUYGENS_THREADS must be non-negative")
    return n if n > 0 else (os.cpu_count() or 1)


def sweep_rows(cfg: RunConfig, workers: int | None = None) -> list[dict]:
    """Rows in sweep order; evaluated in parallel when ``workers > 1``."""
    if cfg.cosmology == "matter" and cfg.sweep.variable == "sqrt_lambda":
        raise ConfigError("sqrt_lambda sweeps need cosmology.kind = lambda")
    values = cfg.sweep.values()
    workers = sweep_workers() if workers is None else workers
    jobs = [(cfg, v) for v in values]
    if workers <= 1 or len(jobs) <= 1:
        return [_row_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(_row_job, jobs, chunksize=1))


def render_sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"# huygens-channel v{__version__}\n")
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def timing_record(cfg: RunConfig, n_samples: int = 101) -> dict:
    """Earliest strictly timelike switch-on times and scale-factor samples for both models."""
    t_ia, delta = cfg.alice.switch_on, cfg.alice.duration
    sep = cfg.separation_value
    record: dict = {"T_iA": t_ia, "Delta": delta, "separation": sep, "T_iB": cfg.bob.switch_on}
    for model in normalized_pair(cfg.anchor):
        entry: dict = {}
        for key, fn, arg in (
            ("T_min_comoving", min_timelike_switch_on_comoving, sep),
            ("T_min_proper", min_timelike_switch_on_proper, sep),
        ):
            try:
                entry[key] = fn(model, t_ia, delta, arg)
            except DomainError as exc:
                entry[key] = None
                entry[f"{key}_reason"] = str(exc)
        try:
            entry["R_max"] = max_timelike_comoving_separation(model, t_ia, delta, cfg.bob.switch_on)
        except DomainError as exc:
            entry["R_max"] = None
            entry["R_max_reason"] = str(exc)
        record[model.kind.value] = entry
    t_hi = max(cfg.bob.switch_on, 2.0)
    ts = np.linspace(t_hi / n_samples, t_hi, n_samples)
    matter, de_sitter = normalized_pair(cfg.anchor)
    record["samples"] = {
        "t": ts.tolist(),
        "a_matter": np.asarray(scale_factor(matter, ts)).tolist(),
        "a_lambda": np.asarray(scale_factor(de_sitter, ts)).tolist(),
    }
    return record


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def cmd_capacity(cfg: RunConfig, fmt: str, out: str | None) -> int:
    rec = capacity_record(cfg)
    if fmt == "csv":
        _emit(render_sweep_csv([{"sweep_value": "", **_record_columns(rec)}]), out)
    else:
        _emit(_json(rec), out)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, fmt: str, out: str | None) -> int:
    rows = sweep_rows(cfg)
    if fmt == "json":
        _emit(_json(rows), out)
    else:
        _emit(render_sweep_csv(rows), out)
    return EXIT_OK


def cmd_timing(cfg: RunConfig, fmt: str, out: str | None) -> int:
    _emit(_json(timing_record(cfg)), out)
    return EXIT_OK


def cmd_verify(fast: bool, out: str | None) -> int:
    results = run_checks(fast=fast)
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results]
    failed = [r.name for r in results if not r.passed]
    lines.append("all checks passed" if not failed else f"failed: {', '.join(failed)}")
    _emit("\n".join(lines) + "\n", out)
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="huygens", description="Timelike channel capacity in FRW cosmologies.")
    parser.add_argument("--version", action="version", version=f"huygens-channel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("capacity", "single-point capacity as a JSON record"),
        ("sweep", "parameter sweep as CSV"),
        ("timing", "earliest timelike switch-on times and scale factors"),
        ("verify", "run the oracle self-test suite"),
        ("config", "print the canonical form of a configuration"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat key = value configuration file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        if name == "verify":
            p.add_argument("--fast", action="store_true", help="skip the mode-equation reconstruction")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.fast, args.out)
        cfg = apply_overrides(load_config(args.config), args.set)
        out = args.out or cfg.output_path
        if args.command == "config":
            _emit(serialize_config(cfg), out)
            return EXIT_OK
        if args.command == "capacity":
            return cmd_capacity(cfg, args.format or "json", out)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.format or cfg.output_format, out)
        return cmd_timing(cfg, args.format or "json", out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
