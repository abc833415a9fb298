"""Command-line front end.

    computeless run SCENARIO --out DIR [--audit] [--workers N]
    computeless sweep SCENARIO --axis NAME --values V1,V2,... --out DIR
    computeless compare REUSE_REPORT BASELINE_REPORT [--out FILE]

Exit status: 0 success, 2 configuration or usage error, 3 I/O error.
Set COMPUTELESS_LOG=DEBUG (or INFO, WARNING) for progress logging.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .artifacts import dump_json, sha256_file, write_audit_bundle, write_records_csv
from .config import SWEEPABLE, apply_sweep, load_scenario, scenario_to_dict
from .engine import run_trials
from .errors import ConfigError, UsageError
from .metrics import METRIC_FIELDS, MetricsReport, build_report, gain_from_totals, percentile

log = logging.getLogger("computeless")

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 2, 3


def _report_doc(scenario, strategies, reports) -> dict:
    return {
        "tool_version": __version__,
        "scenario": scenario_to_dict(scenario, strategies),
        "reports": [r.to_dict() for r in reports],
    }


def _run_all(scenario, strategies, workers):
    reports, trials = [], []
    for st in strategies:
        sc = scenario.with_strategy(st)
        log.info("running %s x %d trials", st.value, sc.trials)
        ts = run_trials(sc, workers)
        trials.append((sc, ts))
        reports.append(build_report(sc, ts))
    return reports, trials


def _manifest(out: Path, scenario_path, scenario, files, sweep=None) -> Path:
    entries = [{"path": str(f.relative_to(out)), "sha256": sha256_file(f)} for f in files]
    path = out / "manifest.json"
    dump_json(path, {
        "scenario": str(scenario_path),
        "out_dir": str(out),
        "sweep": sweep,
        "tool_version": __version__,
        "master_seed": scenario.master_seed,
        "files": entries,
    })
    return path


def cmd_run(scenario_path, out_dir, audit=False, workers=1) -> int:
    scenario, strategies = load_scenario(scenario_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports, trials = _run_all(scenario, strategies, workers)
    files = [out / "report.json", out / "records.csv"]
    dump_json(files[0], _report_doc(scenario, strategies, reports))
    write_records_csv(files[1], [t for _, ts in trials for t in ts])
    if audit:
        for sc, ts in trials:
            for t in ts:
                files.extend(write_audit_bundle(out / "audit", sc, t))
    _manifest(out, scenario_path, scenario, files)
    for r in reports:
        log.info("%s completion=%.6f computation=%.6f", r.strategy,
                 r.mean_completion_time, r.mean_computation_time)
    return EXIT_OK


def cmd_sweep(scenario_path, axis, values, out_dir, workers=1) -> int:
    if axis not in SWEEPABLE:
        raise ConfigError(axis, f"unknown sweep axis; choose from {sorted(SWEEPABLE)}")
    base, strategies = load_scenario(scenario_path)
    out = Path(out_dir)
    (out / "reports").mkdir(parents=True, exist_ok=True)
    files, rows = [], []
    for raw in values:
        scenario = apply_sweep(base, axis, raw)
        value = getattr(scenario.workload_config, axis, None)
        if value is None:
            value = getattr(scenario, axis)
        reports, _ = _run_all(scenario, strategies, workers)
        path = out / "reports" / f"{axis}={value}.json"
        dump_json(path, _report_doc(scenario, strategies, reports))
        files.append(path)
        for r in reports:
            for m in METRIC_FIELDS:
                rows.append((axis, value, r.strategy, m, getattr(r, m)))
    tidy = out / "sweep.csv"
    with open(tidy, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["axis", "axis_value", "strategy", "metric", "value"])
        w.writerows((a, v, s, m, repr(x)) for a, v, s, m, x in rows)
    wide = out / "series.csv"
    keys = [(m, s.value) for m in METRIC_FIELDS for s in strategies]
    table = {}
    for _, v, s, m, x in rows:
        table.setdefault(v, {})[(m, s)] = x
    with open(wide, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([axis] + [f"{m}[{s}]" for m, s in keys])
        for v, cols in table.items():
            w.writerow([v] + [repr(cols[k]) for k in keys])
    files = [tidy, wide] + files
    _manifest(out, scenario_path, base, files,
              sweep={"axis": axis, "values": [str(v) for v in values]})
    return EXIT_OK


def _load_report(path) -> list[MetricsReport]:
    import json

    with open(path) as fh:
        doc = json.load(fh)
    try:
        return [MetricsReport.from_dict(r) for r in doc["reports"]]
    except (KeyError, TypeError) as e:
        raise UsageError(f"{path}: not a report file ({e})") from None


def _pick(reports, strategy):
    for r in reports:
        if r.strategy == strategy:
            return r
    return reports[0]


def compare_reports(reuse: MetricsReport, baseline: MetricsReport) -> dict:
    if reuse.fingerprints != baseline.fingerprints:
        raise UsageError("reports come from different workloads (fingerprint mismatch)")
    from fractions import Fraction

    gains = [gain_from_totals(Fraction(a["total_compute_seconds"]),
                              Fraction(b["total_compute_seconds"]))
             for a, b in zip(reuse.per_trial, baseline.per_trial)]
    return {
        "reuse_strategy": reuse.strategy,
        "baseline_strategy": baseline.strategy,
        "completion_gain": percentile(gains),
        "per_trial_gain": gains,
        "metrics": {m: {"reuse": getattr(reuse, m), "baseline": getattr(baseline, m)}
                    for m in METRIC_FIELDS},
    }


def cmd_compare(reuse_path, baseline_path, out=None) -> int:
    reuse = _pick(_load_report(reuse_path), "EDGE_REUSE")
    baseline = _pick(_load_report(baseline_path), "EDGE_ONLY")
    result = compare_reports(reuse, baseline)
    print(f"{'metric':<24}{reuse.strategy:>16}{baseline.strategy:>16}")
    for m, v in result["metrics"].items():
        print(f"{m:<24}{v['reuse']:>16.6g}{v['baseline']:>16.6g}")
    print(f"{'completion_gain':<24}{result['completion_gain']:>16.6g}")
    if out:
        dump_json(out, result)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="computeless", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run every strategy listed in a scenario")
    r.add_argument("scenario")
    r.add_argument("--out", required=True)
    r.add_argument("--audit", action="store_true", help="also write per-trial audit bundles")
    r.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("sweep", help="run a scenario over values of one parameter")
    s.add_argument("scenario")
    s.add_argument("--axis", required=True)
    s.add_argument("--values", required=True, help="comma-separated list")
    s.add_argument("--out", required=True)
    s.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("compare", help="completion gain of one report against another")
    c.add_argument("reuse_report")
    c.add_argument("baseline_report")
    c.add_argument("--out")
    return p


def main(argv=None) -> int:
    level = os.environ.get("COMPUTELESS_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args.scenario, args.out, args.audit, args.workers)
        if args.command == "sweep":
            values = [v.strip() for v in args.values.split(",") if v.strip()]
            if not values:
                raise UsageError("--values needs at least one value")
            return cmd_sweep(args.scenario, args.axis, values, args.out, args.workers)
        return cmd_compare(args.reuse_report, args.baseline_report, args.out)
    except (ConfigError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:  # malformed report JSON and similar
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
