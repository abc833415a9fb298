"""On-disk formats: task-record CSV, report JSON, and the JSONL audit bundle.

Workload JSONL, one task per line::

    {"task_id": 0, "user_id": 3, "release_time": "0.004", "input_size": 91234,
     "segments": [{"truth_label": 7, "size": 91234, "features": [...]}]}

Catalog JSONL, one class per line: ``{"class_id": 0, "prototype": [...]}``.
Times are exact decimal strings; feature floats round-trip through repr.
"""

from __future__ import annotations

import csv
import hashlib
import json
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

import numpy as np

from .workload import ObjectClass, Segment, Task

RECORD_COLUMNS = [
    "strategy", "trial", "task_id", "segments", "release_time", "completion_time",
    "transit_seconds", "queue_seconds", "compute_seconds", "correctness_fraction",
    "hits", "misses",
]


def exact_decimal(x: Fraction) -> str:
    """Exact decimal text for a terminating fraction, else ``p/q``."""
    x = Fraction(x)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(twos, fives)
    n = int(x * 10**places)
    digits = tuple(int(c) for c in str(abs(n)))
    return format(Decimal((n < 0, digits, -places)), "f")


def parse_time(text: str) -> Fraction:
    return Fraction(text)


def write_records_csv(path, trials) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for trial in trials:
            for r in trial.records:
                w.writerow([
                    trial.strategy.value, trial.trial_index, r.task_id, r.segments,
                    exact_decimal(r.release_time), exact_decimal(r.completion_time),
                    exact_decimal(r.transit_seconds), exact_decimal(r.queue_seconds),
                    exact_decimal(r.compute_seconds), repr(r.correctness_fraction),
                    r.hits, r.misses,
                ])


def read_records_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def dump_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _floats(v) -> list[float]:
    return [float(x) for x in np.asarray(v)]


def _frozen(values) -> np.ndarray:
    # stored vectors are already unit length; renormalizing could flip last bits
    v = np.array(values, dtype=np.float64)
    v.flags.writeable = False
    return v


def task_to_json(t: Task) -> dict:
    return {
        "task_id": t.task_id,
        "user_id": t.user_id,
        "release_time": exact_decimal(t.release_time),
        "input_size": t.input_size,
        "segments": [{"truth_label": s.truth_label, "size": s.size,
                      "features": _floats(s.features)} for s in t.segments],
    }


def task_from_json(d: dict) -> Task:
    segs = tuple(Segment(_frozen(s["features"]), s["truth_label"], s["size"])
                 for s in d["segments"])
    return Task(d["task_id"], d["user_id"], segs, parse_time(d["release_time"]),
                d["input_size"])


def write_workload_jsonl(path, tasks) -> None:
    with open(path, "w") as fh:
        for t in tasks:
            fh.write(json.dumps(task_to_json(t)) + "\n")


def read_workload_jsonl(path) -> list[Task]:
    with open(path) as fh:
        return [task_from_json(json.loads(line)) for line in fh if line.strip()]


def write_catalog_jsonl(path, catalog) -> None:
    with open(path, "w") as fh:
        for c in catalog:
            fh.write(json.dumps({"class_id": c.class_id,
                                 "prototype": _floats(c.prototype)}) + "\n")


def read_catalog_jsonl(path) -> list[ObjectClass]:
    with open(path) as fh:
        rows = [json.loads(line) for line in fh if line.strip()]
    return [ObjectClass(r["class_id"], _frozen(r["prototype"])) for r in rows]


def write_audit_bundle(out_dir, scenario, trial) -> list[Path]:
    """Workload, catalog, hyperplanes and table snapshot for one trial."""
    from .engine import trial_seeds
    from .workload import build_catalog

    base = Path(out_dir) / f"{trial.strategy.value}_trial{trial.trial_index:03d}"
    base.mkdir(parents=True, exist_ok=True)
    seeds = trial_seeds(scenario, trial.trial_index)
    wc = scenario.workload_config
    written = [base / "workload.jsonl", base / "catalog.jsonl"]
    write_workload_jsonl(written[0], trial.tasks)
    write_catalog_jsonl(written[1], build_catalog(wc.catalog_size, wc.dimension,
                                                  seeds["catalog"]))
    if trial.table is not None:
        planes = trial.table.index.hyperplanes
        written.append(base / "hyperplanes.json")
        dump_json(written[-1], {"seed": seeds["lsh"],
                                "shape": list(planes.shape),
                                "hyperplanes": [[_floats(p) for p in t] for t in planes]})
        written.append(base / "table.json")
        dump_json(written[-1], trial.table.snapshot())
    return written
