"""Scenario files: JSON with a default for every field.

Top-level keys::

    workload        WorkloadConfig fields (seed is derived per trial, not read)
    cloud_profile   {compute_time_per_segment, parallel_slots}
    edge_profile    {compute_time_per_segment, parallel_slots}
    cloud_path      {hops, per_hop_latency, bandwidth}
    edge_path       {hops, per_hop_latency, bandwidth}
    lsh             {num_tables, signature_bits, rho}
    table_capacity, similarity_threshold, max_candidates, lookup_seconds,
    response_bytes_per_segment, trials, master_seed
    strategies      list drawn from CLOUD_ONLY, EDGE_ONLY, EDGE_REUSE

An empty object ``{}`` is a valid scenario.
"""

from __future__ import annotations

import dataclasses
import json
import re

from .compute import CLOUD, EDGE, ServerProfile
from .engine import Scenario, Strategy
from .errors import ConfigError
from .lsh import LshParams
from .network import CLOUD_PATH, EDGE_PATH, PathProfile
from .workload import WorkloadConfig

_SECTIONS = {
    "workload": (WorkloadConfig, {"seed"}),
    "cloud_profile": (ServerProfile, {"name"}),
    "edge_profile": (ServerProfile, {"name"}),
    "cloud_path": (PathProfile, set()),
    "edge_path": (PathProfile, set()),
    "lsh": (LshParams, {"seed", "dimension"}),
}
_SCALARS = {
    "table_capacity": int,
    "similarity_threshold": float,
    "max_candidates": int,
    "lookup_seconds": float,
    "response_bytes_per_segment": int,
    "trials": int,
    "master_seed": int,
}
SWEEPABLE = {
    "num_tasks": ("workload", int),
    "duplicate_probability": ("workload", float),
    "table_capacity": (None, int),
    "similarity_threshold": (None, float),
}
ALL_STRATEGIES = [s.value for s in Strategy]


def _check_type(name, value, want):
    if isinstance(value, bool):
        raise ConfigError(name, f"expected a number, got {value!r}")
    if want is int and not isinstance(value, int):
        raise ConfigError(name, f"expected an integer, got {value!r}")
    if want is float and not isinstance(value, (int, float)):
        raise ConfigError(name, f"expected a number, got {value!r}")


def _section_types(cls):
    hints = {f.name: f.type for f in dataclasses.fields(cls)}
    out = {}
    for k, t in hints.items():
        t = str(t)
        out[k] = int if t == "int" else float if t == "float" else tuple if "tuple" in t else str
    return out


def _build(section, cls, skip, raw, extra=None):
    if not isinstance(raw, dict):
        raise ConfigError(section, "expected an object")
    types = _section_types(cls)
    kwargs = dict(extra or {})
    for k, v in raw.items():
        if k not in types or k in skip:
            raise ConfigError(f"{section}.{k}", "unknown field")
        name = f"{section}.{k}"
        if types[k] is tuple:
            if not isinstance(v, list) or len(v) != 2:
                raise ConfigError(name, "expected a [min, max] pair")
            for x in v:
                _check_type(name, x, int)
            v = tuple(v)
        elif types[k] in (int, float):
            _check_type(name, v, types[k])
        kwargs[k] = v
    try:
        return cls(**kwargs)
    except ConfigError as e:
        raise ConfigError(f"{section}.{e.field}", e.message) from None


def scenario_from_dict(d: dict) -> tuple[Scenario, list[Strategy]]:
    if not isinstance(d, dict):
        raise ConfigError("scenario", "top level must be a JSON object")
    known = set(_SECTIONS) | set(_SCALARS) | {"strategies"}
    for k in d:
        if k not in known:
            raise ConfigError(k, "unknown field")
    kw = {}
    wc = _build("workload", WorkloadConfig, {"seed"}, d.get("workload", {}))
    kw["workload_config"] = wc
    kw["cloud_profile"] = _build("cloud_profile", ServerProfile, {"name"},
                                 d.get("cloud_profile", {}),
                                 dataclasses.asdict(CLOUD))
    kw["edge_profile"] = _build("edge_profile", ServerProfile, {"name"},
                                d.get("edge_profile", {}),
                                dataclasses.asdict(EDGE))
    kw["cloud_path"] = _build("cloud_path", PathProfile, set(), d.get("cloud_path", {}),
                              dataclasses.asdict(CLOUD_PATH))
    kw["edge_path"] = _build("edge_path", PathProfile, set(), d.get("edge_path", {}),
                             dataclasses.asdict(EDGE_PATH))
    kw["lsh_params"] = _build("lsh", LshParams, {"seed", "dimension"}, d.get("lsh", {}),
                              {"dimension": wc.dimension})
    for k, want in _SCALARS.items():
        if k in d:
            _check_type(k, d[k], want)
            kw[k] = d[k]
    strategies = d.get("strategies", ALL_STRATEGIES)
    if not isinstance(strategies, list) or not strategies:
        raise ConfigError("strategies", "expected a nonempty list")
    try:
        strategies = [Strategy(s) for s in strategies]
    except ValueError:
        raise ConfigError("strategies", f"entries must be among {ALL_STRATEGIES}") from None
    if kw["cloud_path"].hops <= kw["edge_path"].hops:
        raise ConfigError("cloud_path.hops", "cloud path must be longer than the edge path")
    if (kw["cloud_profile"].compute_time_per_segment
            > kw["edge_profile"].compute_time_per_segment):
        raise ConfigError("cloud_profile.compute_time_per_segment",
                          "cloud must not be slower per segment than the edge")
    scenario = Scenario(strategy=strategies[0], **kw)
    return scenario, strategies


def scenario_to_dict(scenario: Scenario, strategies=None) -> dict:
    def strip(obj, skip):
        return {k: (list(v) if isinstance(v, tuple) else v)
                for k, v in dataclasses.asdict(obj).items() if k not in skip}

    d = {name: strip(getattr(scenario, attr), skip) for name, attr, skip in [
        ("workload", "workload_config", {"seed"}),
        ("cloud_profile", "cloud_profile", {"name"}),
        ("edge_profile", "edge_profile", {"name"}),
        ("cloud_path", "cloud_path", set()),
        ("edge_path", "edge_path", set()),
        ("lsh", "lsh_params", {"seed", "dimension"}),
    ]}
    for k in _SCALARS:
        d[k] = getattr(scenario, k)
    d["strategies"] = [Strategy(s).value for s in (strategies or [scenario.strategy])]
    return d


def locate_line(text: str, field: str) -> int | None:
    """1-based line of the key named by a dotted ``field`` path, if present."""
    parts = field.split(".")
    lines = text.splitlines()
    start = 0
    for part in parts:
        pat = re.compile(r'"' + re.escape(part) + r'"\s*:')
        for i in range(start, len(lines)):
            if pat.search(lines[i]):
                start = i
                break
        else:
            return None
    return start + 1


def load_scenario(path) -> tuple[Scenario, list[Strategy]]:
    """Parse and validate a scenario file; ConfigError messages carry ``path:line``."""
    with open(path) as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("json", f"{path}:{e.lineno}: {e.msg}") from None
    try:
        return scenario_from_dict(raw)
    except ConfigError as e:
        line = locate_line(text, e.field)
        where = f"{path}:{line}" if line else str(path)
        raise ConfigError(e.field, f"{where}: {e.message}") from None


def apply_sweep(scenario: Scenario, axis: str, value) -> Scenario:
    if axis not in SWEEPABLE:
        raise ConfigError(axis, f"not sweepable; choose from {sorted(SWEEPABLE)}")
    section, kind = SWEEPABLE[axis]
    try:
        value = kind(value)
    except (TypeError, ValueError):
        raise ConfigError(axis, f"bad value {value!r}") from None
    if section == "workload":
        wc = dataclasses.replace(scenario.workload_config, **{axis: value})
        return dataclasses.replace(scenario, workload_config=wc)
    return dataclasses.replace(scenario, **{axis: value})
