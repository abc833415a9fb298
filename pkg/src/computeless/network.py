"""Hop-count latency plus single serialization delay for a user-to-server path."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, UsageError
from .util import as_time


@dataclass(frozen=True)
class PathProfile:
    hops: int
    per_hop_latency: float = 0.001
    bandwidth: float = 100e6  # bytes/s

    def __post_init__(self):
        if self.hops < 1:
            raise ConfigError("hops", "must be >= 1")
        if not self.per_hop_latency >= 0:
            raise ConfigError("per_hop_latency", "must be >= 0")
        if not self.bandwidth > 0:
            raise ConfigError("bandwidth", "must be > 0")


EDGE_PATH = PathProfile(hops=2, per_hop_latency=0.001, bandwidth=100e6)
CLOUD_PATH = PathProfile(hops=8, per_hop_latency=0.001, bandwidth=10e6)


def one_way_delay(path: PathProfile, payload_bytes: int) -> Fraction:
    if payload_bytes < 0:
        raise UsageError("payload_bytes must be >= 0")
    return (path.hops * as_time(path.per_hop_latency)
            + Fraction(int(payload_bytes)) / as_time(path.bandwidth))


def round_trip(path: PathProfile, request_bytes: int, response_bytes: int) -> Fraction:
    return one_way_delay(path, request_bytes) + one_way_delay(path, response_bytes)
