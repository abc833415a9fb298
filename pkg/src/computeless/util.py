"""Seed mixing and exact time helpers shared by the simulator modules."""

from fractions import Fraction

import numpy as np


def mix_seed(*parts: int) -> int:
    """Derive a 64-bit seed from a tuple of non-negative integers."""
    ss = np.random.SeedSequence([int(p) & 0xFFFFFFFFFFFFFFFF for p in parts])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def as_time(x) -> Fraction:
    """Convert a seconds value to an exact ``Fraction``.

    Floats go through their shortest repr so that ``0.001`` becomes 1/1000
    rather than the nearest binary fraction.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def fmt_seconds(t: Fraction, digits: int = 12) -> str:
    """Decimal rendering used for CSV output; stable across platforms."""
    return f"{float(t):.{digits}g}"
