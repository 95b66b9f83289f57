"""Rational stand-ins for irrational constants, and the flatness table."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import linalg as la

# 30 decimals of pi, rounded down and up
PI_LO = Fraction("3.141592653589793238462643383279")
PI_HI = Fraction("3.141592653589793238462643383280")


DEFAULT_OMEGA = {
    1: Fraction(1),
    2: Fraction(11, 5),
    3: Fraction(4),
    4: Fraction(6),
    5: Fraction(8),
    6: Fraction(10),
}


@dataclass(frozen=True)
class FlatnessTable:
    """Configured upper-bound proxies for the flatness constant omega(d).

    Entries beyond the table use ``c * d^(4/3) * log(d)^a``, rounded up to a
    multiple of 1/1000 and clamped so the sequence stays monotone and >= d.
    These numbers steer branch selection only; every emitted inequality is
    re-checked exactly.
    """

    entries: dict[int, Fraction] = field(default_factory=lambda: dict(DEFAULT_OMEGA))
    fallback_c: Fraction = Fraction(2)
    fallback_a: Fraction = Fraction(1)

    def __post_init__(self):
        prev = Fraction(0)
        for d in sorted(self.entries):
            v = self.entries[d]
            if v < d:
                raise ValueError(f"omega_ub({d}) = {v} is below the trivial lower bound {d}")
            if v < prev:
                raise ValueError("flatness table must be non-decreasing")
            prev = v

    def __call__(self, d: int) -> Fraction:
        return self.omega(d)

    def omega(self, d: int) -> Fraction:
        if d < 1:
            raise ValueError("dimension must be positive")
        if d in self.entries:
            return self.entries[d]
        below = [self.entries[k] for k in self.entries if k < d]
        floor_value = max(below + [Fraction(d)])
        growth = float(self.fallback_c) * d ** (4 / 3) * math.log(d) ** float(self.fallback_a)
        approx = Fraction(math.ceil(growth * 1000), 1000)
        return max(approx, floor_value)

    def to_json(self) -> dict:
        return {
            "table": {str(k): la.fmt(v) for k, v in sorted(self.entries.items())},
            "fallback": {"c": la.fmt(self.fallback_c), "a": la.fmt(self.fallback_a)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "FlatnessTable":
        table = data.get("table", data)
        entries = {int(k): la.to_fraction(v) for k, v in table.items() if k != "fallback"}
        fb = data.get("fallback", {})
        kwargs = {}
        if "c" in fb:
            kwargs["fallback_c"] = la.to_fraction(fb["c"])
        if "a" in fb:
            kwargs["fallback_a"] = la.to_fraction(fb["a"])
        return cls(entries, **kwargs)

    @classmethod
    def load(cls, path) -> "FlatnessTable":
        return cls.from_json(json.loads(Path(path).read_text()))
