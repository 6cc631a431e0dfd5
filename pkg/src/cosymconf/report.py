"""Residual reports.

A report is a list of :class:`IdentityRecord` plus run metadata. Records
flagged ``interpreted`` are computed and shown but do not count toward the
overall verdict.
"""

import json
import math
from dataclasses import dataclass, field

from .tensor import ABS_FLOOR, max_abs


@dataclass
class IdentityRecord:
    name: str
    anchor: str
    residual: float
    tolerance: float
    relative: bool = False
    interpreted: bool = False
    note: str = ""

    @property
    def passed(self):
        return math.isfinite(self.residual) and self.residual <= self.tolerance

    def to_dict(self):
        d = {
            "name": self.name,
            "anchor": self.anchor,
            "residual": _num(self.residual),
            "tolerance": _num(self.tolerance),
            "relative": self.relative,
            "pass": self.passed,
            "interpreted": self.interpreted,
        }
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class IdentityReport:
    suite: str
    records: list = field(default_factory=list)
    manifold: str = ""
    p: str = ""
    generator: str = ""
    seed: int = 0
    points: int = 0
    notes: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self):
        return all(r.passed for r in self.records if not r.interpreted)

    def __getitem__(self, name):
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def names(self):
        return [r.name for r in self.records]

    def failures(self):
        return [r for r in self.records if not r.interpreted and not r.passed]

    def worst(self):
        return max((r.residual for r in self.records if not r.interpreted), default=0.0)

    def to_dict(self, include_wall_time=True):
        d = {
            "suite": self.suite,
            "manifold": self.manifold,
            "p": self.p,
            "generator": self.generator,
            "seed": self.seed,
            "points": self.points,
            "overall_pass": self.passed,
            "notes": self.notes,
            "records": [r.to_dict() for r in self.records],
        }
        if include_wall_time:
            d["wall_time"] = self.wall_time
        return d

    def to_json(self, include_wall_time=True):
        return json.dumps(self.to_dict(include_wall_time), indent=2) + "\n"

    def summary_lines(self):
        out = []
        for r in self.records:
            status = "PASS" if r.passed else "FAIL"
            if r.interpreted:
                status += " (interpreted, not gating)"
            kind = "rel" if r.relative else "abs"
            out.append(f"{status:5} {r.name:40} {r.residual:.3e} <= {r.tolerance:.1e} {kind}")
        return out


def _num(x):
    # json has no inf/nan literal; keep the report strictly parseable
    x = float(x)
    return x if math.isfinite(x) else repr(x)


class Residuals:
    """Running maxima of identity residuals over sample points."""

    def __init__(self):
        self._abs = {}
        self._diff = {}
        self._ref = {}

    def add(self, name, value):
        """Record max |value| (an array of left-minus-right components)."""
        v = max_abs(value)
        if math.isnan(v):
            v = math.inf
        self._abs[name] = max(self._abs.get(name, 0.0), v)

    def add_pair(self, name, lhs, rhs):
        """Record a relative comparison of ``lhs`` and ``rhs``."""
        d = max_abs(lhs - rhs)
        if math.isnan(d):
            d = math.inf
        self._diff[name] = max(self._diff.get(name, 0.0), d)
        self._ref[name] = max(self._ref.get(name, 0.0), max_abs(lhs), max_abs(rhs))

    def add_scaled(self, name, value, scale):
        """Record max |value| relative to an externally supplied magnitude."""
        d = max_abs(value)
        if math.isnan(d):
            d = math.inf
        self._diff[name] = max(self._diff.get(name, 0.0), d)
        self._ref[name] = max(self._ref.get(name, 0.0), abs(float(scale)))

    def value(self, name):
        if name in self._abs:
            return self._abs[name]
        d, ref = self._diff[name], self._ref[name]
        return d if ref < ABS_FLOOR else d / ref

    def is_relative(self, name):
        return name in self._diff

    def __contains__(self, name):
        return name in self._abs or name in self._diff


def build_records(res, table, overrides=None):
    """Turn accumulated residuals into records.

    ``table`` maps name -> (anchor, tolerance[, interpreted]); names absent
    from ``res`` are skipped.
    """
    overrides = overrides or {}
    out = []
    for name, spec in table.items():
        if name not in res:
            continue
        anchor, tol = spec[0], spec[1]
        interpreted = len(spec) > 2 and spec[2]
        out.append(IdentityRecord(name, anchor, res.value(name), overrides.get(name, tol),
                                  relative=res.is_relative(name), interpreted=interpreted))
    return out
