"""Check records and the JSON / CSV report formats.

The layouts are versioned by ``SCHEMA_VERSION`` and documented in
``docs/reports.md``.  Reports contain no wall-clock data unless timing is
requested explicitly, so identical inputs give byte-identical files.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from . import __version__

SCHEMA_VERSION = 1
CSV_COLUMNS = ("suite", "id", "anchor", "kind", "value", "comparison", "threshold", "passed")


def _clean(x):
    """JSON-safe copy: numpy scalars and arrays become Python objects, non-finite floats strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if hasattr(x, "tolist"):
        return _clean(x.tolist())
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return x if math.isfinite(x) else repr(x)
    return str(x)


@dataclass(frozen=True)
class Check:
    """One verified quantity with the rule that decides pass or fail.

    ``comparison`` is one of ``<`` (residual below threshold), ``>``
    (negative control above threshold), ``==`` (exact dimension) or ``in``
    (value inside the closed interval ``threshold``).
    """

    id: str
    anchor: str
    kind: str
    value: object
    comparison: str
    threshold: object
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.comparison not in ("<", ">", "==", "in"):
            raise ValueError(f"unknown comparison {self.comparison!r}")

    @property
    def passed(self):
        v, t = self.value, self.threshold
        if v is None or (isinstance(v, float) and math.isnan(v)):
            return False
        if self.comparison == "<":
            return v < t
        if self.comparison == ">":
            return v > t
        if self.comparison == "==":
            return v == t
        lo, hi = t
        return lo <= v <= hi

    def as_dict(self):
        return _clean({"id": self.id, "anchor": self.anchor, "kind": self.kind, "value": self.value,
                       "comparison": self.comparison, "threshold": self.threshold,
                       "passed": self.passed, "details": self.details})


def residual(id, anchor, value, threshold, **details):
    return Check(id, anchor, "residual", float(value), "<", threshold, details)


def dimension(id, anchor, value, expected, **details):
    return Check(id, anchor, "dimension", int(value), "==", int(expected), details)


def control(id, anchor, value, threshold, **details):
    """Negative control: the detector must fire, i.e. the value must exceed the threshold."""
    return Check(id, anchor, "control", float(value), ">", threshold, details)


def interval(id, anchor, value, lo, hi, **details):
    return Check(id, anchor, "ratio", float(value), "in", [lo, hi], details)


def failure(id, anchor, exc):
    """A check whose computation raised: recorded as failed with the error text."""
    return Check(id, anchor, "error", None, "<", 0.0, {"error": f"{type(exc).__name__}: {exc}"})


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    checks: tuple
    config: dict
    timing: Optional[dict] = None
    extra: dict = field(default_factory=dict)
    version: str = __version__

    def __post_init__(self):
        object.__setattr__(self, "checks", tuple(sorted(self.checks, key=lambda c: c.id)))
        ids = [c.id for c in self.checks]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate check ids in report")

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def as_dict(self):
        out = {
            "schema": "conelab.suite-report",
            "schema_version": SCHEMA_VERSION,
            "tool_version": self.version,
            "suite": self.suite,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": len(self.failures),
            "config": self.config,
            "timing": self.timing,
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.extra:
            out["extra"] = self.extra
        return _clean(out)

    def to_json(self):
        return to_json(self.as_dict())

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for c in self.checks:
            d = c.as_dict()
            thr = d["threshold"]
            if isinstance(thr, list):
                thr = f"[{thr[0]!r};{thr[1]!r}]"
            w.writerow([self.suite, c.id, c.anchor, c.kind, "" if d["value"] is None else d["value"],
                        c.comparison, thr, "pass" if c.passed else "fail"])
        return buf.getvalue()

    def summary_lines(self):
        return [f"{'PASS' if c.passed else 'FAIL'} {c.id} {c.value} {c.comparison} {c.threshold}"
                for c in self.checks]


def merge(reports, name="all"):
    """One report holding the checks of several suites, ids prefixed by nothing (ids are unique)."""
    checks = [c for r in reports for c in r.checks]
    config = reports[0].config if reports else {}
    timing = None
    if any(r.timing for r in reports):
        timing = {r.suite: r.timing for r in reports}
    return SuiteReport(name, tuple(checks), config, timing)


def to_json(obj):
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def holonomy_csv(rows):
    """CSV for holonomy reports: one row per chart and point."""
    cols = ("chart", "point", "order", "dim", "converged", "dim_next", "linear_dim", "translations_dim")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        stab = r.get("stabiliser") or {}
        w.writerow([r["chart"], ";".join(repr(float(x)) for x in r["point"]), r["order"], r["dim"],
                    r["converged"], r["dim_next"], stab.get("linear_dim", ""), stab.get("translations_dim", "")])
    return buf.getvalue()
