"""Chart references: short names such as ``cone:sphere2`` or ``doubled:plane_wave_exp``.

Grammar (EBNF, also in ``docs/grammar.md``)::

    reference    = { construction ":" } , target ;
    construction = "cone" | "doubled" | "expext" ;
    target       = base | file ;
    base         = ("sphere" | "hyperbolic" | "flat" | "minkowski") , digits
                 | "cw2" | "ppwave2" | "plane_wave_exp" ;
    file         = path ending in ".yaml", ".yml" or ".json" ;

Constructions apply right to left, so ``doubled:cone:sphere2`` is the double
warped extension of the cone over the round 2-sphere.
"""

import json
import re
from pathlib import Path

import numpy as np
import yaml

from . import charts
from .cones import cone, double_warped, exponential_extension
from .errors import ConfigurationError

CONSTRUCTIONS = {"cone": cone, "doubled": double_warped, "expext": exponential_extension}

_FIXED = {
    "cw2": lambda: charts.cahen_wallach(np.eye(2)),
    "ppwave2": lambda: charts.pp_wave("y1^2 + y2^2", 2, label="pp_wave(y1^2+y2^2)"),
    "plane_wave_exp": charts.plane_wave_exp,
}
_FAMILIES = {
    "sphere": charts.sphere,
    "hyperbolic": charts.hyperbolic,
    "flat": lambda n: charts.flat(0, n),
    "minkowski": lambda n: charts.flat(1, n - 1),
}
BASE_NAMES = tuple(sorted(_FIXED)) + tuple(f"{k}N" for k in sorted(_FAMILIES))


def load_document(path):
    """Parse a YAML or JSON file into a mapping; ConfigurationError on any failure."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text) if p.suffix == ".json" else yaml.safe_load(text)
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot parse {path}: {exc}") from None
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigurationError(f"{path}: top level must be a mapping")
    return doc


def _base(name):
    if name in _FIXED:
        return _FIXED[name]()
    m = re.fullmatch(r"([a-z]+)(\d+)", name)
    if m and m.group(1) in _FAMILIES:
        n = int(m.group(2))
        if n < 1 or (m.group(1) == "minkowski" and n < 2):
            raise ConfigurationError(f"bad dimension in chart name {name!r}")
        return _FAMILIES[m.group(1)](n)
    if name.endswith((".yaml", ".yml", ".json")):
        doc = load_document(name)
        return charts.custom(doc.get("chart", doc))
    raise ConfigurationError(f"unknown chart {name!r}; known bases: {', '.join(BASE_NAMES)}")


def resolve_chart(reference):
    """Chart for a reference string; returns (chart, list of constructions applied outermost first)."""
    if not isinstance(reference, str) or not reference.strip():
        raise ConfigurationError("empty chart reference")
    parts = reference.strip().split(":")
    # a Windows-style drive letter or a path with colons is not supported; keep the grammar simple
    *cons, target = parts
    for c in cons:
        if c not in CONSTRUCTIONS:
            raise ConfigurationError(f"unknown construction {c!r} in {reference!r}; "
                                     f"expected one of {', '.join(sorted(CONSTRUCTIONS))}")
    chart = _base(target)
    for c in reversed(cons):
        chart = CONSTRUCTIONS[c](chart)
    return chart, cons
