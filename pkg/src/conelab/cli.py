"""Command-line entry point ``conelab``.

Commands::

    conelab verify SUITE [--config FILE]
    conelab holonomy --chart REF [--point X,Y,..] [--order K] [--expect-dim N]
    conelab build-null-plane [--config FILE]

Shared flags: ``--tol``, ``--jet-order``, ``--grid``, ``--seed``, ``--workers``,
``--format json|csv``, ``--out DIR`` and ``--timing``.  Each setting is taken
from the first source that provides it: flag, ``CONELAB_<NAME>`` environment
variable, the ``settings`` mapping of the config file, built-in default.

Exit codes: 0 all checks pass, 1 a check failed or the geometry is invalid,
2 usage or configuration error.
"""

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, reports
from .errors import ConfigurationError, ConstructionError, DomainError, SingularMetricError
from .holonomy import (ambrose_singer_span, doubled_frame, printed_plane_wave_matrices, printed_to_chart,
                       span_compare, stabilizer_analysis)
from .lie_matrix import _null_vector_in, common_kernel
from .pseudo_linear import QuadraticSpace, null_frame_from
from .references import load_document, resolve_chart
from .suites import SUITE_NAMES, Settings, null_plane_checks, packaged_config, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# name -> (type, default); defaults of None mean "decided by the library"
SETTINGS = {
    "tol": (float, 1e-8),
    "jet_order": (int, None),
    "grid": (int, 32),
    "seed": (int, 20240611),
    "workers": (int, None),
    "format": (str, "json"),
    "out": (str, None),
    "timing": (bool, False),
}


class UsageError(Exception):
    pass


def _parse_bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def resolve_settings(args, file_settings, environ=None):
    """Merge flag > environment > file > default; returns a plain dict."""
    environ = os.environ if environ is None else environ
    out = {}
    unknown = set(file_settings) - set(SETTINGS)
    if unknown:
        raise ConfigurationError(f"unknown settings in config file: {', '.join(sorted(unknown))}")
    for name, (typ, default) in SETTINGS.items():
        flag = getattr(args, name, None)
        env = environ.get(f"CONELAB_{name.upper()}")
        if flag is not None and flag is not False:
            value, source = flag, "flag"
        elif env is not None:
            value, source = env, f"CONELAB_{name.upper()}"
        elif name in file_settings:
            value, source = file_settings[name], "config file"
        else:
            out[name] = default
            continue
        try:
            value = _parse_bool(value) if typ is bool else (None if value is None else typ(value))
        except (TypeError, ValueError):
            raise ConfigurationError(f"bad value {value!r} for {name} from {source}") from None
        out[name] = value
    if out["format"] not in ("json", "csv"):
        raise ConfigurationError(f"format must be json or csv, got {out['format']!r}")
    if out["tol"] is not None and not out["tol"] > 0:
        raise ConfigurationError("tol must be positive")
    if out["grid"] < 1:
        raise ConfigurationError("grid must be at least 1")
    if out["workers"] is None:
        out["workers"] = os.cpu_count() or 1
    return out


def _suite_settings(s):
    return Settings(tol=s["tol"], jet_order=s["jet_order"], grid=s["grid"], seed=s["seed"],
                    workers=s["workers"], timing=s["timing"])


def _emit(stem, json_text, csv_text, settings, stdout):
    """Print the chosen format and, with --out, write both formats to the directory."""
    stdout.write(json_text if settings["format"] == "json" else csv_text)
    if settings["out"]:
        d = Path(settings["out"])
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{stem}.json").write_text(json_text)
        (d / f"{stem}.csv").write_text(csv_text)


def _load_config(path):
    """Config document from a file path, or a packaged one for ``@name``."""
    if path is None:
        return {}
    if path.startswith("@"):
        return packaged_config(path[1:])
    return load_document(path)


def _file_settings(doc):
    s = doc.get("settings", {}) if isinstance(doc, dict) else {}
    if not isinstance(s, dict):
        raise ConfigurationError("settings must be a mapping")
    return s


# ----------------------------------------------------------------------------
# commands

def cmd_verify(args, stdout):
    doc = _load_config(args.config)
    s = resolve_settings(args, _file_settings(doc))
    if args.suite not in SUITE_NAMES:
        raise UsageError(f"unknown suite {args.suite!r}; expected one of {', '.join(SUITE_NAMES)}")
    report = run_suite(args.suite, _suite_settings(s))
    _emit(f"verify-{args.suite}", report.to_json(), report.to_csv(), s, stdout)
    return EXIT_OK if report.passed else EXIT_FAIL


def _parse_point(text, chart):
    if text is None:
        return np.array([0.5 * (lo + hi) for lo, hi in chart.sample_box])
    try:
        p = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise UsageError(f"--point must be comma-separated numbers, got {text!r}") from None
    if p.shape != (chart.dim,):
        raise UsageError(f"chart {chart.label} has {chart.dim} coordinates {chart.coords}, got {p.size}")
    return p


def _stabiliser(chart, cons, span, p, tol):
    """Stabiliser report when a parallel null vector exists at p, else None."""
    if cons and cons[0] == "doubled":
        space, frame = doubled_frame(chart, p)
        source = "d_v of the doubled chart"
    else:
        ker = common_kernel(span.algebra(), chart.dim, tol)
        space = QuadraticSpace(chart.metric(p))
        if ker.shape[1] == 0 or 0 in space.signature:
            return None
        w = _null_vector_in(ker, space.metric)
        if w is None:
            return None
        frame = null_frame_from(space, w / np.linalg.norm(w))
        source = "null vector in the common kernel of the holonomy"
    rep = stabilizer_analysis(span, frame, tol)
    out = {"null_vector_source": source, "e_minus": frame.e_minus, "e_plus": frame.e_plus,
           "is_stabiliser": rep.is_stabiliser, "diagnosis": rep.diagnosis}
    if rep.is_stabiliser:
        out.update({
            "linear_dim": rep.linear_part.dim,
            "translations_dim": rep.translations.dim,
            "translations": rep.translations.vectors.T,
            "ideal_residual": rep.ideal_residual,
            "decomposable_witness_found": rep.decomposable_witness is not None,
            "invariant_null_line_found": rep.null_line is not None,
        })
    return out


def holonomy_report(ref, point=None, order=3, tol=1e-8, jet_order=None):
    """The holonomy report mapping for a chart reference (used by the CLI and the demos)."""
    chart, cons = resolve_chart(ref)
    p = _parse_point(point, chart) if not isinstance(point, np.ndarray) else point
    chart.require_domain(p)
    span = ambrose_singer_span(chart, p, order, tol, jet_order)
    out = {
        "schema": "conelab.holonomy-report",
        "schema_version": reports.SCHEMA_VERSION,
        "tool_version": __version__,
        "chart": ref,
        "chart_label": chart.label,
        "coords": list(chart.coords),
        "signature": list(chart.signature),
        "point": p,
        "order": order,
        "tol": tol,
        "jet_order": jet_order,
        "dim": span.dim,
        "converged": span.converged,
        "dim_next": span.dim_next,
        "basis": np.asarray(span.basis),
        "stabiliser": _stabiliser(chart, cons, span, p, tol),
    }
    if ref == "doubled:plane_wave_exp":
        printed = np.array(printed_to_chart(printed_plane_wave_matrices(), chart.coords))
        cmp_ = span_compare(span, printed)
        out["printed_comparison"] = {"printed_dim": 2, "printed_contained": cmp_.b_in_a,
                                     "principal_distance": cmp_.principal_distance}
    return out


def cmd_holonomy(args, stdout):
    doc = _load_config(args.config)
    s = resolve_settings(args, _file_settings(doc))
    if args.order < 0:
        raise UsageError("--order must be non-negative")
    chart, _ = resolve_chart(args.chart)
    p = _parse_point(args.point, chart)
    try:
        chart.require_domain(p)
    except DomainError as exc:
        sys.stderr.write(f"conelab: {exc}\n")
        return EXIT_FAIL
    rep = holonomy_report(args.chart, p, args.order, s["tol"], s["jet_order"])
    clean = reports.to_json(rep)
    _emit("holonomy", clean, reports.holonomy_csv([rep]), s, stdout)
    if args.expect_dim is not None and rep["dim"] != args.expect_dim:
        sys.stderr.write(f"conelab: holonomy dimension {rep['dim']} differs from expected {args.expect_dim}\n")
        return EXIT_FAIL
    return EXIT_OK


def cmd_build_null_plane(args, stdout):
    doc = _load_config(args.config or "@null_plane_default")
    s = resolve_settings(args, _file_settings(doc))
    body = doc.get("null_plane", {k: v for k, v in doc.items() if k != "settings"})
    settings = _suite_settings(s)
    try:
        checks, chart = null_plane_checks(body, settings, "build-null-plane")
    except (ConstructionError, SingularMetricError) as exc:
        report = reports.SuiteReport("build-null-plane", (reports.failure("build-null-plane/construction",
                                                                          "valid null-plane data", exc),),
                                     settings.echo(), extra={"diagnosis": str(exc)})
        _emit("build-null-plane", report.to_json(), report.to_csv(), s, stdout)
        sys.stderr.write(f"conelab: {exc}\n")
        return EXIT_FAIL
    definition = {"label": chart.label, "coords": list(chart.coords), "signature": list(chart.signature),
                  "domain": [list(d) for d in chart.domain], "data": body,
                  "metric": "ds^2 + e^{-2s} g0(u) + 2 du (eta_t dt + eta_s ds + h_i dx^i + eta_u du)"}
    report = reports.SuiteReport("build-null-plane", tuple(checks), settings.echo(), extra={"chart": definition})
    _emit("build-null-plane", report.to_json(), report.to_csv(), s, stdout)
    return EXIT_OK if report.passed else EXIT_FAIL


# ----------------------------------------------------------------------------

def _common(p):
    p.add_argument("--config", help="YAML/JSON config file, or @name for a packaged config")
    p.add_argument("--tol", type=float, help="relative rank tolerance (default 1e-8)")
    p.add_argument("--jet-order", dest="jet_order", type=int, help="Taylor jet order (default: minimal)")
    p.add_argument("--grid", type=int, help="number of Sobol sample points (default 32)")
    p.add_argument("--seed", type=int, help="Sobol scrambling seed (default 20240611)")
    p.add_argument("--workers", type=int, help="worker threads for suite checks (default: CPU count)")
    p.add_argument("--format", choices=("json", "csv"), help="stdout format (default json)")
    p.add_argument("--out", help="directory receiving both the JSON report and the CSV summary")
    p.add_argument("--timing", action="store_true", help="record per-check wall time (breaks byte stability)")


def build_parser():
    parser = argparse.ArgumentParser(prog="conelab", description="Cones, doubled warped products, holonomy "
                                     "algebras and stabiliser cohomology.")
    parser.add_argument("--version", action="version", version=f"conelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", help=f"one of {', '.join(SUITE_NAMES)}")
    _common(v)
    h = sub.add_parser("holonomy", help="holonomy algebra of a chart at a point")
    h.add_argument("--chart", required=True, help="chart reference, e.g. cone:sphere2 or doubled:plane_wave_exp")
    h.add_argument("--point", help="comma-separated chart coordinates (default: centre of the sample box)")
    h.add_argument("--order", type=int, default=3, help="highest covariant derivative of R used (default 3)")
    h.add_argument("--expect-dim", dest="expect_dim", type=int, help="exit 1 unless the dimension matches")
    _common(h)
    b = sub.add_parser("build-null-plane", help="build the metric from null-plane data and verify it")
    _common(b)
    return parser


COMMANDS = {"verify": cmd_verify, "holonomy": cmd_holonomy, "build-null-plane": cmd_build_null_plane}


def main(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, stdout)
    except (UsageError, ConfigurationError) as exc:
        sys.stderr.write(f"conelab: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
