"""Batch command-line front end.

Subcommands:

  evolve   run one evolution per sweep point, write series CSV/JSON + manifest
  fit      fit S_K against ln C_K for existing series artifacts, write
           report JSON + SVG plot
  moments  convert between moments and coefficients, write a report
  wnumber  classify the ergodicity indicator W for a family
  modes    mode decomposition of an explicit finite chain

Exit codes: 0 success, 2 usage/window/schema error, 3 bound violation,
4 invalid moments, 5 resource limit.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .closedforms import finite_chain_modes
from .config import (
    apply_sweep_point,
    build_evolve_config,
    build_sequence,
    parse_config,
    sweep_points,
)
from .errors import (
    InvalidMomentSequenceError,
    ResourceLimitError,
    SchemaError,
    WindowError,
)
from .evolve import evolve
from .fitting import eta_bound_check, fit_log_relation, select_window
from .moments import MomentSequence, lanczos_to_moments, moments_to_lanczos
from .observables import ObservableSeries, complexity, entropy, spectral_density_finite
from .outputs import (
    load_series,
    write_fit_plot,
    write_fit_report,
    write_manifest,
    write_series_csv,
    write_series_json,
)
from .wnumber import w_number

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BOUND = 3
EXIT_MOMENTS = 4
EXIT_RESOURCE = 5


def _load_config(path: str):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SchemaError("", f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"config is not valid JSON: {exc}")
    return doc, parse_config(doc)


def _point_label(index: int, assignment: dict) -> str:
    if not assignment:
        return "series"
    parts = [f"{axis.split('.')[-1]}={value!r}".replace("'", "") for axis, value in sorted(assignment.items())]
    return f"series_{index:03d}_" + "_".join(parts)


def _reduce_stream(states):
    """Accumulate a streamed trajectory; on resource limit keep what arrived."""
    cols = ([], [], [], [], [], [])
    error = None
    try:
        for st in states:
            cols[0].append(st.t)
            cols[1].append(complexity(st))
            cols[2].append(entropy(st))
            cols[3].append(float(st.amplitudes[0]))
            cols[4].append(st.norm_error)
            cols[5].append(st.active_size)
    except ResourceLimitError as exc:
        error = f"resource limit at t={exc.t_reached:.6g}"
    series = None
    if cols[0]:
        series = ObservableSeries(
            times=tuple(cols[0]),
            c_k=tuple(cols[1]),
            s_k=tuple(cols[2]),
            phi0=tuple(cols[3]),
            norm_error=tuple(cols[4]),
            active_size=tuple(cols[5]),
        )
    return series, error


def _run_one_point(args):
    """Worker for one sweep point; returns (written paths, error info)."""
    doc, out_dir, formats, index, assignment = args
    point_doc = apply_sweep_point(doc, assignment)
    seq = build_sequence(point_doc["family"])
    cfg = build_evolve_config(point_doc["evolve"])
    label = _point_label(index, assignment)
    written = []
    series, error = _reduce_stream(evolve(seq, cfg))
    out_dir = Path(out_dir)
    if series is not None and len(series) > 0:
        meta = {"family": point_doc["family"], "sweep_point": assignment}
        if "csv" in formats:
            p = out_dir / f"{label}.csv"
            write_series_csv(p, series)
            written.append(str(p))
        if "json" in formats:
            p = out_dir / f"{label}.json"
            write_series_json(p, series, meta=meta)
            written.append(str(p))
    return written, error


def _cmd_evolve(ns) -> int:
    doc, cfg = _load_config(ns.config)
    if cfg.family is None:
        raise SchemaError("/family", "required for evolve")
    if cfg.evolve is None:
        raise SchemaError("/evolve", "required for evolve")
    out_dir = Path(ns.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    points = sweep_points(cfg)
    jobs = ns.jobs if ns.jobs is not None else cfg.jobs
    formats = cfg.output_formats if ns.format is None else (
        ("csv", "json") if ns.format == "both" else (ns.format,)
    )
    tasks = [(doc, str(out_dir), formats, i, pt) for i, pt in enumerate(points)]
    results = []
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one_point, tasks))
    else:
        results = [_run_one_point(t) for t in tasks]
    written = [Path(p) for paths, _ in results for p in paths]
    errors = [e for _, e in results if e]
    write_manifest(
        out_dir,
        written,
        doc,
        generated_at=datetime.datetime.now(datetime.timezone.utc).isoformat(),
    )
    for p in written:
        print(p)
    if errors:
        print("; ".join(errors), file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK


def _cmd_fit(ns) -> int:
    doc, cfg = _load_config(ns.config) if ns.config else ({}, None)
    fit_cfg = cfg.fit if cfg is not None else {}
    out_dir = Path(ns.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    exit_code = EXIT_OK
    written = []
    for series_path in ns.series:
        p = Path(series_path)
        if not p.exists():
            print(f"series artifact not found: {p}", file=sys.stderr)
            return EXIT_USAGE
        series = load_series(p)
        try:
            window = select_window(
                series,
                c_min=fit_cfg.get("c_min", 50.0),
                c_max=fit_cfg.get("c_max"),
                t_min=fit_cfg.get("t_min"),
                t_max=fit_cfg.get("t_max"),
            )
            fit = fit_log_relation(
                series,
                window,
                include_lnln=fit_cfg.get("include_lnln", False),
                weighting=fit_cfg.get("weighting", "logc"),
            )
        except WindowError as exc:
            print(f"{p.name}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        report = out_dir / f"{p.stem}_fit.json"
        plot = out_dir / f"{p.stem}_fit.svg"
        write_fit_report(report, fit)
        write_fit_plot(plot, series, fit, title=p.stem)
        written += [report, plot]
        verdict = eta_bound_check(fit, tol=fit_cfg.get("bound_tol", 0.0))
        if verdict.kind == "violates_bound":
            exit_code = EXIT_BOUND
        print(f"{report} eta_tilde={fit.eta_tilde!r}")
    if ns.config:
        write_manifest(
            out_dir,
            written,
            doc,
            generated_at=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        )
    return exit_code


def _cmd_moments(ns) -> int:
    doc, cfg = _load_config(ns.config)
    if cfg.moments is None:
        raise SchemaError("/moments", "required for the moments command")
    section = cfg.moments
    arithmetic = section.get("arithmetic", "exact")
    values = section["values"]
    out_dir = Path(ns.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "moments_report.json"
    if section["direction"] == "to_lanczos":
        entries = [Fraction(v) for v in values] if arithmetic == "exact" else [float(v) for v in values]
        mseq = MomentSequence.from_values(entries)
        count = section.get("count", len(values) - 1)
        precision = {"exact": "auto", "float": "auto", "double": "double"}[arithmetic]
        try:
            conv = moments_to_lanczos(mseq, count, precision=precision)
        except InvalidMomentSequenceError as exc:
            report = {"error": str(exc), "failing_order": exc.order}
            report_path.write_text(
                json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8"
            )
            print(str(exc), file=sys.stderr)
            return EXIT_MOMENTS
        back = lanczos_to_moments(b_squared=conv.b_squared, count=count)
        residual = max(
            abs(float(a) - float(b)) for a, b in zip(back.entries, mseq.entries)
        )
        report = {
            "direction": "to_lanczos",
            "arithmetic": conv.mode,
            "coefficients": list(conv.coefficients),
            "b_squared": [
                [v.numerator, v.denominator] if conv.exact else v for v in conv.b_squared
            ],
            "round_trip_residual": residual,
        }
    else:
        count = section.get("count", len(values))
        entries = [Fraction(v) for v in values] if arithmetic == "exact" else [float(v) for v in values]
        mseq = lanczos_to_moments(b=entries, count=count)
        report = {
            "direction": "to_moments",
            "arithmetic": "exact" if mseq.exact else "float",
            "moments": [float(v) for v in mseq.entries],
            "round_trip_residual": 0.0,
        }
    report_path.write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    print(report_path)
    return EXIT_OK


def _cmd_wnumber(ns) -> int:
    doc, cfg = _load_config(ns.config)
    if cfg.family is None:
        raise SchemaError("/family", "required for wnumber")
    seq = build_sequence(cfg.family)
    cls = w_number(
        seq,
        depth=cfg.wnumber.get("depth", 20000),
        tol=cfg.wnumber.get("tol", 1e-7),
    )
    out_dir = Path(ns.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {
        "verdict": cls.verdict,
        "value": cls.value,
        "reason": cls.reason,
        "partial_products": list(cls.partial_products),
        "cf_trace": [[z, v] for z, v in cls.cf_trace],
    }
    path = out_dir / "wnumber_report.json"
    path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    print(path)
    return EXIT_OK


def _cmd_modes(ns) -> int:
    doc, cfg = _load_config(ns.config)
    if cfg.family is None or cfg.family.get("kind") != "explicit":
        raise SchemaError("/family/kind", "modes needs an explicit family")
    md = finite_chain_modes(cfg.family["coefficients"])
    spectrum = spectral_density_finite(md)
    out_dir = Path(ns.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {
        "zero_mode_weight": md.zero_mode_weight,
        "modes": [[w, a] for w, a in md.modes],
        "impulses": [[w, a] for w, a in spectrum.impulses],
        "provenance": md.provenance,
    }
    path = out_dir / "modes_report.json"
    path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krylov-chain",
        description="Operator growth on Krylov chains: evolve, fit, convert, classify.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="run evolutions (with optional sweep)")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json", "both"), default=None)
    p.set_defaults(fn=_cmd_evolve)

    p = sub.add_parser("fit", help="fit S_K = eta ln C_K + c on series artifacts")
    p.add_argument("series", nargs="+", help="series CSV/JSON artifacts")
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_fit)

    p = sub.add_parser("moments", help="convert moments <-> coefficients")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_moments)

    p = sub.add_parser("wnumber", help="classify the ergodicity indicator W")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_wnumber)

    p = sub.add_parser("modes", help="finite-chain mode decomposition")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_modes)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.fn(ns)
    except SchemaError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except WindowError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except InvalidMomentSequenceError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MOMENTS
    except ResourceLimitError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
