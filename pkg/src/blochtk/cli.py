"""blochtk command line.

Subcommands: ``validate``, ``equations``, ``evolve``, ``sweep``,
``codegen``, ``serve``, and ``preset``. Runs read a JSON config document;
``evolve`` and ``sweep`` write comma-separated tables (17 significant
digits) and can render a figure next to the data via ``--plot``.

Exit codes: 0 success, 1 diagram/physics errors, 2 unreadable input.
"""
from __future__ import annotations

import argparse
import sys

from .config import ConfigDocument, ConfigError, dump_config, load_config
from .levels import validate
from .ops import (InvalidDiagram, analyze_columns, run_codegen, run_equations,
                  run_evolve, run_sweep)
from .presets import PRESET_NAMES, preset_document


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _load(path: str) -> ConfigDocument:
    return load_config(path)


def cmd_validate(args) -> int:
    doc = _load(args.config)
    report = validate(doc.diagram)
    if report.ok:
        print("valid")
        return 0
    for v in report.violations:
        print(v)
    return 1


def cmd_equations(args) -> int:
    doc = _load(args.config)
    text, count = run_equations(doc, args.format)
    n = doc.diagram.n_levels
    print(f"N(N+1)/2 = {count} equations")
    print(text, end="")
    return 0


def cmd_evolve(args) -> int:
    doc = _load(args.config)
    res = run_evolve(doc)
    traj = res.trajectory
    header = ["t_s"] + [name for name, _ in res.columns]
    slots = [slot for _, slot in res.columns]
    rows = ([t] + [traj.states[k, s] for s in slots]
            for k, t in enumerate(traj.times))
    out = args.out or "trajectory.csv"
    write_csv(out, header, rows)
    print(f"wrote {out} ({traj.times.size} rows)")
    print(f"max trace error = {res.trace_error:.6g}")
    print(f"final-state residual |f|_inf = {res.final_residual:.6g}")
    if args.plot:
        from .plotting import plot_trajectory

        els = [(e.i, e.j) for e in doc.default_observables()]
        print(f"wrote {plot_trajectory(traj, els, args.plot)}")
    return 0


def cmd_sweep(args) -> int:
    doc = _load(args.config)
    res = run_sweep(doc, workers=args.workers)
    spec = res.spectrum
    header = ["detuning_mhz"] + [name for name, _ in res.columns]
    slots = [slot for _, slot in res.columns]
    rows = ([d] + [spec.final_states[k, s] for s in slots]
            for k, d in enumerate(spec.detunings_mhz))
    out = args.out or "spectrum.csv"
    write_csv(out, header, rows)
    print(f"wrote {out} ({spec.detunings_mhz.size} rows)")
    print(f"max trace error = {res.trace_error:.6g}")
    if args.analyze:
        table = spec.final_states[:, slots]
        for line in analyze_columns(spec.detunings_mhz, table, res.columns):
            print(line)
    if args.plot:
        from .plotting import plot_spectrum

        els = [(e.i, e.j) for e in doc.default_observables()]
        print(f"wrote {plot_spectrum(spec, els, args.plot)}")
    return 0


def cmd_codegen(args) -> int:
    doc = _load(args.config)
    src = run_codegen(doc, args.mode)
    out = args.out or f"solver_{args.mode}.c"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(src.text)
    print(f"wrote {out}")
    for group, symbols in src.manifest.items():
        if symbols:
            names = ", ".join(sorted(symbols))
            print(f"{group}: {names}")
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    serve(port=args.port, ui_dir=args.ui_dir)
    return 0


def cmd_preset(args) -> int:
    doc = preset_document(args.name)
    text = dump_config(doc, args.out)
    if args.out:
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="blochtk", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a config document")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("equations", help="print the generated equations")
    p.add_argument("config")
    p.add_argument("--format", choices=["plain", "latex"], default="plain")
    p.set_defaults(func=cmd_equations)

    p = sub.add_parser("evolve", help="integrate in time, write CSV")
    p.add_argument("config")
    p.add_argument("--out", help="output CSV path (default trajectory.csv)")
    p.add_argument("--plot", help="also render a figure to this path")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep", help="detuning sweep, write CSV")
    p.add_argument("config")
    p.add_argument("--out", help="output CSV path (default spectrum.csv)")
    p.add_argument("--analyze", action="store_true",
                   help="report FWHM and peak positions per observable")
    p.add_argument("--plot", help="also render a figure to this path")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("codegen", help="emit a standalone C solver")
    p.add_argument("config")
    p.add_argument("--mode", choices=["temporal", "detuning"], required=True)
    p.add_argument("--out", help="output .c path")
    p.set_defaults(func=cmd_codegen)

    p = sub.add_parser("serve", help="serve the JSON request endpoint / UI")
    p.add_argument("--port", type=int, default=8077)
    p.add_argument("--ui-dir", default=None,
                   help="directory with the built diagram-studio UI")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("preset", help="write a built-in example config")
    p.add_argument("name", choices=list(PRESET_NAMES))
    p.add_argument("--out")
    p.set_defaults(func=cmd_preset)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidDiagram as exc:
        for v in exc.report.violations:
            print(v, file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
