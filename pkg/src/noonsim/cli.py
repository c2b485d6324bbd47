"""Command-line front end.

Subcommands: coeffs, evolve, search, sweep, verify, plot, basis.  Every
command is deterministic (same configuration, same output bytes).  Data
tables go to CSV (9 significant digits) or JSON (full double precision);
`--format svg` on the report commands writes the CSV and renders the
matching figure next to it.

Exit codes: 0 success, 1 verification failure, 2 usage/config error,
3 I/O error.  The environment variable NOONSIM_SEED is reserved for future
stochastic features and is currently unused.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .config import (MODE_COUNT, ConfigError, RunConfig, apply_overrides,
                     load_config_file, parse_conditioning, parse_initial_state)
from .evolution import evolve
from .fock import enumerate_basis
from .measurement import collapse_series
from .search import find_noon_times, sweep
from .verify import SUITE_NAMES, run_suite

_EPILOG = ("NOONSIM_SEED is reserved for future stochastic features and is "
           "currently unused.")


def _fmt(value: float) -> str:
    """CSV number format: 9 significant digits."""
    return f"{value:.9g}"


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="")


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)  # RFC-4180-style: CRLF line endings, quoting as needed
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _config_from_args(args, base: RunConfig | None = None) -> RunConfig:
    config = base if base is not None else RunConfig()
    if getattr(args, "config", None):
        config = load_config_file(args.config, config)
    overrides = {
        "omega0": args.omega0, "omega": args.omega, "lambda": args.lam, "g": args.g,
        "total_quanta": args.total_quanta,
        "t_min": args.t_min, "t_max": args.t_max, "t_step": args.t_step,
        "format": args.format, "output": args.out,
        "tol": getattr(args, "tol", None), "method": getattr(args, "method", None),
    }
    if args.initial is not None:
        overrides["initial_state"] = parse_initial_state(args.initial)
    if args.conditioning is not None:
        overrides["conditioning"] = parse_conditioning(args.conditioning)
    config = apply_overrides(config, overrides)
    return config.validated()


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value configuration file")
    parser.add_argument("--omega0", type=float, help="frequency of mode 0")
    parser.add_argument("--omega", type=float, help="shared frequency of modes 1 and 2")
    parser.add_argument("--lambda", dest="lam", type=float,
                        help="hopping rate between modes 1 and 2")
    parser.add_argument("--g", type=float, help="hopping rate between mode 0 and modes 1, 2")
    parser.add_argument("--total-quanta", type=int, help="total photon number N")
    parser.add_argument("--initial",
                        help="initial state, e.g. '102:0.7071067811865476;120:0.7071067811865476'")
    parser.add_argument("--t-min", type=float, help="first grid time (default 0)")
    parser.add_argument("--t-max", type=float, help="last grid time")
    parser.add_argument("--t-step", type=float, help="grid spacing")
    parser.add_argument("--conditioning",
                        help="'mode,count' photon-number condition, or 'none'")
    parser.add_argument("--format", choices=("csv", "json", "svg"),
                        help="output format (svg also writes the CSV)")
    parser.add_argument("--out", help="output path")
    parser.add_argument("--method", choices=("analytic", "oracle"),
                        help="propagator route (default analytic)")


def _resolve_paths(config: RunConfig, fmt: str, default_stem: str) -> tuple[str, str | None]:
    """Data path and optional figure path for a report command."""
    suffix = "json" if fmt == "json" else "csv"
    out = config.output_path or f"{default_stem}.{suffix}"
    if fmt == "svg":
        base = Path(out)
        return str(base.with_suffix(".csv")), str(base.with_suffix(".svg"))
    return out, None


def _render_figure(csv_path: str, svg_path: str, title: str) -> None:
    from .plotting import render_line_chart

    render_line_chart(csv_path, svg_path, title=title)


# --- subcommand handlers ---

def cmd_coeffs(args) -> int:
    config = _config_from_args(args)
    fmt = config.output_format or "csv"
    initial = config.build_initial_state()
    grid = config.time_grid()

    if config.conditioning is None:
        basis = initial.basis
        header = ["t"] + [f"|C_{s.label()}|" for s in basis.states]
        table = []
        for t in grid:
            state = evolve(initial, config.params, t, method=config.method)
            table.append([t] + [abs(a) for a in state.amplitudes])
    else:
        mode, count = config.conditioning
        series = collapse_series(config.params, initial, mode, count, grid,
                                 method=config.method)
        remaining = [m for m in range(MODE_COUNT) if m != mode]
        print(f"collapsed state spans original modes {remaining} "
              f"(measured mode {mode}, count {count})")
        header = (["t", "probability"]
                  + [f"|C_{s.label()}|" for s in series.collapsed_basis.states]
                  + ["fidelity_fixed", "fidelity_optimized"])
        table = []
        for row in series.rows:
            mags = ([abs(a) for a in row.amplitudes] if row.amplitudes is not None
                    else [float("nan")] * len(series.collapsed_basis))
            table.append([row.t, row.probability] + mags
                         + [row.fidelity_fixed, row.fidelity_optimized])

    data_path, figure_path = _resolve_paths(config, fmt, "coeffs")
    if fmt == "json":
        payload = [{"t": row[0], **{name: value for name, value in zip(header[1:], row[1:])}}
                   for row in table]
        _write_text(data_path, json.dumps(payload, indent=2) + "\n")
    else:
        _write_text(data_path, _csv_text(header, [[_fmt(v) for v in row] for row in table]))
    print(f"wrote {data_path} ({len(table)} rows)")
    if figure_path is not None:
        _render_figure(data_path, figure_path, title="coefficient magnitudes")
        print(f"wrote {figure_path}")
    return 0


def cmd_evolve(args) -> int:
    config = _config_from_args(args)
    fmt = config.output_format or "csv"
    if fmt == "svg":
        raise ConfigError("format svg is not supported for evolve; "
                          "use coeffs for magnitude figures")
    initial = config.build_initial_state()
    basis = initial.basis
    grid = config.time_grid()
    states = [evolve(initial, config.params, t, method=config.method) for t in grid]

    data_path, _ = _resolve_paths(config, fmt, "evolve")
    if fmt == "json":
        payload = []
        for t, state in zip(grid, states):
            amps = {s.label(): [a.real, a.imag]
                    for s, a in zip(basis.states, state.amplitudes)}
            payload.append({"t": t, "amplitudes": amps})
        _write_text(data_path, json.dumps(payload, indent=2) + "\n")
    else:
        header = ["t"]
        for s in basis.states:
            header += [f"Re_C_{s.label()}", f"Im_C_{s.label()}"]
        rows = []
        for t, state in zip(grid, states):
            row = [t]
            for a in state.amplitudes:
                row += [a.real, a.imag]
            rows.append([_fmt(v) for v in row])
        _write_text(data_path, _csv_text(header, rows))
    print(f"wrote {data_path} ({len(grid)} rows)")
    return 0


def _events_payload(events) -> list[dict]:
    return [{"t": e.t,
             "probability": e.success_probability,
             "fidelity": e.phase_optimized_fidelity,
             "suppressed_magnitude": e.suppressed_coefficient_magnitude}
            for e in events]


def cmd_search(args) -> int:
    # searches default to the finer 0.1 scan grid
    config = _config_from_args(args, base=RunConfig(t_step=0.1))
    fmt = config.output_format or "json"
    if config.conditioning is None:
        raise ConfigError("search needs --conditioning 'mode,count'")
    if fmt == "svg":
        raise ConfigError("format svg is not supported for search")
    initial = config.build_initial_state()
    events = find_noon_times(config.params, initial, config.conditioning,
                             t_max=config.t_max, grid_step=config.t_step,
                             tol=config.tol, method=config.method)
    data_path = config.output_path or ("search.json" if fmt == "json" else "search.csv")
    payload = _events_payload(events)
    if fmt == "json":
        _write_text(data_path, json.dumps(payload, indent=2) + "\n")
    else:
        header = ["t", "probability", "fidelity", "suppressed_magnitude"]
        rows = [[_fmt(item[name]) for name in header] for item in payload]
        _write_text(data_path, _csv_text(header, rows))
    print(f"wrote {data_path} ({len(events)} events)")
    return 0


def cmd_sweep(args) -> int:
    config = _config_from_args(args, base=RunConfig(t_step=0.1))
    fmt = config.output_format or "json"
    if config.conditioning is None:
        raise ConfigError("sweep needs --conditioning 'mode,count'")
    if fmt == "svg":
        raise ConfigError("format svg is not supported for sweep")
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--values must be a comma list of numbers, got {args.values!r}")
    if not values:
        raise ConfigError("--values must contain at least one number")

    initial = config.build_initial_state()
    key = {"g": "g", "lambda": "lambda", "omega0": "omega0", "omega": "omega"}[args.vary]
    grid = [apply_overrides(config, {key: v}).params for v in values]
    rows = sweep(grid, initial, config.conditioning, t_max=config.t_max,
                 grid_step=config.t_step, tol=config.tol, method=config.method)

    payload = [{"params": {"omega0": row.params.omega0, "omega": row.params.omega,
                           "lambda": row.params.lam, "g": row.params.g},
                "events": _events_payload(row.events),
                "error": row.error}
               for row in rows]
    data_path = config.output_path or ("sweep.json" if fmt == "json" else "sweep.csv")
    if fmt == "json":
        _write_text(data_path, json.dumps(payload, indent=2) + "\n")
    else:
        header = ["omega0", "omega", "lambda", "g", "t", "probability",
                  "fidelity", "suppressed_magnitude", "error"]
        table = []
        for row in payload:
            p = row["params"]
            base = [_fmt(p["omega0"]), _fmt(p["omega"]), _fmt(p["lambda"]), _fmt(p["g"])]
            if row["events"]:
                for e in row["events"]:
                    table.append(base + [_fmt(e["t"]), _fmt(e["probability"]),
                                         _fmt(e["fidelity"]),
                                         _fmt(e["suppressed_magnitude"]),
                                         row["error"] or ""])
            else:
                table.append(base + ["", "", "", "", row["error"] or ""])
        _write_text(data_path, _csv_text(header, table))
    print(f"wrote {data_path} ({len(rows)} parameter sets)")
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.suite)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name}: max deviation {r.deviation:.3e} "
              f"(tolerance {r.tolerance:.0e})")
        failed += 0 if r.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def cmd_plot(args) -> int:
    from .plotting import render_line_chart

    columns = None
    if args.columns:
        columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    out = args.out or str(Path(args.input_csv).with_suffix(".svg"))
    try:
        render_line_chart(args.input_csv, out, columns=columns, title=args.title)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"wrote {out}")
    return 0


def cmd_basis(args) -> int:
    basis = enumerate_basis(args.modes, args.quanta)
    header = ["index", "label"] + [f"n{m}" for m in range(basis.mode_count)]
    rows = [[str(i), s.label()] + [str(n) for n in s.occupations]
            for i, s in enumerate(basis.states)]
    if args.format == "json":
        payload = [{"index": i, "label": s.label(), "occupations": list(s.occupations)}
                   for i, s in enumerate(basis.states)]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = _csv_text(header, rows)
    if args.out:
        _write_text(args.out, text)
        print(f"wrote {args.out} ({len(basis)} states)")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noonsim",
        description="Quantum light in three coupled waveguides: analytic and "
                    "brute-force propagators, conditional-measurement collapse, "
                    "and post-selected NOON-state search.",
        epilog=_EPILOG)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="wave-function (or collapsed-state) "
                                      "coefficient magnitudes over a time grid")
    _add_config_flags(p)
    p.set_defaults(handler=cmd_coeffs)

    p = sub.add_parser("evolve", help="full complex amplitudes over a time grid")
    _add_config_flags(p)
    p.set_defaults(handler=cmd_evolve)

    p = sub.add_parser("search", help="locate post-selection times that give NOON states")
    _add_config_flags(p)
    p.add_argument("--tol", type=float, help="suppressed-coefficient tolerance "
                                             "(default 1e-8)")
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("sweep", help="run the NOON search over a parameter grid")
    _add_config_flags(p)
    p.add_argument("--tol", type=float, help="suppressed-coefficient tolerance")
    p.add_argument("--vary", required=True, choices=("g", "lambda", "omega0", "omega"),
                   help="parameter to sweep")
    p.add_argument("--values", required=True, help="comma list of parameter values")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("verify", help="run the cross-validation suites")
    p.add_argument("suite", choices=SUITE_NAMES + ("all",))
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("plot", help="render CSV columns to a deterministic SVG chart")
    p.add_argument("input_csv")
    p.add_argument("--columns", help="comma list of column names (default: all)")
    p.add_argument("--out", help="output SVG path (default: input with .svg)")
    p.add_argument("--title")
    p.set_defaults(handler=cmd_plot)

    p = sub.add_parser("basis", help="list the fixed-N occupation basis")
    p.add_argument("-m", "--modes", type=int, default=3)
    p.add_argument("-N", "--quanta", type=int, default=3)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_basis)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
