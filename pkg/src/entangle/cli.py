"""Command-line entry point: sweep orchestration and result emission.

Commands::

    entangle run <config> [--set section.key=value]... [--out DIR]
    entangle point [--set section.key=value]... [--out DIR]
    entangle list-sweeps

``run`` executes the sweep named in the config and writes, into the
output directory: ``records.csv`` (one row per grid point, shortest
round-trip decimals), ``resolved_config.cfg`` (parseable echo of the
fully resolved configuration), ``metadata.txt`` (config echo plus a
summary with argmax/threshold extractions), and gnuplot-ready
``plot_*.dat`` blocks with unstable points masked as nan.

Exit codes: 0 success, 2 configuration error, 3 numerical error,
4 unwritable output path.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__, experiments
from .config import RunConfig, echo_config, parse_config
from .errors import ConfigError, EntangleError

#: frozen record column order (after the per-sweep axis columns)
RECORD_COLUMNS = ("e_n_pp", "e_n_mb", "e_n_pb", "stable", "max_re_eig",
                  "abs_g_plus", "abs_g_minus", "theta", "delta_plus",
                  "delta_minus")


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(float(value))


def emit_records(result: experiments.SweepResult) -> str:
    """Render a sweep result as CSV text with the frozen column order."""
    header = ",".join(result.axis_names + RECORD_COLUMNS)
    lines = [header]
    for rec in result.records:
        cells = [_fmt(a) for a in rec.axis]
        cells += [_fmt(getattr(rec, name)) for name in RECORD_COLUMNS]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def emit_metadata(result: experiments.SweepResult, cfg: RunConfig,
                  elapsed=None) -> str:
    """Human-readable run summary plus the resolved config echo."""
    lines = [
        f"entangle {__version__}",
        f"sweep kind: {result.kind}",
        f"records: {len(result.records)}",
    ]
    stable = sum(1 for r in result.records if r.stable)
    lines.append(f"stable points: {stable} / {len(result.records)}")
    for key, value in sorted(result.summary.items()):
        lines.append(f"{key}: {value}")
    if elapsed is not None:
        lines.append(f"elapsed seconds: {elapsed:.3f}")
        lines.append(f"timestamp: {time.strftime('%Y-%m-%dT%H:%M:%S%z')}")
    lines.append("")
    lines.append("# resolved configuration")
    lines.append(echo_config(cfg))
    return "\n".join(lines)


def emit_plot_data(result: experiments.SweepResult, precision=None) -> str:
    """Gnuplot-ready data blocks for one observable-per-curve plotting.

    1-D sweeps produce one two-column block per negativity curve,
    separated by double blank lines (gnuplot ``index`` convention); 2-D
    sweeps produce a nonuniform-matrix block per curve.  Unstable points
    appear as ``nan`` (use ``set datafile missing "nan"``).
    """
    if precision is None:
        num = repr
    else:
        num = lambda v: f"{v:.{precision}g}"  # noqa: E731

    def cell(value):
        return num(float(value)) if value is not None else "nan"

    blocks = []
    curves = ("e_n_pp", "e_n_mb", "e_n_pb")
    if len(result.axis_names) <= 1:
        for curve in curves:
            rows = [f"# {result.kind}: {curve} vs {', '.join(result.axis_names) or 'point'}"]
            for rec in result.records:
                axis = " ".join(num(float(a)) for a in rec.axis) or "0"
                rows.append(f"{axis} {cell(getattr(rec, curve))}")
            blocks.append("\n".join(rows))
    else:
        xs = sorted({rec.axis[0] for rec in result.records})
        ys = sorted({rec.axis[1] for rec in result.records})
        for curve in curves:
            value_at = {(rec.axis[0], rec.axis[1]): getattr(rec, curve)
                        for rec in result.records}
            rows = [f"# {result.kind}: {curve} matrix "
                    f"({result.axis_names[0]} down, {result.axis_names[1]} across)",
                    " ".join([str(len(ys))] + [num(float(y)) for y in ys])]
            for x in xs:
                rows.append(" ".join([num(float(x))]
                                     + [cell(value_at[(x, y)]) for y in ys]))
            blocks.append("\n".join(rows))
    return ("\n\n\n").join(blocks) + "\n"


def write_outputs(result, cfg, out_dir, elapsed=None):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    formats = cfg.output.formats
    (out / "resolved_config.cfg").write_text(echo_config(cfg))
    if "csv" in formats:
        (out / "records.csv").write_text(emit_records(result))
    if "meta" in formats:
        (out / "metadata.txt").write_text(emit_metadata(result, cfg, elapsed))
    if "dat" in formats:
        (out / f"plot_{result.kind}.dat").write_text(
            emit_plot_data(result, cfg.output.precision))


def _parse_overrides(pairs):
    overrides = []
    for pair in pairs or ():
        if "=" not in pair:
            raise ConfigError(f"--set expects section.key=value, got {pair!r}")
        spec, _, value = pair.partition("=")
        overrides.append((spec.strip(), value.strip()))
    return overrides


def _load_config(path, overrides, out_dir):
    if path is None:
        text = ""
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    cfg = parse_config(text, overrides)
    if out_dir is not None:
        cfg = replace(cfg, output=replace(cfg.output, directory=str(out_dir)))
    return cfg


def _execute(cfg: RunConfig) -> int:
    start = time.perf_counter()
    result = experiments.run_sweep(cfg.baseline(), cfg.sweep_spec())
    elapsed = time.perf_counter() - start
    try:
        write_outputs(result, cfg, cfg.output.directory, elapsed)
    except OSError as exc:
        print(f"error: cannot write outputs to {cfg.output.directory!r}: {exc}",
              file=sys.stderr)
        return 4
    argmax = result.summary.get("argmax")
    point = result.records[0] if result.kind == "point" else None
    if point is not None:
        print(f"stable: {point.stable}")
        print(f"E_N(+,-): {_fmt(point.e_n_pp)}  E_N(-,b): {_fmt(point.e_n_mb)}"
              f"  E_N(+,b): {_fmt(point.e_n_pb)}")
    elif argmax is not None:
        print(f"argmax: {argmax}")
    print(f"wrote {len(result.records)} records to {cfg.output.directory}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="entangle",
        description="Stationary polariton entanglement via a dispersively "
                    "coupled third mode: parameter sweeps and plot-ready data.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the sweep described by a config file")
    run_p.add_argument("config", help="path to the run configuration")
    run_p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                       help="override a config entry (repeatable; wins over file)")
    run_p.add_argument("--out", help="output directory (overrides [output] dir)")

    point_p = sub.add_parser("point", help="evaluate a single parameter point")
    point_p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    point_p.add_argument("--out", help="output directory")

    sub.add_parser("list-sweeps", help="list available sweep kinds")

    args = parser.parse_args(argv)

    if args.command == "list-sweeps":
        for kind in experiments.SWEEP_KINDS:
            print(kind)
        return 0

    try:
        overrides = _parse_overrides(args.set)
        if args.command == "point":
            overrides.append(("sweep.kind", "point"))
            cfg = _load_config(None, overrides, args.out)
        else:
            cfg = _load_config(args.config, overrides, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        return _execute(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except EntangleError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
