"""Command-line entry point.

Exit codes: 0 on success, 1 for user errors (bad syntax, bad query, bad
flags), 2 for internal errors. Identical invocations write byte-identical
output files.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .analysis import build_histogram, parse_query, render_bars
from .errors import BatchCapError, ConfigError, HysimError
from .interp import SimConfig
from .lang import ast_dump, parse
from .multirun import run_all
from .traceio import histogram_json_bytes, trace_csv, trace_json_bytes

__all__ = ["main"]

ODE_STEP_ENV = "HYSIM_ODE_STEP"


def _default_step() -> float:
    raw = os.environ.get(ODE_STEP_ENV)
    if raw is None:
        return 0.01
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{ODE_STEP_ENV}={raw!r} is not a number") from None


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hysim",
        description="Simulate and analyze hybrid programs.")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a program and dump its tree")
    p.add_argument("file")

    def sim_flags(cmd):
        cmd.add_argument("--max-time", type=float, default=30.0)
        cmd.add_argument("--sample", type=float, default=0.1,
                         help="sampling period of the output grid")
        cmd.add_argument("--step", type=float, default=None,
                         help=f"integration step (default 0.01, or "
                              f"${ODE_STEP_ENV})")
        cmd.add_argument("--workers", type=int, default=1)
        cmd.add_argument("--allow-large", action="store_true",
                         help="lift the 10000-run batch cap")
        cmd.add_argument("--out", default=None)

    r = sub.add_parser("run", help="simulate every variant of a program")
    r.add_argument("file")
    sim_flags(r)
    r.add_argument("--format", choices=("json", "csv"), default="json")

    h = sub.add_parser("hist", help="histogram of a predicate over a batch")
    h.add_argument("file")
    h.add_argument("--query", required=True,
                   help='e.g. "ct <= 0 @ every 0.5"')
    sim_flags(h)

    s = sub.add_parser("serve", help="run the HTTP API")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8080)
    return top


def _config(args) -> SimConfig:
    step = args.step if args.step is not None else _default_step()
    return SimConfig(max_time=args.max_time, sample_every=args.sample,
                     ode_step=step)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(data: bytes, out: str | None) -> None:
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def cmd_parse(args) -> int:
    program = parse(_read(args.file))
    print(ast_dump(program))
    return 0


def cmd_run(args) -> int:
    program = parse(_read(args.file))
    config = _config(args)
    results = run_all(program, config, workers=args.workers,
                      allow_large=args.allow_large)
    if args.format == "json":
        _emit(trace_json_bytes(config, results), args.out)
    else:
        _emit(trace_csv(config, results).encode("utf-8"), args.out)
    return 0


def cmd_hist(args) -> int:
    program = parse(_read(args.file))
    config = _config(args)
    query = parse_query(args.query).with_horizon(config.max_time)
    results = run_all(program, config, workers=args.workers,
                      allow_large=args.allow_large)
    hist = build_histogram(results, query,
                           sample_every=config.sample_every)
    if args.out is None:
        print(render_bars(hist))
    else:
        _emit(histogram_json_bytes(hist), args.out)
    return 0


def cmd_serve(args) -> int:
    from .server import serve  # deferred: pulls in the HTTP stack

    serve(host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"parse": cmd_parse, "run": cmd_run,
                "hist": cmd_hist, "serve": cmd_serve}
    try:
        return handlers[args.command](args)
    except (HysimError, BatchCapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - internal-error contract
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
