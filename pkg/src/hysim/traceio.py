"""Canonical trace and histogram serialization.

The CLI and the HTTP API both emit through these functions, so equal
inputs produce byte-identical output on either surface. Map keys are
sorted and wall-clock timings are never serialized, keeping repeated
invocations byte-stable.
"""

from __future__ import annotations

import io
import json

from .analysis import HistogramResult
from .interp import FAILED, RunResult, SimConfig

__all__ = ["config_dict", "run_dict", "trace_dict", "trace_json_bytes",
           "trace_csv", "histogram_dict", "histogram_json_bytes"]


def config_dict(config: SimConfig) -> dict:
    return {
        "maxTime": config.max_time,
        "sampleEvery": config.sample_every,
        "odeStep": config.ode_step,
    }


def run_dict(result: RunResult) -> dict:
    out = {
        "index": result.run_index,
        "variant": {k: result.variant[k] for k in sorted(result.variant)},
        "status": result.status,
        "samples": [
            {"t": s.t, "state": {k: s.state[k] for k in sorted(s.state)}}
            for s in result.trajectory.samples
        ],
    }
    if result.status == FAILED:
        out["error"] = result.error
    return out


def trace_dict(config: SimConfig, results: list[RunResult]) -> dict:
    return {"config": config_dict(config),
            "runs": [run_dict(r) for r in results]}


def trace_json_bytes(config: SimConfig, results: list[RunResult]) -> bytes:
    payload = json.dumps(trace_dict(config, results),
                         separators=(",", ":"), allow_nan=False)
    return payload.encode("utf-8") + b"\n"


def trace_csv(config: SimConfig, results: list[RunResult]) -> str:
    """One row per (run, sample); variant columns first, then the rest."""
    variant_vars: list[str] = []
    for r in results:
        for name in r.variant:
            if name not in variant_vars:
                variant_vars.append(name)
    other_vars: set[str] = set()
    for r in results:
        for s in r.trajectory.samples:
            other_vars.update(s.state)
    columns = variant_vars + sorted(other_vars - set(variant_vars))

    buf = io.StringIO()
    buf.write("index,t," + ",".join(columns) + "\n")
    for r in results:
        for s in r.trajectory.samples:
            cells = [str(r.run_index), repr(s.t)]
            for name in columns:
                value = s.state.get(name)
                cells.append("" if value is None else repr(value))
            buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def histogram_dict(result: HistogramResult) -> dict:
    return {
        "query": {
            "predicate": result.query.predicate_text,
            "every": result.query.period,
            "horizon": result.query.horizon,
        },
        "bins": [{"t": b.t, "count": b.count, "total": b.total}
                 for b in result.bins],
    }


def histogram_json_bytes(result: HistogramResult) -> bytes:
    payload = json.dumps(histogram_dict(result),
                         separators=(",", ":"), allow_nan=False)
    return payload.encode("utf-8") + b"\n"
