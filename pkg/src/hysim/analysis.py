"""Histogram queries over a batch of sampled runs.

A query `<predicate> @ every <period>` counts, at each multiple of the
period, how many runs satisfy the predicate. Predicates are evaluated
on the step-function reading of the sampled trajectory: the state in
force at time t is the latest sample at or before t. Runs that ended
(or failed) before t are not evaluable there and only contribute to a
bin's total while alive.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, replace

from .errors import (
    ConfigError,
    EvalError,
    HysimError,
    QueryParseError,
    UndefinedVariable,
)
from .interp import RunResult
from .lang import Expr, _Parser, eval_expr, expr_to_str, expr_type, tokenize

__all__ = ["HistogramQuery", "Bin", "HistogramResult", "parse_query",
           "evaluate_at", "build_histogram", "render_bars"]


@dataclass(frozen=True)
class HistogramQuery:
    predicate: Expr
    period: float
    horizon: float | None = None

    @property
    def predicate_text(self) -> str:
        return expr_to_str(self.predicate)

    def with_horizon(self, horizon: float) -> "HistogramQuery":
        return replace(self, horizon=horizon)


@dataclass(frozen=True)
class Bin:
    t: float
    count: int
    total: int


@dataclass(frozen=True)
class HistogramResult:
    bins: tuple[Bin, ...]
    query: HistogramQuery


def parse_query(text: str) -> HistogramQuery:
    """Parse `[histogram:] <predicate> @ every <period>`."""
    try:
        parser = _Parser(tokenize(text))
        tok = parser.peek()
        if (tok.kind == "IDENT" and tok.text == "histogram"
                and parser.peek(1).kind == ":"):
            parser.next()
            parser.next()
        predicate = parser.expression()
        if expr_type(predicate) != "bool":
            raise QueryParseError(
                "the query predicate must be a boolean expression",
                getattr(predicate, "pos", (0, 0)))
        parser.expect("@")
        word = parser.expect("IDENT")
        if word.text != "every":
            raise QueryParseError(
                f"expected 'every' after '@', found {word.text!r}", word.pos)
        period_tok = parser.expect("NUM")
        trailing = parser.peek()
        if trailing.kind != "EOF":
            raise QueryParseError(
                f"unexpected trailing {trailing.text!r}", trailing.pos)
    except QueryParseError:
        raise
    except HysimError as exc:
        raise QueryParseError(exc.message, exc.pos) from None
    if period_tok.value <= 0:
        raise QueryParseError("the period must be positive", period_tok.pos)
    return HistogramQuery(predicate, period_tok.value)


def evaluate_at(result: RunResult, predicate: Expr, t: float):
    """The predicate on result's sampled state at time t, or None.

    None means not evaluable: the run ended before t, or the predicate
    reads a variable that is unbound (or fails to evaluate) there.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    tol = 1e-9 * (1.0 + abs(t))
    if t > result.end_time + tol:
        return None
    samples = result.trajectory.samples
    if not samples:
        return None
    times = [s.t for s in samples]
    idx = bisect_right(times, t + tol) - 1
    if idx < 0:
        return None
    try:
        return bool(eval_expr(predicate, samples[idx].state))
    except (UndefinedVariable, EvalError):
        return None


def build_histogram(results: list[RunResult], query: HistogramQuery, *,
                    sample_every: float | None = None) -> HistogramResult:
    """Count predicate-satisfying runs at 0, period, 2*period, ... horizon.

    The horizon bin is included when the horizon is an exact multiple of
    the period. When the sampling period of the underlying runs is
    known, the query period must be an exact multiple of it.
    """
    if query.horizon is None:
        raise ConfigError("the query horizon is not set; use with_horizon()")
    if query.horizon < 0:
        raise ConfigError(f"horizon must be >= 0, got {query.horizon!r}")
    if sample_every is not None:
        ratio = query.period / sample_every
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ConfigError(
                f"the query period ({query.period}) must be a multiple of "
                f"the sampling period ({sample_every})")
    nbins = int(math.floor(query.horizon / query.period + 1e-9))
    bins = []
    for j in range(nbins + 1):
        t = j * query.period
        count = 0
        total = 0
        for result in results:
            verdict = evaluate_at(result, query.predicate, t)
            if verdict is None:
                continue
            total += 1
            if verdict:
                count += 1
        bins.append(Bin(t, count, total))
    return HistogramResult(tuple(bins), query)


def render_bars(result: HistogramResult, width: int = 40) -> str:
    """Terminal rendering: one `#`-bar per bin, scaled to the max total."""
    peak = max((b.total for b in result.bins), default=0)
    lines = [f"{result.query.predicate_text} @ every "
             f"{result.query.period:g}"]
    for b in result.bins:
        filled = 0 if peak == 0 else round(width * b.count / peak)
        lines.append(f"t={b.t:>8g} |{'#' * filled:<{width}}| "
                     f"{b.count}/{b.total}")
    return "\n".join(lines)
