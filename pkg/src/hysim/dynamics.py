"""Fixed-step RK4 integration of equation blocks.

Integration works on a grid t0, t0+h, t0+2h, ... with the final step
shortened so a segment always ends exactly at its target time. For
condition-bounded evolution the stopping condition is checked at every
grid point; on the first grid point where it holds, the bracketing step
is bisected down to a 1e-9 time window and the segment ends at the
localized crossing.

A condition that becomes true and false again strictly inside one step
is not seen. Shrinking the step tightens this, at linear cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import EvalError, UndefinedVariable
from .lang import Expr, eval_expr, free_vars

__all__ = ["OdeSystem", "Sample", "Trajectory", "integrate_for",
           "integrate_to", "integrate_until", "BISECT_TOL",
           "STOPPED_BY_GUARD", "STOPPED_BY_HORIZON"]

BISECT_TOL = 1e-9
STOPPED_BY_GUARD = "guard"
STOPPED_BY_HORIZON = "horizon"


class Sample(NamedTuple):
    t: float
    state: dict[str, float]


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled states of one run plus the binding it ran under."""

    samples: tuple[Sample, ...]
    variant: dict[str, float] = field(default_factory=dict)
    run_index: int = 0

    @property
    def times(self) -> list[float]:
        return [s.t for s in self.samples]


class OdeSystem:
    """A set of first-order equations over a frozen outer environment."""

    def __init__(self, equations, frozen_env: dict[str, float]):
        self.equations = tuple(equations)
        self.names = [name for name, _ in self.equations]
        self.derivs = [deriv for _, deriv in self.equations]
        self.frozen_env = {k: v for k, v in frozen_env.items()
                           if k not in set(self.names)}
        state_vars = set(self.names)
        for name, deriv in self.equations:
            missing = free_vars(deriv) - state_vars - set(self.frozen_env)
            if missing:
                raise UndefinedVariable(sorted(missing)[0],
                                        getattr(deriv, "pos", (0, 0)))

    def rhs(self, y: list[float]) -> list[float]:
        env = dict(self.frozen_env)
        env.update(zip(self.names, y))
        out = []
        for deriv in self.derivs:
            v = eval_expr(deriv, env)
            if not math.isfinite(v):
                raise EvalError(
                    f"derivative of '{self.names[len(out)]}' is non-finite",
                    getattr(deriv, "pos", (0, 0)))
            out.append(v)
        return out

    def state_dict(self, y: list[float]) -> dict[str, float]:
        return dict(zip(self.names, y))

    def env_at(self, y: list[float]) -> dict[str, float]:
        env = dict(self.frozen_env)
        env.update(zip(self.names, y))
        return env


def _rk4_step(system: OdeSystem, y: list[float], comp: list[float],
              h: float) -> tuple[list[float], list[float]]:
    """One classical RK4 step with compensated state accumulation.

    `comp` carries the Kahan compensation per component across the steps
    of one segment, so rounding from repeatedly adding small increments
    to large state values does not accumulate over long horizons.
    """
    n = len(y)
    k1 = system.rhs(y)
    k2 = system.rhs([y[i] + h / 2 * k1[i] for i in range(n)])
    k3 = system.rhs([y[i] + h / 2 * k2[i] for i in range(n)])
    k4 = system.rhs([y[i] + h * k3[i] for i in range(n)])
    y_out = list(y)
    c_out = list(comp)
    for i in range(n):
        delta = h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) - c_out[i]
        summed = y_out[i] + delta
        c_out[i] = (summed - y_out[i]) - delta
        y_out[i] = summed
    return y_out, c_out


def _grid(t0: float, t1: float, step: float) -> list[float]:
    """Integration times from t0 to t1; last entry is exactly t1."""
    dur = t1 - t0
    if dur <= 0:
        return [t0]
    n = int(math.floor(dur / step + 1e-9))
    ts = [t0 + i * step for i in range(n + 1)]
    if t1 - ts[-1] > 1e-12 * (1.0 + abs(t1)):
        ts.append(t1)
    else:
        ts[-1] = t1
    return ts


def integrate_for(system: OdeSystem, initial: dict[str, float], t0: float,
                  duration: float, step: float) -> list[Sample]:
    """Integrate over [t0, t0+duration]; samples at every grid point.

    The returned segment starts with the initial state and ends exactly
    at t0 + duration (zero duration yields the single initial sample).
    """
    if duration < 0:
        raise EvalError(f"negative duration {duration!r}")
    if step <= 0:
        raise EvalError(f"step must be positive, got {step!r}")
    return integrate_to(system, initial, t0, t0 + duration, step)


def integrate_to(system: OdeSystem, initial: dict[str, float], t0: float,
                 t_end: float, step: float) -> list[Sample]:
    """Like integrate_for, but lands exactly on an absolute end time."""
    y = [initial[name] for name in system.names]
    comp = [0.0] * len(y)
    ts = _grid(t0, t_end, step)
    samples = [Sample(ts[0], system.state_dict(y))]
    for i in range(len(ts) - 1):
        y, comp = _rk4_step(system, y, comp, ts[i + 1] - ts[i])
        samples.append(Sample(ts[i + 1], system.state_dict(y)))
    return samples


def integrate_until(system: OdeSystem, initial: dict[str, float], t0: float,
                    guard: Expr, step: float,
                    max_time: float) -> tuple[list[Sample], str]:
    """Evolve while `guard` holds, up to the absolute time max_time.

    Returns the sampled segment and what ended it: "guard" when the
    guard's negation first held (segment ends at the bisection-localized
    crossing), "horizon" when max_time arrived first. A guard already
    false at t0 yields a zero-length segment.
    """
    if step <= 0:
        raise EvalError(f"step must be positive, got {step!r}")
    y = [initial[name] for name in system.names]
    comp = [0.0] * len(y)
    if not eval_expr(guard, system.env_at(y)):
        return [Sample(t0, system.state_dict(y))], STOPPED_BY_GUARD

    ts = _grid(t0, max_time, step)
    samples = [Sample(ts[0], system.state_dict(y))]
    for i in range(len(ts) - 1):
        y_next, comp_next = _rk4_step(system, y, comp, ts[i + 1] - ts[i])
        if not eval_expr(guard, system.env_at(y_next)):
            t_cross, y_cross = _bisect(system, y, comp, ts[i], ts[i + 1],
                                       guard)
            samples.append(Sample(t_cross, system.state_dict(y_cross)))
            return samples, STOPPED_BY_GUARD
        y, comp = y_next, comp_next
        samples.append(Sample(ts[i + 1], system.state_dict(y)))
    return samples, STOPPED_BY_HORIZON


def _bisect(system: OdeSystem, y_lo: list[float], comp_lo: list[float],
            t_lo: float, t_hi: float,
            guard: Expr) -> tuple[float, list[float]]:
    """Localize the first guard violation in (t_lo, t_hi] to BISECT_TOL.

    The state at a candidate time is reached with a single RK4 step from
    the step's start, so the result is consistent with the surrounding
    integration grid.
    """
    lo, hi = t_lo, t_hi
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        y_mid, _ = _rk4_step(system, y_lo, comp_lo, mid - t_lo)
        if eval_expr(guard, system.env_at(y_mid)):
            lo = mid
        else:
            hi = mid
    y_cross, _ = _rk4_step(system, y_lo, comp_lo, hi - t_lo)
    return hi, y_cross
