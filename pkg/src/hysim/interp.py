"""Executes one concrete program against a global time horizon.

Discrete statements are instantaneous; only equation blocks advance
simulated time. The run is sampled onto the uniform grid 0, S, 2S, ...
(S = sample_every): integration is driven checkpoint to checkpoint so
that every grid time inside an equation block is an exact integration
point, and any assignment landing on a grid time overwrites that grid
sample (values at discontinuities are right-continuous).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .dynamics import (
    OdeSystem,
    Sample,
    Trajectory,
    STOPPED_BY_GUARD,
    integrate_to,
    integrate_until,
)
from .errors import (
    ConfigError,
    EvalError,
    StructureError,
    UndefinedVariable,
    ZeroTimeProgress,
)
from .lang import (
    Assign,
    AssignVariants,
    Duration,
    If,
    Not,
    OdeBlock,
    Program,
    Seq,
    Stmt,
    While,
    eval_expr,
)

__all__ = ["SimConfig", "RunResult", "run", "eval_expr",
           "COMPLETED", "HALTED", "FAILED"]

COMPLETED = "completed"     # simulated time reached the horizon
HALTED = "halted"           # the program finished before the horizon
FAILED = "failed"           # a runtime error aborted the run


@dataclass(frozen=True)
class SimConfig:
    max_time: float = 30.0
    sample_every: float = 0.1
    ode_step: float = 0.01
    zero_time_limit: int = 1_000_000

    def __post_init__(self):
        if not (self.max_time > 0 and self.sample_every > 0
                and self.ode_step > 0):
            raise ConfigError(
                "max_time, sample_every, and ode_step must all be positive")
        if self.ode_step > self.sample_every:
            raise ConfigError(
                f"ode_step ({self.ode_step}) must not exceed "
                f"sample_every ({self.sample_every})")
        if self.zero_time_limit < 1:
            raise ConfigError("zero_time_limit must be at least 1")


@dataclass(frozen=True)
class RunResult:
    trajectory: Trajectory
    status: str
    end_time: float
    error: str | None = None
    elapsed: float = field(default=0.0, compare=False)

    @property
    def variant(self) -> dict[str, float]:
        return self.trajectory.variant

    @property
    def run_index(self) -> int:
        return self.trajectory.run_index


class _HorizonReached(Exception):
    pass


def _tol(t: float) -> float:
    return 1e-9 * (1.0 + abs(t))


class _Interp:
    def __init__(self, program: Program, config: SimConfig):
        self.config = config
        self.env: dict[str, float] = {}
        self.t = 0.0
        self.grid: dict[int, Sample] = {}

    def record(self) -> None:
        s = self.config.sample_every
        k = round(self.t / s)
        if 0 <= k and abs(k * s - self.t) <= _tol(self.t):
            self.grid[k] = Sample(self.t, dict(self.env))

    def check_horizon(self) -> None:
        if self.t >= self.config.max_time - _tol(self.config.max_time):
            raise _HorizonReached

    def exec(self, stmt: Stmt) -> None:
        self.check_horizon()
        if isinstance(stmt, Assign):
            value = eval_expr(stmt.expr, self.env)
            if not math.isfinite(value):
                raise EvalError(
                    f"assignment to '{stmt.name}' produced a non-finite value",
                    stmt.pos)
            self.env[stmt.name] = value
            self.record()
        elif isinstance(stmt, Seq):
            for s in stmt.stmts:
                self.exec(s)
        elif isinstance(stmt, If):
            if eval_expr(stmt.guard, self.env):
                self.exec(stmt.then_body)
            else:
                self.exec(stmt.else_body)
        elif isinstance(stmt, While):
            self.exec_while(stmt)
        elif isinstance(stmt, OdeBlock):
            self.exec_ode(stmt)
        elif isinstance(stmt, AssignVariants):
            raise StructureError(
                f"variant array for '{stmt.name}' was not expanded before "
                f"execution", stmt.pos)
        else:
            raise TypeError(f"not a statement: {stmt!r}")

    def exec_while(self, stmt: While) -> None:
        zero_iters = 0
        while True:
            self.check_horizon()
            if not eval_expr(stmt.guard, self.env):
                return
            t_before = self.t
            self.exec(stmt.body)
            if self.t > t_before:
                zero_iters = 0
            else:
                zero_iters += 1
                if zero_iters >= self.config.zero_time_limit:
                    raise ZeroTimeProgress(
                        f"loop ran {zero_iters} iterations without "
                        f"advancing simulated time", stmt.pos)

    def exec_ode(self, stmt: OdeBlock) -> None:
        for name, _ in stmt.equations:
            if name not in self.env:
                raise UndefinedVariable(name, stmt.pos)
        system = OdeSystem(stmt.equations, self.env)
        if isinstance(stmt.bound, Duration):
            duration = eval_expr(stmt.bound.expr, self.env)
            if not math.isfinite(duration) or duration < 0:
                raise EvalError(
                    f"equation block duration must be finite and >= 0, "
                    f"got {duration!r}", stmt.bound.pos)
            t_target = self.t + duration
            self._run_timed(system, min(t_target, self.config.max_time))
        else:
            self._run_guarded(system, Not(stmt.bound.condition))

    def _checkpoint_after(self, t: float, t_end: float) -> float:
        """Next sample-grid time in (t, t_end), or t_end if none remain."""
        s = self.config.sample_every
        k = math.floor(t / s + _tol(t) / s) + 1
        c = k * s
        if c >= t_end - _tol(t_end):
            return t_end
        return c

    def _run_timed(self, system: OdeSystem, t_end: float) -> None:
        state = {name: self.env[name] for name in system.names}
        while self.t < t_end - _tol(t_end):
            c = self._checkpoint_after(self.t, t_end)
            seg = integrate_to(system, state, self.t, c, self.config.ode_step)
            state = seg[-1].state
            self.env.update(state)
            self.t = c
            self.record()
        self.check_horizon()

    def _run_guarded(self, system: OdeSystem, guard) -> None:
        state = {name: self.env[name] for name in system.names}
        max_time = self.config.max_time
        while True:
            c = self._checkpoint_after(self.t, max_time)
            seg, why = integrate_until(system, state, self.t, guard,
                                       self.config.ode_step, c)
            state = seg[-1].state
            self.env.update(state)
            self.t = seg[-1].t
            self.record()
            if why == STOPPED_BY_GUARD:
                return
            if c >= max_time - _tol(max_time):
                raise _HorizonReached

    def trajectory(self, variant: dict[str, float],
                   run_index: int) -> Trajectory:
        samples = tuple(s for _, s in sorted(self.grid.items()))
        return Trajectory(samples, dict(variant), run_index)


def run(program: Program, config: SimConfig, *,
        variant: dict[str, float] | None = None,
        run_index: int = 0) -> RunResult:
    """Execute a concrete program (no variant arrays) and sample it.

    Runtime errors (undefined variables, bad arithmetic, loops that stop
    advancing time) end the run with status "failed" and a diagnostic;
    they never raise. Reaching the horizon mid-block is silent.
    """
    started = time.perf_counter()
    interp = _Interp(program, config)
    interp.record()
    variant = variant or {}
    try:
        interp.exec(program.body)
        status, error = HALTED, None
    except _HorizonReached:
        status, error = COMPLETED, None
    except (EvalError, UndefinedVariable, ZeroTimeProgress) as exc:
        status = FAILED
        error = f"{exc} at simulated time {interp.t:g}"
    elapsed = time.perf_counter() - started
    return RunResult(interp.trajectory(variant, run_index), status,
                     end_time=interp.t, error=error, elapsed=elapsed)
