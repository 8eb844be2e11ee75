"""Collision-prediction mathematics for a two-vehicle following scenario.

A follower trails a leader along one lane. Once per decision period the
follower asks: if I accelerate at full forward power for one period and
then brake as hard as I can forever, does the gap to the leader (which
keeps its current acceleration throughout) ever close? If so it brakes
now; otherwise it accelerates.

The test splits into two stages. Stage one advances both vehicles one
period under constant acceleration and compares positions. Stage two
treats the remaining relative motion as a quadratic polynomial in time
and asks whether it has a positive root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lang import fmt_num

__all__ = ["AccParams", "AccState", "Phase1State", "QuadCoeffs",
           "phase1", "quad_coeffs", "collision_predicted",
           "controller_step", "make_acc_program", "DEFAULT_PARAMS"]


@dataclass(frozen=True)
class AccParams:
    fwd: float = 3.0        # forward acceleration, > 0
    bwd: float = -3.0       # braking acceleration, < 0
    st: float = 2.0         # decision period, > 0

    def __post_init__(self):
        if not self.fwd > 0:
            raise ValueError(f"fwd must be > 0, got {self.fwd!r}")
        if not self.bwd < 0:
            raise ValueError(f"bwd must be < 0, got {self.bwd!r}")
        if not self.st > 0:
            raise ValueError(f"st must be > 0, got {self.st!r}")


DEFAULT_PARAMS = AccParams()


@dataclass(frozen=True)
class AccState:
    pf: float               # follower position
    vf: float               # follower velocity
    pl: float               # leader position
    vl: float               # leader velocity
    al: float               # leader acceleration
    af: float = 0.0         # follower acceleration (set by the controller)


@dataclass(frozen=True)
class Phase1State:
    pf_st: float            # follower position after one period at fwd
    pl_st: float            # leader position after one period at al
    vf_st: float            # follower velocity after one period at fwd


@dataclass(frozen=True)
class QuadCoeffs:
    """Coefficients of the stage-two gap polynomial pl(t) - pf(t).

    at*t^2 + bt*t + ct, with t measured from the end of stage one;
    delta is its discriminant bt^2 - 4*at*ct.
    """

    at: float
    bt: float
    ct: float
    delta: float


def phase1(s: AccState, p: AccParams = DEFAULT_PARAMS) -> Phase1State:
    """Both vehicles advanced one decision period, follower at fwd."""
    st = p.st
    return Phase1State(
        pf_st=p.fwd / 2.0 * st * st + s.vf * st + s.pf,
        pl_st=s.al / 2.0 * st * st + s.vl * st + s.pl,
        vf_st=p.fwd * st + s.vf,
    )


def quad_coeffs(s: AccState, p: AccParams = DEFAULT_PARAMS) -> QuadCoeffs:
    """Gap polynomial for stage two (follower braking, leader at al)."""
    st = p.st
    at = (s.al - p.bwd) / 2.0
    bt = (s.al - p.fwd) * st + (s.vl - s.vf)
    ct = (s.al - p.fwd) / 2.0 * st * st + (s.vl - s.vf) * st + (s.pl - s.pf)
    return QuadCoeffs(at, bt, ct, bt * bt - 4.0 * at * ct)


def collision_predicted(s: AccState, p: AccParams = DEFAULT_PARAMS) -> bool:
    """True when either stage predicts the gap reaching zero.

    Boundary behavior is deliberate: stage one fires on pl_st <= pf_st
    (touching counts), stage two requires a strictly positive root.
    `al == bwd` is an exact floating-point comparison; callers deriving
    al from upstream arithmetic should quantize it first. When al == bwd
    and the relative velocity is also zero the gap is the constant ct,
    and the prediction is simply ct <= 0.
    """
    ph1 = phase1(s, p)
    if ph1.pl_st <= ph1.pf_st:
        return True
    q = quad_coeffs(s, p)
    if s.al == p.bwd:
        # at == 0: the gap is linear (or constant when bt == 0 too)
        if q.bt != 0.0:
            return -q.ct / q.bt > 0.0
        return q.ct <= 0.0
    if q.delta >= 0.0:
        root = math.sqrt(q.delta)
        if ((-q.bt + root) / (2.0 * q.at) > 0.0
                or (-q.bt - root) / (2.0 * q.at) > 0.0):
            return True
    return False


def controller_step(s: AccState, p: AccParams = DEFAULT_PARAMS) -> float:
    """The follower's next acceleration: bwd on a predicted collision."""
    return p.bwd if collision_predicted(s, p) else p.fwd


def _values_literal(values: list[float]) -> str:
    ints = all(v == int(v) for v in values)
    if (len(values) > 1 and ints
            and all(values[k + 1] - values[k] == 1
                    for k in range(len(values) - 1))):
        return f"[{fmt_num(values[0])}..{fmt_num(values[-1])}]"
    return "[" + ", ".join(fmt_num(v) for v in values) + "]"


def make_acc_program(p: AccParams = DEFAULT_PARAMS, *, pl0: float = 50.0,
                     vl0: float = 0.0,
                     al_values=(-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0)) -> str:
    """Source text of the two-vehicle scenario, one run per al value.

    The prediction formula is inlined, with its intermediate quantities
    (pfst, plst, at, bt, ct, delta) kept as program variables so that
    analysis queries such as `ct <= 0 @ every 0.5` can read them.
    """
    al_values = [float(v) for v in al_values]
    if not al_values:
        raise ValueError("al_values must not be empty")
    return f"""\
// Two vehicles on one lane. Each decision period the follower predicts
// the gap under "accelerate one period, then brake forever" and brakes
// if that estimate ever closes the gap.
pf := 0; vf := 0; af := 0;
pl := {fmt_num(pl0)}; vl := {fmt_num(vl0)};
al := {_values_literal(al_values)};
fwd := {fmt_num(p.fwd)}; bwd := {fmt_num(p.bwd)}; st := {fmt_num(p.st)};
while true do {{
  pfst := fwd / 2 * st * st + vf * st + pf;
  plst := al / 2 * st * st + vl * st + pl;
  at := (al - bwd) / 2;
  bt := (al - fwd) * st + (vl - vf);
  ct := (al - fwd) / 2 * st * st + (vl - vf) * st + (pl - pf);
  delta := bt * bt - 4 * at * ct;
  if plst <= pfst
     || al == bwd && (bt != 0 && -ct / bt > 0 || bt == 0 && ct <= 0)
     || delta >= 0 && al != bwd
        && ((-bt + sqrt(delta)) / (2 * at) > 0
            || (-bt - sqrt(delta)) / (2 * at) > 0)
  then af := bwd;
  else af := fwd;
  pf' = vf, vf' = af, af' = 0,
  pl' = vl, vl' = al, al' = 0 for st;
}}
"""
