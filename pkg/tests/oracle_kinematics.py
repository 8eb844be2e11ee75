"""Independent closed-form oracle for the two-vehicle scenario.

Everything in this module is computed from piecewise constant-acceleration
kinematics, written without touching the package under test: no ODE
integration, no expression trees, no shared helpers. Test modules treat
these results as ground truth.

Run as a script to regenerate the frozen golden files under tests/data/
and print a knife-edge report (minimum margins of every comparison that
feeds a boolean decision; margins near zero would make goldens fragile).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numba
import numpy as np

FWD = 3.0
BWD = -3.0
ST = 2.0
PL0 = 50.0
VL0 = 0.0
PF0 = 0.0
VF0 = 0.0

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def advance(p, v, a, dt):
    """Exact constant-acceleration update over dt."""
    return p + v * dt + 0.5 * a * dt * dt, v + a * dt


def gap_formula_ct(pf, vf, pl, vl, al, fwd=FWD, st=ST):
    # Predicted gap after one decision period if the follower accelerates.
    return (al - fwd) / 2.0 * st * st + (vl - vf) * st + (pl - pf)


def brake_decision(pf, vf, pl, vl, al, fwd=FWD, bwd=BWD, st=ST):
    """Direct transcription of the braking rule, evaluated arithmetically.

    Returns True when the two-stage estimate (accelerate for one period,
    then brake forever) predicts the gap reaching zero.
    """
    pf_st = fwd / 2.0 * st * st + vf * st + pf
    pl_st = al / 2.0 * st * st + vl * st + pl
    if pl_st <= pf_st:
        return True
    at = (al - bwd) / 2.0
    bt = (al - fwd) * st + (vl - vf)
    ct = (al - fwd) / 2.0 * st * st + (vl - vf) * st + (pl - pf)
    if al == bwd:
        if bt != 0.0:
            return -ct / bt > 0.0
        return ct <= 0.0
    delta = bt * bt - 4.0 * at * ct
    if delta >= 0.0:
        r = math.sqrt(delta)
        if (-bt + r) / (2.0 * at) > 0.0 or (-bt - r) / (2.0 * at) > 0.0:
            return True
    return False


@dataclass
class DecisionPoint:
    t: float
    pf: float
    vf: float
    pl: float
    vl: float
    af: float      # acceleration chosen at this instant
    ct: float      # predicted gap, assigned at this instant
    plst: float
    pfst: float


def simulate_acc(al, horizon=30.0, fwd=FWD, bwd=BWD, st=ST,
                 pl0=PL0, vl0=VL0, pf0=PF0, vf0=VF0):
    """Closed-form simulation of one variant: decisions every st seconds.

    Returns the list of decision points at t = 0, st, 2*st, ... < horizon.
    """
    pf, vf, pl, vl = pf0, vf0, pl0, vl0
    points = []
    t = 0.0
    while t < horizon - 1e-9:
        af = bwd if brake_decision(pf, vf, pl, vl, al, fwd, bwd, st) else fwd
        ct = gap_formula_ct(pf, vf, pl, vl, al, fwd, st)
        pf_st = fwd / 2.0 * st * st + vf * st + pf
        pl_st = al / 2.0 * st * st + vl * st + pl
        points.append(DecisionPoint(t, pf, vf, pl, vl, af, ct, pl_st, pf_st))
        dt = min(st, horizon - t)
        pf, vf = advance(pf, vf, af, dt)
        pl, vl = advance(pl, vl, al, dt)
        t += dt
    return points


def state_at(points, al, t, fwd=FWD, bwd=BWD, st=ST):
    """Exact state (pf, vf, pl, vl) at arbitrary time t within the horizon."""
    last = None
    for p in points:
        if p.t <= t + 1e-9:
            last = p
        else:
            break
    dt = t - last.t
    pf, vf = advance(last.pf, last.vf, last.af, dt)
    pl, vl = advance(last.pl, last.vl, al, dt)
    return pf, vf, pl, vl


def min_gap(al, horizon=30.0, dt=0.001):
    """Dense minimum of pl - pf over the run (sampled every dt)."""
    points = simulate_acc(al, horizon)
    best = math.inf
    n = int(round(horizon / dt))
    for i in range(n + 1):
        t = i * dt
        pf, _, pl, _ = state_at(points, al, min(t, horizon))
        best = min(best, pl - pf)
    return best


def golden_ct_histogram(period=0.5, horizon=30.0, al_values=range(-3, 4)):
    """Per-bin counts of runs whose current ct value is <= 0.

    ct is assigned at each decision instant and held until the next one,
    so the value in force at bin time t is the one from the latest
    decision at or before t.
    """
    runs = {al: simulate_acc(float(al), horizon) for al in al_values}
    bins = []
    nbins = int(math.floor(horizon / period + 1e-9))
    for j in range(nbins + 1):
        t = j * period
        count = 0
        for al, points in runs.items():
            ct = None
            for p in points:
                if p.t <= t + 1e-9:
                    ct = p.ct
                else:
                    break
            if ct <= 0.0:
                count += 1
        bins.append({"t": t, "count": count, "total": len(runs)})
    return bins


@numba.njit(parallel=True, cache=True)
def _scan_kernel(states, fwd, bwd, st, step, horizon):  # pragma: no cover
    n = states.shape[0]
    hit = np.zeros(n, dtype=np.bool_)
    n1 = int(round(st / step))
    n2 = int(round((horizon - st) / step))
    for i in numba.prange(n):
        pf0, vf0, pl0, vl0, al = (states[i, 0], states[i, 1],
                                  states[i, 2], states[i, 3], states[i, 4])
        found = False
        # phase 1: follower at fwd, leader at al
        for k in range(n1 + 1):
            t = k * step
            pf = pf0 + vf0 * t + 0.5 * fwd * t * t
            pl = pl0 + vl0 * t + 0.5 * al * t * t
            if pl - pf <= 0.0:
                found = True
                break
        if not found:
            # phase 2: from the phase-1 end state, follower braking at bwd
            pf1 = pf0 + vf0 * st + 0.5 * fwd * st * st
            vf1 = vf0 + fwd * st
            pl1 = pl0 + vl0 * st + 0.5 * al * st * st
            vl1 = vl0 + al * st
            for k in range(n2 + 1):
                t = k * step
                pf = pf1 + vf1 * t + 0.5 * bwd * t * t
                pl = pl1 + vl1 * t + 0.5 * al * t * t
                if pl - pf <= 0.0:
                    found = True
                    break
        hit[i] = found
    return hit


def two_phase_collision_scan(states, fwd=FWD, bwd=BWD, st=ST,
                             step=1e-4, horizon=60.0):
    """Dense brute-force collision check.

    states: array of shape (n, 5) with columns pf, vf, pl, vl, al.
    Simulates the follower at fwd for st seconds, then braking at bwd for
    the rest of the horizon, evaluating both positions at every multiple
    of `step` and reporting per state whether pl(t) - pf(t) <= 0 at any
    sample. No discriminants, no root analysis: a plain scan.
    """
    states = np.ascontiguousarray(np.asarray(states, dtype=np.float64))
    return _scan_kernel(states, fwd, bwd, st, step, horizon)


def knife_edge_report(al_values=range(-3, 4), horizon=30.0):
    """Smallest |margin| of every decision-feeding comparison.

    The package integrates numerically, so its state can drift from the
    closed forms by rounding-level amounts. Comfortable margins here
    guarantee that every boolean decision (brake/accelerate, ct <= 0)
    is insensitive to that drift.
    """
    min_ct = math.inf
    min_phase1 = math.inf
    min_delta = math.inf
    for al in al_values:
        for p in simulate_acc(float(al), horizon):
            min_ct = min(min_ct, abs(p.ct))
            min_phase1 = min(min_phase1, abs(p.plst - p.pfst))
            at = (float(al) - BWD) / 2.0
            bt = (float(al) - FWD) * ST + (p.vl - p.vf)
            if float(al) != BWD:
                delta = bt * bt - 4.0 * at * p.ct
                min_delta = min(min_delta, abs(delta))
    return {"min_abs_ct": min_ct, "min_abs_phase1_gap": min_phase1,
            "min_abs_delta": min_delta}


def main():
    os.makedirs(DATA_DIR, exist_ok=True)

    boundary_pf = {al: [p.pf for p in simulate_acc(float(al))]
                   for al in range(-3, 4)}
    print("loop-boundary pf, al=0:", [round(x, 9) for x in boundary_pf[0][:10]])

    bins = golden_ct_histogram()
    path = os.path.join(DATA_DIR, "golden_acc_ct_hist.json")
    with open(path, "w") as fh:
        json.dump({"period": 0.5, "horizon": 30.0, "al": list(range(-3, 4)),
                   "bins": bins}, fh, indent=1)
    counts = [b["count"] for b in bins]
    print(f"golden ct<=0 histogram written to {path}")
    print("counts:", counts)

    print("min gap per al:", {al: round(min_gap(float(al)), 6)
                              for al in range(-3, 4)})
    print("knife-edge report:", knife_edge_report())


if __name__ == "__main__":
    main()
