"""Adaptive panel quadrature for log-scale integrands.

The integrands this package cares about look like ``exp(E(theta))`` with
E spanning thousands of log-units and a peak whose width shrinks like
1/d or faster.  Integration therefore happens entirely on E: each panel
is evaluated with a 15-point Gauss-Kronrod rule applied to
``exp(E - E_max)`` (the max-shift trick), and panels are accumulated in
log scale.  Callers seed the panel layout with a geometric ladder around
the peak; the adaptive loop then splits whichever panel dominates the
error estimate until the relative target is met.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .logreal import LogReal, QUADRATURE_ACCURACY, log_add_exp

__all__ = ["log_integrate", "QuadratureError", "geometric_ladder", "panel_log_values"]

_NEG_INF = float("-inf")

# 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule
_XGK = (
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
)
_WGK = (
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
)
_WG = (0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469)


class QuadratureError(ArithmeticError):
    """Raised when the panel budget is exhausted before convergence.

    Carries the achieved relative error estimate and the best value so
    the caller can decide whether to accept it anyway.
    """

    def __init__(self, message: str, log_value: float, rel_err: float):
        super().__init__(f"{message} (achieved rel err ~ {rel_err:.3e})")
        self.log_value = log_value
        self.rel_err = rel_err


@dataclass
class _Panel:
    lo: float
    hi: float
    log_val: float
    log_err: float


def _eval_panel(f_log, lo: float, hi: float) -> _Panel:
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    logs = []
    for x in _XGK[:-1]:
        logs.append(f_log(center - half * x))
        logs.append(f_log(center + half * x))
    logs.append(f_log(center))
    peak = max(logs)
    if peak == _NEG_INF:
        return _Panel(lo, hi, _NEG_INF, _NEG_INF)
    vals = [math.exp(v - peak) for v in logs]
    resk = _WGK[7] * vals[14]
    resg = _WG[3] * vals[14]
    for i in range(7):
        pair = vals[2 * i] + vals[2 * i + 1]
        resk += _WGK[i] * pair
        if i % 2 == 1:
            resg += _WG[i // 2] * pair
    err = abs(resk - resg) * half
    val = resk * half
    log_val = peak + math.log(val) if val > 0.0 else _NEG_INF
    log_err = peak + math.log(err) if err > 0.0 else _NEG_INF
    return _Panel(lo, hi, log_val, log_err)


def geometric_ladder(lo: float, hi: float, center: float, levels: int = 48) -> list:
    """Panel boundaries clustering geometrically around an interior peak."""
    span = hi - lo
    points = {lo, hi}
    for k in range(1, levels + 1):
        off = span * 2.0 ** (-k)
        for cand in (center - off, center + off):
            if lo < cand < hi:
                points.add(cand)
    if lo < center < hi:
        points.add(center)
    return sorted(points)


def panel_log_values(f_log, boundaries) -> list:
    """Log-scale single-rule value of each cell of a fixed grid.

    Used for cumulative tables where the caller controls the grid
    density; no adaptivity is applied.
    """
    out = []
    for a, b in zip(boundaries[:-1], boundaries[1:]):
        out.append(_eval_panel(f_log, a, b).log_val if b > a else float("-inf"))
    return out


def log_integrate(
    f_log,
    boundaries,
    rel_tol: float = QUADRATURE_ACCURACY.rel_tol,
    max_panels: int = QUADRATURE_ACCURACY.max_iter,
) -> LogReal:
    """Integral of exp(f_log) over the paneled interval, as a LogReal.

    ``boundaries`` is an increasing sequence of panel edges (at least two
    entries).  Raises QuadratureError when the split budget runs out with
    the relative error estimate still above ``rel_tol``.
    """
    boundaries = list(boundaries)
    if len(boundaries) < 2:
        raise ValueError("need at least two panel boundaries")
    panels = []
    for a, b in zip(boundaries[:-1], boundaries[1:]):
        if b < a:
            raise ValueError("panel boundaries must be increasing")
        if b > a:
            panels.append(_eval_panel(f_log, a, b))
    if not panels:
        return LogReal.zero()

    heap = [(-p.log_err, i) for i, p in enumerate(panels)]
    heapq.heapify(heap)

    def totals():
        tv = _NEG_INF
        te = _NEG_INF
        for p in panels:
            tv = log_add_exp(tv, p.log_val)
            te = log_add_exp(te, p.log_err)
        return tv, te

    splits = 0
    while True:
        total_val, total_err = totals()
        if total_val == _NEG_INF:
            return LogReal.zero()
        if total_err <= total_val + math.log(rel_tol):
            return LogReal.from_log(total_val)
        if splits >= max_panels:
            raise QuadratureError(
                "quadrature did not converge within the panel budget",
                total_val,
                math.exp(total_err - total_val),
            )
        if not heap:
            # every panel is at float resolution; error floor reached
            return LogReal.from_log(total_val)
        _, idx = heapq.heappop(heap)
        worst = panels[idx]
        if worst.log_err == _NEG_INF:
            # nothing left to refine; error floor reached
            return LogReal.from_log(total_val)
        # errors already far below the convergence threshold cannot add up
        # to it across the panel set; freeze such panels instead of splitting
        cut = total_val + math.log(rel_tol) - math.log(len(panels)) - 5.0
        if worst.log_err <= cut:
            panels[idx] = _Panel(worst.lo, worst.hi, worst.log_val, _NEG_INF)
            continue
        mid = 0.5 * (worst.lo + worst.hi)
        if mid <= worst.lo or mid >= worst.hi:
            # panel at float resolution; accept its estimate as-is
            panels[idx] = _Panel(worst.lo, worst.hi, worst.log_val, _NEG_INF)
            continue
        left = _eval_panel(f_log, worst.lo, mid)
        right = _eval_panel(f_log, mid, worst.hi)
        panels[idx] = left
        heapq.heappush(heap, (-left.log_err, idx))
        panels.append(right)
        heapq.heappush(heap, (-right.log_err, len(panels) - 1))
        splits += 1
