"""Scalar solvers: bracketed bisection, safeguarded Newton, golden section.

Small, dependency-free routines tuned for the well-behaved objectives in
this package (concave rate functions, monotone CDFs, unimodal
log-integrands).  They favor guaranteed convergence over iteration count.
"""

from __future__ import annotations

import math

__all__ = ["bisect_root", "newton_bracketed", "golden_max", "BracketError"]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class BracketError(ValueError):
    """A root bracket could not be established or was invalid."""


def bisect_root(f, lo: float, hi: float, xtol: float = 1e-10, max_iter: int = 200):
    """Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0 or hi - lo < xtol:
            return mid
        if math.copysign(1.0, fmid) == math.copysign(1.0, flo):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return 0.5 * (lo + hi)


def newton_bracketed(
    f, fprime, lo: float, hi: float, x0: float | None = None,
    xtol: float = 1e-10, max_iter: int = 100,
):
    """Newton iteration confined to a sign-change bracket.

    Steps that leave the bracket, or fail to shrink it fast enough, fall
    back to bisection, so convergence is guaranteed for continuous f.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    x = x0 if x0 is not None else 0.5 * (lo + hi)
    x = min(max(x, lo), hi)
    for _ in range(max_iter):
        fx = f(x)
        if fx == 0.0:
            return x
        if math.copysign(1.0, fx) == math.copysign(1.0, flo):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        if hi - lo < xtol:
            return 0.5 * (lo + hi)
        dfx = fprime(x)
        if dfx != 0.0:
            step = fx / dfx
            cand = x - step
            if lo < cand < hi and abs(step) < 0.5 * (hi - lo):
                x = cand
                continue
        x = 0.5 * (lo + hi)
    return 0.5 * (lo + hi)


def golden_max(f, a: float, b: float, xtol: float = 1e-12, max_iter: int = 300):
    """Maximum of a unimodal f on [a, b] by golden-section search.

    Returns (x, f(x)).  Tolerance is absolute in x.  -inf values are
    tolerated (they simply lose the comparisons).
    """
    if b < a:
        raise ValueError(f"empty interval [{a}, {b}]")
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < xtol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = c if fc > fd else d
    return x, max(fc, fd)
