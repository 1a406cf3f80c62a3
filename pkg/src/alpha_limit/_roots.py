"""Bracketed bisection/Newton root finding for the threshold curves."""
from __future__ import annotations

from typing import Callable, Optional

BISECT_TOL = 1e-13
NEWTON_STEPS = 3
BRACKET_START = 8.0
BRACKET_CAP = 2.0**40


def expand_upper(f: Callable[[float], float], lo: float, hi: float = BRACKET_START) -> float:
    """Double hi until f changes sign relative to f(lo)."""
    flo = f(lo)
    while hi <= BRACKET_CAP:
        if f(hi) * flo < 0:
            return hi
        hi *= 2.0
    raise ValueError("no sign change found while expanding the bracket")


def hybrid_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    df: Optional[Callable[[float], float]] = None,
    tol: float = BISECT_TOL,
    newton_steps: int = NEWTON_STEPS,
) -> float:
    """Bisect [lo, hi] to width tol, then polish with Newton steps.

    Requires a sign change on the bracket.  Newton corrections that leave
    the final bracket are discarded, so convergence is guaranteed.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError("root is not bracketed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    x = 0.5 * (lo + hi)
    if df is not None:
        span = max(hi - lo, tol)
        for _ in range(newton_steps):
            dfx = df(x)
            if dfx == 0.0:
                break
            xn = x - f(x) / dfx
            if abs(xn - x) > 4 * span:
                break
            x = xn
    return x
