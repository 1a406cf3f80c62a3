"""Closed-form alpha-lambda analysis: fixed points of the rational
recurrence, the functions F0..F3, the threshold curves tau0, tau1,
tau1', tau2, and related constants and identities."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from ._roots import expand_upper, hybrid_root

SQRT2 = math.sqrt(2.0)
SQRT5 = math.sqrt(5.0)

# memoization key granularity for the threshold curves
_ALPHA_KEY_DIGITS = 12

# lower end of every lambda bracket; all F's are defined and signed there
_LAMBDA_LO = 2.0 + 1e-9


def _check_alpha(alpha: float, hi_open: float = 1.0, hi_closed: bool = False):
    ok = 0.0 <= alpha < hi_open or (hi_closed and alpha == hi_open)
    if not ok:
        upper = f"{hi_open}]" if hi_closed else f"{hi_open})"
        raise ValueError(f"alpha must lie in [0, {upper}")


def _core(lam: float, alpha: float) -> tuple[float, float, float]:
    """(delta, theta_prime, sqrt of the fixed-point discriminant).

    theta_prime is derived from theta via the product identity
    theta*theta_prime = (1-alpha)^2; the direct form (2a-lam+sq)/2
    cancels catastrophically when lam is large.
    """
    disc = (2.0 * alpha - lam) ** 2 - 4.0 * (1.0 - alpha) ** 2
    sq = math.sqrt(disc)
    theta = 0.5 * ((2.0 * alpha - lam) - sq)
    theta_prime = (1.0 - alpha) ** 2 / theta
    delta = alpha + (1.0 - alpha) ** 2 / (lam - alpha)
    return delta, theta_prime, sq


@dataclass(frozen=True)
class AlphaLambda:
    """A validated (alpha, lambda) pair with its derived quantities."""

    alpha: float
    lam: float
    delta: float = field(init=False)
    disc: float = field(init=False)
    theta: float = field(init=False)
    theta_prime: float = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError("alpha must lie in [0, 1)")
        if self.lam <= 2.0:
            raise ValueError("lambda must exceed 2")
        disc = (2.0 * self.alpha - self.lam) ** 2 - 4.0 * (1.0 - self.alpha) ** 2
        sq = math.sqrt(disc)
        mid = 2.0 * self.alpha - self.lam
        theta = 0.5 * (mid - sq)
        object.__setattr__(self, "disc", disc)
        object.__setattr__(self, "theta", theta)
        # via the product identity; the direct (mid + sq)/2 cancels badly
        object.__setattr__(self, "theta_prime", (1.0 - self.alpha) ** 2 / theta)
        object.__setattr__(
            self,
            "delta",
            self.alpha + (1.0 - self.alpha) ** 2 / (self.lam - self.alpha),
        )


@dataclass(frozen=True)
class ThresholdCurvePoint:
    alpha: float
    value: float
    kind: str  # tau0 | tau2 | tau1_prime
    residual: float


def phi(t: float, p: AlphaLambda) -> float:
    """The rational map whose fixed points are theta and theta_prime."""
    if t == 0.0:
        raise ValueError("phi is undefined at t = 0")
    return 2.0 * p.alpha - p.lam - (1.0 - p.alpha) ** 2 / t


def F0(lam: float, alpha: float) -> float:
    """Starlike-limit function; its unique root in (2, inf) is tau0."""
    delta, _, sq = _core(lam, alpha)
    return delta - sq


def F1(lam: float, alpha: float) -> float:
    """Pair-product bound; negative exactly on (tau1, tau1')."""
    delta, theta_prime, _ = _core(lam, alpha)
    return (2.0 * alpha - lam + delta) * (theta_prime - delta) - 2.0 * (
        1.0 - alpha
    ) ** 2


def F2(lam: float, alpha: float) -> float:
    """Window-containment function; its root in (2, inf) is tau2."""
    delta, theta_prime, _ = _core(lam, alpha)
    return -1.0 + alpha + delta - theta_prime


def F3(lam: float, alpha: float) -> float:
    """Second factor of F1; its root in (2, inf) is tau1'."""
    delta, theta_prime, _ = _core(lam, alpha)
    return delta + theta_prime


def _dF0(lam: float, alpha: float) -> float:
    _, _, sq = _core(lam, alpha)
    return -((1.0 - alpha) ** 2) / (lam - alpha) ** 2 - (lam - 2.0 * alpha) / sq


def _dF2(lam: float, alpha: float) -> float:
    _, _, sq = _core(lam, alpha)
    return (
        -((1.0 - alpha) ** 2) / (lam - alpha) ** 2
        + 0.5
        - (lam - 2.0 * alpha) / (2.0 * sq)
    )


def _dF3(lam: float, alpha: float) -> float:
    _, _, sq = _core(lam, alpha)
    return (
        -((1.0 - alpha) ** 2) / (lam - alpha) ** 2
        - 0.5
        + (lam - 2.0 * alpha) / (2.0 * sq)
    )


@lru_cache(maxsize=None)
def _tau0_cached(key: float) -> float:
    f = lambda lam: F0(lam, key)
    hi = expand_upper(f, _LAMBDA_LO)
    return hybrid_root(f, _LAMBDA_LO, hi, df=lambda lam: _dF0(lam, key))


def tau0(alpha: float) -> float:
    """The starlike limit point: unique root of F0 in (2, inf)."""
    _check_alpha(alpha, 1.0, hi_closed=True)
    return _tau0_cached(round(alpha, _ALPHA_KEY_DIGITS))


@lru_cache(maxsize=None)
def _tau2_cached(key: float) -> float:
    f = lambda lam: F2(lam, key)
    hi = expand_upper(f, _LAMBDA_LO)
    return hybrid_root(f, _LAMBDA_LO, hi, df=lambda lam: _dF2(lam, key))


def tau2(alpha: float) -> float:
    """Threshold above which every lambda is a limit point: root of F2.

    Defined for alpha < 1/2 only; at alpha = 1/2 the function F2 stays
    positive on all of (2, inf)."""
    _check_alpha(alpha, 0.5)
    return _tau2_cached(round(alpha, _ALPHA_KEY_DIGITS))


@lru_cache(maxsize=None)
def _tau1_prime_cached(key: float) -> float:
    f = lambda lam: F3(lam, key)
    hi = expand_upper(f, _LAMBDA_LO)
    return hybrid_root(f, _LAMBDA_LO, hi, df=lambda lam: _dF3(lam, key))


def tau1_interval(alpha: float) -> tuple[float, float]:
    """The interval (tau1, tau1') of certified limit points.

    tau1 coincides with tau0; tau1' is the unique root of F3.  At
    alpha = 0 the upper end is +infinity (returned as math.inf).
    Defined for alpha < alpha_star only."""
    a_star, _ = alpha_star()
    if not 0.0 <= alpha < a_star:
        raise ValueError(f"alpha must lie in [0, {a_star})")
    t1 = tau0(alpha)
    if alpha == 0.0:
        return t1, math.inf
    return t1, _tau1_prime_cached(round(alpha, _ALPHA_KEY_DIGITS))


def alpha_star() -> tuple[float, float]:
    """The (alpha, lambda) point where the tau1 interval degenerates."""
    return (3.0 - SQRT2) / 7.0, (9.0 + 4.0 * SQRT2) / 7.0


def corollary_crossover() -> tuple[float, float]:
    """The (alpha, lambda) point where tau1' meets tau2."""
    return 1.0 - 2.0 * SQRT5 / 5.0, (-7.0 + 5.0 * SQRT5) / (3.0 * SQRT5 - 5.0)


def cubic_discriminant_d(alpha: float) -> float:
    """Discriminant-style quantity certifying the uniqueness of the F3
    root for alpha < 1/4; negative on (0, 1/4)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    a = alpha
    return (
        -23.0 * a**6
        + 200.0 * a**5
        - 732.0 * a**4
        + 1496.0 * a**3
        - 1886.0 * a**2
        + 1512.0 * a
        - 756.0
        + 216.0 / a
        - 27.0 / a**2
    )


def quartic_P_alpha(lam: float, alpha: float) -> float:
    """Quartic polynomial whose positive root reproduces tau0."""
    a = alpha
    return (
        -(lam**4)
        + 6.0 * a * lam**3
        + (-8.0 * a**2 - 8.0 * a + 4.0) * lam**2
        + (4.0 * a**3 + 12.0 * a**2 - 6.0 * a) * lam
        - 8.0 * a**3
        + 8.0 * a**2
        - 4.0 * a
        + 1.0
    )


def threshold_point(kind: str, alpha: float) -> ThresholdCurvePoint:
    """Evaluate one threshold curve with its defining residual."""
    if kind == "tau0":
        v = tau0(alpha)
        res = abs(F0(v, alpha))
    elif kind == "tau2":
        v = tau2(alpha)
        res = abs(F2(v, alpha))
    elif kind == "tau1_prime":
        v = tau1_interval(alpha)[1]
        res = 0.0 if math.isinf(v) else abs(F3(v, alpha))
    else:
        raise ValueError(f"unknown curve kind: {kind}")
    return ThresholdCurvePoint(alpha=alpha, value=v, kind=kind, residual=res)
