"""Numeric backends: fast binary64 arithmetic and adaptive-precision mpmath.

Everything downstream is written against plain arithmetic plus the handful of
transcendental functions exposed here, so the same formula code runs either in
floats (grid scans, where conditioning allows) or in mpmath (elliptic constants
and exact t-derivatives, where q -> 0 degeneracies wipe out double precision).

The working precision needed at large t is driven by cancellation depth: the
coefficient blocks g2 - 12*c0^2, Delta, etc. vanish like q^2 and q^4 as
q = exp(-pi^2 t) -> 0, so resolving their signs costs O(t) decimal digits.
"""

from __future__ import annotations

import contextlib
import math
import os

import mpmath as mp

from .errors import DomainError

_LN10 = math.log(10.0)

#: environment switch: "double" (default) or "extended"
PRECISION_ENV = "THETAKIT_PRECISION"


def precision_mode() -> str:
    mode = os.environ.get(PRECISION_ENV, "double").strip().lower()
    if mode not in ("double", "extended"):
        raise ValueError(f"{PRECISION_ENV} must be 'double' or 'extended', got {mode!r}")
    return mode


def dps_for(t: float, extra: int = 0) -> int:
    """Decimal digits needed to survive the q^2..q^4 cancellations at time t.

    Degeneracies appear at both ends: the coefficient blocks vanish like
    exp(-2 pi^2 t) as t grows, while e1 - e2 = pi^2 th4^4 vanishes like
    exp(-2/t) as t shrinks (the modular dual).  Precision therefore scales
    with the larger of t and its dual time 1/(pi^2 t).
    """
    tf = float(t)
    if not (tf > 0.0) or not math.isfinite(tf):
        raise DomainError(f"time parameter must be finite and > 0, got {t}")
    t_eff = max(tf, 1.0 / (math.pi**2 * tf))
    return 40 + int(math.ceil(6.0 * math.pi**2 * t_eff / _LN10)) + extra


class FloatContext:
    """binary64 arithmetic; sums are accumulated with math.fsum (error-free)."""

    name = "float"
    eps = 2.220446049250313e-16

    @property
    def pi(self):
        return math.pi

    def num(self, x):
        return float(x)

    def exp(self, x):
        # underflow to 0.0 is fine: that is the documented "effectively q = 0"
        # regime for very large t
        return math.exp(x)

    def sin(self, x):
        return math.sin(x)

    def cos(self, x):
        return math.cos(x)

    def sqrt(self, x):
        return math.sqrt(x)

    def fsum(self, terms):
        return math.fsum(terms)

    def guard(self):
        return contextlib.nullcontext()


class MPContext:
    """mpmath arithmetic at a fixed decimal precision.

    Formula code must run inside ``with ctx.guard():`` so that intermediate
    mpf operations pick up this precision rather than mpmath's global default.
    """

    name = "mp"

    def __init__(self, dps: int):
        self.dps = int(dps)
        with mp.workdps(self.dps):
            self.eps = float(mp.mpf(10) ** (-self.dps + 2))

    @property
    def pi(self):
        return +mp.pi

    def num(self, x):
        if isinstance(x, float):
            return mp.mpf(x)
        return mp.mpf(str(x)) if isinstance(x, str) else mp.mpf(x)

    def exp(self, x):
        return mp.exp(x)

    def sin(self, x):
        return mp.sin(x)

    def cos(self, x):
        return mp.cos(x)

    def sqrt(self, x):
        return mp.sqrt(x)

    def fsum(self, terms):
        return mp.fsum(terms)

    def guard(self):
        return mp.workdps(self.dps)


FLOAT = FloatContext()


def mp_context(dps: int) -> MPContext:
    return MPContext(dps)


def context_for(t: float, heavy: bool = False):
    """Pick the default evaluation context for scans at time t.

    Float is fine while the elliptic coefficient blocks are O(1); past t ~ 1
    the q^2-suppressed quantities (F3', G3, nu1 margins) sink below double
    rounding noise, and below t ~ 0.1 the dual gap e1 - e2 ~ exp(-2/t) does
    the same on the other side, so scans switch to mpmath outside the middle
    band. ``heavy`` forces mpmath.
    """
    if heavy or precision_mode() == "extended" or not (0.1 <= float(t) <= 1.0):
        return mp_context(max(50, dps_for(t)))
    return FLOAT


def as_float(x) -> float:
    return float(x)


def ctx_tol(ctx) -> float:
    """Series tail target appropriate for a context's working precision.

    Floored at 1e-290 so tolerance bookkeeping stays inside float range even
    for very high-dps contexts (the floor still leaves >100 good digits for
    every cancellation level reachable at t <= 20).

    The float target is 1e-11, not eps: third z-derivatives at small t carry a
    rounding floor of eps * sum|terms| ~ 1e-13, and requesting less than that
    is refused by theta_deriv.  1e-11 absolute is below every sign margin the
    float context is trusted with.
    """
    if isinstance(ctx, FloatContext):
        return 1e-11
    return max(10.0 * ctx.eps, 1e-290)
