"""Jacobi theta functions on the line tau = i*pi*t, t > 0, by direct summation.

The four series (nome q = exp(-pi^2 t)):

    th1(z) = 2 * sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z)
    th2(z) = 2 * sum_{n>=0}        q^{(n+1/2)^2} cos((2n+1) pi z)
    th3(z) = 1 + 2 * sum_{n>=1}        q^{n^2} cos(2 n pi z)
    th4(z) = 1 + 2 * sum_{n>=1} (-1)^n q^{n^2} cos(2 n pi z)

z-derivatives of any order are taken termwise (exact frequency factors, never
finite differences), and every evaluation carries a certified truncation-tail
bound: summation stops once the next term's absolute bound has fallen below
tol/2 *and* the bounds have entered their super-geometric decay, so the whole
tail is dominated by twice the first omitted bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

from .backend import FLOAT, FloatContext
from .errors import DomainError, PoleError, PrecisionExhaustedError

_MAX_TERMS = 20000
_ZERO_PROXIMITY = 1e-8


class ThetaIndex(IntEnum):
    TH1 = 1
    TH2 = 2
    TH3 = 3
    TH4 = 4


@dataclass(frozen=True)
class ModularPoint:
    """Time parameter t > 0 and its nome q = exp(-pi^2 t).

    q is always derived from t.  In float arithmetic q underflows to 0.0 for
    t >~ 72; the series then truncate to their constant terms, which is the
    correct limit behaviour.
    """

    t: object
    q: object

    def __post_init__(self):
        if not (float(self.t) > 0.0) or not math.isfinite(float(self.t)):
            raise DomainError(f"time parameter must be finite and > 0, got {self.t}")


def nome_from_time(t, ctx=FLOAT) -> ModularPoint:
    """Build the (t, q) pair; rejects nonpositive or non-finite t."""
    try:
        tf = float(t)
    except (TypeError, ValueError):
        raise DomainError(f"time parameter not a real number: {t!r}")
    if not math.isfinite(tf) or tf <= 0.0:
        raise DomainError(f"time parameter must be finite and > 0, got {t}")
    with ctx.guard():
        tn = ctx.num(t)
        q = ctx.exp(-(ctx.pi**2) * tn)
    return ModularPoint(t=tn, q=q)


@dataclass(frozen=True)
class ThetaEval:
    """A theta value (or z-derivative) with its certified truncation bound."""

    value: object
    deriv_order: int
    tail_bound: float
    terms_used: int


def _half_integer_series(j, z, t, d, tol, ctx, force_terms=None):
    # th1/th2: frequencies (2n+1)*pi, weights 2*exp(-pi^2 t (n+1/2)^2)
    pi = ctx.pi
    terms = []
    bounds = []
    n = 0
    prev_bound = None
    tail = 0.0
    while True:
        w = (2 * n + 1) * pi
        weight = 2 * ctx.exp(-(pi**2) * t * ctx.num((n + 0.5) ** 2))
        amp = weight * w**d
        bound = abs(float(amp))
        phase = w * z + d * (pi / 2)
        if j == ThetaIndex.TH1:
            val = amp * ctx.sin(phase)
            if n % 2 == 1:
                val = -val
        else:
            val = amp * ctx.cos(phase)
        terms.append(val)
        bounds.append(bound)
        n += 1
        if force_terms is not None:
            if n >= force_terms:
                w2 = (2 * n + 1) * math.pi
                tail = 2.0 * abs(2 * math.exp(-math.pi**2 * float(t) * (n + 0.5) ** 2) * w2**d)
                break
            continue
        # next term's bound
        w2 = (2 * n + 1) * math.pi
        nb = 2.0 * math.exp(-math.pi**2 * float(t) * (n + 0.5) ** 2) * w2**d
        if nb < tol / 2 and (prev_bound is None or nb < bound / 2) and n >= 1:
            tail = 2.0 * nb
            break
        prev_bound = bound
        if n > _MAX_TERMS:
            raise PrecisionExhaustedError(f"theta series did not reach tol={tol} within {_MAX_TERMS} terms")
    return terms, bounds, tail, n


def _integer_series(j, z, t, d, tol, ctx, force_terms=None):
    # th3/th4: constant term plus frequencies 2n*pi, weights 2*exp(-pi^2 t n^2)
    pi = ctx.pi
    terms = [ctx.num(1.0) if d == 0 else ctx.num(0.0)]
    bounds = [1.0 if d == 0 else 0.0]
    n = 1
    prev_bound = None
    tail = 0.0
    while True:
        w = 2 * n * pi
        weight = 2 * ctx.exp(-(pi**2) * t * ctx.num(n * n))
        amp = weight * w**d
        bound = abs(float(amp))
        val = amp * ctx.cos(w * z + d * (pi / 2))
        if j == ThetaIndex.TH4 and n % 2 == 1:
            val = -val
        terms.append(val)
        bounds.append(bound)
        n += 1
        if force_terms is not None:
            if n > force_terms:
                w2 = 2 * n * math.pi
                tail = 2.0 * abs(2 * math.exp(-math.pi**2 * float(t) * n * n) * w2**d)
                break
            continue
        w2 = 2 * n * math.pi
        nb = 2.0 * math.exp(-math.pi**2 * float(t) * n * n) * w2**d
        if nb < tol / 2 and (prev_bound is None or nb < bound / 2):
            tail = 2.0 * nb
            break
        prev_bound = bound
        if n > _MAX_TERMS:
            raise PrecisionExhaustedError(f"theta series did not reach tol={tol} within {_MAX_TERMS} terms")
    return terms, bounds, tail, n


def theta_deriv(j, z, mp_point: ModularPoint, d: int = 0, tol: float = 1e-14, ctx=FLOAT,
                _force_terms=None) -> ThetaEval:
    """d-th z-derivative of theta_j(z | i*pi*t) with a certified tail bound.

    Raises PrecisionExhaustedError when tol is below what cancellation allows
    at the working precision (never returns a silently wrong value).
    """
    try:
        j = ThetaIndex(j)
    except ValueError:
        raise DomainError(f"theta index must be in 1..4, got {j}")
    if not (tol > 0):
        raise DomainError(f"tol must be > 0, got {tol}")
    if not math.isfinite(float(z)):
        raise DomainError(f"z must be finite, got {z}")
    if d < 0 or int(d) != d:
        raise DomainError(f"derivative order must be a nonnegative integer, got {d}")
    with ctx.guard():
        zn = ctx.num(z)
        t = mp_point.t if not isinstance(ctx, FloatContext) else float(mp_point.t)
        t = ctx.num(t)
        if j in (ThetaIndex.TH1, ThetaIndex.TH2):
            terms, bounds, tail, n = _half_integer_series(j, zn, t, d, tol, ctx, _force_terms)
        else:
            terms, bounds, tail, n = _integer_series(j, zn, t, d, tol, ctx, _force_terms)
        value = ctx.fsum(terms)
        if isinstance(ctx, FloatContext):
            # each term carries O(eps) relative error from exp/sin/cos, so the
            # rounding floor of the sum is eps * sum(|terms|)
            noise = ctx.eps * math.fsum(bounds)
            if tol < noise:
                raise PrecisionExhaustedError(
                    f"tol={tol} below float rounding floor {noise:.3e} for this evaluation")
    return ThetaEval(value=value, deriv_order=int(d), tail_bound=float(tail),
                     terms_used=n)


def theta_null(j, mp_point: ModularPoint, tol: float = 1e-14, ctx=FLOAT) -> ThetaEval:
    """theta_j(0 | i*pi*t) for j in {2,3,4}.  theta_1(0) = 0 identically: rejected."""
    try:
        j = ThetaIndex(j)
    except ValueError:
        raise DomainError(f"theta index must be in 1..4, got {j}")
    if j == ThetaIndex.TH1:
        raise DomainError("theta_1 null is identically 0; use the identity instead")
    return theta_deriv(j, 0.0, mp_point, 0, tol, ctx)


def _zero_distance(j, z) -> float:
    """Distance from z to the real zero set of theta_j (th3/th4 have none)."""
    zf = float(z)
    if j == ThetaIndex.TH1:
        frac = zf - round(zf)
        return abs(frac)
    if j == ThetaIndex.TH2:
        frac = (zf - 0.5) - round(zf - 0.5)
        return abs(frac)
    return math.inf


def log_theta_derivs(j, z, mp_point: ModularPoint, m: int, tol: float = 1e-14, ctx=FLOAT):
    """First m derivatives of x -> log theta_j(x | i*pi*t) at z.

    Uses the exact recursion f^(k) = sum_i C(k-1,i) g^(i+1) f^(k-1-i) with
    f = theta_j and g = log f, solved for g^(k).  Refuses points within 1e-8
    of a theta zero rather than extrapolating.
    """
    try:
        j = ThetaIndex(j)
    except ValueError:
        raise DomainError(f"theta index must be in 1..4, got {j}")
    if m < 1 or int(m) != m:
        raise DomainError(f"m must be a positive integer, got {m}")
    if _zero_distance(j, z) < _ZERO_PROXIMITY:
        raise PoleError(f"log theta_{int(j)} derivative requested within {_ZERO_PROXIMITY} of a zero (z={z})")
    with ctx.guard():
        f = [theta_deriv(j, z, mp_point, d, tol, ctx).value for d in range(m + 1)]
        g = [ctx.num(0.0)] * (m + 1)
        for k in range(1, m + 1):
            acc = f[k]
            for i in range(0, k - 1):
                acc = acc - math.comb(k - 1, i) * g[1 + i] * f[k - 1 - i]
            g[k] = acc / f[0]
        return g[1:]
