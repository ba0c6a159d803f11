"""Theta quotients S_j(u,v;t) and their exact t-derivatives.

S_j = theta_j(u/2 | i pi t) / theta_j(v/2 | i pi t).  Because each
f(x,t) = theta_j(x/2 | i pi t) satisfies the heat equation f_t = f_xx, the
k-th t-derivative of f is 4^{-k} theta_j^{(2k)}(x/2) (the 4^{-k} comes from
the x = 2z chain rule and is applied in exactly one place, the N/D
construction below, to keep the bookkeeping honest).  Quotient derivatives
follow from Leibniz on N = S * D:

    S^(k) = ( N^(k) - sum_{i<k} C(k,i) S^(i) D^(k-i) ) / D.

This recursion cancels at relative level q^2 = exp(-2 pi^2 t), so it runs in
mpmath at dps_for(t) and exports floats; double precision would return pure
noise for t beyond ~2.  The finite-difference oracle lives here too and is
the independent cross-check on the chain-rule bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .backend import ctx_tol, dps_for, mp_context
from .errors import DomainError, PoleError, PrecisionExhaustedError
from .theta import ModularPoint, ThetaIndex, nome_from_time, theta_deriv

#: highest exact derivative order at the default precision policy
K_MAX = 12


@dataclass(frozen=True)
class QuotientSpec:
    j: int
    u: float
    v: float

    def __post_init__(self):
        try:
            ThetaIndex(self.j)
        except ValueError:
            raise DomainError(f"theta index must be in 1..4, got {self.j}")
        if not (0.0 <= self.u <= self.v < 1.0):
            raise DomainError(f"need 0 <= u <= v < 1, got u={self.u}, v={self.v}")

    def require_strict(self):
        if not (self.u < self.v):
            raise DomainError(f"theorem hypotheses need strict u < v, got u={self.u}=v")
        if self.j == 1 and self.u == 0.0:
            raise DomainError("j=1 needs u > 0 (theta_1 vanishes at 0)")


@dataclass(frozen=True)
class DerivSeries:
    """S together with its first k exact t-derivatives at one (u, v, t)."""

    order: int
    values: tuple


def _check_denominator(spec: QuotientSpec):
    if spec.j == 1 and spec.v == 0.0:
        raise PoleError("theta_1(0) = 0: quotient undefined for j=1, v=0")


def _nd_derivs(spec: QuotientSpec, t, k: int, ctx):
    """N^(i), D^(i) for i = 0..k: 4^{-i} theta_j^{(2i)} at u/2 and v/2."""
    mp_point = nome_from_time(t, ctx)
    tol = ctx_tol(ctx)
    N, D = [], []
    for i in range(k + 1):
        scale = ctx.num(4.0) ** (-i)
        N.append(scale * theta_deriv(spec.j, spec.u / 2.0, mp_point, 2 * i, tol, ctx).value)
        D.append(scale * theta_deriv(spec.j, spec.v / 2.0, mp_point, 2 * i, tol, ctx).value)
    return N, D


def S(spec: QuotientSpec, t, tol: float = 1e-14) -> float:
    """The quotient itself (float, double-precision accurate)."""
    _check_denominator(spec)
    ctx = mp_context(max(30, dps_for(float(t), 0) // 2))
    with ctx.guard():
        N, D = _nd_derivs(spec, t, 0, ctx)
        return float(N[0] / D[0])


def S_exact(spec: QuotientSpec, t):
    """The quotient as an mpf at cancellation-safe precision.

    For comparing nearly equal values across t: past t ~ 2 consecutive
    grid values of S agree to more than 16 digits and the float view of
    their strict ordering is lost.
    """
    _check_denominator(spec)
    ctx = mp_context(dps_for(float(t), 10))
    with ctx.guard():
        N, D = _nd_derivs(spec, t, 0, ctx)
        return N[0] / D[0]


def S_t_derivs(spec: QuotientSpec, t, k: int, tol: float = 1e-12) -> DerivSeries:
    """Exact derivatives d^i S / dt^i, i = 0..k, via the heat reduction.

    No finite differencing anywhere; derivative weights (2n pi)^{2i} inflate
    cancellation, so orders beyond K_MAX are refused at the default policy.
    """
    _check_denominator(spec)
    if k < 0 or int(k) != k:
        raise DomainError(f"derivative order must be a nonnegative integer, got {k}")
    if k > K_MAX:
        raise PrecisionExhaustedError(
            f"order {k} exceeds K_MAX={K_MAX}; rerun with a dedicated high-precision build")
    ctx = mp_context(dps_for(float(t), 10 * k))
    with ctx.guard():
        N, D = _nd_derivs(spec, t, k, ctx)
        out = [N[0] / D[0]]
        for kk in range(1, k + 1):
            acc = N[kk]
            for i in range(kk):
                acc -= mp.binomial(kk, i) * out[i] * D[kk - i]
            out.append(acc / D[0])
        return DerivSeries(order=k, values=tuple(float(v) for v in out))


def log_second_t(spec: QuotientSpec, t, tol: float = 1e-12) -> float:
    """d^2 log S / dt^2 = 4^{-2}[th^(4)/th - (th''/th)^2](u/2) - (same at v/2).

    Satisfies S'' = S (log_second_t + (S'/S)^2) against S_t_derivs.
    """
    _check_denominator(spec)
    if spec.j not in (2, 3):
        raise DomainError(f"log-quotient second derivative is defined for j in {{2,3}}, got j={spec.j}")
    spec.require_strict()
    ctx = mp_context(dps_for(float(t), 20))
    with ctx.guard():
        mp_point = nome_from_time(t, ctx)
        tl = ctx_tol(ctx)

        def bracket(z):
            f0 = theta_deriv(spec.j, z, mp_point, 0, tl, ctx).value
            f2 = theta_deriv(spec.j, z, mp_point, 2, tl, ctx).value
            f4 = theta_deriv(spec.j, z, mp_point, 4, tl, ctx).value
            return (f4 / f0 - (f2 / f0) ** 2) / 16

        return float(bracket(spec.u / 2.0) - bracket(spec.v / 2.0))


def fd_oracle(spec: QuotientSpec, t, k: int, h: float) -> float:
    """Central finite-difference approximation of d^k S / dt^k, error O(h^2).

    Independent of the heat-reduction path: only plain quotient evaluations
    enter.  Runs at elevated precision so the O(h^2) truncation error is the
    only error (the subtraction would otherwise underflow for large t).
    """
    _check_denominator(spec)
    if k not in (1, 2):
        raise DomainError(f"fd_oracle supports k in {{1,2}}, got {k}")
    if not (h > 0):
        raise DomainError(f"step h must be > 0, got {h}")
    if h < 1e-13:
        raise PrecisionExhaustedError(f"step h={h} too small: difference underflow")
    if not (float(t) - k * h > 0):
        raise DomainError(f"need t - k*h > 0, got t={t}, h={h}")
    ctx = mp_context(dps_for(float(t), 40))
    with ctx.guard():
        hh = ctx.num(h)
        tt = ctx.num(t)

        def s_at(tv):
            N, D = _nd_derivs(spec, tv, 0, ctx)
            return N[0] / D[0]

        if k == 1:
            val = (s_at(tt + hh) - s_at(tt - hh)) / (2 * hh)
        else:
            val = (s_at(tt + hh) - 2 * s_at(tt) + s_at(tt - hh)) / (hh * hh)
        return float(val)
