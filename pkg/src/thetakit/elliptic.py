"""Weierstrass elliptic data for the lattice (1, i*pi*t) via theta log-derivatives.

Half-period values come from the linear system e1-e3 = pi^2 th3^4,
e1-e2 = pi^2 th4^4, e1+e2+e3 = 0; invariants g2, g3 from the symmetric
functions of the e's; c0 is the weight-2 Eisenstein multiple.  wp itself is
never computed from lattice sums: on the two boundary edges the paper-style
identities give

    wp(x - 1/2)           = c0 - (log th2)''(x)      (NearHalf, values > e1)
    wp(x + (tau - 1)/2)   = c0 - (log th3)''(x)      (TopEdge, values in (e3, e2))

with wp' = -(log th)''' and wp'', wp''' filled from the differential equations
wp'^2 = 4 wp^3 - g2 wp - g3, wp'' = 6 wp^2 - g2/2, wp''' = 12 wp wp'.

Conditioning note: g2 - 12 c0^2, Delta and the A1/A2 coefficient blocks all
vanish like q^2 or q^4 as q -> 0, so EllipticData/DerivedConstants should be
built in an mpmath context at dps_for(t) for large t and exported to floats
(the float views of the blocks are accurate even when they are ~1e-40).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .backend import FLOAT, FloatContext, ctx_tol, dps_for, mp_context
from .errors import DomainError, PoleError, PrecisionExhaustedError, RangeError, VerificationError
from .theta import ModularPoint, ThetaIndex, log_theta_derivs, theta_null

_BISECT_MAX_ITER = 200


class EdgeId(Enum):
    """The two rectangle-boundary edges the proofs use.

    NEAR_HALF: arguments x - 1/2 for x in (0, 1/2); wp increases over (e1, inf),
    evaluated through th2.  TOP_EDGE: arguments x + (tau-1)/2; wp decreases over
    (e3, e2), evaluated through th3.
    """

    NEAR_HALF = "near_half"
    TOP_EDGE = "top_edge"


_EDGE_THETA = {EdgeId.NEAR_HALF: ThetaIndex.TH2, EdgeId.TOP_EDGE: ThetaIndex.TH3}


@dataclass(frozen=True)
class EllipticData:
    """c0, half-period values, invariants, and the cached coefficient blocks.

    The blocks (a1_lin, a1_const, a2_quad, a2_lin, a2_const) are the
    coefficients of the linear form A1 and the quadratic form A2 in the
    wp-value; they are cached at construction precision because each is a
    deep cancellation of O(1) quantities.
    """

    c0: object
    e1: object
    e2: object
    e3: object
    g2: object
    g3: object
    a1_lin: object      # g2/2 - 6 c0^2
    a1_const: object    # g3 + 2 c0^3 + g2 c0 / 2
    a2_quad: object     # g2 - 12 c0^2
    a2_lin: object      # 6 g3 + 4 g2 c0
    a2_const: object    # 6 g3 c0 + g2 c0^2 + g2^2 / 4

    def as_float(self) -> "EllipticData":
        return EllipticData(*(float(getattr(self, f)) for f in (
            "c0", "e1", "e2", "e3", "g2", "g3",
            "a1_lin", "a1_const", "a2_quad", "a2_lin", "a2_const")))


@dataclass(frozen=True)
class DerivedConstants:
    delta: object
    p1: object       # lower quadratic root of A2 (never attained on the real edge)
    p2: object       # upper root; wp(a2 - 1/2) = p2
    r1: object       # (2 g3 + 4 c0^3 + g2 c0) / (g2 - 12 c0^2); A1 root is -r1
    s1: object       # (6 g3 + 4 g2 c0) / (g2 - 12 c0^2)
    s0: object       # (6 g3 c0 + g2 c0^2 + g2^2/4) / (g2 - 12 c0^2)
    cconst: object   # 2 s0 - s1 r1
    mcoef: object    # (g3 + g2 c0 - 4 c0^3) / (g2 - 12 c0^2), negative

    def as_float(self) -> "DerivedConstants":
        return DerivedConstants(*(float(getattr(self, f)) for f in (
            "delta", "p1", "p2", "r1", "s1", "s0", "cconst", "mcoef")))


def eisenstein_c0(mp_point: ModularPoint, tol: float = None, ctx=FLOAT):
    """c0 = -(pi^2/3) (1 - 24 sum n r^n / (1 - r^n)) with r = q^2.

    The Lambert series runs in q^2 (the standard nome squared): with this
    paper's q = exp(i pi tau), the cited weight-2 Eisenstein series argument
    is e^{2 pi i tau} = q^2.  This is forced numerically by the orderings
    e3 < c0 < e2 and the identity e1 - c0 = pi^2 + 8 pi^2 sum q^{2n}/(1+q^{2n})^2.
    """
    if tol is None:
        tol = ctx_tol(ctx)
    with ctx.guard():
        q = ctx.num(mp_point.q)
        r = q * q
        terms = []
        n = 1
        rn = r
        scale = 24 * float(ctx.pi) ** 2 / 3
        while True:
            term = n * rn / (1 - rn)
            terms.append(term)
            if abs(float(term)) * scale < tol and n >= 2:
                break
            n += 1
            rn = rn * r
            if n > 100000:
                raise PrecisionExhaustedError("Eisenstein series did not converge")
            if float(rn) == 0.0:
                break
        s = ctx.fsum(terms)
        return -(ctx.pi**2) / 3 * (1 - 24 * s)


def half_periods_and_invariants(mp_point: ModularPoint, tol: float = None, ctx=FLOAT) -> EllipticData:
    """Solve the theta-null linear system for (e1, e2, e3), then g2, g3, c0."""
    if tol is None:
        tol = ctx_tol(ctx)
    with ctx.guard():
        pi2 = ctx.pi**2
        t3 = theta_null(3, mp_point, tol, ctx).value
        t4 = theta_null(4, mp_point, tol, ctx).value
        e1 = pi2 * (t3**4 + t4**4) / 3
        e2 = e1 - pi2 * t4**4
        e3 = e1 - pi2 * t3**4
        g2 = -4 * (e1 * e2 + e2 * e3 + e3 * e1)
        g3 = 4 * e1 * e2 * e3
        c0 = eisenstein_c0(mp_point, tol, ctx)
        if not (e3 < c0 < e2 < e1):
            raise VerificationError("ordering e3 < c0 < e2 < e1",
                                    f"t={float(mp_point.t)}: e3={e3}, c0={c0}, e2={e2}, e1={e1}")
        return EllipticData(
            c0=c0, e1=e1, e2=e2, e3=e3, g2=g2, g3=g3,
            a1_lin=g2 / 2 - 6 * c0**2,
            a1_const=g3 + 2 * c0**3 + g2 * c0 / 2,
            a2_quad=g2 - 12 * c0**2,
            a2_lin=6 * g3 + 4 * g2 * c0,
            a2_const=6 * g3 * c0 + g2 * c0**2 + g2**2 / 4,
        )


def elliptic_data_for(t, extra_dps: int = 0) -> EllipticData:
    """EllipticData at time t, always built at cancellation-safe precision."""
    from .theta import nome_from_time
    ctx = mp_context(dps_for(t, extra_dps))
    return half_periods_and_invariants(nome_from_time(t, ctx), None, ctx)


def derived_constants(ed: EllipticData, ctx=None) -> DerivedConstants:
    """Delta, P1 < P2, and the repeated rational coefficient blocks.

    Aborts loudly (VerificationError) if Delta <= 0 or g2 - 12 c0^2 <= 0:
    either would falsify the proofs this library certifies.
    """
    if ctx is None:
        ctx = FLOAT if isinstance(ed.g2, float) else mp_context(60)
    with ctx.guard():
        D = ed.a2_quad
        if not (D > 0):
            raise VerificationError("g2 - 12 c0^2 > 0", f"got {D}")
        delta = ed.a2_lin**2 - 4 * D * ed.a2_const
        if not (delta > 0):
            raise VerificationError("Delta > 0", f"got {delta}")
        sq = ctx.sqrt(delta)
        p1 = (-ed.a2_lin - sq) / (2 * D)
        p2 = (-ed.a2_lin + sq) / (2 * D)
        r1 = (2 * ed.g3 + 4 * ed.c0**3 + ed.g2 * ed.c0) / D
        s1 = ed.a2_lin / D
        s0 = ed.a2_const / D
        cconst = 2 * s0 - s1 * r1
        mcoef = (ed.g3 + ed.g2 * ed.c0 - 4 * ed.c0**3) / D
        if not (p1 < ed.e1 < p2):
            raise VerificationError("P1 < e1 < P2", f"P1={p1}, e1={ed.e1}, P2={p2}")
        if not (ed.e1 < -r1):
            raise VerificationError("e1 < -(2g3+4c0^3+g2c0)/(g2-12c0^2)", f"e1={ed.e1}, -r1={-r1}")
        return DerivedConstants(delta=delta, p1=p1, p2=p2, r1=r1, s1=s1, s0=s0,
                                cconst=cconst, mcoef=mcoef)


@dataclass(frozen=True)
class WpJet:
    """(wp, wp', wp'', wp''') at an edge point, plus the cached first
    log-derivative of the edge theta at x (callers of the F/G machinery need
    it and it falls out of the same series evaluation)."""

    p: object
    p1: object
    p2: object
    p3: object
    log1: object


def _edge_log_derivs(edge: EdgeId, x, mp_point: ModularPoint, tol, ctx, m=3):
    return log_theta_derivs(_EDGE_THETA[edge], x, mp_point, m, tol, ctx)


def wp_jet(edge: EdgeId, x, mp_point: ModularPoint, ed: EllipticData,
           tol: float = 1e-12, ctx=FLOAT, delta_edge: float = 1e-3,
           ode_check: bool = True) -> WpJet:
    """Weierstrass jet at the edge point parametrized by x in (0, 1/2).

    Cross-validates against wp'^2 = 4 wp^3 - g2 wp - g3 (residual relative to
    max(1, wp'^2) must stay below 1e-9; a violation signals a series bug).
    """
    xf = float(x)
    if not (0.0 < xf < 0.5):
        raise DomainError(f"edge parameter must lie in (0, 1/2), got {x}")
    if edge == EdgeId.NEAR_HALF and xf > 0.5 - delta_edge:
        raise PoleError(f"x={x} within {delta_edge} of the NearHalf pole at 1/2")
    with ctx.guard():
        l1, l2, l3 = _edge_log_derivs(edge, ctx.num(x), mp_point, tol, ctx)
        p = ed.c0 - l2
        p1 = -l3
        p2 = 6 * p * p - ed.g2 / 2
        p3 = 12 * p * p1
        if ode_check:
            res = p1 * p1 - (4 * p**3 - ed.g2 * p - ed.g3)
            denom = max(1.0, abs(float(p1 * p1)))
            if abs(float(res)) / denom > 1e-9:
                raise VerificationError("wp ODE residual <= 1e-9",
                                        f"edge={edge.value}, x={x}, residual={float(res)}")
        return WpJet(p=p, p1=p1, p2=p2, p3=p3, log1=l1)


def wp_laurent_near_half(s, ed: EllipticData):
    """4-term Laurent expansion of wp at distance s from the NearHalf pole.

    Used only as a cross-check oracle near x = 1/2 (criterion: relative 1e-6
    agreement for s in (1e-3, 1e-2))."""
    g2 = float(ed.g2)
    g3 = float(ed.g3)
    s = float(s)
    return 1.0 / s**2 + g2 * s**2 / 20.0 + g3 * s**4 / 28.0 + g2**2 * s**6 / 1200.0


def invert_wp(edge: EdgeId, target, mp_point: ModularPoint, ed: EllipticData,
              tol: float = 1e-12, ctx=FLOAT):
    """x in (0, 1/2) with wp(edge point of x) = target, by monotone bisection.

    NearHalf is strictly increasing (e1 -> inf), TopEdge strictly decreasing
    (e2 -> e3); the bracket is guaranteed, ties break toward the lower
    endpoint, and the iteration caps at 200 splits.
    """
    with ctx.guard():
        target = ctx.num(target)
        if edge == EdgeId.NEAR_HALF:
            if not (target > ed.e1):
                raise RangeError(f"NearHalf wp values exceed e1={float(ed.e1)}; target {float(target)} unreachable")
        else:
            if not (ed.e3 < target < ed.e2):
                raise RangeError(f"TopEdge wp values lie in (e3, e2)="
                                 f"({float(ed.e3)}, {float(ed.e2)}); target {float(target)} unreachable")
        lo = ctx.num(1e-9)
        hi = ctx.num(0.5 - 1e-9)
        increasing = edge == EdgeId.NEAR_HALF

        def p_of(x):
            return ed.c0 - _edge_log_derivs(edge, x, mp_point, tol, ctx, m=2)[1]

        for _ in range(_BISECT_MAX_ITER):
            mid = (lo + hi) / 2
            below = p_of(mid) < target
            if below == increasing:
                lo = mid
            else:
                hi = mid
            if float(hi - lo) <= tol * max(1.0, abs(float(lo))):
                break
        return lo
