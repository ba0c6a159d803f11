"""Numerical certification of the convexity-proof machinery.

Everything here evaluates the named functions of the two case analyses
(F2/G2/Q on the NearHalf edge, F3/G3 on the TopEdge) plus the two quadratic
lemmas, the interior roots a1 < a2 and x0, endpoint limits by Richardson
extrapolation, sign scans over grids, and the complete-monotonicity evidence
scan.  A Workspace bundles (ModularPoint, EllipticData, DerivedConstants,
context) at one t; formulas are context-polymorphic, so the same code runs in
floats for moderate t and in mpmath where q^2-suppressed margins would drown
in double rounding.

Strict-sign scans use no tolerance floor: the scanned quantities are bounded
away from zero on the interior, and strictness is the content of the claims.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .backend import FLOAT, FloatContext, context_for, ctx_tol, dps_for, mp_context
from .elliptic import (DerivedConstants, EdgeId, EllipticData, derived_constants,
                       elliptic_data_for, wp_jet)
from .errors import DomainError, LimitError, PrecisionExhaustedError, VerificationError
from .quotients import K_MAX, QuotientSpec, S_t_derivs
from .theta import ModularPoint, nome_from_time, theta_null

DEFAULT_DELTA = 1e-3
DEFAULT_GRID = 512
A2_ROOT_BAND = 1e-4      # exclusion band around a2 for the G2 quotient identity
CM_ZERO_BAND = 1e-14     # non-strict inequalities tolerate exact-zero rounding


@dataclass
class Workspace:
    """All fixed-t data needed by the scan functions, in one context."""

    t: float
    mp_point: ModularPoint
    ed: EllipticData
    dc: DerivedConstants
    ctx: object
    tol: float
    # cancellation-safe copies: e1 - e2 ~ pi^2 th4^4 underflows float accuracy
    # at small t, so identity-level certifications use these
    ed_hi: EllipticData = None
    ctx_hi: object = None
    _jet_cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, t: float, heavy: bool = False) -> "Workspace":
        ctx = context_for(t, heavy)
        ctx_hi = mp_context(dps_for(t))
        ed_hi = elliptic_data_for(t)
        dc_hi = derived_constants(ed_hi, ctx_hi)
        if isinstance(ctx, FloatContext):
            ed, dc = ed_hi.as_float(), dc_hi.as_float()
        else:
            ed, dc = ed_hi, dc_hi
        return cls(t=float(t), mp_point=nome_from_time(t, ctx), ed=ed, dc=dc,
                   ctx=ctx, tol=ctx_tol(ctx), ed_hi=ed_hi, ctx_hi=ctx_hi)

    def jet(self, edge: EdgeId, x, delta_edge: float = 1e-5):
        # the scan functions share jets at the same grid point
        key = (edge, float(x), delta_edge)
        hit = self._jet_cache.get(key)
        if hit is None:
            hit = wp_jet(edge, x, self.mp_point, self.ed, self.tol, self.ctx,
                         delta_edge=delta_edge)
            self._jet_cache[key] = hit
        return hit


# ---------------------------------------------------------------------------
# the two quadratic forms in the wp-value

def A1(p, ed: EllipticData):
    """Linear form p (g2/2 - 6 c0^2) + g3 + 2 c0^3 + g2 c0 / 2; root at p = -r1."""
    return p * ed.a1_lin + ed.a1_const


def A2(p, ed: EllipticData):
    """Quadratic form p^2 (g2-12c0^2) + p (6g3+4g2c0) + (6g3c0+g2c0^2+g2^2/4)."""
    return (p * ed.a2_quad + ed.a2_lin) * p + ed.a2_const


def lemma_T(ed: EllipticData, mp_point: ModularPoint, ctx, tol=None):
    """A2 at e1, directly and in the factorized product form; both negative.

    factorized = -4 (e1-e2)(e1-e3)(c0-e1-pi^2 th3^2 th4^2)(c0-e1+pi^2 th3^2 th4^2).
    The two independent formulas are mutual oracles (relative agreement 1e-9).
    """
    if tol is None:
        tol = ctx_tol(ctx)
    with ctx.guard():
        direct = A2(ed.e1, ed)
        t3 = theta_null(3, mp_point, tol, ctx).value
        t4 = theta_null(4, mp_point, tol, ctx).value
        cross = ctx.pi**2 * t3**2 * t4**2
        factorized = -4 * (ed.e1 - ed.e2) * (ed.e1 - ed.e3) \
            * (ed.c0 - ed.e1 - cross) * (ed.c0 - ed.e1 + cross)
        if not (direct < 0 and factorized < 0):
            raise VerificationError("A2(e1) < 0", f"direct={direct}, factorized={factorized}")
        if abs(float((direct - factorized) / direct)) > 1e-9:
            raise VerificationError("A2(e1) direct/factorized agreement 1e-9",
                                    f"direct={direct}, factorized={factorized}")
        return direct, factorized


def lemma_U(ed: EllipticData, ctx):
    """A2 at e2, directly and as 4 (e1-e2)(e2-e3)((c0-e2)^2+(e1-e2)(e2-e3)); both positive."""
    with ctx.guard():
        direct = A2(ed.e2, ed)
        factorized = 4 * (ed.e1 - ed.e2) * (ed.e2 - ed.e3) \
            * ((ed.c0 - ed.e2) ** 2 + (ed.e1 - ed.e2) * (ed.e2 - ed.e3))
        if not (direct > 0 and factorized > 0):
            raise VerificationError("A2(e2) > 0", f"direct={direct}, factorized={factorized}")
        if abs(float((direct - factorized) / direct)) > 1e-9:
            raise VerificationError("A2(e2) direct/factorized agreement 1e-9",
                                    f"direct={direct}, factorized={factorized}")
        return direct, factorized


# ---------------------------------------------------------------------------
# the F/G machinery (NearHalf: theta2; TopEdge: theta3)

def _F(ws: Workspace, edge: EdgeId, x):
    j = ws.jet(edge, x)
    c0 = ws.ed.c0
    return (8 * j.log1 * (j.p - c0) ** 2 / j.p1
            - 4 * j.log1**2
            + 8 * (j.p - c0)
            - 4 * j.log1 * j.p2 / j.p1
            - 12 * j.p)           # wp'''/wp' = 12 wp exactly


def _F_prime(ws: Workspace, edge: EdgeId, x):
    j = ws.jet(edge, x)
    return 4 * (j.log1 * A2(j.p, ws.ed) / j.p1**2 + A1(j.p, ws.ed) / j.p1)


def _G(ws: Workspace, edge: EdgeId, x):
    j = ws.jet(edge, x)
    dc = ws.dc
    return j.log1 + j.p1 * (j.p + dc.r1) / (2 * ((j.p + dc.s1) * j.p + dc.s0))


def F2(x, ws: Workspace):
    """Scaled derivative of the fourth-order log ratio on NearHalf; negative on (0, 1/2)."""
    return _F(ws, EdgeId.NEAR_HALF, x)


def F2_prime(x, ws: Workspace):
    """4 (l1 A2/wp'^2 + A1/wp') on NearHalf; positive on (0, 1/2)."""
    return _F_prime(ws, EdgeId.NEAR_HALF, x)


def G2(x, ws: Workspace):
    """F2' wp'^2 / (4 A2) in closed form; negative below a1, positive above a2."""
    return _G(ws, EdgeId.NEAR_HALF, x)


def F3(x, ws: Workspace):
    """TopEdge analogue of F2; positive on (0, 1/2)."""
    return _F(ws, EdgeId.TOP_EDGE, x)


def F3_prime(x, ws: Workspace):
    """TopEdge analogue of F2'; negative on (0, 1/2)."""
    return _F_prime(ws, EdgeId.TOP_EDGE, x)


def G3(x, ws: Workspace):
    """TopEdge analogue of G2; negative on (0, 1/2), zero limits at both ends."""
    return _G(ws, EdgeId.TOP_EDGE, x)


def Qfun(p, dc: DerivedConstants):
    """(p + r1)(2p + s1) / (2 (p^2 + s1 p + s0)); exceeds 1 above a2 on NearHalf."""
    den = 2 * ((p + dc.s1) * p + dc.s0)
    if float(den) == 0.0:
        raise DomainError(f"Q undefined: quadratic denominator vanishes at p={p}")
    return (p + dc.r1) * (2 * p + dc.s1) / den


def one_minus_Q(p, dc: DerivedConstants):
    """Rewritten numerator form (2 p mcoef + cconst) / (2 (p^2+s1 p+s0)).

    Algebraically identical to 1 - Qfun(p); kept as the mutual oracle."""
    den = 2 * ((p + dc.s1) * p + dc.s0)
    return (2 * p * dc.mcoef + dc.cconst) / den


def nu1_check(x, ws: Workspace):
    """2 th2'/th2 + wp'(x-1/2)/(wp(x-1/2) - c0); negative on (0, 1/2)."""
    j = ws.jet(EdgeId.NEAR_HALF, x)
    return 2 * j.log1 + j.p1 / (j.p - ws.ed.c0)


def F3_at_half(ed: EllipticData, ctx=FLOAT):
    """Closed form 16 (e3-c0)^3 / (g2 - 12 e3^2) - 12 c0; positive.

    The denominator equals 4 (e3-e1)(e2-e3) < 0 (checked); it vanishes like
    q^2 at either end of the t range, so pass the cancellation-safe data
    (Workspace.ed_hi with ctx_hi), not the float export."""
    with ctx.guard():
        den = ed.g2 - 12 * ed.e3**2
        alt = 4 * (ed.e3 - ed.e1) * (ed.e2 - ed.e3)
        if abs(float((den - alt) / den)) > 1e-12:
            raise VerificationError("g2 - 12 e3^2 = 4 (e3-e1)(e2-e3)", f"lhs={den}, rhs={alt}")
        val = 16 * (ed.e3 - ed.c0) ** 3 / den - 12 * ed.c0
        if not (val > 0):
            raise VerificationError("F3(1/2) > 0", f"got {val}")
        return val


# ---------------------------------------------------------------------------
# roots

@dataclass(frozen=True)
class RootData:
    a1: float
    a2: float
    x0: float
    wp_target_a1: float
    wp_target_a2: float
    wp_target_x0: float


def roots_a1_a2(ws: Workspace, tol: float = 1e-11):
    """Interior roots of A1 and A2 on NearHalf: a1 = wp^{-1}(-r1), a2 = wp^{-1}(P2).

    Verifies 0 < a1 < a2 < 1/2 and back-substitution residuals."""
    from .elliptic import invert_wp
    with ws.ctx.guard():
        t_a1 = -ws.dc.r1
        t_a2 = ws.dc.p2
        a1x = invert_wp(EdgeId.NEAR_HALF, t_a1, ws.mp_point, ws.ed, tol, ws.ctx)
        a2x = invert_wp(EdgeId.NEAR_HALF, t_a2, ws.mp_point, ws.ed, tol, ws.ctx)
        if not (0.0 < float(a1x) < float(a2x) < 0.5):
            raise VerificationError("0 < a1 < a2 < 1/2", f"a1={float(a1x)}, a2={float(a2x)}")
        # residual scales: coefficient magnitude at the root's wp-value
        p_a1 = ws.jet(EdgeId.NEAR_HALF, a1x).p
        p_a2 = ws.jet(EdgeId.NEAR_HALF, a2x).p
        scale1 = abs(float(ws.ed.a1_lin * p_a1)) + abs(float(ws.ed.a1_const))
        scale2 = (abs(float(ws.ed.a2_quad * p_a2**2)) + abs(float(ws.ed.a2_lin * p_a2))
                  + abs(float(ws.ed.a2_const)))
        if abs(float(A1(p_a1, ws.ed))) > 1e-8 * scale1:
            raise VerificationError("A1(wp(a1-1/2)) ~ 0", f"residual={float(A1(p_a1, ws.ed))}")
        if abs(float(A2(p_a2, ws.ed))) > 1e-8 * scale2:
            raise VerificationError("A2(wp(a2-1/2)) ~ 0", f"residual={float(A2(p_a2, ws.ed))}")
        return float(a1x), float(a2x), float(t_a1), float(t_a2)


def root_x0(ws: Workspace, tol: float = 1e-11):
    """The unique interior zero of G3' via the linear numerator: wp-value -C/(2 mcoef)."""
    from .elliptic import invert_wp
    with ws.ctx.guard():
        if not (ws.dc.mcoef < 0):
            raise VerificationError("(g3+g2c0-4c0^3)/(g2-12c0^2) < 0", f"got {ws.dc.mcoef}")
        target = -ws.dc.cconst / (2 * ws.dc.mcoef)
        if not (ws.ed.e3 < target < ws.ed.e2):
            raise VerificationError("G3' zero inside (0, 1/2)",
                                    f"wp-target {float(target)} outside (e3, e2)")
        x0 = invert_wp(EdgeId.TOP_EDGE, target, ws.mp_point, ws.ed, tol, ws.ctx)
        return float(x0), float(target)


def root_data(ws: Workspace, tol: float = 1e-11) -> RootData:
    a1x, a2x, t1, t2 = roots_a1_a2(ws, tol)
    x0, t0 = root_x0(ws, tol)
    return RootData(a1=a1x, a2=a2x, x0=x0,
                    wp_target_a1=t1, wp_target_a2=t2, wp_target_x0=t0)


# ---------------------------------------------------------------------------
# scans

#: named scan functions: id -> (callable(x, ws), claimed sign on the interior)
SCAN_FUNCTIONS = {
    "F2": (F2, "negative"),
    "F2_prime": (F2_prime, "positive"),
    "G2": (G2, None),              # sign depends on the sub-interval
    "F3": (F3, "positive"),
    "F3_prime": (F3_prime, "negative"),
    "G3": (G3, "negative"),
    "nu1": (nu1_check, "negative"),
    "Q_near": (lambda x, ws: Qfun(ws.jet(EdgeId.NEAR_HALF, x).p, ws.dc), None),
    "Q_minus_1_near": (lambda x, ws: Qfun(ws.jet(EdgeId.NEAR_HALF, x).p, ws.dc) - 1, None),
    "A1_near": (lambda x, ws: A1(ws.jet(EdgeId.NEAR_HALF, x).p, ws.ed), None),
    "A2_near": (lambda x, ws: A2(ws.jet(EdgeId.NEAR_HALF, x).p, ws.ed), None),
    "A1_top": (lambda x, ws: A1(ws.jet(EdgeId.TOP_EDGE, x).p, ws.ed), None),
    "A2_top": (lambda x, ws: A2(ws.jet(EdgeId.TOP_EDGE, x).p, ws.ed), "positive"),
    "zero": (lambda x, ws: 0.0 * x, None),   # negative control for the scanner
}

_SIGN = {"positive": 1.0, "negative": -1.0, "nonnegative": 1.0, "nonpositive": -1.0}
_STRICT = {"positive", "negative"}


@dataclass
class SignScanReport:
    function_id: str
    claimed_sign: str
    interval: tuple
    grid_points: int
    worst_margin: float
    violations: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "pass" if not self.violations else "fail"

    @property
    def passed(self) -> bool:
        return not self.violations


def sign_scan(function_id: str, ws: Workspace, claimed_sign: str,
              interval=(0.0, 0.5), grid_n: int = DEFAULT_GRID,
              delta: float = DEFAULT_DELTA) -> SignScanReport:
    """Evaluate a named function on a uniform interior grid and check its sign.

    Strict claims require sign*value > 0 at every point, with no tolerance
    floor; non-strict claims allow a 1e-14-scale zero band.
    """
    if function_id not in SCAN_FUNCTIONS:
        raise DomainError(f"unknown function_id {function_id!r}; "
                          f"known: {sorted(SCAN_FUNCTIONS)}")
    if claimed_sign not in _SIGN:
        raise DomainError(f"unknown claimed sign {claimed_sign!r}")
    if grid_n < 2:
        raise DomainError("grid_n must be >= 2")
    fn, _ = SCAN_FUNCTIONS[function_id]
    lo, hi = float(interval[0]) + delta, float(interval[1]) - delta
    if not (lo < hi):
        raise DomainError(f"empty scan interval after margin: [{lo}, {hi}]")
    sgn = _SIGN[claimed_sign]
    strict = claimed_sign in _STRICT
    worst = math.inf
    violations = []
    with ws.ctx.guard():
        for i in range(grid_n):
            x = lo + (hi - lo) * i / (grid_n - 1)
            val = float(fn(ws.ctx.num(x), ws))
            margin = sgn * val
            worst = min(worst, margin)
            ok = margin > 0.0 if strict else margin >= -CM_ZERO_BAND * max(1.0, abs(val))
            if not ok:
                violations.append((x, val))
    return SignScanReport(function_id=function_id, claimed_sign=claimed_sign,
                          interval=(lo, hi), grid_points=grid_n,
                          worst_margin=worst, violations=violations)


def cm_scan(spec: QuotientSpec, t_grid, K: int) -> SignScanReport:
    """Complete-monotonicity evidence scan (numerical evidence, not a proof).

    For j in {2,3}: (-1)^k d^k S/dt^k >= 0 for k = 0..K.
    For j in {1,4}: the same alternation applied to dS/dt, i.e. the signs of
    d^{k+1} S/dt^{k+1} for k = 0..K.
    """
    spec.require_strict()
    if K < 0 or K > K_MAX:
        raise DomainError(f"K must be in 0..{K_MAX}, got {K}")
    shifted = spec.j in (1, 4)
    order = K + 1 if shifted else K
    worst = math.inf
    violations = []
    skipped = []
    for t in t_grid:
        try:
            ds = S_t_derivs(spec, t, order)
        except PrecisionExhaustedError as exc:
            # per-point precision exhaustion is recorded, not a scan failure
            skipped.append((float(t), str(exc)))
            continue
        scale = max(1.0, abs(ds.values[0]))
        for k in range(K + 1):
            val = ds.values[k + 1] if shifted else ds.values[k]
            margin = (-1.0) ** k * val
            worst = min(worst, margin)
            if margin < -CM_ZERO_BAND * scale:
                violations.append(((float(t), k), val))
    return SignScanReport(function_id=f"cm_S{spec.j}", claimed_sign="nonnegative",
                          interval=(float(min(t_grid)), float(max(t_grid))),
                          grid_points=len(t_grid) * (K + 1),
                          worst_margin=worst, violations=violations, skipped=skipped)


# ---------------------------------------------------------------------------
# endpoint limits

_LIMIT_OK = {
    ("F2", 0.5), ("F3", 0.5),
    ("G2", 0.0), ("G2", 0.5),
    ("G3", 0.0), ("G3", 0.5),
}

RICHARDSON_LEVELS = 8
RICHARDSON_START = 1e-2


@dataclass(frozen=True)
class LimitEstimate:
    value: float
    error_estimate: float


def endpoint_limit(function_id: str, endpoint: float, ws: Workspace,
                   tol: float = 1e-6) -> LimitEstimate:
    """Richardson (Neville) extrapolation of a scan function to an endpoint.

    Approach distances halve from 1e-2 over six levels; the error estimate is
    the difference of the last two extrapolants.  Non-convergence raises."""
    if (function_id, float(endpoint)) not in _LIMIT_OK:
        raise DomainError(f"{function_id} has no certified finite limit at {endpoint}")
    fn, _ = SCAN_FUNCTIONS[function_id]
    sign = 1.0 if endpoint == 0.0 else -1.0
    with ws.ctx.guard():
        ds = [RICHARDSON_START * 0.5**k for k in range(RICHARDSON_LEVELS)]
        vals = [fn(ws.ctx.num(endpoint + sign * d), ws) for d in ds]
        tbl = [list(vals)]
        for lev in range(1, RICHARDSON_LEVELS):
            row = []
            for i in range(RICHARDSON_LEVELS - lev):
                num = ds[i] * tbl[lev - 1][i + 1] - ds[i + lev] * tbl[lev - 1][i]
                row.append(num / (ds[i] - ds[i + lev]))
            tbl.append(row)
        best = float(tbl[-1][0])
        prev = float(tbl[-2][0])
    err = abs(best - prev)
    if not (err <= tol) or not math.isfinite(best):
        raise LimitError(f"{function_id} at {endpoint}: extrapolation error {err:.3e} > tol {tol}")
    return LimitEstimate(value=best, error_estimate=err)
