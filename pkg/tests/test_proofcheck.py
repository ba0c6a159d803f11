"""Sign machinery, roots, endpoint limits, and the monotonicity-evidence scan."""

import math

import pytest

from thetakit.elliptic import EdgeId
from thetakit.errors import DomainError, LimitError, VerificationError
from thetakit.proofcheck import (F2, F3, F3_at_half, G2, G3, Qfun, RootData,
                                 Workspace, cm_scan, endpoint_limit, lemma_T,
                                 lemma_U, nu1_check, one_minus_Q, root_data,
                                 sign_scan)
from thetakit.quotients import QuotientSpec
from thetakit.theta import nome_from_time


@pytest.fixture(scope="module")
def ws():
    return Workspace.build(0.5, heavy=True)


@pytest.fixture(scope="module")
def ws_small():
    return Workspace.build(0.05, heavy=True)


@pytest.mark.parametrize("t", [0.05, 0.5, 5.0])
def test_lemmas(t):
    w = Workspace.build(t)
    mp_point = nome_from_time(t, w.ctx_hi)
    direct, factored = lemma_T(w.ed_hi, mp_point, w.ctx_hi)
    assert float(direct) < 0 and float(factored) < 0
    u_direct, u_factored = lemma_U(w.ed_hi, w.ctx_hi)
    assert float(u_direct) > 0 and float(u_factored) > 0


def test_sign_scan_passes_known_claims(ws):
    for function_id, sign in (("F2", "negative"), ("F2_prime", "positive"),
                              ("nu1", "negative"), ("F3", "positive"),
                              ("F3_prime", "negative"), ("G3", "negative"),
                              ("A2_top", "positive")):
        rep = sign_scan(function_id, ws, sign, grid_n=64)
        assert rep.passed, (function_id, rep.violations[:3])
        assert rep.worst_margin > 0


def test_sign_scan_failure_path(ws):
    # the zero function is a negative control: a strict claim must fail
    rep = sign_scan("zero", ws, "positive", grid_n=16)
    assert not rep.passed
    assert rep.status == "fail"
    assert len(rep.violations) == 16
    # and a non-strict claim tolerates the exact zeros
    rep2 = sign_scan("zero", ws, "nonnegative", grid_n=16)
    assert rep2.passed


def test_sign_scan_validation(ws):
    with pytest.raises(DomainError):
        sign_scan("no_such_function", ws, "positive")
    with pytest.raises(DomainError):
        sign_scan("F2", ws, "sideways")
    with pytest.raises(DomainError):
        sign_scan("F2", ws, "negative", grid_n=1)
    with pytest.raises(DomainError):
        sign_scan("F2", ws, "negative", interval=(0.2, 0.2))


@pytest.mark.parametrize("t", [0.05, 0.5, 5.0])
def test_roots_ordering_and_backsubstitution(t):
    w = Workspace.build(t, heavy=True)
    rd = root_data(w)
    assert isinstance(rd, RootData)
    assert 0.0 < rd.a1 < rd.a2 < 0.5
    assert 0.0 < rd.x0 < 0.5
    # wp targets bracket correctly: a-roots sit above e1, x0 inside (e3, e2)
    assert rd.wp_target_a1 > float(w.ed.e1)
    assert rd.wp_target_a2 > float(w.ed.e1)
    # <=: at large t the (e3, e2) gap sinks below double resolution; the
    # strict bracket is enforced internally in mp
    assert float(w.ed.e3) <= rd.wp_target_x0 <= float(w.ed.e2)


def test_g2_sign_split(ws):
    rd = root_data(ws)
    below = sign_scan("G2", ws, "negative", interval=(0.0, rd.a1), delta=1e-3,
                      grid_n=64)
    above = sign_scan("G2", ws, "positive", interval=(rd.a2, 0.5), delta=1e-3,
                      grid_n=64)
    assert below.passed and above.passed


def test_q_exceeds_one_above_a2(ws):
    rd = root_data(ws)
    with ws.ctx.guard():
        for x in (rd.a2 + 0.01, 0.45):
            p = ws.jet(EdgeId.NEAR_HALF, x).p
            q_val = float(Qfun(p, ws.dc))
            assert q_val > 1.0
            # the two rational forms agree: 1 - Q computed directly
            assert float(one_minus_Q(p, ws.dc)) == pytest.approx(1.0 - q_val,
                                                                 rel=1e-9)


def test_nu1_negative_samples(ws):
    with ws.ctx.guard():
        for x in (0.05, 0.2, 0.4):
            assert float(nu1_check(ws.ctx.num(x), ws)) < 0


def test_f3_closed_form_matches_limit(ws):
    closed = float(F3_at_half(ws.ed_hi, ws.ctx_hi))
    assert closed > 0
    est = endpoint_limit("F3", 0.5, ws)
    assert est.value == pytest.approx(closed, rel=1e-6)


def test_endpoint_limits_vanish(ws):
    for function_id, endpoint in (("F2", 0.5), ("G2", 0.0), ("G2", 0.5),
                                  ("G3", 0.0), ("G3", 0.5)):
        est = endpoint_limit(function_id, endpoint, ws)
        assert abs(est.value) < 1e-6
        assert est.error_estimate <= 1e-6


def test_endpoint_limit_rejects_uncertified_pairs(ws):
    with pytest.raises(DomainError):
        endpoint_limit("F2", 0.0, ws)   # F2 diverges at 0
    with pytest.raises(DomainError):
        endpoint_limit("nu1", 0.5, ws)


def test_x0_is_interior_extremum_of_g3(ws):
    rd = root_data(ws)
    h = 1e-4
    with ws.ctx.guard():
        d_lo = float(G3(ws.ctx.num(rd.x0 - 10 * h), ws)) - float(
            G3(ws.ctx.num(rd.x0 - 11 * h), ws))
        d_hi = float(G3(ws.ctx.num(rd.x0 + 11 * h), ws)) - float(
            G3(ws.ctx.num(rd.x0 + 10 * h), ws))
    assert d_lo * d_hi < 0   # slope changes sign across x0


def test_cm_scan_j2_clean_window():
    rep = cm_scan(QuotientSpec(2, 0.2, 0.8), [0.5, 1.0, 2.0], 4)
    assert rep.passed
    assert not rep.skipped
    assert rep.grid_points == 3 * 5


def test_cm_scan_catches_real_violation():
    # S_3(0.1, 0.3) has a negative nome-series coefficient, so alternation
    # genuinely breaks at order 6 near t = 0.36; the scan must report it,
    # not smooth over it
    rep = cm_scan(QuotientSpec(3, 0.1, 0.3), [0.33, 0.36, 0.39], 6)
    assert not rep.passed
    (t_k, val) = rep.violations[0]
    assert t_k[1] == 6
    assert val < 0


def test_cm_scan_validation():
    with pytest.raises(DomainError):
        cm_scan(QuotientSpec(2, 0.2, 0.8), [0.5], 99)
    with pytest.raises(DomainError):
        cm_scan(QuotientSpec(2, 0.3, 0.3), [0.5], 2)


def test_workspace_caches_jets(ws):
    a = ws.jet(EdgeId.NEAR_HALF, 0.25)
    b = ws.jet(EdgeId.NEAR_HALF, 0.25)
    assert a is b


def test_small_t_machinery_still_signs(ws_small):
    # the dual degeneracy e1 - e2 ~ exp(-2/t) makes this the hardest regime
    for function_id, sign in (("F2", "negative"), ("F3", "positive"),
                              ("G3", "negative")):
        rep = sign_scan(function_id, ws_small, sign, grid_n=32)
        assert rep.passed, (function_id, rep.violations[:3])
