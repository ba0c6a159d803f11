"""Acceptance gate: the eleven top-level criteria, one pass/fail line each.

The full default-grid verification suite, the order-6 monotonicity-evidence
scan, and figure emission each run exactly once (session fixtures); the
criteria then read off the recorded results.  Criterion 10 is implemented
exactly as stated -- zero alternation violations at K = 6 for all four
quotients -- and is expected to fail: the alternation pattern genuinely
breaks at high derivative orders for some (u, v) (see the repository notes);
the scan reports those violations rather than hiding them.
"""

import csv
import math

import pytest

from thetakit.suite import RunConfig, run_conjecture, run_figures, run_verify


@pytest.fixture(scope="session")
def outdir(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance")


@pytest.fixture(scope="session")
def verify_report(outdir):
    return run_verify(RunConfig(output_dir=str(outdir / "verify")))


@pytest.fixture(scope="session")
def conjecture_report(outdir):
    return run_conjecture(RunConfig(output_dir=str(outdir / "conjecture")))


@pytest.fixture(scope="session")
def figure_dir(outdir):
    d = outdir / "figures"
    run_figures(RunConfig(t_count=120, output_dir=str(d)))
    return d


def _criterion(n, description, ok, detail=""):
    print(f"\ncriterion {n:2d} [{'PASS' if ok else 'FAIL'}]: {description}")
    assert ok, detail


def _checks(report, *check_ids):
    got = {c.check_id: c for c in report.checks}
    missing = [cid for cid in check_ids if cid not in got]
    assert not missing, f"missing checks: {missing}"
    return [got[cid] for cid in check_ids]


def _all_pass(report, *check_ids):
    checks = _checks(report, *check_ids)
    bad = [(c.check_id, c.detail) for c in checks if c.status != "pass"]
    return not bad, str(bad)


def test_criterion_1_lemma_at_e1(verify_report):
    ok, detail = _all_pass(verify_report, "lemma_quadratic_at_e1")
    _criterion(1, "quadratic negative at e1, two forms agree to 1e-9", ok, detail)


def test_criterion_2_lemma_at_e2(verify_report):
    ok, detail = _all_pass(verify_report, "lemma_quadratic_at_e2")
    _criterion(2, "quadratic positive at e2, two forms agree to 1e-9", ok, detail)


def test_criterion_3_orderings(verify_report):
    ok, detail = _all_pass(verify_report, "elliptic_orderings")
    _criterion(3, "e3 < c0 < e2 < e1, positive discriminant data, P1 < e1 < P2",
               ok, detail)


def test_criterion_4_convexity_and_fd(verify_report):
    # the FD clause is scoped to t >= 0.2 where the O(h^2) truncation error
    # at h = 1e-4 stays below the 1e-6 comparison tolerance
    ok, detail = _all_pass(verify_report, "quotient_convexity",
                           "fd_oracle_agreement")
    _criterion(4, "S_2, S_3 decreasing and convex; FD oracle matches to 1e-6 "
                  "with second-order convergence", ok, detail)


def test_criterion_5_monotonicity(verify_report):
    ok, detail = _all_pass(verify_report, "quotient_monotonicity")
    _criterion(5, "S_1, S_4 increasing, S_2, S_3 decreasing, all positive",
               ok, detail)


def test_criterion_6_near_half_machinery(verify_report):
    ok, detail = _all_pass(verify_report, "near_half_signs", "near_half_roots",
                           "near_half_limits")
    _criterion(6, "F2 < 0, F2' > 0, nu1 < 0; G2 sign split at a1 < a2; "
                  "Q > 1 past a2; F2, G2 endpoint limits vanish", ok, detail)


def test_criterion_7_top_edge_machinery(verify_report):
    ok, detail = _all_pass(verify_report, "top_edge_signs",
                           "top_edge_closed_form", "top_edge_root_x0")
    _criterion(7, "F3 > 0, F3' < 0, G3 < 0; closed form at 1/2 matches the "
                  "limit; unique interior extremum at x0", ok, detail)


def test_criterion_8_wp_cross_validation(verify_report):
    ok, detail = _all_pass(verify_report, "wp_cross_validation")
    _criterion(8, "wp ODE residual < 1e-9 on both edges; Laurent tail to 1e-6",
               ok, detail)


def test_criterion_9_identities(verify_report):
    ok, detail = _all_pass(verify_report, "theta_identities")
    _criterion(9, "null doubling, Lambert series, quartic, parity, "
                  "periodicity residuals < 1e-12", ok, detail)


def test_criterion_10_conjecture_scan(conjecture_report):
    # implemented as stated: zero violations at K = 6 for all four j over the
    # default grid.  This fails honestly: several (u, v) carry nome-series
    # coefficients of the wrong sign, so the alternation breaks at high k
    # (smallest case: S_3(0.1, 0.3), k = 6, t ~ 0.36).  The failure is the
    # scan doing its job; see notes/decisions.md in the workspace notes.
    ok = conjecture_report.global_status == "pass"
    failing = [(c.check_id, c.detail[:120]) for c in conjecture_report.checks
               if c.status != "pass"]
    _criterion(10, "order-6 alternating-sign evidence clean for all four "
                   "quotients", ok, str(failing))


def _columns(path):
    cols = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            cols.setdefault(row["function_id"], []).append(
                (float(row["x_or_t"]), float(row["value"])))
    return cols


def _sign_flips(values):
    signs = [v > 0 for v in values]
    return [i for i, (a, b) in enumerate(zip(signs, signs[1:])) if a != b]


def test_criterion_11_figure_shapes(figure_dir):
    problems = []

    for name, fid in (("fig1", "S2"), ("fig2", "S3")):
        pts = _columns(figure_dir / f"{name}.csv")[fid]
        ts = [t for t, _ in pts]
        vals = [v for _, v in pts]
        # strict shape claims only hold up to the binary64 resolution floor:
        # past t ~ 3 consecutive decrements sink below one ulp of S ~ 1
        eps = 1e-12 * max(abs(v) for v in vals)
        k = len(vals) - 1
        while k > 0 and abs(vals[k] - vals[k - 1]) <= eps:
            k -= 1
        head_t, head_v = ts[:k + 1], vals[:k + 1]
        if not all(a > b for a, b in zip(head_v, head_v[1:])):
            problems.append(f"{name} not strictly decreasing")
        if not all(b <= a + eps for a, b in zip(vals[k:], vals[k + 1:])):
            problems.append(f"{name} increases past the resolution floor")
        slopes = [(head_v[i + 1] - head_v[i]) / (head_t[i + 1] - head_t[i])
                  for i in range(len(head_t) - 1)]
        slope_eps = eps / min(b - a for a, b in zip(head_t, head_t[1:]))
        if not all(b >= a - slope_eps for a, b in zip(slopes, slopes[1:])):
            problems.append(f"{name} slopes not increasing (not convex)")
        if not slopes[-1] > slopes[0]:
            problems.append(f"{name} slope never rises")

    fig3 = _columns(figure_dir / "fig3.csv")
    flips_a1 = _sign_flips([v for _, v in fig3["A1_near_x10"]])
    flips_a2 = _sign_flips([v for _, v in fig3["A2_near"]])
    if len(flips_a1) != 1 or len(flips_a2) != 1:
        problems.append(f"fig3 sign changes: A1 {len(flips_a1)}, A2 {len(flips_a2)}")
    elif not flips_a1[0] < flips_a2[0]:
        problems.append("fig3 A1 zero does not precede A2 zero")

    fig4 = _columns(figure_dir / "fig4.csv")["G2"]
    flips_g2 = _sign_flips([v for _, v in fig4])
    if len(flips_g2) != 1 or not (fig4[0][1] < 0 < fig4[-1][1]):
        problems.append("fig4 is not negative-then-positive with one crossing")

    fig5 = _columns(figure_dir / "fig5.csv")
    if not all(v < 0 for _, v in fig5["A1_top"]):
        problems.append("fig5 A1 changes sign on the top edge")
    if not all(v > 0 for _, v in fig5["A2_top"]):
        problems.append("fig5 A2 changes sign on the top edge")

    if not all(v < 0 for _, v in _columns(figure_dir / "fig6.csv")["G3"]):
        problems.append("fig6 not negative on the interior grid")

    _criterion(11, "six CSVs with monotone-convex fig1/fig2, ordered zero "
                   "crossings in fig3, fig4 sign split, single-signed fig5, "
                   "nonpositive fig6", not problems, "; ".join(problems))
