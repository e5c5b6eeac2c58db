"""Acceptance gate: every criterion at its stated tolerance.

Each criterion prints one PASS/FAIL line.  The suites feeding most criteria
run once per module (seeded, default envelopes, 50 digits) through fixtures.
"""

import json
import random
import subprocess
import sys

import pytest
from mpmath import mp

from pwzeros.numerics import PrecisionCtx
from pwzeros.pwspace import ZeroConfig, kernel_complete_gram
from pwzeros.verify import (Envelope, reproducing_integral,
                            reproducing_t_multiplier, run_suite)

CTX = PrecisionCtx(digits=50)


def _line(num, desc, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    print("ACCEPTANCE %02d [%s]: %s %s" % (num, desc, tag, detail))
    return ok


def _subset(report, prefixes):
    return [c for c in report.checks
            if any(c.identity.startswith(p) for p in prefixes)]


def _worst(checks):
    worst = mp.mpf(0)
    for c in checks:
        if c.rel_residual > worst:
            worst = c.rel_residual
    return worst


@pytest.fixture(scope="module")
def detid_report():
    with mp.workdps(60):
        return run_suite("detid", CTX, Envelope(), random.Random(7))


@pytest.fixture(scope="module")
def pwspace_report():
    with mp.workdps(60):
        return run_suite("pwspace", CTX, Envelope(), random.Random(7))


@pytest.fixture(scope="module")
def krein_report():
    with mp.workdps(60):
        return run_suite("krein", CTX, Envelope(), random.Random(7))


@pytest.fixture(scope="module")
def painleve_report():
    with mp.workdps(60):
        return run_suite("painleve", CTX, Envelope(), random.Random(7))


def test_criterion_01_okada_identity(detid_report):
    checks = [c for c in detid_report.checks if c.identity == "okada"]
    ok = len(checks) == 200 and all(c.passed for c in checks) \
        and _worst(checks) <= mp.mpf("1e-40")
    assert _line(1, "interleaved block determinant identity", ok,
                 "200 instances, worst rel %s" % mp.nstr(_worst(checks), 3))


def test_criterion_02_shch_gram_identity(detid_report):
    checks = [c for c in detid_report.checks if c.identity == "shch_gram"]
    ok = len(checks) == 5 and all(c.passed for c in checks) \
        and _worst(checks) <= mp.mpf("1e-40")
    assert _line(2, "sh/ch Gram-Wronskian identity", ok,
                 "n = 1..5, worst rel %s" % mp.nstr(_worst(checks), 3))


def test_criterion_03_kernel_route_agreement(pwspace_report):
    checks = _subset(pwspace_report, ("kernel_gram_vs_EF", "kernel_gram_vs_AB"))
    pairs = len(checks) // 2
    ok = pairs >= 50 and all(c.passed for c in checks) \
        and _worst(checks) <= mp.mpf("1e-8")
    assert _line(3, "three kernel routes agree", ok,
                 "%d pairs, worst rel %s" % (pairs, mp.nstr(_worst(checks), 3)))


def test_criterion_04_reproducing_quadrature_as_stated():
    # literal criterion: truncation at T = 200/x must reproduce the kernel to
    # 1e-4 relative.  The truncated inner product's tail is
    # (E(z)conj(E(w)) + F(z)conj(F(w))) |gamma(z)gamma(w)| / (pi T), about
    # 4e-3 .. 7e-3 at T = 200/x here, so the stated pairing of T and
    # tolerance is unattainable; see the decisions ledger.  The property
    # itself holds: with T chosen from the tail estimate the same integral
    # meets 1e-4 (see test_reproducing_property_holds_at_consistent_T).
    worst = mp.mpf(0)
    details = []
    for n in (1, 2):
        cfg = ZeroConfig.from_progression(mp.mpf(1) / 2, n, a="0.4", ctx=CTX)
        z, w = mp.mpf("0.3"), mp.mpf("0.7")
        val = reproducing_integral(cfg, z, w, CTX, mult=200)
        target = kernel_complete_gram(cfg, w, z, CTX).value
        rel = abs(val - target) / abs(target)
        worst = max(worst, rel)
        details.append("n=%d rel=%s" % (n, mp.nstr(rel, 3)))
    ok = worst <= mp.mpf("1e-4")
    assert _line(4, "reproducing property at T = 200/x", ok,
                 "; ".join(details))


def test_reproducing_property_holds_at_consistent_T():
    # supplementary (not an acceptance criterion): the identical integral
    # meets the 1e-4 tolerance once T matches the analytic tail estimate
    for n in (1, 2):
        cfg = ZeroConfig.from_progression(mp.mpf(1) / 2, n, a="0.4", ctx=CTX)
        z, w = mp.mpf("0.3"), mp.mpf("0.7")
        mult = reproducing_t_multiplier(cfg, z, w, CTX, mp.mpf("5e-5"))
        val = reproducing_integral(cfg, z, w, CTX, mult)
        target = kernel_complete_gram(cfg, w, z, CTX).value
        rel = abs(val - target) / abs(target)
        assert rel <= mp.mpf("1e-4"), (n, mult, mp.nstr(rel, 5))


def test_criterion_05_mu_representation_agreement(krein_report):
    mu_checks = _subset(krein_report, ("mu_",))
    closed = [c for c in mu_checks if c.identity == "mu_closed_form_n1"]
    ok = all(c.passed for c in mu_checks) and len(closed) >= 4
    assert _line(5, "mu representations agree pairwise", ok,
                 "%d comparisons, worst rel %s"
                 % (len(mu_checks), mp.nstr(_worst(mu_checks), 3)))


def test_criterion_06_krein_system_and_coefficient_odes(krein_report):
    checks = _subset(krein_report, ("krein_system", "coefficient_odes"))
    ok = bool(checks) and all(c.passed for c in checks) \
        and _worst(checks) <= mp.mpf("1e-6")
    assert _line(6, "Krein system and coefficient ODE residuals", ok,
                 "worst rel %s" % mp.nstr(_worst(checks), 3))


def test_criterion_07_tau_consistency(krein_report):
    checks = _subset(krein_report, ("tau_consistency",))
    ok = bool(checks) and all(c.passed for c in checks) \
        and _worst(checks) <= mp.mpf("1e-6")
    assert _line(7, "tau-function consistency", ok,
                 "worst rel %s" % mp.nstr(_worst(checks), 3))


def test_criterion_08_crum_equivalence(krein_report):
    crum = _subset(krein_report, ("crum_", "AB_vs_crum"))
    schrod = _subset(krein_report, ("schrodinger",))
    ok = bool(crum) and all(c.passed for c in crum) \
        and _worst(crum) <= mp.mpf("1e-8") \
        and bool(schrod) and all(c.passed for c in schrod) \
        and _worst(schrod) <= mp.mpf("1e-6")
    assert _line(8, "iterated Darboux equals Wronskian form", ok,
                 "crum worst %s, schrodinger worst %s"
                 % (mp.nstr(_worst(crum), 3), mp.nstr(_worst(schrod), 3)))


def test_criterion_09_shift_identity_suite(painleve_report):
    names = ("rec1", "rec2", "rec3", "rec4", "rr1", "rr2", "rr3", "rr4",
             "comp1", "comp2", "comp3", "comp4", "murec1", "murec2",
             "nton1", "nton2")
    checks = [c for c in painleve_report.checks if c.identity in names]
    seen = {c.identity for c in checks}
    ok = seen == set(names) and all(c.passed for c in checks) \
        and _worst(checks) <= mp.mpf("1e-8")
    assert _line(9, "shift identity web (16 identities)", ok,
                 "%d evaluations, worst rel %s"
                 % (len(checks), mp.nstr(_worst(checks), 3)))


def test_criterion_10_nonlinear_system_and_pvi(painleve_report):
    nl = [c for c in painleve_report.checks
          if c.identity == "nonlinear_system"]
    pvi = [c for c in painleve_report.checks if c.identity == "painleve_vi"]
    params = [c for c in painleve_report.checks
              if c.identity == "pvi_params_0_1"]
    closed = [c for c in pvi
              if c.inputs.get("nu") == 0 and c.inputs.get("n") == 1]
    ok = len(nl) == 132 and len(pvi) == 132 \
        and all(c.passed for c in nl + pvi + params) \
        and _worst(nl) <= mp.mpf("1e-6") and _worst(pvi) <= mp.mpf("1e-6") \
        and closed and _worst(closed) <= mp.mpf("1e-8")
    assert _line(10, "first-order system and Painleve VI residuals", ok,
                 "system worst %s, PVI worst %s, closed-form worst %s"
                 % (mp.nstr(_worst(nl), 3), mp.nstr(_worst(pvi), 3),
                    mp.nstr(_worst(closed), 3)))


def test_criterion_11_backlund_maps(painleve_report):
    checks = _subset(painleve_report, ("backlund_",))
    yz = [c for c in checks if c.identity == "backlund_YZ"]
    wx = [c for c in checks if c.identity == "backlund_WX"]
    ok = len(yz) == 3 and len(wx) == 4 and all(c.passed for c in checks) \
        and _worst(checks) <= mp.mpf("1e-6")
    assert _line(11, "Backlund images satisfy shifted systems", ok,
                 "worst rel %s" % mp.nstr(_worst(checks), 3))


def test_criterion_12_exact_rationality(painleve_report):
    rat = [c for c in painleve_report.checks if c.identity == "rationality"]
    closed = [c for c in painleve_report.checks
              if c.identity == "rationality_0_1_closed_form"]
    ok = len(rat) == 3 and all(c.passed for c in rat + closed) and closed
    detail = "; ".join("(%s,%s): %s/%s" % (c.inputs["nu"], c.inputs["n"],
                                           c.inputs.get("num"),
                                           c.inputs.get("den"))
                       for c in rat)
    assert _line(12, "exact rational reconstruction of q(b)", ok, detail)


def test_criterion_13_cli_determinism(tmp_path):
    args = [sys.executable, "-m", "pwzeros.cli", "verify", "--suite", "all",
            "--seed", "7", "--nu", "0", "--n", "1", "--a", "0.5",
            "--trials", "8", "--pairs", "4", "--digits", "30"]
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    p1 = subprocess.run(args + ["--out", str(out1)], capture_output=True,
                        text=True, timeout=900)
    p2 = subprocess.run(args + ["--out", str(out2)], capture_output=True,
                        text=True, timeout=900)
    identical = out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    exits_ok = p1.returncode == 0 and p2.returncode == 0 \
        and payload["meta"]["failed"] == 0
    usage = subprocess.run(
        [sys.executable, "-m", "pwzeros.cli", "mu", "--nu", "0", "--n", "1",
         "--a", "7"], capture_output=True, text=True, timeout=120)
    ok = identical and exits_ok and usage.returncode == 2
    assert _line(13, "CLI determinism and exit codes", ok,
                 "byte-identical=%s exit0=%s usage-exit2=%s"
                 % (identical, exits_ok, usage.returncode == 2))
