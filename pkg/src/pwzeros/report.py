"""Residual records and deterministic number formatting for reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal

from mpmath import mp


def rel_residual(lhs, rhs):
    """|lhs - rhs| / max(|lhs|, |rhs|); equals |lhs - rhs| when both vanish."""
    diff = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    if scale == 0:
        return diff
    return diff / scale


@dataclass
class ResidualReport:
    """One identity evaluation: inputs, both sides, residuals, verdict."""

    identity: str
    inputs: dict
    lhs: object
    rhs: object
    abs_residual: object
    rel_residual: object
    tol: object
    passed: bool

    @classmethod
    def from_pair(cls, identity, inputs, lhs, rhs, tol):
        absr = abs(lhs - rhs)
        relr = rel_residual(lhs, rhs)
        return cls(identity, inputs, lhs, rhs, +absr, +relr, tol, bool(relr <= tol))

    @classmethod
    def from_residual(cls, identity, inputs, residual, scale, tol):
        """For checks of the form residual == 0 with a known magnitude scale."""
        absr = abs(residual)
        scale = abs(scale) if scale != 0 else mp.mpf(1)
        relr = absr / scale
        return cls(identity, inputs, residual, 0, +absr, +relr, tol, bool(relr <= tol))


@dataclass
class VerifyReport:
    """Result of one verification suite run."""

    suite: str
    checks: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self):
        return sum(1 for c in self.checks if c.passed)

    @property
    def failed(self):
        return sum(1 for c in self.checks if not c.passed)

    @property
    def worst_rel(self):
        worst = mp.mpf(0)
        for c in self.checks:
            if c.rel_residual > worst:
                worst = c.rel_residual
        return worst

    def all_passed(self):
        return self.failed == 0


def sci(x, sig=17):
    """Deterministic scientific-notation rendering with sig significant digits."""
    if isinstance(x, complex) or (hasattr(x, "imag") and x.imag != 0):
        return "%s%s%sj" % (sci(x.real, sig),
                            "+" if x.imag >= 0 else "-",
                            sci(abs(x.imag), sig))
    if hasattr(x, "real") and not isinstance(x, (int, float)):
        x = x.real
    if x == 0:
        return "0." + "0" * (sig - 1) + "e+00"
    if isinstance(x, int):
        d = Decimal(x)
    elif x in (float("inf"), mp.inf):
        return "inf"
    elif x in (float("-inf"), mp.ninf):
        return "-inf"
    else:
        d = Decimal(mp.nstr(mp.mpf(x), sig + 5, strip_zeros=False))
    mantissa, _, exponent = format(d, ".%dE" % (sig - 1)).partition("E")
    sign = "-" if exponent.startswith("-") else "+"
    return "%se%s%s" % (mantissa, sign, exponent.lstrip("+-").zfill(2))


def check_rows(report, sig=17):
    """Flatten a VerifyReport into CSV-ready string rows."""
    rows = []
    for c in report.checks:
        rows.append([
            report.suite,
            c.identity,
            _fmt_inputs(c.inputs),
            sci(c.lhs, sig),
            sci(c.rhs, sig),
            sci(c.abs_residual, sig),
            sci(c.rel_residual, sig),
            sci(c.tol, sig),
            "1" if c.passed else "0",
        ])
    return rows


CHECK_HEADER = ["suite", "identity", "inputs", "lhs", "rhs",
                "abs_residual", "rel_residual", "tol", "passed"]


def _fmt_inputs(inputs):
    parts = []
    for k in sorted(inputs):
        v = inputs[k]
        if isinstance(v, (int, bool, str)):
            parts.append("%s=%s" % (k, v))
        else:
            parts.append("%s=%s" % (k, sci(v, 8)))
    return ";".join(parts)


def report_to_dict(report, sig=17):
    """JSON-ready dict; numbers rendered as fixed-significant-digit strings."""
    return {
        "suite": report.suite,
        "summary": {
            "passed": report.passed,
            "failed": report.failed,
            "worst_rel_residual": sci(report.worst_rel, sig),
        },
        "checks": [
            {
                "identity": c.identity,
                "inputs": {k: (v if isinstance(v, (int, bool, str)) else sci(v, sig))
                           for k, v in sorted(c.inputs.items())},
                "lhs": sci(c.lhs, sig),
                "rhs": sci(c.rhs, sig),
                "abs_residual": sci(c.abs_residual, sig),
                "rel_residual": sci(c.rel_residual, sig),
                "tol": sci(c.tol, sig),
                "passed": c.passed,
            }
            for c in report.checks
        ],
    }
