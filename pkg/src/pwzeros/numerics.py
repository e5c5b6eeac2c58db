"""Precision-parameterized scalars, dense linear algebra, differentiation, quadrature.

All floating computation runs on mpmath real/complex numbers at a working
precision chosen through :class:`PrecisionCtx`.  Matrices whose entries are
exact :class:`fractions.Fraction` values take a separate exact elimination
path, used as the oracle of last resort by the rationality checks.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

# Exact rationals: arbitrary-size integers, positive denominator, gcd-reduced.
# fractions.Fraction guarantees all three invariants by construction.
Rational = Fraction

_EXACT_TYPES = (int, Fraction)


class DimensionError(ValueError):
    """Matrix/vector shapes do not match the requested operation."""


class ConditioningError(ArithmeticError):
    """Linear algebra failed at working precision (singular or too ill-conditioned)."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class QuadratureToleranceError(ArithmeticError):
    """Tensor-product quadrature did not settle within the refinement budget."""


class ConsistencyError(RuntimeError):
    """Two routes to the same quantity disagree beyond tolerance."""


@dataclass(frozen=True)
class PrecisionCtx:
    """Working precision and finite-difference policy.

    digits: target significant decimal digits (>= 15).
    fd_step: base central-difference step; defaults to 10**(-digits/4).
    richardson_levels: extrapolation depth for fd_derivative.
    """

    digits: int = 50
    fd_step: float = None
    richardson_levels: int = 3

    def __post_init__(self):
        if self.digits < 15:
            raise ValueError("digits must be >= 15")
        if self.richardson_levels < 1:
            raise ValueError("richardson_levels must be >= 1")
        if self.fd_step is None:
            object.__setattr__(self, "fd_step", 10.0 ** (-self.digits / 4))
        if self.fd_step <= 0:
            raise ValueError("fd_step must be positive")

    def workdps(self, extra=5):
        """mpmath working-precision context for this ctx, with guard digits."""
        return mp.workdps(self.digits + extra)

    def eps(self, slack=0):
        """10**(-digits+slack) as an mpf at current precision."""
        return mp.mpf(10) ** (-self.digits + slack)


DEFAULT_CTX = PrecisionCtx()


class Matrix:
    """Dense matrix over mpmath scalars or exact Fractions; rows of equal length."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = [list(row) for row in entries]
        if not entries or not entries[0]:
            raise DimensionError("matrix must have at least one row and column")
        ncols = len(entries[0])
        if any(len(row) != ncols for row in entries):
            raise DimensionError("ragged rows")
        self.rows = len(entries)
        self.cols = ncols
        self.entries = entries

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i):
        return list(self.entries[i])

    def col(self, j):
        return [self.entries[i][j] for i in range(self.rows)]

    def transpose(self):
        return Matrix([[self.entries[i][j] for i in range(self.rows)]
                       for j in range(self.cols)])

    def is_exact(self):
        return all(isinstance(v, _EXACT_TYPES) for row in self.entries for v in row)

    def mul_vec(self, v):
        if len(v) != self.cols:
            raise DimensionError("vector length does not match matrix columns")
        return [sum(self.entries[i][j] * v[j] for j in range(self.cols))
                for i in range(self.rows)]

    def __repr__(self):
        return "Matrix(%dx%d)" % (self.rows, self.cols)


def _det_exact(entries):
    """Exact determinant by Fraction Gaussian elimination."""
    a = [[Fraction(v) for v in row] for row in entries]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        piv = a[k][k]
        det *= piv
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return det


def _scale_rows(a, threshold):
    """Factor out row maxima beyond threshold; returns the extracted factor product."""
    factor = mp.mpf(1)
    for i, row in enumerate(a):
        m = max(abs(v) for v in row)
        if m > threshold:
            a[i] = [v / m for v in row]
            factor *= m
    return factor


def _lu_full_pivot(a):
    """In-place LU with full pivoting.

    Returns (sign, pivots, row_order, col_order).  Stops early on an exactly
    zero pivot block (matrix singular at working precision).
    """
    n = len(a)
    sign = 1
    row_order = list(range(n))
    col_order = list(range(n))
    pivots = []
    for k in range(n):
        best, pi, pj = mp.mpf(0), k, k
        for i in range(k, n):
            for j in range(k, n):
                m = abs(a[i][j])
                if m > best:
                    best, pi, pj = m, i, j
        if best == 0:
            pivots.append(mp.mpf(0))
            return sign, pivots, row_order, col_order
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            row_order[k], row_order[pi] = row_order[pi], row_order[k]
            sign = -sign
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            col_order[k], col_order[pj] = col_order[pj], col_order[k]
            sign = -sign
        piv = a[k][k]
        pivots.append(piv)
        for i in range(k + 1, n):
            f = a[i][k] / piv
            a[i][k] = f
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return sign, pivots, row_order, col_order


def pivot_condition(pivots):
    """Crude condition estimate from pivot magnitudes (max/min ratio)."""
    mags = [abs(p) for p in pivots]
    lo = min(mags)
    if lo == 0:
        return mp.inf
    return max(mags) / lo


def det(m, ctx=DEFAULT_CTX):
    """Determinant; fully pivoted elimination, exact path for Fraction entries."""
    if not m.is_square:
        raise DimensionError("determinant of a non-square matrix")
    if m.is_exact():
        return _det_exact(m.entries)
    with ctx.workdps(10):
        a = [list(row) for row in m.entries]
        factor = _scale_rows(a, mp.mpf(10) ** (ctx.digits // 2))
        sign, pivots, _, _ = _lu_full_pivot(a)
        result = factor * sign
        for p in pivots:
            result *= p
        return +result


def solve(m, rhs, ctx=DEFAULT_CTX):
    """Solve m @ y = rhs; raises ConditioningError beyond the precision budget."""
    y, _ = solve_cond(m, rhs, ctx)
    return y


def solve_cond(m, rhs, ctx=DEFAULT_CTX):
    """Like solve() but also returns the pivot-growth condition estimate."""
    if not m.is_square:
        raise DimensionError("solve requires a square matrix")
    n = m.rows
    if len(rhs) != n:
        raise DimensionError("rhs length does not match matrix")
    with ctx.workdps(10):
        a = [list(row) for row in m.entries]
        sign, pivots, row_order, col_order = _lu_full_pivot(a)
        cond = pivot_condition(pivots)
        if pivots[-1] == 0 or cond > mp.mpf(10) ** (ctx.digits + 5):
            raise ConditioningError("matrix singular at working precision",
                                    condition=cond)
        b = [rhs[row_order[i]] for i in range(n)]
        for i in range(1, n):
            b[i] -= sum(a[i][j] * b[j] for j in range(i))
        x = [None] * n
        for i in reversed(range(n)):
            x[i] = (b[i] - sum(a[i][j] * x[j] for j in range(i + 1, n))) / a[i][i]
        y = [None] * n
        for k in range(n):
            y[col_order[k]] = x[k]
        resid = max(abs(r - v) for r, v in zip(m.mul_vec(y), rhs))
        scale = max(abs(v) for v in rhs)
        bound = mp.mpf(10) ** (-(ctx.digits // 2)) * (scale if scale > 0 else mp.mpf(1))
        if resid > bound:
            raise ConditioningError(
                "solve residual %s exceeds bound %s" % (mp.nstr(resid, 5),
                                                        mp.nstr(bound, 5)),
                condition=cond)
        return [+v for v in y], +cond


def fd_derivative(f, x0, order, ctx=DEFAULT_CTX):
    """Central-difference derivative with Richardson extrapolation.

    Returns (value, error_estimate).  order must be 1 or 2; f is evaluated at
    2*(levels+1) points around x0 (plus x0 itself for order 2).
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    levels = ctx.richardson_levels
    with ctx.workdps(5):
        x0 = mp.mpf(x0)
        h0 = mp.mpf(ctx.fd_step)
        f0 = f(x0) if order == 2 else None
        base = []
        for k in range(levels + 1):
            h = h0 / 2 ** k
            fp, fm = f(x0 + h), f(x0 - h)
            if order == 1:
                base.append((fp - fm) / (2 * h))
            else:
                base.append((fp - 2 * f0 + fm) / (h * h))
        # Richardson on the even-power error series (ratio 2 per level).
        table = [base]
        for j in range(1, levels + 1):
            fac = mp.mpf(4) ** j
            prev = table[-1]
            table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1)
                          for i in range(len(prev) - 1)])
        value = table[-1][0]
        err = abs(value - table[-2][-1]) if levels >= 1 else mp.mpf(0)
        return +value, +err


@functools.lru_cache(maxsize=None)
def _gl_nodes_01(order, dps):
    """Gauss-Legendre nodes/weights on [0, 1] at dps decimal digits."""
    with mp.workdps(dps + 10):
        nodes, weights = [], []
        for k in range(1, order // 2 + 1):
            x = mp.cos(mp.pi * (k - mp.mpf(1) / 4) / (order + mp.mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mp.mpf(1), x
                for j in range(2, order + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = order * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mp.mpf(10) ** (-dps - 8):
                    break
            w = 2 / ((1 - x * x) * dp * dp)
            nodes.append(x)
            weights.append(w)
        full_nodes, full_weights = [], []
        for x, w in zip(nodes, weights):
            full_nodes.append((1 - x) / 2)
            full_weights.append(w / 2)
        if order % 2 == 1:
            p0, p1 = mp.mpf(1), mp.mpf(0)
            for j in range(2, order + 1):
                p0, p1 = p1, (-(j - 1) * p0) / j
            dp = order * (-p0) / (-1)
            full_nodes.append(mp.mpf(1) / 2)
            full_weights.append(2 / (dp * dp) / 2)
        for x, w in zip(reversed(nodes), reversed(weights)):
            full_nodes.append((1 + x) / 2)
            full_weights.append(w / 2)
        return tuple(+x for x in full_nodes), tuple(+w for w in full_weights)


def _tensor_gl(f, d, order, dps):
    nodes, weights = _gl_nodes_01(order, dps)
    if d == 1:
        return mp.fsum(w * f(u) for u, w in zip(nodes, weights))
    if d == 2:
        return mp.fsum(wu * wv * f(u, v)
                       for u, wu in zip(nodes, weights)
                       for v, wv in zip(nodes, weights))
    return mp.fsum(wu * wv * ww * f(u, v, w)
                   for u, wu in zip(nodes, weights)
                   for v, wv in zip(nodes, weights)
                   for w, ww in zip(nodes, weights))


def quad_nd(f, d, order, ctx=DEFAULT_CTX, tol=None, max_refinements=3):
    """Tensor-product Gauss-Legendre integral of f over [0,1]**d, d in {1,2,3}.

    The order doubles until two consecutive values agree within tol
    (default 10**(-digits/2) relative); otherwise QuadratureToleranceError.
    """
    if d not in (1, 2, 3):
        raise DimensionError("quad_nd supports d in {1, 2, 3}")
    if order < 1:
        raise ValueError("order must be >= 1")
    with ctx.workdps(5):
        if tol is None:
            tol = mp.mpf(10) ** (-(ctx.digits // 2))
        else:
            tol = mp.mpf(tol)
        prev = _tensor_gl(f, d, order, ctx.digits)
        for _ in range(max_refinements):
            order *= 2
            cur = _tensor_gl(f, d, order, ctx.digits)
            if abs(cur - prev) <= tol * max(mp.mpf(1), abs(cur)):
                return +cur
            prev = cur
        raise QuadratureToleranceError(
            "no convergence after refinement to order %d" % order)
