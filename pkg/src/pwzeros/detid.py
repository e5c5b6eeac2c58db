"""Interleaved-row block determinant identity and the sh/ch Gram-Wronskian identity.

Both identities are checked by evaluating the two sides through entirely
separate determinant constructions and reporting the relative residual.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from .numerics import DEFAULT_CTX, Matrix, det
from .report import ResidualReport


@dataclass(frozen=True)
class InterleavedSpec:
    """Two families of (values, alternate values, nodes), n entries each.

    Left family (u, v, k) and right family (x, y, l); the Cauchy-style
    denominators require l_j != k_i for every pair.
    """

    u: tuple
    v: tuple
    k: tuple
    x: tuple
    y: tuple
    l: tuple

    def __post_init__(self):
        n = len(self.u)
        if n < 1:
            raise ValueError("need at least one entry per family")
        for name in ("v", "k", "x", "y", "l"):
            if len(getattr(self, name)) != n:
                raise ValueError("all six lists must share the same length")
        for li in self.l:
            for ki in self.k:
                if li == ki:
                    raise ValueError("l_j == k_i makes a Cauchy denominator vanish")

    @property
    def n(self):
        return len(self.u)


def interleaved_matrix(vals, alt_vals, k):
    """n x n matrix whose row r (1-based) is k_j**(r-1) times vals_j for odd r
    and k_j**(r-1) times alt_vals_j for even r."""
    n = len(vals)
    if len(alt_vals) != n or len(k) != n:
        raise ValueError("length mismatch")
    rows = []
    for r in range(n):
        src = vals if r % 2 == 0 else alt_vals
        rows.append([k[j] ** r * src[j] for j in range(n)])
    return Matrix(rows)


def okada_identity(spec, ctx=DEFAULT_CTX, tol=None):
    """Cauchy-like n x n determinant versus the 2n x 2n interleaved block form.

    LHS = det[(u_i y_j - v_i x_j) / (l_j - k_i)];
    RHS = det[[U, X], [V, Y]] / prod_(i,j) (l_j - k_i).
    """
    with ctx.workdps(10):
        if tol is None:
            tol = mp.mpf(10) ** (-ctx.digits + 10)
        n = spec.n
        u, v, k = (tuple(map(mp.mpmathify, t)) for t in (spec.u, spec.v, spec.k))
        x, y, l = (tuple(map(mp.mpmathify, t)) for t in (spec.x, spec.y, spec.l))
        cauchy = Matrix([[(u[i] * y[j] - v[i] * x[j]) / (l[j] - k[i])
                          for j in range(n)] for i in range(n)])
        lhs = det(cauchy, ctx)

        bu = interleaved_matrix(u, v, k)
        bv = interleaved_matrix(v, u, k)
        bx = interleaved_matrix(x, y, l)
        by = interleaved_matrix(y, x, l)
        block = Matrix([bu.row(i) + bx.row(i) for i in range(n)]
                       + [bv.row(i) + by.row(i) for i in range(n)])
        denom = mp.mpf(1)
        for i in range(n):
            for j in range(n):
                denom *= (l[j] - k[i])
        if denom == 0:
            raise ValueError("vanishing denominator product")
        rhs = det(block, ctx) / denom
        return ResidualReport.from_pair(
            "okada", {"n": n}, lhs, rhs, tol)


def _hyperbolic_wronskian(kappas, x, even_kind):
    """Wronskian in x of ch(kappa_j x) (even_kind) or sh(kappa_j x), closed rows.

    d^m/dx^m ch(kx) = k^m * (ch if m even else sh)(kx), and the sh family
    alternates the other way; no finite differences involved.
    """
    n = len(kappas)
    rows = []
    for m in range(n):
        row = []
        for kap in kappas:
            base_even = (m % 2 == 0) if even_kind else (m % 2 == 1)
            val = mp.cosh(kap * x) if base_even else mp.sinh(kap * x)
            row.append(kap ** m * val)
        rows.append(row)
    return Matrix(rows)


def shch_gram_identity(kappas, x, ctx=DEFAULT_CTX, tol=None):
    """det[sh((k_i+k_j)x)/(k_i+k_j)] versus the W(ch)*W(sh) product formula."""
    with ctx.workdps(10):
        if tol is None:
            tol = mp.mpf(10) ** (-ctx.digits + 10)
        kappas = [mp.mpf(kap) for kap in kappas]
        x = mp.mpf(x)
        if x <= 0:
            raise ValueError("x must be positive")
        n = len(kappas)
        for i in range(n):
            for j in range(i + 1, n):
                if kappas[i] == kappas[j]:
                    raise ValueError("kappas must be distinct")
        for i in range(n):
            for j in range(n):
                if kappas[i] + kappas[j] == 0:
                    raise ValueError("kappa_i + kappa_j = 0 is outside this "
                                     "identity's hypotheses")
        gram = Matrix([[mp.sinh((ki + kj) * x) / (ki + kj) for kj in kappas]
                       for ki in kappas])
        lhs = det(gram, ctx)

        w_ch = det(_hyperbolic_wronskian(kappas, x, True), ctx)
        w_sh = det(_hyperbolic_wronskian(kappas, x, False), ctx)
        denom = mp.mpf(1)
        for kap in kappas:
            denom *= kap
        for i in range(n):
            for j in range(i + 1, n):
                denom *= (kappas[i] + kappas[j]) ** 2
        rhs = w_ch * w_sh / denom
        return ResidualReport.from_pair(
            "shch_gram", {"n": n, "x": x}, lhs, rhs, tol)
