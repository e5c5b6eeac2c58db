"""Paley-Wiener kernels with prescribed imaginary zeros.

The base space has exponential type x and reproducing kernel
2 sin((conj(z)-w)x)/(conj(z)-w).  Prescribing zeros z_j = -i*kappa_j produces a
modified space whose evaluator is computed here by three independent routes:

* bordered Gram determinant over the base evaluators,
* the incomplete E/F pair with solved coefficient vectors,
* alternating-row determinants giving the even/odd pair (A_sigma, B_sigma).

Cross-agreement of the three routes is the module's main correctness check.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional

from mpmath import mp

from .numerics import (DEFAULT_CTX, ConditioningError, Matrix, det, solve_cond)


def _i():
    return mp.mpc(0, 1)


# ---------------------------------------------------------------------------
# series-guarded elementary kernels
#
# T0(u) = 2 sinh(x u)/u, T1 = dT0/du, T2 = d2T0/du2, written through the
# scaled functions below; the series branch avoids the cancellation that the
# closed forms suffer for small |s|.
# ---------------------------------------------------------------------------

def _sinc(s):
    """sin(s)/s, 1 at s = 0."""
    if abs(s) < mp.mpf(10) ** (-mp.dps / 3.0):
        acc, term, k = mp.mpf(1) * (1 + 0 * s), 1 + 0 * s, 0
        s2 = s * s
        while True:
            k += 1
            term = -term * s2 / ((2 * k) * (2 * k + 1))
            acc += term
            if abs(term) < mp.eps * (1 + abs(acc)):
                return acc
    return mp.sin(s) / s


def _sinhc(s):
    """sinh(s)/s, 1 at s = 0."""
    if abs(s) < mp.mpf("0.5"):
        acc, term, k = 1 + 0 * s, 1 + 0 * s, 0
        s2 = s * s
        while True:
            k += 1
            term = term * s2 / ((2 * k) * (2 * k + 1))
            acc += term
            if abs(term) < mp.eps * (1 + abs(acc)):
                return acc
    return mp.sinh(s) / s


def _g1(s):
    """(s cosh s - sinh s)/s**2 = sum_{k>=1} 2k s^(2k-1)/(2k+1)!."""
    if abs(s) < mp.mpf("0.5"):
        s2 = s * s
        term = s / 3  # k = 1 term: 2 s / 3!
        acc, k = term, 1
        while True:
            k += 1
            term = term * s2 * (2 * k) / ((2 * k + 1) * (2 * k) * (2 * k - 2))
            acc += term
            if abs(term) < mp.eps * (1 + abs(acc)):
                return acc
    return (s * mp.cosh(s) - mp.sinh(s)) / (s * s)


def _g2(s):
    """((s**2+2) sinh s - 2 s cosh s)/s**3 = sum_{k>=1} 2k(2k-1) s^(2k-2)/(2k+1)!."""
    if abs(s) < mp.mpf("0.5"):
        s2 = s * s
        term = mp.mpf(1) / 3 + 0 * s  # k = 1 term: 2/3!
        acc, k = term, 1
        while True:
            k += 1
            term = term * s2 * (2 * k) * (2 * k - 1) / \
                ((2 * k + 1) * (2 * k) * (2 * k - 2) * (2 * k - 3))
            acc += term
            if abs(term) < mp.eps * (1 + abs(acc)):
                return acc
    return ((s * s + 2) * mp.sinh(s) - 2 * s * mp.cosh(s)) / (s ** 3)


def _sh_term(u, x, order=0):
    """d^order/du^order of 2 sinh(x u)/u; removable singularity at u = 0."""
    s = x * u
    if order == 0:
        return 2 * x * _sinhc(s)
    if order == 1:
        return 2 * x * x * _g1(s)
    return 2 * x ** 3 * _g2(s)


# ---------------------------------------------------------------------------
# configuration and coefficient data
# ---------------------------------------------------------------------------

# decimal-literal inputs convert at this fixed precision so that configs are
# identical regardless of the ambient mp.dps at construction time
_CONFIG_DPS = 120


@dataclass(frozen=True)
class ZeroConfig:
    """Prescribed imaginary zeros z_j = -i*kappa_j of a type-x space.

    kappas may be empty (unmodified base space).  progression, when set,
    records (nu, n) with kappa_j = (nu+1)/2 + (j-1).
    """

    kappas: tuple
    x: object
    progression: Optional[tuple] = None

    def __post_init__(self):
        with mp.workdps(_CONFIG_DPS):
            kappas = tuple(mp.mpf(k) for k in self.kappas)
            object.__setattr__(self, "kappas", kappas)
            x = mp.mpf(self.x)
            object.__setattr__(self, "x", x)
            if x <= 0:
                raise ValueError("x must be positive")
            for i in range(len(kappas)):
                for j in range(i + 1, len(kappas)):
                    if kappas[i] == kappas[j]:
                        raise ValueError("kappas must be distinct")
            if self.progression is not None:
                nu, n = self.progression
                nu = mp.mpf(nu)
                object.__setattr__(self, "progression", (nu, int(n)))
                if int(n) != len(kappas):
                    raise ValueError("progression length does not match kappas")
                for j, kap in enumerate(kappas):
                    if kap != (nu + 1) / 2 + j:
                        raise ValueError(
                            "kappas do not form the stated progression")

    @property
    def n(self):
        return len(self.kappas)

    def a_value(self):
        return mp.e ** (-self.x)

    @classmethod
    def from_progression(cls, nu, n, a=None, x=None, ctx=DEFAULT_CTX):
        """Arithmetic progression kappa_j = (nu+1)/2 + (j-1), j = 1..n."""
        with mp.workdps(_CONFIG_DPS):
            nu = mp.mpf(nu)
            if (a is None) == (x is None):
                raise ValueError("give exactly one of a or x")
            if x is None:
                a = mp.mpf(a)
                if not 0 < a < 1:
                    raise ValueError("a must lie in (0, 1)")
                x = -mp.log(a)
            else:
                x = mp.mpf(x)
            kappas = tuple((nu + 1) / 2 + j for j in range(int(n)))
            return cls(kappas, +x, progression=(+nu, int(n)))


@dataclass(frozen=True)
class CoeffVector:
    """Solved coefficients of the incomplete E/F representations."""

    c: tuple
    d: tuple


@dataclass(frozen=True)
class KernelValue:
    value: object
    z: object
    w: object
    kind: str  # base | complete | incomplete


def pw_kernel(z, w, x, ctx=DEFAULT_CTX):
    """Base evaluator 2 sin((conj(z)-w)x)/(conj(z)-w); 2x at coincidence."""
    with ctx.workdps(10):
        x = mp.mpf(x)
        if x <= 0:
            raise ValueError("x must be positive")
        u = mp.conj(mp.mpmathify(z)) - mp.mpmathify(w)
        return +(2 * x * _sinc(x * u))


def _gram_entry(ki, kj, x):
    # (Z_i, Z_j) = int_{-x}^{x} e^{(ki+kj) y} dy = 2 sinh((ki+kj)x)/(ki+kj)
    return _sh_term(ki + kj, x, 0)


@functools.lru_cache(maxsize=256)
def _config_data(kappas, x, digits):
    """Gram rows, Gram determinant, and solved coefficient vectors for a config."""
    ctx_digits = digits
    with mp.workdps(ctx_digits + 10):
        n = len(kappas)
        if n == 0:
            return {"gram": (), "gn": mp.mpf(1), "c": (), "d": (), "cond": mp.mpf(1)}
        rows = tuple(tuple(_gram_entry(ki, kj, x) for kj in kappas)
                     for ki in kappas)
        g = Matrix([list(r) for r in rows])
        from .numerics import PrecisionCtx
        ctx = PrecisionCtx(digits=ctx_digits)
        gn = det(g, ctx)
        rhs_c = [-mp.e ** (-x * ki) for ki in kappas]
        sgn = -1 if n % 2 == 0 else 1  # (-1)**(n+1)
        rhs_d = [sgn * mp.e ** (x * ki) for ki in kappas]
        c, cond = solve_cond(g, rhs_c, ctx)
        d, _ = solve_cond(g, rhs_d, ctx)
        return {"gram": rows, "gn": +gn, "c": tuple(+v for v in c),
                "d": tuple(+v for v in d), "cond": +cond}


def _data(cfg, ctx):
    return _config_data(cfg.kappas, cfg.x, ctx.digits)


def gram_matrix(cfg, ctx=DEFAULT_CTX):
    """Gram matrix of the zero-set evaluators; symmetric positive definite."""
    if cfg.n == 0:
        raise ValueError("empty configuration has no Gram matrix")
    with ctx.workdps(10):
        rows = _data(cfg, ctx)["gram"]
        m = Matrix([list(r) for r in rows])
        _assert_positive_definite(m, ctx)
        return m


def _assert_positive_definite(m, ctx):
    # LDL^T without pivoting; all pivots positive iff symmetric PD.
    n = m.rows
    a = [list(row) for row in m.entries]
    for k in range(n):
        piv = a[k][k]
        if piv <= 0:
            raise ConditioningError(
                "Gram matrix not positive definite at working precision "
                "(pivot %d)" % k, condition=None)
        for i in range(k + 1, n):
            f = a[i][k] / piv
            for j in range(k + 1, n):
                a[i][j] -= f * a[k][j]


def solve_coefficients(cfg, ctx=DEFAULT_CTX):
    """Coefficient vectors c (zeros of E) and d (zeros of F).

    c solves sum_j c_j G_ij = -e^{-x kappa_i}; d solves the same system with
    right-hand side (-1)^(n+1) e^{+x kappa_i}, which is exactly the condition
    F(-i kappa_i) = 0.
    """
    data = _data(cfg, ctx)
    return CoeffVector(c=data["c"], d=data["d"])


def _ef_t_derivs(cfg, data, t, max_order=0):
    """E, F and their first max_order t-derivatives at complex t."""
    x = cfg.x
    ext = mp.e ** (x * t)
    emt = mp.e ** (-x * t)
    sgn = (-1) ** cfg.n
    evals = []
    fvals = []
    for m in range(max_order + 1):
        e_val = x ** m * ext
        f_val = sgn * (-x) ** m * emt
        for kap, cj, dj in zip(cfg.kappas, data["c"], data["d"]):
            term = _sh_term(t - kap, x, m)
            e_val += cj * term
            f_val += dj * term
        evals.append(e_val)
        fvals.append(f_val)
    return evals, fvals


def eval_EF(cfg, t, coeffs=None, ctx=DEFAULT_CTX):
    """E(it) and F(it); real for real t, entire in t.

    E(it) = e^{xt} + sum_j c_j 2 sinh((t-kappa_j)x)/(t-kappa_j) and
    F(it) = (-1)^n e^{-xt} + sum_j d_j (same kernel); removable singularities
    at t = kappa_j evaluate to the 2x limit.
    """
    data = _data(cfg, ctx)
    if coeffs is not None:
        data = dict(data)
        data["c"], data["d"] = tuple(coeffs.c), tuple(coeffs.d)
    with ctx.workdps(10):
        t = mp.mpmathify(t)
        evals, fvals = _ef_t_derivs(cfg, data, t, 0)
        return +evals[0], +fvals[0]


def _ef_w_derivs(cfg, data, w, max_order=0):
    """E, F and w-derivatives at complex w (argument convention w = it)."""
    t = -_i() * w
    evals, fvals = _ef_t_derivs(cfg, data, t, max_order)
    out_e, out_f = [], []
    for m in range(max_order + 1):
        chain = (-_i()) ** m
        out_e.append(chain * evals[m])
        out_f.append(chain * fvals[m])
    return out_e, out_f


def _gamma(kappas, w):
    """gamma(w) = prod_j 1/(w - z_j) with z_j = -i kappa_j."""
    p = mp.mpc(1)
    for kap in kappas:
        p /= (w + _i() * kap)
    return p


def _gamma_conj_at(kappas, z):
    """conj(gamma(z)) = prod_j 1/(conj(z) - i kappa_j)."""
    p = mp.mpc(1)
    zb = mp.conj(z)
    for kap in kappas:
        p /= (zb - _i() * kap)
    return p


def kernel_incomplete_EF(cfg, z, w, ctx=DEFAULT_CTX):
    """Incomplete evaluator K^sigma(z, w) from the E/F pair.

    K = (conj(E(z)) E(w) - conj(F(z)) F(w)) / (i (conj(z) - w)); the
    coincidence w ~ conj(z) is filled with the first-order Taylor limit.
    """
    data = _data(cfg, ctx)
    with ctx.workdps(10):
        z = mp.mpmathify(z)
        w = mp.mpmathify(w)
        (ez,), (fz,) = _ef_w_derivs(cfg, data, z, 0)
        s = mp.conj(z)
        h = w - s
        if abs(h) < mp.mpf(10) ** (-ctx.digits / 3.0):
            es, fs = _ef_w_derivs(cfg, data, s, 2)
            n1 = mp.conj(ez) * es[1] - mp.conj(fz) * fs[1]
            n2 = mp.conj(ez) * es[2] - mp.conj(fz) * fs[2]
            # K(z, s+h) = i N'(s) + i N''(s) h/2 + O(h^2); N(s) = 0 identically
            val = _i() * (n1 + n2 * h / 2)
        else:
            ew, fw = _ef_w_derivs(cfg, data, w, 0)
            val = (mp.conj(ez) * ew[0] - mp.conj(fz) * fw[0]) / (_i() * (s - w))
        return KernelValue(+val, z, w, "incomplete")


def kernel_complete_gram(cfg, z, w, ctx=DEFAULT_CTX):
    """Complete evaluator via the bordered Gram determinant.

    Equals gamma(w) conj(gamma(z)) det(bordered)/G_n away from the zero set;
    on (or extremely near) the zero set the finite limit is taken through the
    E/F factorization.
    """
    with ctx.workdps(10):
        z = mp.mpmathify(z)
        w = mp.mpmathify(w)
        x = cfg.x
        if cfg.n == 0:
            return KernelValue(pw_kernel(z, w, x, ctx), z, w, "complete")
        data = _data(cfg, ctx)
        gn = data["gn"]
        if gn <= 0:
            raise ConditioningError("Gram determinant not positive at working "
                                    "precision", condition=data["cond"])
        guard = mp.mpf(10) ** (-ctx.digits / 3.0)
        zs = [-_i() * kap for kap in cfg.kappas]
        near_w = min(abs(w - zj) for zj in zs)
        near_z = min(abs(z - zj) for zj in zs)
        if near_w < guard or near_z < guard:
            val = _complete_via_EF(cfg, data, z, w, ctx, guard)
            return KernelValue(+val, z, w, "complete")
        n = cfg.n
        rows = []
        for i in range(n):
            row = list(data["gram"][i])
            row.append(pw_kernel(z, zs[i], x, ctx))
            rows.append(row)
        last = [pw_kernel(zj, w, x, ctx) for zj in zs]
        last.append(pw_kernel(z, w, x, ctx))
        rows.append(last)
        bordered = det(Matrix(rows), ctx)
        val = _gamma(cfg.kappas, w) * _gamma_conj_at(cfg.kappas, z) * bordered / gn
        return KernelValue(+val, z, w, "complete")


def _complete_via_EF(cfg, data, z, w, ctx, guard):
    """gamma(w) conj(gamma(z)) K^sigma(z,w) continued onto the zero set."""
    zs = [-_i() * kap for kap in cfg.kappas]
    m_w = min(range(cfg.n), key=lambda j: abs(w - zs[j]))
    m_z = min(range(cfg.n), key=lambda j: abs(z - zs[j]))
    w_on = abs(w - zs[m_w]) < guard
    z_on = abs(z - zs[m_z]) < guard
    if w_on and z_on:
        raise ValueError("simultaneous evaluation with both arguments on the "
                         "zero set is not supported")
    i_unit = _i()
    if w_on:
        ezs, fzs = _ef_w_derivs(cfg, data, z, 0)
        ez, fz = ezs[0], fzs[0]
        e_at, f_at = _ef_w_derivs(cfg, data, zs[m_w], 2)
        zbar = mp.conj(z)
        dd = zbar - zs[m_w]
        n0 = mp.conj(ez) * e_at[0] - mp.conj(fz) * f_at[0]
        n1 = mp.conj(ez) * e_at[1] - mp.conj(fz) * f_at[1]
        n2 = mp.conj(ez) * e_at[2] - mp.conj(fz) * f_at[2]
        k1 = n1 / (i_unit * dd) + n0 / (i_unit * dd * dd)
        k2 = n2 / (i_unit * dd) + 2 * n1 / (i_unit * dd * dd) \
            + 2 * n0 / (i_unit * dd ** 3)
        h = w - zs[m_w]
        ratio = k1 + k2 * h / 2
        rest = mp.mpc(1)
        for j, zj in enumerate(zs):
            if j != m_w:
                rest /= (w - zj)
        return _gamma_conj_at(cfg.kappas, z) * ratio * rest
    # z-side: K as an analytic function of s = conj(z); the relevant zero of
    # E(-s), F(-s) sits at s0 = i kappa_m.
    ews, fws = _ef_w_derivs(cfg, data, w, 0)
    ew, fw = ews[0], fws[0]
    s0 = i_unit * cfg.kappas[m_z]
    e_at, f_at = _ef_w_derivs(cfg, data, -s0, 2)
    dd = s0 - w
    m0 = e_at[0] * ew - f_at[0] * fw
    m1 = -e_at[1] * ew + f_at[1] * fw
    m2 = e_at[2] * ew - f_at[2] * fw
    k1 = m1 / (i_unit * dd) - m0 / (i_unit * dd * dd)
    k2 = m2 / (i_unit * dd) - 2 * m1 / (i_unit * dd * dd) \
        + 2 * m0 / (i_unit * dd ** 3)
    s = mp.conj(z)
    h = s - s0
    ratio = k1 + k2 * h / 2
    rest = mp.mpc(1)
    for j, kap in enumerate(cfg.kappas):
        if j != m_z:
            rest /= (s - i_unit * kap)
    return _gamma(cfg.kappas, w) * ratio * rest


def _alternating_border(cfg, w, first_even, ctx):
    """(n+1)x(n+1) determinant body with alternating cos/sin rows.

    Column j < n evaluates at z_j, the last column at w; row r carries the
    factor point**r and cos(x .) on even rows when first_even, else sin.
    """
    x = cfg.x
    pts = [-_i() * kap for kap in cfg.kappas] + [mp.mpmathify(w)]
    n1 = len(pts)
    rows = []
    for r in range(n1):
        even_row = (r % 2 == 0)
        use_cos = even_row if first_even else not even_row
        row = []
        for p in pts:
            base = mp.cos(x * p) if use_cos else mp.sin(x * p)
            row.append(p ** r * base)
        rows.append(row)
    return rows


def AB_sigma(cfg, w, ctx=DEFAULT_CTX):
    """Even/odd structure pair (A_sigma, B_sigma) for the modified space.

    Built from alternating-row determinants divided by their principal minors,
    with sign prefactors (-1)^(n(n-1)/2) and (-1)^(n(n+1)/2) and the rational
    factor prod_j 1/(w^2 + kappa_j^2).  Requires kappa_i + kappa_j != 0.
    """
    with ctx.workdps(10):
        w = mp.mpmathify(w)
        x = cfg.x
        n = cfg.n
        if n == 0:
            return +mp.cos(x * w), +mp.sin(x * w)
        for i in range(n):
            for j in range(n):
                if cfg.kappas[i] + cfg.kappas[j] == 0:
                    raise ValueError("kappa_i + kappa_j = 0 violates the "
                                     "determinantal route's hypotheses")
        gfac = mp.mpc(1)
        for kap in cfg.kappas:
            gfac /= (w * w + kap * kap)
        rows_a = _alternating_border(cfg, w, True, ctx)
        rows_b = _alternating_border(cfg, w, False, ctx)
        minor_a = det(Matrix([r[:n] for r in rows_a[:n]]), ctx)
        minor_b = det(Matrix([r[:n] for r in rows_b[:n]]), ctx)
        if minor_a == 0 or minor_b == 0:
            raise ConditioningError("vanishing principal minor", condition=None)
        num_a = det(Matrix(rows_a), ctx)
        num_b = det(Matrix(rows_b), ctx)
        sign_a = (-1) ** ((n * (n - 1)) // 2)
        sign_b = (-1) ** ((n * (n + 1)) // 2)
        a_val = sign_a * gfac * num_a / minor_a
        b_val = sign_b * gfac * num_b / minor_b
        return +a_val, +b_val


def kernel_complete_AB(cfg, z, w, ctx=DEFAULT_CTX):
    """Complete evaluator through the (A_sigma, B_sigma) pair; needs conj(z) != w."""
    with ctx.workdps(10):
        z = mp.mpmathify(z)
        w = mp.mpmathify(w)
        if mp.conj(z) == w:
            raise ValueError("coincident arguments are not supported on the "
                             "A/B route")
        az, bz = AB_sigma(cfg, z, ctx)
        aw, bw = AB_sigma(cfg, w, ctx)
        val = 2 * (mp.conj(bz) * aw - mp.conj(az) * bw) / (mp.conj(z) - w)
        return KernelValue(+val, z, w, "complete")


def complete_EF(cfg, w, ctx=DEFAULT_CTX):
    """Structure functions i^n gamma(w) E(w) and i^n gamma(w) F(w); w off the zero set."""
    data = _data(cfg, ctx)
    with ctx.workdps(10):
        w = mp.mpmathify(w)
        es, fs = _ef_w_derivs(cfg, data, w, 0)
        pref = _i() ** cfg.n * _gamma(cfg.kappas, w)
        return +(pref * es[0]), +(pref * fs[0])


def alpha_delta(cfg, coeffs=None, ctx=DEFAULT_CTX):
    """Subleading asymptotic coefficients of E (t -> +inf) and F (t -> -inf).

    alpha = -2 sum c_j e^{-kappa_j x}; delta = -(-1)^n 2 sum d_j e^{kappa_j x};
    they satisfy delta - alpha = 4 sum kappa_j and d(alpha)/dx = -mu^2.
    """
    data = _data(cfg, ctx)
    if coeffs is not None:
        data = dict(data)
        data["c"], data["d"] = tuple(coeffs.c), tuple(coeffs.d)
    with ctx.workdps(10):
        x = cfg.x
        alpha = -2 * mp.fsum(cj * mp.e ** (-kap * x)
                             for cj, kap in zip(data["c"], cfg.kappas))
        delta = -((-1) ** cfg.n) * 2 * mp.fsum(
            dj * mp.e ** (kap * x) for dj, kap in zip(data["d"], cfg.kappas))
        return +alpha, +delta
