"""Krein-system mu-function, Darboux/Crum transforms, and residual checks.

mu is computed through several genuinely independent representations
(coefficient sums, bordered Gram determinant, Wronskian log-derivative,
Hankel moment quotient, multiple integrals); their mutual agreement is the
oracle.  The Darboux chain is iterated on truncated Taylor jets so that the
n-fold composition can be compared against the one-shot Wronskian form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from mpmath import mp

from .numerics import (DEFAULT_CTX, ConditioningError, ConsistencyError,
                       Matrix, det, fd_derivative, quad_nd)
from .pwspace import ZeroConfig, _config_data, eval_EF
from .report import ResidualReport


class MuRepresentation(enum.Enum):
    COEFFICIENTS = "coefficients"
    BORDERED_GRAM = "bordered_gram"
    WRONSKIAN_RATIO = "wronskian_ratio"
    HANKEL_QUOTIENT = "hankel_quotient"
    MULTIPLE_INTEGRAL = "multiple_integral"
    FROM_XY = "from_xy"


# ---------------------------------------------------------------------------
# closed-form derivative generators for the seed families
# ---------------------------------------------------------------------------

def seed_derivative(kind, param, x, m):
    """m-th x-derivative of ch/sh(param*x) or cos/sin(param*x)."""
    if kind == "ch":
        f = mp.cosh if m % 2 == 0 else mp.sinh
        return param ** m * f(param * x)
    if kind == "sh":
        f = mp.sinh if m % 2 == 0 else mp.cosh
        return param ** m * f(param * x)
    if kind == "cos":
        cyc = m % 4
        val = (mp.cos, lambda s: -mp.sin(s), lambda s: -mp.cos(s), mp.sin)[cyc]
        return param ** m * val(param * x)
    if kind == "sin":
        cyc = m % 4
        val = (mp.sin, mp.cos, lambda s: -mp.sin(s), lambda s: -mp.cos(s))[cyc]
        return param ** m * val(param * x)
    raise ValueError("unknown seed kind %r" % kind)


def _wronskian(gens, x, ctx, last_row=None):
    """det of the derivative table of gens; optionally replace the final
    derivative order (used for the analytic Wronskian x-derivative)."""
    n = len(gens)
    if n == 0:
        return mp.mpf(1)
    orders = list(range(n))
    if last_row is not None:
        orders[-1] = last_row
    rows = [[seed_derivative(kind, param, x, m) for kind, param in gens]
            for m in orders]
    return det(Matrix(rows), ctx)


def hankel_moment(k, a):
    """int_a^(1/a) t^k dt; the k = -1 case integrates to -2 log a."""
    if k == -1:
        return -2 * mp.log(a)
    return (a ** (-(k + 1)) - a ** (k + 1)) / (k + 1)


def _require_progression(cfg, rep):
    if cfg.progression is None:
        raise ValueError("%s requires the arithmetic-progression configuration"
                         % rep.value)
    return cfg.progression


def mu(cfg, rep=MuRepresentation.BORDERED_GRAM, ctx=DEFAULT_CTX):
    """mu(x) of the modified space through the selected representation."""
    with ctx.workdps(10):
        n = cfg.n
        if n == 0:
            return mp.mpf(0)
        x = cfg.x
        if rep is MuRepresentation.COEFFICIENTS:
            data = _config_data(cfg.kappas, x, ctx.digits)
            mu_c = (-1) ** n * 2 * mp.fsum(
                cj * mp.e ** (kap * x) for cj, kap in zip(data["c"], cfg.kappas))
            mu_d = 2 * mp.fsum(
                dj * mp.e ** (-kap * x) for dj, kap in zip(data["d"], cfg.kappas))
            diff = abs(mu_c - mu_d)
            scale = max(abs(mu_c), abs(mu_d))
            if scale > 0 and diff / scale > mp.mpf(10) ** (-ctx.digits + 20):
                raise ConsistencyError(
                    "c-sum and d-sum forms of mu disagree: %s vs %s"
                    % (mp.nstr(mu_c, 20), mp.nstr(mu_d, 20)))
            return +mu_c
        if rep is MuRepresentation.BORDERED_GRAM:
            data = _config_data(cfg.kappas, x, ctx.digits)
            rows = []
            for i, kap in enumerate(cfg.kappas):
                rows.append(list(data["gram"][i]) + [mp.e ** (-x * kap)])
            rows.append([mp.e ** (x * kap) for kap in cfg.kappas] + [mp.mpf(0)])
            bordered = det(Matrix(rows), ctx)
            return +(2 * (-1) ** n * bordered / data["gn"])
        if rep is MuRepresentation.WRONSKIAN_RATIO:
            for i in range(n):
                for j in range(n):
                    if cfg.kappas[i] + cfg.kappas[j] == 0:
                        raise ValueError("kappa_i + kappa_j = 0 is outside the "
                                         "Wronskian representation")
            ch_gens = [("ch", kap) for kap in cfg.kappas]
            sh_gens = [("sh", kap) for kap in cfg.kappas]
            w_ch = _wronskian(ch_gens, x, ctx)
            w_sh = _wronskian(sh_gens, x, ctx)
            if w_ch == 0 or w_sh == 0:
                raise ConditioningError("vanishing seed Wronskian", condition=None)
            dw_ch = _wronskian(ch_gens, x, ctx, last_row=n)
            dw_sh = _wronskian(sh_gens, x, ctx, last_row=n)
            return +(-(dw_ch / w_ch - dw_sh / w_sh))
        if rep is MuRepresentation.HANKEL_QUOTIENT:
            nu, _ = _require_progression(cfg, rep)
            a = cfg.a_value()
            den = det(Matrix([[hankel_moment(nu + i + j, a)
                               for j in range(n)] for i in range(n)]), ctx)
            if n == 1:
                num = mp.mpf(1)
            else:
                s = a + 1 / a
                num = det(Matrix([[
                    -hankel_moment(nu + i + j + 2, a)
                    + s * hankel_moment(nu + i + j + 1, a)
                    - hankel_moment(nu + i + j, a)
                    for j in range(n - 1)] for i in range(n - 1)]), ctx)
            if den == 0:
                raise ConditioningError("vanishing moment determinant",
                                        condition=None)
            return +(2 * num / den)
        if rep is MuRepresentation.MULTIPLE_INTEGRAL:
            nu, _ = _require_progression(cfg, rep)
            if n > 3:
                raise ValueError("multiple-integral route is limited to n <= 3")
            a = cfg.a_value()
            alpha = 1 / (a * a) - 1

            def density(*u):
                p = mp.mpf(1)
                for i in range(len(u)):
                    for j in range(i + 1, len(u)):
                        p *= (u[j] - u[i]) ** 2
                for ui in u:
                    p *= (1 + alpha * ui) ** nu
                return p

            def density_weighted(*u):
                p = density(*u)
                for ui in u:
                    p *= ui * (1 - ui)
                return p

            tol = mp.mpf(10) ** (-min(ctx.digits // 2, 8))
            j_den = quad_nd(density, n, 8, ctx, tol=tol, max_refinements=4)
            if n == 1:
                j_num = mp.mpf(1)
            else:
                j_num = quad_nd(density_weighted, n - 1, 8, ctx, tol=tol,
                                max_refinements=4)
            return +(2 * n / ((1 / a - a) * a ** nu) * j_num / j_den)
        if rep is MuRepresentation.FROM_XY:
            nu, _ = _require_progression(cfg, rep)
            from . import painleve
            state = painleve.xy_state(nu, n, cfg.a_value(), ctx)
            mu_nu, _ = painleve.mu_from_xy(state, ctx, cross_check=False)
            return +mu_nu
        raise ValueError("unknown representation %r" % rep)


def tau_consistency(cfg, ctx=DEFAULT_CTX, tol=None):
    """Residual of mu^2 + (d/dx)^2 log g_n (tau-function law for tau = g_n)."""
    if tol is None:
        tol = mp.mpf("1e-6")
    with ctx.workdps(10):
        mu_val = mu(cfg, MuRepresentation.BORDERED_GRAM, ctx)

        def log_gn(xx):
            cfg2 = ZeroConfig(cfg.kappas, xx, progression=cfg.progression)
            return mp.log(_config_data(cfg2.kappas, cfg2.x, ctx.digits)["gn"])

        d2, _ = fd_derivative(log_gn, cfg.x, 2, ctx)
        residual = mu_val ** 2 + d2
        scale = max(mu_val ** 2, abs(d2), mp.mpf(1))
        return ResidualReport.from_residual(
            "tau_consistency", {"n": cfg.n, "x": cfg.x}, residual, scale, tol)


def krein_residual(cfg, t, ctx=DEFAULT_CTX, tol=None):
    """Residuals of the first-order x-system for E(it), F(it).

    dE/dx = t E + mu F and dF/dx = -t F + mu E; x-derivatives re-solve the
    coefficient systems at every stencil node.
    """
    if tol is None:
        tol = mp.mpf("1e-6")
    with ctx.workdps(10):
        t = mp.mpf(t)

        def e_at(xx):
            cfg2 = ZeroConfig(cfg.kappas, xx, progression=cfg.progression)
            return eval_EF(cfg2, t, ctx=ctx)[0]

        def f_at(xx):
            cfg2 = ZeroConfig(cfg.kappas, xx, progression=cfg.progression)
            return eval_EF(cfg2, t, ctx=ctx)[1]

        de, _ = fd_derivative(e_at, cfg.x, 1, ctx)
        df, _ = fd_derivative(f_at, cfg.x, 1, ctx)
        e0, f0 = eval_EF(cfg, t, ctx=ctx)
        mu_val = mu(cfg, MuRepresentation.BORDERED_GRAM, ctx)
        r1 = de - t * e0 - mu_val * f0
        r2 = df + t * f0 - mu_val * e0
        scale = max(abs(de), abs(df), abs(t * e0), abs(t * f0),
                    abs(mu_val * e0), abs(mu_val * f0), mp.mpf(1))
        worst = max(abs(r1), abs(r2))
        return ResidualReport.from_residual(
            "krein_system", {"n": cfg.n, "t": t, "x": cfg.x}, worst, scale, tol)


def coefficient_ode_residual(cfg, ctx=DEFAULT_CTX, tol=None):
    """Residuals of c_j' - kappa_j c_j = mu d_j and d_j' + kappa_j d_j = mu c_j."""
    if tol is None:
        tol = mp.mpf("1e-6")
    with ctx.workdps(10):
        data = _config_data(cfg.kappas, cfg.x, ctx.digits)
        mu_val = mu(cfg, MuRepresentation.BORDERED_GRAM, ctx)
        worst = mp.mpf(0)
        scale = mp.mpf(1)
        for j, kap in enumerate(cfg.kappas):
            def c_at(xx, j=j):
                return _config_data(cfg.kappas, xx, ctx.digits)["c"][j]

            def d_at(xx, j=j):
                return _config_data(cfg.kappas, xx, ctx.digits)["d"][j]

            dc, _ = fd_derivative(c_at, cfg.x, 1, ctx)
            dd, _ = fd_derivative(d_at, cfg.x, 1, ctx)
            cj, dj = data["c"][j], data["d"][j]
            r1 = dc - kap * cj - mu_val * dj
            r2 = dd + kap * dj - mu_val * cj
            worst = max(worst, abs(r1), abs(r2))
            scale = max(scale, abs(dc), abs(dd), abs(kap * cj), abs(kap * dj))
        return ResidualReport.from_residual(
            "coefficient_odes", {"n": cfg.n, "x": cfg.x}, worst, scale, tol)


# ---------------------------------------------------------------------------
# truncated Taylor jets: the honest way to iterate Darboux steps, since every
# step consumes one derivative order of every participating function
# ---------------------------------------------------------------------------

class Jet:
    """Taylor coefficients f^(k)(x0)/k! of a function at a fixed point."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = tuple(coeffs)

    @classmethod
    def const(cls, value, order):
        return cls([value] + [mp.mpf(0)] * order)

    @classmethod
    def from_seed(cls, kind, param, x0, order):
        return cls([seed_derivative(kind, param, x0, m) / mp.factorial(m)
                    for m in range(order + 1)])

    @property
    def order(self):
        return len(self.c) - 1

    @property
    def value(self):
        return self.c[0]

    def deriv_value(self, m):
        return self.c[m] * mp.factorial(m)

    def diff(self):
        if self.order < 1:
            raise ValueError("jet order exhausted")
        return Jet([(k + 1) * self.c[k + 1] for k in range(self.order)])

    def _coerce(self, other, length):
        if isinstance(other, Jet):
            return other.c[:length]
        return (other,) + (mp.mpf(0),) * (length - 1)

    def __add__(self, other):
        length = min(len(self.c), len(other.c)) if isinstance(other, Jet) \
            else len(self.c)
        oc = self._coerce(other, length)
        return Jet([self.c[k] + oc[k] for k in range(length)])

    def __sub__(self, other):
        length = min(len(self.c), len(other.c)) if isinstance(other, Jet) \
            else len(self.c)
        oc = self._coerce(other, length)
        return Jet([self.c[k] - oc[k] for k in range(length)])

    def __neg__(self):
        return Jet([-v for v in self.c])

    def __mul__(self, other):
        if isinstance(other, Jet):
            length = min(len(self.c), len(other.c))
            return Jet([sum(self.c[i] * other.c[k - i] for i in range(k + 1))
                        for k in range(length)])
        return Jet([v * other for v in self.c])

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet([v / other for v in self.c])
        length = min(len(self.c), len(other.c))
        if other.c[0] == 0:
            raise ZeroDivisionError("jet division by a vanishing function")
        out = []
        for k in range(length):
            acc = self.c[k]
            for i in range(k):
                acc -= out[i] * other.c[k - i]
            out.append(acc / other.c[0])
        return Jet(out)

    def log_second_derivative(self):
        """(log f)'' at the expansion point."""
        lf = self.diff() / self
        return lf.diff().value


def darboux_pair_transform(alpha, beta, f, g):
    """One simultaneous Darboux step (f, g) -> (f' - (a'/a) f, g' - (b'/b) g)."""
    return (f.diff() - (alpha.diff() / alpha) * f,
            g.diff() - (beta.diff() / beta) * g)


def darboux_step(state, triple, ctx=None):
    """Transform a chain state and a test triple by one simultaneous step.

    state = (mu, tau, (alpha, beta, kappa_seed)) and triple = (a, b, k), all
    function-like Jet objects except the spectral parameters.  Returns the new
    (mu1, tau1) and the transformed triple; mu1 = mu - (log(alpha/beta))' and
    tau1 = tau * alpha * beta.
    """
    mu_j, tau_j, (alpha, beta, _kappa) = state
    a, b, k = triple
    if alpha.value == 0 or beta.value == 0:
        raise ValueError("seed vanishes at the expansion point")
    a1, b1 = darboux_pair_transform(alpha, beta, a, b)
    la = alpha.diff() / alpha
    lb = beta.diff() / beta
    mu1 = mu_j - la + lb
    tau1 = tau_j * alpha * beta
    return (mu1, tau1), (a1, b1, k)


@dataclass(frozen=True)
class DarbouxChain:
    """Seed data for the iterated transform starting from the flat system.

    Seeds are (ch(kappa_j x), sh(kappa_j x), kappa_j); initial mu is 0 and the
    initial tau is 1.  Seed Wronskians must not vanish at the working point.
    """

    kappas: tuple
    x: object

    def __post_init__(self):
        from .pwspace import _CONFIG_DPS
        with mp.workdps(_CONFIG_DPS):
            object.__setattr__(self, "kappas",
                               tuple(mp.mpf(k) for k in self.kappas))
            object.__setattr__(self, "x", mp.mpf(self.x))
        if self.x <= 0:
            raise ValueError("x must be positive")

    @property
    def n(self):
        return len(self.kappas)


def crum_transform(chain, w, ctx=DEFAULT_CTX):
    """Direct Wronskian form of the n-fold transform applied to (cos, sin, w).

    a_n = W(ch_1..ch_n, cos(xw))/W(ch_1..ch_n), b_n likewise with sh/sin;
    mu_n = -(d/dx) log(W_ch/W_sh) with analytic Wronskian derivatives;
    tau_n = W_ch * W_sh.
    """
    with ctx.workdps(10):
        x = chain.x
        w = mp.mpmathify(w)
        if chain.n == 0:
            return (+mp.cos(x * w), +mp.sin(x * w), mp.mpf(0), mp.mpf(1))
        ch_gens = [("ch", kap) for kap in chain.kappas]
        sh_gens = [("sh", kap) for kap in chain.kappas]
        for m in range(1, chain.n + 1):
            if _wronskian(ch_gens[:m], x, ctx) == 0 or \
               _wronskian(sh_gens[:m], x, ctx) == 0:
                raise ConditioningError("prefix seed Wronskian vanishes",
                                        condition=None)
        w_ch = _wronskian(ch_gens, x, ctx)
        w_sh = _wronskian(sh_gens, x, ctx)
        a_n = _wronskian(ch_gens + [("cos", w)], x, ctx) / w_ch
        b_n = _wronskian(sh_gens + [("sin", w)], x, ctx) / w_sh
        n = chain.n
        dw_ch = _wronskian(ch_gens, x, ctx, last_row=n)
        dw_sh = _wronskian(sh_gens, x, ctx, last_row=n)
        mu_n = -(dw_ch / w_ch - dw_sh / w_sh)
        tau_n = w_ch * w_sh
        return +a_n, +b_n, +mu_n, +tau_n


def iterated_darboux(chain, w, order_margin=6):
    """n-fold composition of darboux_step on jets at the chain's x.

    Returns (a_n, b_n, mu_n) jets after all steps; the caller compares values
    against crum_transform.  Jets start at order n + order_margin.
    """
    x0 = chain.x
    n = chain.n
    order = n + order_margin
    seeds = [(Jet.from_seed("ch", kap, x0, order),
              Jet.from_seed("sh", kap, x0, order), kap)
             for kap in chain.kappas]
    mu_j = Jet.const(mp.mpf(0), order)
    tau_j = Jet.const(mp.mpf(1), order)
    triple = (Jet.from_seed("cos", mp.mpmathify(w), x0, order),
              Jet.from_seed("sin", mp.mpmathify(w), x0, order), w)
    for i in range(n):
        state = (mu_j, tau_j, seeds[i])
        (mu_j, tau_j), triple = darboux_step(state, triple)
        alpha_i, beta_i, _ = seeds[i]
        for j in range(i + 1, n):
            aj, bj, kj = seeds[j]
            aj1, bj1 = darboux_pair_transform(alpha_i, beta_i, aj, bj)
            seeds[j] = (aj1, bj1, kj)
    return triple[0], triple[1], mu_j, tau_j


def schrodinger_residual(chain, w, ctx=DEFAULT_CTX, tol=None):
    """Residuals of -f'' + V f = w^2 f for the transformed pair.

    V+ = mu_n^2 + mu_n' and V- = mu_n^2 - mu_n'; second derivatives of a_n,
    b_n and the mu_n derivative are taken by finite differences.  Also checks
    V+ against -2 (log W_ch)'' and V- against -2 (log W_sh)'' (flat start).
    """
    if tol is None:
        tol = mp.mpf("1e-6")
    with ctx.workdps(10):
        w = mp.mpmathify(w)
        x0 = chain.x

        def parts(xx):
            return crum_transform(replace(chain, x=xx), w, ctx)

        a0, b0, mu0, _ = parts(x0)
        d2a, _ = fd_derivative(lambda xx: parts(xx)[0], x0, 2, ctx)
        d2b, _ = fd_derivative(lambda xx: parts(xx)[1], x0, 2, ctx)
        dmu, _ = fd_derivative(lambda xx: parts(xx)[2], x0, 1, ctx)
        vp = mu0 ** 2 + dmu
        vm = mu0 ** 2 - dmu
        r_a = -d2a + vp * a0 - w * w * a0
        r_b = -d2b + vm * b0 - w * w * b0
        if chain.n:
            ch_gens = [("ch", kap) for kap in chain.kappas]
            sh_gens = [("sh", kap) for kap in chain.kappas]

            def log_wch(xx):
                return mp.log(abs(_wronskian(ch_gens, xx, ctx)))

            def log_wsh(xx):
                return mp.log(abs(_wronskian(sh_gens, xx, ctx)))

            d2ch, _ = fd_derivative(log_wch, x0, 2, ctx)
            d2sh, _ = fd_derivative(log_wsh, x0, 2, ctx)
            r_vp = vp - (-2 * d2ch)
            r_vm = vm - (-2 * d2sh)
        else:
            r_vp = r_vm = mp.mpf(0)
        worst = max(abs(r_a), abs(r_b), abs(r_vp), abs(r_vm))
        scale = max(abs(d2a), abs(d2b), abs(w * w * a0), abs(w * w * b0),
                    abs(vp), abs(vm), mp.mpf(1))
        return ResidualReport.from_residual(
            "schrodinger", {"n": chain.n, "w": w, "x": x0}, worst, scale, tol)
