"""Corner values, the (X, Y) system, q and Painleve VI, maps, identities."""

from fractions import Fraction

import pytest
from mpmath import mp

from pwzeros import painleve as P
from pwzeros.krein import MuRepresentation, mu
from pwzeros.numerics import PrecisionCtx, fd_derivative
from pwzeros.pwspace import ZeroConfig

CTX = PrecisionCtx()


def _x_of(a):
    return -mp.log(mp.mpf(a))


def test_corner_values_n1_nu0_closed_forms():
    # kappa = 1/2 gives e = -e^{-x/2} sinh x, f = -e^{x/2} sinh x,
    # g = h = tanh x (the nu+1 = 1 progression evaluated at the origin)
    with mp.workdps(60):
        a = mp.mpf("0.5")
        x = _x_of(a)
        corners = P.corner_values(0, 1, a, CTX)
        assert abs(corners.e_nu + mp.e ** (-x / 2) * mp.sinh(x)) \
            < mp.mpf("1e-40")
        assert abs(corners.f_nu + mp.e ** (x / 2) * mp.sinh(x)) \
            < mp.mpf("1e-40")
        assert abs(corners.g_nu1 - mp.tanh(x)) < mp.mpf("1e-40")
        assert abs(corners.h_nu1 - mp.tanh(x)) < mp.mpf("1e-40")


def test_corner_sign_pattern():
    for nu, n, a in ((0, 1, "0.5"), (1, 2, "0.35"), (mp.mpf("0.5"), 3, "0.6")):
        corners = P.corner_values(nu, n, mp.mpf(a), CTX)
        sgn = (-1) ** n
        assert sgn * corners.e_nu > 0
        assert sgn * corners.f_nu > 0
        assert corners.g_nu1 > 0 and corners.h_nu1 > 0


def test_xy_state_closed_forms_n1_nu0():
    st = P.xy_state(0, 1, mp.mpf("0.5"), CTX)
    assert abs(st.X - 1) < mp.mpf("1e-40")
    assert abs(st.Y - mp.mpf("0.5")) < mp.mpf("1e-40")
    # T = 1/(1 + aXY) with aXY = 1/4
    assert abs(st.T - mp.mpf("0.8")) < mp.mpf("1e-40")


def test_xy_state_double_expression_consistency():
    # recompute both defining quotients independently at (0, 2, 0.4)
    a = mp.mpf("0.4")
    st = P.xy_state(0, 2, a, CTX)
    corners = P.corner_values(0, 2, a, CTX)
    from pwzeros.pwspace import solve_coefficients
    cfg1 = ZeroConfig.from_progression(1, 2, a=a, ctx=CTX)
    co1 = solve_coefficients(cfg1, CTX)
    x_alt = corners.e_nu / corners.f_nu / a
    y_alt = -co1.c[1] / co1.d[1] / a
    assert abs(st.X - x_alt) < mp.mpf("1e-40") * abs(st.X)
    assert abs(st.Y - y_alt) < mp.mpf("1e-40") * abs(st.Y)
    assert abs(1 + a * st.X * st.Y) > mp.mpf("0.1")


def test_mu_from_xy_closed_forms_and_cross_module():
    with mp.workdps(60):
        a = mp.mpf("0.5")
        x = _x_of(a)
        st = P.xy_state(0, 1, a, CTX)
        mu_nu, mu_nu1 = P.mu_from_xy(st, CTX)
        assert abs(mu_nu - 1 / mp.sinh(x)) < mp.mpf("1e-40")
        assert abs(mu_nu1 - 2 / mp.sinh(2 * x)) < mp.mpf("1e-40")
    st2 = P.xy_state(1, 2, mp.mpf("0.6"), CTX)
    got, got1 = P.mu_from_xy(st2, CTX)
    cfg = ZeroConfig.from_progression(1, 2, a="0.6", ctx=CTX)
    cfg1 = ZeroConfig.from_progression(2, 2, a="0.6", ctx=CTX)
    assert abs(got - mu(cfg, MuRepresentation.BORDERED_GRAM, CTX)) \
        < mp.mpf("1e-40")
    assert abs(got1 - mu(cfg1, MuRepresentation.BORDERED_GRAM, CTX)) \
        < mp.mpf("1e-40")


def test_mu_from_xy_degenerate_n0():
    st = P.XYState(X=mp.mpf(1), Y=mp.mpf("0.5"), T=mp.mpf("0.8"),
                   nu=mp.mpf(0), n=0, a=mp.mpf("0.5"))
    mu_nu, mu_nu1 = P.mu_from_xy(st, CTX)
    assert mu_nu == 0 and mu_nu1 == 0


def test_nonlinear_residuals():
    assert P.nonlinear_residual(0, 1, mp.mpf("0.5"), CTX).passed
    rep = P.nonlinear_residual(1, 2, mp.mpf("0.3"), CTX)
    assert rep.passed and rep.rel_residual <= mp.mpf("1e-6")


def test_nonlinear_first_equation_independent_n1_oracle():
    # closed n=1 forms: X(nu,1) from the corner quotient of explicit E/F
    # evaluations, mu_(nu+1) = (nu+2)/sinh((nu+2)x); the system's first
    # equation is then checked with an in-test finite difference of X alone
    nu = mp.mpf(1)

    def x_closed(a):
        a = mp.mpf(a)
        x = -mp.log(a)
        kap = (nu + 2) / 2  # the (nu+1)-progression with n = 1
        c1 = -kap * mp.e ** (-kap * x) / mp.sinh(2 * kap * x)
        d1 = kap * mp.e ** (kap * x) / mp.sinh(2 * kap * x)
        t0 = -nu / 2
        g = mp.e ** (x * t0) + c1 * 2 * mp.sinh((t0 - kap) * x) / (t0 - kap)
        h = -mp.e ** (-x * t0) + d1 * 2 * mp.sinh((t0 - kap) * x) / (t0 - kap)
        return g / h

    a0 = mp.mpf("0.45")
    st = P.xy_state(nu, 1, a0, CTX)
    assert abs(st.X - x_closed(a0)) < mp.mpf("1e-35") * abs(st.X)
    dx, _ = fd_derivative(x_closed, a0, 1, CTX)
    x0 = -mp.log(a0)
    mu_up = (nu + 2) / mp.sinh((nu + 2) * x0)
    resid = a0 * dx - nu * st.X + (1 - st.X ** 2) * mu_up
    assert abs(resid) < mp.mpf("1e-25")


def test_q_value_closed_form_and_cross_formula():
    with mp.workdps(60):
        a = mp.mpf("0.5")
        b = a * a
        q = P.q_value(0, 1, a, CTX)
        assert abs(q - 2 * b / (1 + b)) < mp.mpf("1e-40")
    q2 = P.q_value(mp.mpf("0.5"), 2, mp.mpf("0.45"), CTX)
    assert mp.isfinite(q2)


def test_q_derivatives_closed_form():
    with mp.workdps(60):
        a = mp.mpf("0.5")
        b = a * a
        dq, d2q = P.q_derivatives(0, 1, a, CTX)
        assert abs(dq - 2 / (1 + b) ** 2) < mp.mpf("1e-40")
        assert abs(d2q + 4 / (1 + b) ** 3) < mp.mpf("1e-38")


def test_q_derivatives_fd_cross_check_enabled():
    dq, d2q = P.q_derivatives(0, 2, mp.mpf("0.5"), CTX, fd_check=True)
    assert mp.isfinite(dq) and mp.isfinite(d2q)


def test_T_equation_residual_by_fd():
    nu, n = mp.mpf(1), 2

    def t_of_b(bb):
        return P.xy_state(nu, n, mp.sqrt(bb), CTX).T

    a = mp.mpf("0.55")
    b = a * a
    dt_fd, _ = fd_derivative(t_of_b, b, 1, CTX)
    st = P.xy_state(nu, n, a, CTX)
    q = P.q_value(nu, n, a, CTX)
    dt_closed = P._dt_db_closed(q, st.T, b, n, CTX)
    assert abs(dt_fd - dt_closed) < mp.mpf("1e-6") * max(1, abs(dt_closed))


def test_pvi_params():
    params = P.PVIParams.from_nu_n(0, 1)
    assert (params.alpha, params.beta, params.gamma, params.delta) == \
        (mp.mpf("0.5"), mp.mpf(-2), mp.mpf("0.5"), mp.mpf(0))
    p2 = P.PVIParams.from_nu_n(mp.mpf("0.5"), 3)
    assert abs(p2.alpha - mp.mpf("6.125")) < mp.mpf("1e-45")
    assert abs(p2.beta + mp.mpf("10.125")) < mp.mpf("1e-45")
    assert p2.gamma == mp.mpf("4.5") and p2.delta == mp.mpf(-4)


def test_pvi_residual_closed_form_case():
    for a in ("0.3", "0.5", "0.7"):
        rep = P.pvi_residual(0, 1, mp.mpf(a), CTX, tol=mp.mpf("1e-8"))
        assert rep.passed
        assert rep.rel_residual <= mp.mpf("1e-8")


def test_pvi_residual_generic_cases():
    for nu, n, a in ((mp.mpf("0.5"), 2, "0.4"), (2, 3, "0.6"), (1, 2, "0.25")):
        rep = P.pvi_residual(nu, n, mp.mpf(a), CTX)
        assert rep.passed and rep.rel_residual <= mp.mpf("1e-6")


def test_backlund_maps_and_residuals():
    st = P.xy_state(0, 2, mp.mpf("0.5"), CTX)
    z_img, w_img = P.backlund_maps(st, CTX)
    assert z_img is not None and mp.isfinite(w_img)
    for rep in P.backlund_residuals(0, 2, mp.mpf("0.5"), CTX):
        assert rep.passed and rep.rel_residual <= mp.mpf("1e-6")
    reps = P.backlund_residuals(1, 1, mp.mpf("0.5"), CTX)
    assert len(reps) == 1 and reps[0].identity == "backlund_WX"
    assert reps[0].passed


def test_backlund_z_absent_for_n1():
    st = P.xy_state(0, 1, mp.mpf("0.5"), CTX)
    z_img, w_img = P.backlund_maps(st, CTX)
    assert z_img is None


def test_backlund_degeneracy_guard():
    st = P.XYState(X=mp.mpf(1), Y=mp.mpf("0.5"), T=mp.mpf("0.8"),
                   nu=mp.mpf(1), n=2, a=mp.mpf("0.5"))
    with pytest.raises(P.DegenerateMapError):
        P.backlund_maps(st, CTX)  # 1 - X^2 = 0 with nonzero coefficient


def test_pole_guards():
    with pytest.raises(P.PoleError):
        P._dt_db_closed(mp.mpf("0.25"), mp.mpf("0.8"), mp.mpf("0.25"),
                        1, CTX)  # q = b
    with pytest.raises(P.PoleError):
        P._dq_db_closed(mp.mpf("0.4"), mp.mpf("0.8"), mp.mpf(0), mp.mpf(0),
                        1, CTX)  # b = 0
    st = P.XYState(X=mp.mpf(2), Y=mp.mpf(-1), T=mp.mpf(1), nu=mp.mpf(1),
                   n=2, a=mp.mpf("0.5"))
    with pytest.raises(P.DegenerateMapError):
        P.backlund_maps(st, CTX)  # 1 + aXY = 0


def test_identity_suite_spot_checks():
    reps = P.identity_suite(0, 1, mp.mpf("0.5"),
                            w_samples=(mp.mpf("0.3"),), ctx=CTX)
    by_id = {r.identity: r for r in reps}
    for name in ("rec1", "rec2", "rec3", "rec4", "rr1", "rr2", "rr3", "rr4",
                 "comp1", "comp2", "comp3", "comp4", "murec1", "murec2",
                 "nton1", "nton2"):
        assert name in by_id, name
        assert by_id[name].passed, name
        assert by_id[name].rel_residual <= mp.mpf("1e-8"), name


def test_identity_suite_murec1_value():
    # a mu_nu - mu_(nu+1) = -2 a^2/(1+a^2) for (0, 1)
    with mp.workdps(60):
        a = mp.mpf("0.5")
        reps = P.identity_suite(0, 1, a, w_samples=(mp.mpf("0.3"),), ctx=CTX)
        murec1 = next(r for r in reps if r.identity == "murec1")
        expected = -2 * a * a / (1 + a * a)
        assert abs(murec1.lhs - expected) < mp.mpf("1e-40")


def test_identity_suite_rr4_at_0_2():
    reps = P.identity_suite(0, 2, mp.mpf("0.4"),
                            w_samples=(mp.mpf("0.3"),), ctx=CTX)
    rr4 = next(r for r in reps if r.identity == "rr4")
    assert rr4.passed and rr4.rel_residual <= mp.mpf("1e-8")


def test_rationality_0_1_exact_closed_form():
    num, den = P.reconstructed_q(0, 1, CTX)
    assert num == (Fraction(0), Fraction(2))
    assert den == (Fraction(1), Fraction(1))


def test_rationality_1_1_hand_derived():
    # q(1,1) = a mu(2,1)/mu(1,1) = (3a/2) sinh(2x)/sinh(3x)
    #        = 3b(1+b) / (2(1+b+b^2))
    num, den = P.reconstructed_q(1, 1, CTX)
    assert num == (Fraction(0), Fraction(3, 2), Fraction(3, 2))
    assert den == (Fraction(1), Fraction(1), Fraction(1))


def test_rationality_0_2_exact_holdout():
    rep = P.rationality_check(0, 2, CTX)
    assert rep.passed
    # validate the reconstruction once more at a fresh rational point
    num, den = P.reconstructed_q(0, 2, CTX)
    a = Fraction(7, 19)
    b = a * a
    q_direct = P.q_exact(0, 2, a)
    assert P._poly_eval(list(num), b) == q_direct * P._poly_eval(list(den), b)


def test_rationality_rejects_non_integer_nu():
    with pytest.raises(ValueError):
        P.rationality_check(mp.mpf("0.5"), 1, CTX)


def test_mu_exact_matches_float_route():
    a = Fraction(1, 2)
    exact = P.mu_exact(0, 2, a)
    cfg = ZeroConfig.from_progression(0, 2, a="0.5", ctx=CTX)
    val = mu(cfg, MuRepresentation.BORDERED_GRAM, CTX)
    with mp.workdps(60):
        assert abs(val - mp.mpf(exact.numerator) / exact.denominator) \
            < mp.mpf("1e-40")
