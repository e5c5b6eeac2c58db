"""Interleaved block determinant identity and the sh/ch Gram factorization."""

import random

import pytest
from mpmath import mp

from pwzeros.detid import InterleavedSpec, interleaved_matrix, okada_identity, \
    shch_gram_identity
from pwzeros.numerics import PrecisionCtx

CTX = PrecisionCtx()


def test_interleaved_matrix_1x1():
    m = interleaved_matrix([7], [9], [4])
    assert m.rows == 1 and m[0, 0] == 7


def test_interleaved_matrix_2x2_forced():
    m = interleaved_matrix([1, 1], [1, 1], [2, 3])
    assert m.entries == [[1, 1], [2, 3]]


def test_interleaved_matrix_matches_loop_oracle():
    rng = random.Random(5)
    vals = [rng.randint(1, 9) for _ in range(3)]
    alt = [rng.randint(1, 9) for _ in range(3)]
    k = [rng.randint(1, 9) for _ in range(3)]
    m = interleaved_matrix(vals, alt, k)
    for r in range(3):
        for j in range(3):
            src = vals if r % 2 == 0 else alt
            assert m[r, j] == k[j] ** r * src[j]


def test_interleaved_matrix_length_mismatch():
    with pytest.raises(ValueError):
        interleaved_matrix([1, 2], [1], [1, 2])


def test_okada_n1_both_sides_coincide():
    spec = InterleavedSpec(u=(3,), v=(5,), k=(2,), x=(7,), y=(11,), l=(13,))
    rep = okada_identity(spec, CTX)
    with mp.workdps(60):
        expected = mp.mpf(3 * 11 - 5 * 7) / (13 - 2)
        assert abs(rep.lhs - expected) < mp.mpf("1e-45")
        assert abs(rep.rhs - expected) < mp.mpf("1e-45")
    assert rep.passed


def test_okada_n3_integer_instance():
    rng = random.Random(1)
    u, v, x, y = ([rng.randint(1, 20) for _ in range(3)] for _ in range(4))
    k = rng.sample(range(1, 11), 3)
    l = rng.sample(range(11, 21), 3)
    rep = okada_identity(InterleavedSpec(tuple(u), tuple(v), tuple(k),
                                         tuple(x), tuple(y), tuple(l)), CTX)
    assert rep.passed
    assert rep.rel_residual <= mp.mpf(10) ** (-CTX.digits + 10)


def test_okada_zero_numerators():
    # u = v and x = y makes every entry u_i x_j - u_i x_j = 0
    spec = InterleavedSpec(u=(2, 3), v=(2, 3), k=(1, 2),
                           x=(5, 7), y=(5, 7), l=(4, 6))
    rep = okada_identity(spec, CTX)
    assert rep.lhs == 0 and rep.rhs == 0 and rep.passed


def test_okada_complex_instance():
    rng = random.Random(2)
    def cval():
        return mp.mpc(rng.randint(1, 9), rng.randint(1, 9))
    u, v, x, y = ((cval(), cval()) for _ in range(4))
    spec = InterleavedSpec(u=u, v=v, k=(1, 3), x=x, y=y, l=(5, 8))
    rep = okada_identity(spec, CTX)
    assert rep.passed


def test_interleaved_spec_rejects_cauchy_pole():
    with pytest.raises(ValueError):
        InterleavedSpec(u=(1,), v=(1,), k=(2,), x=(1,), y=(1,), l=(2,))


def test_shch_n1_double_angle():
    # both sides equal sinh(2 kappa x)/(2 kappa); at kappa=2, x=0.5 that is
    # sinh(2)/4 = cosh(1) sinh(1)/2
    rep = shch_gram_identity([2], mp.mpf("0.5"), CTX)
    with mp.workdps(60):
        expected = mp.sinh(2) / 4
        assert abs(rep.lhs - expected) < mp.mpf("1e-45")
        assert abs(rep.rhs - mp.cosh(1) * mp.sinh(1) / 2) < mp.mpf("1e-45")
    assert rep.passed


@pytest.mark.parametrize("kappas,x", [
    ((0.5, 1.5), "0.8"),
    ((1, 2, 3), "0.3"),
    ((0.3, 0.9, 1.4, 2.2, 2.9), "1.1"),
])
def test_shch_identity_random_points(kappas, x):
    rep = shch_gram_identity(list(kappas), mp.mpf(x), CTX)
    assert rep.passed
    assert rep.rel_residual <= mp.mpf(10) ** (-CTX.digits + 10)


def test_shch_symmetric_under_permutation():
    a = shch_gram_identity([0.4, 1.1, 1.9], mp.mpf("0.8"), CTX)
    b = shch_gram_identity([1.9, 0.4, 1.1], mp.mpf("0.8"), CTX)
    assert abs(a.lhs - b.lhs) <= mp.mpf(10) ** (-CTX.digits + 10) * abs(a.lhs)
    assert abs(a.rhs - b.rhs) <= mp.mpf(10) ** (-CTX.digits + 10) * abs(a.rhs)


def test_shch_rejects_opposite_kappas():
    with pytest.raises(ValueError):
        shch_gram_identity([1, -1], mp.mpf(1), CTX)


def test_shch_rejects_duplicate_kappas():
    with pytest.raises(ValueError):
        shch_gram_identity([1, 1], mp.mpf(1), CTX)
