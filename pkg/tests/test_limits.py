"""Limit families: Pastro suite, limit measures, finite weights."""

import cmath
import math
from fractions import Fraction

import pytest

from ebiortho.biortho import EllipticParams, rtilde
from ebiortho.errors import (
    BranchError,
    DomainError,
    HypothesisError,
    NonConvergence,
)
from ebiortho.limits import (
    aw_phi43,
    finite_measure,
    finite_weights,
    nr_measure,
    numeric_limit,
    pastro_P,
    pastro_inner_product,
    pastro_p,
    pastro_q,
    sb_measure,
    sigma2_measure,
    sigma2_series,
    sigma_measure,
)
from ebiortho.qkernel import qpoch_finite

ONE = lambda z: 1.0
H = Fraction(1, 2)
Q4 = Fraction(1, 4)


# ---------------------------------------------------------------------------
# Pastro suite


def test_pastro_biorthogonality_small():
    A, B, q = 0.55, 0.4, 0.45
    for n in range(4):
        for m in range(4):
            v = pastro_inner_product(
                lambda w, n=n: pastro_p(n, w, A, B, q),
                lambda w, m=m: pastro_q(m, w, A, B, q),
                A,
                B,
                q,
            )
            if n == m:
                h = (A * B / q) ** n * qpoch_finite(q, q, n) / qpoch_finite(
                    A * B / q, q, n
                )
                assert abs(v - h) < 1e-10
            else:
                assert abs(v) < 1e-10


def test_pastro_P_circle_variable_dictionary():
    q = 0.45
    t = (1.7, 1.2, 2.3, 0.9)
    u0 = 0.6
    u1 = q / (t[0] * t[1] * t[2] * t[3] * u0)
    A = q / (t[1] * u0)
    B = q / (t[3] * u1)
    for z in (1.3 + 0.2j, 0.8 - 0.5j):
        w = q**0.5 / (t[2] * t[3] * u1 * z)
        for n in range(5):
            lhs = pastro_P(n, z, t, (u0, u1), q)
            rhs = pastro_p(n, w, A, B, q)
            assert abs(lhs - rhs) < 1e-9 * max(abs(rhs), 1.0)


def test_pastro_Q_relation():
    # the u-swapped family is the same family at permuted parameters
    q = 0.45
    t = (1.7, 1.2, 2.3, 0.9)
    u0 = 0.6
    u1 = q / (t[0] * t[1] * t[2] * t[3] * u0)
    A = q / (t[1] * u0)
    B = q / (t[3] * u1)
    for z in (1.3 + 0.2j, 0.8 - 0.5j):
        w = q**0.5 / (t[2] * t[3] * u1 * z)
        for n in range(5):
            Qn = (1.0 / (u0 * t[0] * t[1] * t[2])) ** n * pastro_P(
                n, 1.0 / z, (t[2], t[3], t[0], t[1]), (u1, u0), q
            )
            rhs = (q / (t[3] * u1)) ** (-n) * pastro_q(n, w, A, B, q)
            assert abs(Qn - rhs) < 1e-9 * max(abs(rhs), 1.0)


def test_pastro_B_eq_q_monomial():
    A, q = 0.55, 0.45
    w = cmath.exp(0.7j)
    for n in range(7):
        assert pastro_p(n, w, A, q, q) == pytest.approx(
            w**n * A**n * q ** (-n / 2), abs=1e-14
        )


def test_pastro_P_normalized_at_t0():
    q = 0.45
    t = (1.7, 1.2, 2.3, 0.9)
    u0 = 0.6
    u1 = q / (t[0] * t[1] * t[2] * t[3] * u0)
    for n in range(5):
        assert abs(pastro_P(n, t[0], t, (u0, u1), q) - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# limit measures

Q_MEAS = 0.35


def _solved_last(ts):
    prod = 1.0
    for x in ts:
        prod *= x
    return list(ts) + [Q_MEAS / prod]


def test_nr_measure_normalization():
    a = (0, 0, H, H, 0, 0)
    t = [0.4, 0.5, 0.7, 0.45, 0.55]
    t = t[:3] + [_solved_last(t)[-1]] + t[3:]
    m = nr_measure(a, t, Q_MEAS)
    assert abs(m.apply(ONE, ONE) - 1.0) < 1e-12


def test_sb_measure_normalization():
    a = tuple(Fraction(x, 12) for x in (-1, -1, 5, 5, -1, 5))
    t = _solved_last([0.8, 0.7, 0.5, 0.6, 0.75])
    m = sb_measure(a, t, Q_MEAS)
    assert m.triple == (0, 1, 4)
    assert abs(m.apply(ONE, ONE) - 1.0) < 1e-12


def test_sigma_measure_normalization():
    a = (-H, Q4, Q4, Q4, Q4, H)
    t = _solved_last([0.8, 0.5, 0.6, 0.7, 0.45])
    m = sigma_measure(a, t, Q_MEAS)
    assert m.base_index == 0
    assert abs(m.apply(ONE, ONE) - 1.0) < 1e-12


def test_sigma_measure_hypothesis_guard():
    # two zero entries make a pair sum leave (0, 1]
    a = (-Q4, 0, Q4, H, 0, H)
    t = _solved_last([0.8, 0.5, 0.6, 0.7, 0.45])
    with pytest.raises(HypothesisError):
        sigma_measure(a, t, Q_MEAS)


def test_sigma2_series_and_integral_agree():
    a = (-Q4, -Q4, Q4, Q4, Q4, Fraction(3, 4))
    t = _solved_last([0.75, 0.65, 0.5, 0.6, 0.55])
    s = sigma2_series(a, t, Q_MEAS)
    assert abs(s.apply(ONE, ONE) - 1.0) < 1e-12
    m1 = sigma2_measure(a, t, Q_MEAS, 0.9)
    m2 = sigma2_measure(a, t, Q_MEAS, 1.7)
    v1 = m1.apply(ONE, ONE)
    v2 = m2.apply(ONE, ONE)
    assert abs(v1 - 1.0) < 1e-12
    # the deformation parameter w must not matter
    assert abs(v1 - v2) < 1e-12


FW_ALPHA = (0, 0, 1, 0, 0, 0)
FW_Q = 0.3
FW_N = 1
FW_T = None


def _fw_params():
    global FW_T
    if FW_T is None:
        t0, t2, t3, t4 = 0.9, 0.3, 0.4, 0.35
        t1 = FW_Q ** (-FW_N) / t0
        t5 = FW_Q ** (FW_N + 1) / (t2 * t3 * t4)
        FW_T = (t0, t1, t2, t3, t4, t5)
    return FW_T


def test_finite_weights_sum_to_one():
    t = _fw_params()
    total = sum(finite_weights(k, FW_ALPHA, t, FW_N, FW_Q) for k in range(FW_N + 1))
    assert abs(total - 1.0) < 1e-12


def test_finite_measure_normalization():
    t = _fw_params()
    m = finite_measure(FW_ALPHA, t, FW_N, FW_Q)
    assert abs(m.apply(ONE, ONE) - 1.0) < 1e-12


def test_finite_weights_branch_guards():
    t = _fw_params()
    with pytest.raises(BranchError):
        finite_weights(0, (Q4, -Q4, 1, 0, 0, 0), t, FW_N, FW_Q)
    with pytest.raises(DomainError):
        finite_weights(2, FW_ALPHA, t, FW_N, FW_Q)
    bad_t = (0.9, 0.9, 0.3, 0.4, 0.35, 0.5)
    with pytest.raises(DomainError):
        finite_weights(0, FW_ALPHA, bad_t, FW_N, FW_Q)


# ---------------------------------------------------------------------------
# numeric limits


_AW_Q = 0.65
_AW_T = (2.0, 1.3, 3.1, 1.0)
_AW_Z = 1.3
_AW_U0 = 0.4


def _aw_scaled(n, p):
    u1 = _AW_Q / (_AW_T[0] * _AW_T[1] * _AW_T[2] * _AW_T[3] * _AW_U0)
    par = EllipticParams(
        _AW_T, (_AW_U0 * p**0.5, u1 * p**0.5), _AW_Q, p
    )
    return rtilde(n, _AW_Z, par)


def test_aw_phi43_validated_by_numeric_limit():
    from ebiortho.exponents import ExponentVector

    u1 = _AW_Q / (_AW_T[0] * _AW_T[1] * _AW_T[2] * _AW_T[3] * _AW_U0)
    v = ExponentVector((0, 0, 0, 0), (H, H), 0)
    ps = [10 ** (-2.5 - 0.5 * i) for i in range(6)]
    for n in (1, 2):
        lim, val = numeric_limit(lambda p, n=n: _aw_scaled(n, p), v, ps)
        assert abs(val) < 1e-9
        target = aw_phi43(n, _AW_Z, _AW_T, (_AW_U0, u1), _AW_Q)
        assert abs(lim - target) < 1e-4 * abs(target)


def test_numeric_limit_guard():
    from ebiortho.exponents import ExponentVector

    v = ExponentVector((0, 0, 0, 0), (H, H), 0)
    with pytest.raises(DomainError):
        numeric_limit(lambda p: 1.0, v, [1e-3])
    with pytest.raises(NonConvergence):
        # oscillating log-slope trips the stabilization guard
        numeric_limit(
            lambda p: 1.0 + math.sin(math.log(p)) * 5.0,
            v,
            [1e-2, 1e-3, 1e-4, 1e-5],
        )
