import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from qjacobi import qcore
from qjacobi.exceptions import DomainError, NonConvergence
from qjacobi.qcore import (CompensatedSum, PhiSpec, QBase, compensated_sum, log_qpochhammer,
                           phi, phi_log, qpinf, qpochhammer, qpochhammer_inf, rphis,
                           terminating_degree)

from conftest import mp_phi, mp_poch


@pytest.mark.parametrize("q", [0.3, 0.5, 0.7, 0.95])
@pytest.mark.parametrize("a", [0.2, -1.7, 3.0, 0.999])
@pytest.mark.parametrize("n", [0, 1, 7, 40])
def test_qpochhammer_matches_mpmath(q, a, n):
    expected = float(mpmath.qp(a, q, n))
    assert qpochhammer(a, q, n) == pytest.approx(expected, rel=1e-13, abs=1e-300)


@pytest.mark.parametrize("q", [0.3, 0.5, 0.7, 0.95])
@pytest.mark.parametrize("a", [0.2, -1.7, 0.891, -0.05])
def test_infinite_product_matches_mpmath(q, a):
    with mpmath.workdps(40):
        expected = float(mpmath.qp(a, q))
    got = qpochhammer_inf(a, q)
    assert got.converged
    assert got.value == pytest.approx(expected, rel=1e-14)
    assert got.tail_estimate <= 1e-15


def test_infinite_product_vanishes_on_negative_powers():
    assert qpochhammer_inf(0.5 ** -3, 0.5).value == 0.0


def test_qpinf_is_product_of_factors():
    q = 0.4
    assert qpinf((0.2, -0.3), q) == pytest.approx(
        float(mpmath.qp(0.2, q) * mpmath.qp(-0.3, q)), rel=1e-14)


@pytest.mark.parametrize("a", [0.3, 2.5, -4.0, 0.5 ** -2])
def test_log_qpochhammer_sign_and_magnitude(a):
    q, n = 0.5, 9
    sign, lg = log_qpochhammer(a, q, n)
    direct = qpochhammer(a, q, n)
    if direct == 0:
        assert sign == 0
    else:
        assert sign == math.copysign(1, direct)
        assert lg == pytest.approx(math.log(abs(direct)), rel=1e-13)


def test_base_validation():
    for bad in (0.0, 1.0, -0.5, 1.5, float("nan")):
        with pytest.raises(DomainError):
            QBase(bad)
    with pytest.raises(DomainError):
        qpochhammer(0.2, 0.5, -1)


def test_terminating_degree():
    q = 0.3
    assert terminating_degree(q ** -4, q) == 4
    assert terminating_degree(1.0, q) == 0
    assert terminating_degree(q ** -4 * 1.001, q) is None
    assert terminating_degree(-q ** -2, q) is None


def test_q_number_limit():
    assert qcore.q_number(3, 0.999999) == pytest.approx(3.0, rel=1e-6)
    assert qcore.q_number(0, 0.5) == 0.0


def test_compensated_sum_beats_naive():
    values = [1e16, 1.0, -1e16] * 100 + [0.1] * 10
    assert compensated_sum(values) == pytest.approx(math.fsum(values), abs=1e-15)
    s = CompensatedSum()
    for v in values:
        s += v
    assert s.count == len(values)
    assert s.max_abs == 1e16


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e12, 1e12, allow_nan=False), min_size=1, max_size=50))
def test_compensated_sum_property(values):
    assert compensated_sum(values) == pytest.approx(math.fsum(values), abs=1e-3, rel=1e-14)


def test_terminating_series_matches_exact_sum():
    q = 0.5
    num, den, z = (q ** -6, 0.7, 1.3), (0.4, -0.6), q
    with mpmath.workdps(60):
        expected = float(mp_phi([mpmath.mpf(x) for x in num], [mpmath.mpf(y) for y in den],
                                mpmath.mpf(q), mpmath.mpf(z), 6))
    res = phi(PhiSpec(num, den, QBase(q), z))
    assert res.terms_used == 7
    assert res.value == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("num,den,z", [
    ((0.3, 0.6), (0.8,), 0.4),
    ((0.2,), (), 0.7),
    ((0.3, -0.2, 0.5), (0.1, 0.9), 0.5),
    ((0.5,), (0.25, 0.6), -0.9),
])
def test_nonterminating_series_matches_mpmath(num, den, z):
    q = 0.5
    expected = float(mpmath.qhyper(list(num), list(den), q, z))
    res = phi(PhiSpec(num, den, QBase(q), z))
    assert res.converged
    assert res.value == pytest.approx(expected, rel=1e-14)
    assert rphis(num, den, q, z) == res.value


def test_q_binomial_theorem():
    q, a, z = 0.6, 0.35, 0.45
    rhs = qpinf((a * z,), q) / qpinf((z,), q)
    assert rphis((a,), (), q, z) == pytest.approx(rhs, rel=1e-14)


def test_divergent_series_raises():
    with pytest.raises(NonConvergence):
        phi(PhiSpec((0.5,), (), QBase(0.5), 1.5), max_terms=500)


def test_phi_log_agrees_with_phi():
    q = 0.7
    spec = PhiSpec((q ** -12, 0.4), (0.2,), QBase(q), 0.3)
    with mpmath.workdps(60):
        expected = float(mp_phi([mpmath.mpf(x) for x in spec.numerator_params],
                                [mpmath.mpf(y) for y in spec.denominator_params],
                                mpmath.mpf(q), mpmath.mpf(0.3), 12))
    # terms reach 1.2e7 against a value of -729, so compare on the max-term scale
    res = phi(spec)
    mant, scale = phi_log(spec)
    assert abs(mant * math.exp(scale) - expected) <= 1e-14 * res.max_abs_term
    assert abs(res.value - expected) <= 1e-14 * res.max_abs_term
    with pytest.raises(DomainError):
        phi_log(PhiSpec((0.4,), (), QBase(q), 0.3))


@settings(max_examples=40, deadline=None)
@given(q=st.floats(0.1, 0.9), a=st.floats(-3, 3), n=st.integers(0, 25))
def test_pochhammer_recurrence_property(q, a, n):
    # (a;q)_{n+1} = (a;q)_n (1 - a q^n)
    lhs = qpochhammer(a, q, n + 1)
    rhs = qpochhammer(a, q, n) * (1 - a * q ** n)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


@settings(max_examples=30, deadline=None)
@given(q=st.floats(0.2, 0.8), a=st.floats(-2, 2), n=st.integers(0, 12))
def test_pochhammer_against_mpmath_property(q, a, n):
    with mpmath.workdps(50):
        expected = float(mp_poch(mpmath.mpf(a), mpmath.mpf(q), n))
    assert qpochhammer(a, q, n) == pytest.approx(expected, rel=1e-12, abs=1e-14)
