import math

import mpmath
import pytest

from qjacobi import identities as ids
from qjacobi.exceptions import DomainError
from qjacobi.families import BigParams, LittleParams

from conftest import (REF_BIG, REF_LITTLE, big_grid, mp_dual_big, mp_dual_little, mp_phi, mp_poch,
                      scalar_grid)


def test_dual_little_mass_against_mpmath(little_ref):
    q, a, b = REF_LITTLE
    rep = ids.check_dual_little_mass(little_ref)
    with mpmath.workdps(40):
        expected = mpmath.qp(a * b * q * q, q) / mpmath.qp(a * q, q)
    assert rep.rhs == pytest.approx(float(expected), rel=1e-15)
    assert rep.passed and rep.residual < 1e-14


def test_qbinomial(little_ref):
    assert ids.check_qbinomial(little_ref).residual < 1e-14


@pytest.mark.parametrize("B,C,D", [(2.0, 1.5, -3.0), (-2.0, 3.0, 4.0)])
def test_vwp_6phi5_lhs_against_mpmath(B, C, D):
    q, A = 0.5, 0.3
    rep = ids.check_vwp_6phi5(A, B, C, D, q)
    s = math.sqrt(A)
    with mpmath.workdps(40):
        num = [mpmath.mpf(v) for v in (A, q * s, -q * s, B, C, D)]
        den = [mpmath.mpf(v) for v in (s, -s, A * q / B, A * q / C, A * q / D)]
        lhs = mp_phi(num, den, mpmath.mpf(q), mpmath.mpf(A * q / (B * C * D)), 60)
    assert rep.lhs == pytest.approx(float(lhs), rel=1e-14)
    assert rep.passed


def test_vwp_6phi5_rejects_divergent_argument():
    with pytest.raises(DomainError):
        ids.check_vwp_6phi5(0.9, 0.1, 0.2, 0.3, 0.5)


def test_vwp_4phi5_and_limit():
    rep = ids.check_vwp_4phi5(0.3, 0.3, 0.5)
    assert rep.passed and rep.residual < 1e-13
    lim = ids.check_vwp_4phi5_limit(0.3, 0.3, 0.5)
    assert lim.passed
    with pytest.raises(DomainError):
        ids.check_vwp_4phi5(0.3, 0.0, 0.5)


def test_dual_big_mass_sums_against_mpmath(big_ref):
    q, a, b, c = REF_BIG
    with mpmath.workdps(40):
        rhs6 = mpmath.qp(a * b * q * q, q) * mpmath.qp(c / a, q) / (mpmath.qp(b * q, q) * mpmath.qp(c * q, q))
        lhs6 = mpmath.nsum(lambda n: (1 - a * b * q ** (2 * n + 1)) / (1 - a * b * q)
                           * mp_poch(a * q, q, int(n)) * mp_poch(a * b * q / c, q, int(n)) * mp_poch(a * b * q, q, int(n))
                           / (mp_poch(b * q, q, int(n)) * mp_poch(c * q, q, int(n)) * mp_poch(q, q, int(n)))
                           * (-c / a) ** n * q ** (n * (n - 1) / 2), [0, mpmath.inf])
    assert float(lhs6) == pytest.approx(float(rhs6), rel=1e-20 + 1e-14)
    rep = ids.check_dual_big_mass(big_ref)
    assert rep.lhs == pytest.approx(float(lhs6), rel=1e-13)
    assert rep.passed
    assert ids.check_dual_big_mass_swapped(big_ref).passed


@pytest.mark.parametrize("k", [0, 1, 5, 10])
def test_eta_vanishes_in_high_precision(k):
    q, a = 0.5, 0.3
    with mpmath.workdps(60):
        Q, A = mpmath.mpf(q), mpmath.mpf(a)
        terms = [(-1) ** n * Q ** (n * (n - 1) / 2) * (1 - A * Q ** (2 * n + 1)) / (1 - A * Q)
                 * mp_poch(A * Q, Q, n) / mp_poch(Q, Q, n) * (Q ** -n + A * Q ** (n + 1)) ** k
                 for n in range(120)]
        total = mpmath.fsum(terms)
        scale = max(abs(t) for t in terms)
    assert abs(total) / scale < 1e-40
    rep = ids.eta_k(a, q, k)
    assert rep.passed and rep.residual < 1e-12


def test_eta_recursion():
    for k in range(8):
        assert ids.eta_recursion(0.3, 0.5, k).residual < 1e-14


@pytest.mark.parametrize("t", [-0.3, 0.1, 0.5])
@pytest.mark.parametrize("x", [0, 3, 6])
def test_generating_function_lhs_against_mpmath(big_ref, t, x):
    q, a, b, c = REF_BIG
    with mpmath.workdps(40):
        lhs = mpmath.fsum(mp_poch(a * q, q, n) / mp_poch(q, q, n) * mpmath.mpf(t) ** n
                          * mp_dual_big(n, q ** -x, q, a, b, c, dps=40, stop=x) for n in range(120))
    r1 = ids.genfun_dual_big_2phi2(big_ref, t, x)
    r2 = ids.genfun_dual_big_2phi1(big_ref, t, x)
    assert r1.lhs == pytest.approx(float(lhs), rel=1e-12, abs=1e-13)
    assert r1.passed and r2.passed
    assert ids.check_dual_big_genfun_forms(big_ref, t, x).passed


def test_generating_functions_abqc_and_little(big_ref, little_ref):
    for t in (-0.1, 0.3):
        for x in (0, 4):
            assert ids.genfun_dual_big_abqc(big_ref, t, x).passed
            assert ids.genfun_dual_big_abqc_symmetry(big_ref, t, x).passed
            assert ids.genfun_dual_little(little_ref, t, x).passed
            assert ids.genfun_asc2(0.3, 0.5, t, x).passed


def test_generating_function_domain():
    p = BigParams(*REF_BIG)
    with pytest.raises(DomainError):
        ids.genfun_dual_big_2phi2(p, 1.2, 2)
    with pytest.raises(DomainError):
        ids.genfun_dual_big_2phi2(p, 0.1, -1)


def test_jackson_transformation():
    rep = ids.check_jackson(0.3, 0.6, 0.8, 0.4, 0.5)
    with mpmath.workdps(40):
        lhs = mpmath.qhyper([0.3, 0.6], [0.8], 0.5, 0.4)
    assert rep.lhs == pytest.approx(float(lhs), rel=1e-14)
    assert rep.passed


def test_completeness_sum(big_ref):
    assert ids.check_big_completeness(big_ref).residual < 1e-13


def test_special_values_exact(big_ref):
    for n in range(12):
        assert ids.check_special_values(big_ref, n).residual < 1e-14


def test_parameter_symmetry_exact(big_ref):
    for n in range(6):
        for m in range(6):
            assert ids.check_symmetry(big_ref, n, m).passed


def test_racah_limit_reference_point(big_ref):
    errs = ids.racah_limit_errors(big_ref, 8)
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    assert errs[-1] < 1e-8


def test_racah_error_scales_like_q_power_N(big_ref):
    # the gap is intrinsic: each 10 steps in N shrink it by about q^10
    errs = ids.racah_limit_errors(big_ref, 4, Ns=(20, 30))
    assert errs[1] / errs[0] == pytest.approx(0.5 ** 10, rel=0.5)


def test_c0_limit(little_ref):
    for n in range(7):
        for m in range(7):
            assert ids.check_c0_limit(little_ref, n, m).passed


def test_c0_errors_against_mpmath(little_ref):
    q, a, b = REF_LITTLE
    errs = ids.c0_limit_errors(little_ref, 4, 5)
    target = mp_dual_little(4, q ** -5, q, a, b)
    big = float(mp_dual_big(4, q ** -5, q, b, a, -1e-4))
    assert errs[2] == pytest.approx(abs(big - float(target)), rel=1e-6, abs=1e-15)


def test_b0_limit():
    for q, a in scalar_grid():
        for n in range(6):
            for m in range(6):
                assert ids.check_b0_limit(a, q, n, m).passed


def test_sums_on_default_grid():
    for point in big_grid()[::7]:
        p = BigParams(*point)
        assert ids.check_dual_big_mass(p).passed and ids.check_dual_big_mass_swapped(p).passed
