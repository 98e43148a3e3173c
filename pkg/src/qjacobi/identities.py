"""Summation formulas, generating functions and limit relations as numeric checks.

Each ``check_*`` / ``genfun_*`` function returns an :class:`IdentityReport`.
Unless stated otherwise the residual is ``|lhs - rhs| / max(1, |rhs|)``.
Sums that should vanish report ``|sum| / max|term|`` instead.
"""
from __future__ import annotations

import math
import sys
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exceptions import DomainError, NonConvergence
from .families import (
    BigParams,
    LittleParams,
    _as_float_q,
    _positive,
    _qracah,
    asc2_reduced,
    dual_big,
    dual_little,
)
from .qcore import (
    DEFAULT_TOL,
    MAX_TERMS,
    CompensatedSum,
    PhiSpec,
    QBase,
    phi,
    qpinf,
    qpochhammer,
    qpochhammer_multi,
)
from .reports import IdentityReport, make_report

GENFUN_T = (-0.3, -0.1, 0.1, 0.3, 0.5)


def _series(num, den, q, z, tol=DEFAULT_TOL):
    return phi(PhiSpec(tuple(num), tuple(den), QBase(q), z), tol)


def _sum_terms(term, tol=DEFAULT_TOL, max_terms=MAX_TERMS, min_terms=5):
    """Sum ``term(n)`` for n = 0, 1, ... until three consecutive terms are negligible.

    Returns ``(value, terms_used, max|term|)``.
    """
    acc = CompensatedSum()
    small = 0
    for n in range(max_terms):
        t = term(n)
        if not math.isfinite(t):
            raise NonConvergence("summand overflowed")
        acc += t
        if n >= min_terms and abs(t) <= tol * max(abs(acc.value), acc.max_abs * 1e-5):
            small += 1
            if small >= 3:
                return acc.value, acc.count, acc.max_abs
        else:
            small = 0
    raise NonConvergence(f"sum did not settle within {max_terms} terms")


def _check_t(t):
    if not abs(t) < 1:
        raise DomainError(f"|t| must be below 1, got {t!r}")


def _check_x(x):
    if int(x) != x or x < 0:
        raise DomainError(f"x must be a nonnegative integer, got {x!r}")
    return int(x)


# ---------------------------------------------------------------- appendix sums

def check_dual_little_mass(p: LittleParams, tol: float = 1e-12) -> IdentityReport:
    """Positive sum of the dual little weights against ``(abq^2;q)_inf / (aq;q)_inf``."""
    q, a, b = p.q, p.a, p.b
    ab = a * b

    def term(n):
        return (qpochhammer_multi((ab * q, b * q), q, n) / qpochhammer_multi((a * q, q), q, n)
                * (1 - ab * q ** (2 * n + 1)) / (1 - ab * q) * a ** n * q ** (n * n))
    lhs, used, _ = _sum_terms(term)
    rhs = qpinf((ab * q * q,), q) / qpinf((a * q,), q)
    return make_report("sum-A.1", p.as_dict(), lhs, rhs, tol, used)


def check_qbinomial(p: LittleParams, tol: float = 1e-12) -> IdentityReport:
    """``sum (bq;q)_n (aq)^n / (q;q)_n = (abq^2;q)_inf / (aq;q)_inf``."""
    q, a, b = p.q, p.a, p.b
    res = _series((b * q,), (), q, a * q, 1e-17)
    rhs = qpinf((a * b * q * q,), q) / qpinf((a * q,), q)
    return make_report("qbinom-4.9", p.as_dict(), res.value, rhs, tol, res.terms_used)


def check_vwp_6phi5(A: float, B: float, C: float, D: float, base, tol: float = 1e-12) -> IdentityReport:
    """Very-well-poised 6phi5 sum with argument ``Aq/(BCD)`` against its product form."""
    q = _as_float_q(base)
    A = _positive(A, "A")
    z = A * q / (B * C * D)
    if not abs(z) < 1:
        raise DomainError(f"|Aq/(BCD)| must be below 1, got {abs(z):g}")
    s = math.sqrt(A)
    res = _series((A, q * s, -q * s, B, C, D), (s, -s, A * q / B, A * q / C, A * q / D), q, z)
    rhs = (qpinf((A * q, A * q / (B * C), A * q / (B * D), A * q / (C * D)), q)
           / qpinf((A * q / B, A * q / C, A * q / D, z), q))
    return make_report("sum-A.4", {"q": q, "A": A, "B": B, "C": C, "D": D},
                       res.value, rhs, tol, res.terms_used)


def check_vwp_4phi5(a: float, b: float, base, tol: float = 1e-12) -> IdentityReport:
    """4phi5 very-well-poised sum with two zero denominators against ``(aq;q)_inf/(aq/b;q)_inf``."""
    q = _as_float_q(base)
    a = _positive(a)
    if b == 0:
        raise DomainError("b must be nonzero")
    s = math.sqrt(a)
    res = _series((a, q * s, -q * s, b), (s, -s, a * q / b, 0.0, 0.0), q, a * q / b)
    rhs = qpinf((a * q,), q) / qpinf((a * q / b,), q)
    return make_report("sum-A.5", {"q": q, "a": a, "b": b}, res.value, rhs, tol, res.terms_used)


def check_vwp_4phi5_limit(a: float, b: float, base, n_max: int = 8,
                   exponents: Sequence[int] = (2, 3, 4, 5)) -> IdentityReport:
    """``(c, d;q)_n (aq/(bcd))^n -> q^{n(n-1)} (aq/b)^n`` as ``c = d = 10^j`` grows.

    The worst relative error over ``n <= n_max`` behaves like ``q^{1-n_max} / c``
    once ``c`` is large, so small ``q`` starts in a flat regime.  Passes when
    the error decreases strictly and the last decade gains at least 5x; the
    residual is the error at the largest ``c``.
    """
    q = _as_float_q(base)
    errors = []
    for j in exponents:
        c = d = 10.0 ** j
        worst = 0.0
        for n in range(n_max + 1):
            lim = q ** (n * (n - 1)) * (a * q / b) ** n
            val = qpochhammer_multi((c, d), q, n) * (a * q / (b * c * d)) ** n
            worst = max(worst, abs(val - lim) / abs(lim))
        errors.append(worst)
    ok = all(e2 < e1 for e1, e2 in zip(errors, errors[1:])) and errors[-1] <= errors[-2] / 5
    rep = make_report("sum-A.5", {"q": q, "a": a, "b": b, "n_max": n_max},
                      errors[-1], 0.0, math.inf, residual=errors[-1],
                      detail="limit relation; errors per decade: " + ", ".join(f"{e:.3g}" for e in errors))
    rep.passed = ok
    return rep


def _dual_big_mass_term(n, q, a, b, c):
    ab = a * b
    return ((1 - ab * q ** (2 * n + 1)) / (1 - ab * q)
            * qpochhammer_multi((a * q, ab * q / c, ab * q), q, n)
            / qpochhammer_multi((b * q, c * q, q), q, n)
            * (-c / a) ** n * q ** (n * (n - 1) / 2))


def check_dual_big_mass(p: BigParams, tol: float = 1e-12) -> IdentityReport:
    """Sum of the dual big weights against ``(abq^2, c/a;q)_inf / (bq, cq;q)_inf``."""
    q, a, b, c = p.q, p.a, p.b, p.c
    lhs, used, _ = _sum_terms(lambda n: _dual_big_mass_term(n, q, a, b, c))
    rhs = qpinf((a * b * q * q, c / a), q) / qpinf((b * q, c * q), q)
    return make_report("sum-A.6", p.as_dict(), lhs, rhs, tol, used)


def check_dual_big_mass_swapped(p: BigParams, tol: float = 1e-12) -> IdentityReport:
    """Companion sum with ``a`` and ``c`` roles exchanged."""
    q, a, b, c = p.q, p.a, p.b, p.c
    ab = a * b

    def term(n):
        return ((1 - ab * q ** (2 * n + 1)) / (1 - ab * q)
                * qpochhammer_multi((ab * q, b * q, c * q), q, n)
                / qpochhammer_multi((a * q, ab * q / c, q), q, n)
                * (-a / c) ** n * q ** (n * (n - 1) / 2))
    lhs, used, _ = _sum_terms(term)
    rhs = qpinf((ab * q * q, a / c), q) / qpinf((a * q, ab * q / c), q)
    return make_report("sum-A.7", p.as_dict(), lhs, rhs, tol, used)


# ---------------------------------------------------------------- eta_k

def _eta_sum(a: float, q: float, k: int) -> Tuple[float, float, int]:
    """``(eta_k(a), max|term|, terms)``.

    Terms grow like ``q^{-nk}`` before the ``q^{n(n-1)/2}`` factor wins, so the
    sum runs past the peak and stops once terms drop below 1e-20 of the max.
    """
    acc = CompensatedSum()
    peak_n = k / max(1e-300, -math.log(q)) + 2
    poch = 1.0
    for n in range(MAX_TERMS):
        if n:
            poch *= (1 - a * q ** n) / (1 - q ** n)
        mu = q ** -n + a * q ** (n + 1)
        t = (-1) ** n * q ** (n * (n - 1) / 2) * (1 - a * q ** (2 * n + 1)) / (1 - a * q) * poch * mu ** k
        if not math.isfinite(t):
            raise NonConvergence("eta_k summand overflowed")
        acc += t
        if n > peak_n and abs(t) < 1e-20 * acc.max_abs:
            return acc.value, acc.max_abs, acc.count
    raise NonConvergence("eta_k did not settle")


def eta_k(a: float, base, k: int, tol: float = 1e-10) -> IdentityReport:
    """The alternating sum ``eta_k(a; q)``; it vanishes for every ``k``.  Residual is ``|eta_k| / max|term|``."""
    q = _as_float_q(base)
    if int(k) != k or k < 0:
        raise DomainError("k must be a nonnegative integer")
    if not abs(a) * q < 1:
        raise DomainError("need |a| q < 1")
    val, scale, used = _eta_sum(float(a), q, int(k))
    return make_report("eta-A.8", {"q": q, "a": a, "k": k}, val, 0.0, tol, used,
                       residual=abs(val) / scale, detail=f"max|term| = {scale:.6g}")


def eta_recursion(a: float, base, k: int, tol: float = 1e-12) -> IdentityReport:
    """``eta_{k+1}(a) = (1 + aq) eta_k(a) - q^{-k-1} (1 - aq^2)(1 - aq^3) eta_k(aq^2)``.

    Every quantity is a rounding-level number, so the residual is scaled by the
    largest term that enters any of the three sums.
    """
    q = _as_float_q(base)
    e1, s1, n1 = _eta_sum(a, q, k + 1)
    e0, s0, n0 = _eta_sum(a, q, k)
    f = q ** (-k - 1) * (1 - a * q * q) * (1 - a * q ** 3)
    e2, s2, n2 = _eta_sum(a * q * q, q, k)
    rhs = (1 + a * q) * e0 - f * e2
    scale = max(s1, (1 + a * q) * s0, abs(f) * s2)
    return make_report("eta-A.8", {"q": q, "a": a, "k": k}, e1, rhs, tol, n0 + n1 + n2,
                       residual=abs(e1 - rhs) / scale, detail="recursion in k; scaled by max|term|")


# ---------------------------------------------------------------- generating functions

def _genfun_lhs(coef, value, t, tol=1e-16):
    """``sum_n coef(n) t^n value(n)`` with ``coef`` a running product."""
    state = {"c": 1.0}

    def term(n):
        if n:
            state["c"] *= coef(n - 1) * t
        return state["c"] * value(n)
    return _sum_terms(term, tol)


def _genfun_report(ident, params, lhs, rhs, tol, used, top, detail=""):
    """Residual scaled by ``max(1, |rhs|, max|term|)``.

    When ``t q^{-x}`` is a power of ``q`` the closed form vanishes and the
    series cancels down to rounding of its largest term.
    """
    scale = max(1.0, abs(rhs), top)
    return make_report(ident, params, lhs, rhs, tol, used, residual=abs(lhs - rhs) / scale,
                       detail=(detail + "; " if detail else "") + f"max|term| = {top:.6g}")


def _rhs_2phi2(q, a, b, c, t, x):
    pre = qpinf((a * q * t,), q) / qpinf((t,), q)
    return pre * _series((q ** -x, a * b * q ** (x + 1)), (a * b * q / c, a * q * t), q, a * q * t / c).value


def _rhs_2phi1(q, a, b, c, t, x):
    pre = qpinf((a * q ** (x + 1) * t,), q) / qpinf((t,), q)
    return pre * _series((q ** -x, q ** -x / c), (a * b * q / c,), q, a * t * q ** (x + 1)).value


def genfun_dual_big_2phi2(p: BigParams, t: float, x: int, tol: float = 1e-10) -> IdentityReport:
    """``sum (aq;q)_n / (q;q)_n t^n D_n(mu(x))`` against its 2phi2 closed form."""
    _check_t(t)
    x = _check_x(x)
    q, a, b, c = p.q, p.a, p.b, p.c
    lhs, used, top = _genfun_lhs(lambda n: (1 - a * q ** (n + 1)) / (1 - q ** (n + 1)),
                                 lambda n: dual_big(n, x, p), t)
    return _genfun_report("gen-9.1", dict(p.as_dict(), t=t, x=x), lhs, _rhs_2phi2(q, a, b, c, t, x), tol, used, top)


def genfun_dual_big_2phi1(p: BigParams, t: float, x: int, tol: float = 1e-10) -> IdentityReport:
    """Same series against the 2phi1 closed form."""
    _check_t(t)
    x = _check_x(x)
    q, a, b, c = p.q, p.a, p.b, p.c
    lhs, used, top = _genfun_lhs(lambda n: (1 - a * q ** (n + 1)) / (1 - q ** (n + 1)),
                                 lambda n: dual_big(n, x, p), t)
    return _genfun_report("gen-9.2", dict(p.as_dict(), t=t, x=x), lhs, _rhs_2phi1(q, a, b, c, t, x), tol, used, top)


def check_dual_big_genfun_forms(p: BigParams, t: float, x: int, tol: float = 1e-10) -> IdentityReport:
    """The two closed forms agree directly (an instance of Jackson's transformation)."""
    _check_t(t)
    x = _check_x(x)
    q, a, b, c = p.q, p.a, p.b, p.c
    r1, r2 = _rhs_2phi2(q, a, b, c, t, x), _rhs_2phi1(q, a, b, c, t, x)
    return make_report("gen-9.2", dict(p.as_dict(), t=t, x=x), r1, r2, tol,
                       detail="closed forms compared with each other")


def genfun_dual_big_abqc(p: BigParams, t: float, x: int, tol: float = 1e-10) -> IdentityReport:
    """``sum (abq/c;q)_n / (q;q)_n t^n D_n(mu(x))`` against both closed forms; worst residual reported."""
    _check_t(t)
    x = _check_x(x)
    q, a, b, c = p.q, p.a, p.b, p.c
    ab = a * b
    lhs, used, _ = _genfun_lhs(lambda n: (1 - ab * q ** (n + 1) / c) / (1 - q ** (n + 1)),
                               lambda n: dual_big(n, x, p), t)
    r1 = (qpinf((ab * q * t / c,), q) / qpinf((t,), q)
          * _series((q ** -x, ab * q ** (x + 1)), (a * q, ab * q * t / c), q, a * q * t / c).value)
    r2 = (qpinf((ab * t * q ** (x + 1) / c,), q) / qpinf((t,), q)
          * _series((q ** -x, q ** -x / b), (a * q,), q, ab * t * q ** (x + 1) / c).value)
    res = max(abs(lhs - r) / max(1.0, abs(r)) for r in (r1, r2))
    return make_report("gen-9.3", dict(p.as_dict(), t=t, x=x), lhs, r1, tol, used, residual=res,
                       detail=f"second closed form {r2!r}")


def check_symmetry(p: BigParams, n: int, m: int, tol: float = 1e-12) -> IdentityReport:
    """``D_n(mu(m); a, b, c) = D_n(mu(m); ab/c, c, b)``; the right side is outside the parameter domain.

    Both terminating series are summed exactly: near zeros of ``D_n`` the
    float sums keep only a few digits, which would hide what is being tested.
    The float evaluator's value is kept in ``detail``.
    """
    n, m = int(n), int(m)
    Q, A, B, C = (Fraction(v) for v in (p.q, p.a, p.b, p.c))
    lhs = _dual_big_exact(n, m, Q, A, B, C)
    rhs = _dual_big_exact(n, m, Q, A * B / C, C, B)
    return make_report("symmetry-8.13", dict(p.as_dict(), n=n, m=m), lhs, rhs, tol,
                       residual=abs(lhs - rhs) / max(abs(rhs), 1e-300),
                       detail=f"float evaluator {dual_big(n, m, p)!r}")


def _dual_big_exact(n, m, Q, A, B, C):
    x = Q ** -m
    return _phi_exact((x, A * B * Q / x, Q ** -n), (A * Q, A * B * Q / C), Q, A * Q ** (n + 1) / C, min(n, m))


def genfun_dual_big_abqc_symmetry(p: BigParams, t: float, x: int, tol: float = 1e-10) -> IdentityReport:
    """The ``(abq/c;q)_n`` series equals the 2phi2 closed form taken at ``(ab/c, c, b)``."""
    rep = genfun_dual_big_abqc(p, t, x, tol)
    q, a, b, c = p.q, p.a, p.b, p.c
    rhs = _rhs_2phi2(q, a * b / c, c, b, t, x)
    return make_report("gen-9.3", dict(p.as_dict(), t=t, x=x), rep.lhs, rhs, tol, rep.terms_used,
                       detail="closed form obtained through the parameter symmetry")


def genfun_dual_little(p: LittleParams, t: float, x: int, tol: float = 1e-10) -> IdentityReport:
    """``sum (bq;q)_n / (q;q)_n (at)^n d_n(mu(x))`` against an infinite-product ratio."""
    _check_t(t)
    x = _check_x(x)
    q, a, b = p.q, p.a, p.b
    if not abs(a * t) < 1:
        raise DomainError(f"|a t| must be below 1, got {abs(a * t):g}")
    lhs, used, top = _genfun_lhs(lambda n: a * (1 - b * q ** (n + 1)) / (1 - q ** (n + 1)),
                                 lambda n: dual_little(n, x, p), t)
    rhs = qpinf((t * q ** -x, a * b * t * q ** (x + 1)), q) / qpinf((a * t, t), q)
    return _genfun_report("gen-9.4", dict(p.as_dict(), t=t, x=x), lhs, rhs, tol, used, top)


def genfun_asc2(a: float, base, t: float, x: int, tol: float = 1e-10) -> IdentityReport:
    """Generating function of the Al-Salam--Carlitz II polynomials at ``q^-x``."""
    _check_t(t)
    x = _check_x(x)
    q = _as_float_q(base)
    a = _positive(a)
    if not abs(a * t) < 1:
        raise DomainError("|a t| must be below 1")

    def term(n):
        # (-1)^n q^{n(n-1)/2} t^n V_n / (q;q)_n with the q-powers cancelled
        return (a * t) ** n * asc2_reduced(n, x, a, q) / qpochhammer(q, q, n)
    lhs, used, top = _sum_terms(term, 1e-16)
    rhs = qpinf((t * q ** -x,), q) / qpinf((a * t, t), q)
    return _genfun_report("gen-9.4", {"q": q, "a": a, "b": 0.0, "t": t, "x": x}, lhs, rhs, tol, used, top,
                          "b = 0 degeneration")


def check_jackson(a: float, b: float, c: float, z: float, base, tol: float = 1e-11) -> IdentityReport:
    """``2phi1(a, b; c; q, z) = (az;q)_inf / (z;q)_inf * 2phi2(a, c/b; c, az; q, bz)``."""
    q = _as_float_q(base)
    if not abs(z) < 1:
        raise DomainError("|z| must be below 1")
    lhs = _series((a, b), (c,), q, z).value
    rhs = qpinf((a * z,), q) / qpinf((z,), q) * _series((a, c / b), (c, a * z), q, b * z).value
    return make_report("gen-9.2", {"q": q, "a": a, "b": b, "c": c, "z": z}, lhs, rhs, tol,
                       detail="Jackson transformation")


def check_big_completeness(p: BigParams, tol: float = 1e-11) -> IdentityReport:
    """Two 2phi1 series with ``A = aq``, ``B = abq/c``, ``C = aq/c`` combine to 1."""
    q, a, b, c = p.q, p.a, p.b, p.c
    A, B, C = a * q, a * b * q / c, a * q / c
    s1 = _series((A, B), (C,), q, q)
    s2 = _series((A * q / C, B * q / C), (q * q / C,), q, q)
    t1 = qpinf((A * q / C, B * q / C), q) / qpinf((q / C, A * B * q / C), q) * s1.value
    t2 = qpinf((A, B), q) / qpinf((C / q, A * B * q / C), q) * s2.value
    return make_report("complete-7.14", p.as_dict(), t1 + t2, 1.0, tol,
                       s1.terms_used + s2.terms_used)


# ---------------------------------------------------------------- limits and special values

def _phi_exact(num, den, q, z, n) -> float:
    """Terminating balanced-power series (``r = s + 1``) summed in exact rational arithmetic.

    The double inputs are taken as exact rationals, so the result is the true
    value at those inputs, rounded once.  Used where the float sum cancels
    catastrophically.
    """
    num = [Fraction(x) for x in num]
    den = [Fraction(y) for y in den]
    q, z = Fraction(q), Fraction(z)
    total, term, qk = Fraction(1), Fraction(1), Fraction(1)
    for _ in range(n):
        ratio = z / (1 - qk * q)
        for x in num:
            ratio *= 1 - x * qk
        for y in den:
            ratio /= 1 - y * qk
        term *= ratio
        total += term
        qk *= q
    return float(total)


def _big_exact(n, lam, q, a, b, c):
    Q, A, B, C = (Fraction(v) for v in (q, a, b, c))
    return _phi_exact((Q ** -n, A * B * Q ** (n + 1), lam), (A * Q, C * Q), Q, Q, n)


def check_special_values(p: BigParams, n: int, tol: float = 1e-12) -> IdentityReport:
    """``P_n`` at ``aq`` and ``cq`` against their product forms (worst of two).

    The defining series is summed exactly; in floating point it loses all
    digits at ``cq`` for moderate ``n``.
    """
    q, a, b, c = p.q, p.a, p.b, p.c
    va = _big_exact(int(n), Fraction(a) * Fraction(q), q, a, b, c)
    ra = qpochhammer(a * b * q / c, q, n) / qpochhammer(c * q, q, n) * (-c) ** n * q ** (n * (n + 1) / 2)
    vc = _big_exact(int(n), Fraction(c) * Fraction(q), q, a, b, c)
    rc = qpochhammer(b * q, q, n) / qpochhammer(a * q, q, n) * (-a) ** n * q ** (n * (n + 1) / 2)
    res = max(abs(va - ra) / abs(ra), abs(vc - rc) / abs(rc))
    return make_report("special-7.1", dict(p.as_dict(), n=n), va, ra, tol, residual=res,
                       detail=f"c-point value {vc!r} vs {rc!r}")


def check_racah_limit(p: BigParams, n: int, x: int, N: int = 40, tol: float = 1e-8) -> IdentityReport:
    """q-Racah polynomial with ``a -> q^{-N-1}`` approaches ``D_n(mu(x))`` (relative residual)."""
    q, a, b, c = p.q, p.a, p.b, p.c
    lhs = _qracah(int(n), int(x), int(N), q, a, b, c)
    rhs = dual_big(n, x, p)
    return make_report("limit-racah-8.10", dict(p.as_dict(), n=n, x=x, N=N), lhs, rhs, tol,
                       residual=abs(lhs - rhs) / abs(rhs))


def racah_limit_errors(p: BigParams, n_max: int = 8, Ns: Sequence[int] = (10, 20, 30, 40)) -> List[float]:
    """Worst relative q-Racah error over ``n, x <= n_max`` for each ``N``."""
    out = []
    for N in Ns:
        out.append(max(check_racah_limit(p, n, x, N).residual
                       for n in range(n_max + 1) for x in range(n_max + 1)))
    return out


def c0_limit_errors(p: LittleParams, n: int, m: int,
                    cs: Sequence[float] = (-1e-2, -1e-3, -1e-4, -1e-5, -1e-6)) -> List[float]:
    """``|D_n(mu(m); b, a, c) - d_n(mu(m); a, b)|`` as ``c -> 0-``.

    Dropping ``c`` from the dual big series swaps the roles of the first two
    parameters, so the big family is taken at ``(b, a, c)``.
    """
    target = dual_little(n, m, p)
    out = []
    for c in cs:
        big = BigParams(p.base, p.b, p.a, c)
        out.append(abs(dual_big(n, m, big) - target))
    return out


def check_c0_limit(p: LittleParams, n: int, m: int) -> IdentityReport:
    """Convergence of the dual big family to the dual little one as ``c -> 0-``.

    Passes when the error decreases strictly along the sequence of ``c``
    until it reaches the rounding floor (a few ulps of the limit), and stays
    there; the residual is the final error relative to the limit.
    """
    errs = c0_limit_errors(p, n, m)
    scale = max(1e-300, abs(dual_little(n, m, p)))
    floor = 8 * sys.float_info.epsilon * scale
    rep = make_report("limit-c0", dict(p.as_dict(), n=n, m=m), errs[-1], 0.0, math.inf,
                      residual=errs[-1] / scale,
                      detail="errors: " + ", ".join(f"{e:.3g}" for e in errs))
    rep.passed = all(e2 < e1 or e2 <= floor for e1, e2 in zip(errs, errs[1:]))
    return rep


def check_b0_limit(a: float, base, n: int, m: int, tol: float = 1e-12) -> IdentityReport:
    """``d_n(mu(m); a, 0) = (-a)^{-n} q^{n(n-1)/2} V_n^{(a)}(q^{-m})``."""
    q = _as_float_q(base)
    lhs = dual_little(n, m, LittleParams(QBase(q), a, 0.0))
    rhs = asc2_reduced(n, m, a, q)
    return make_report("limit-b0-8.11", {"q": q, "a": a, "b": 0.0, "n": n, "m": m}, lhs, rhs, tol)
