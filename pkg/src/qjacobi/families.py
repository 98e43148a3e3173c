"""Little and big q-Jacobi polynomials, their duals and related families.

Each family has a series evaluator and an independent three-term recurrence
evaluator.  Public functions validate parameters through :class:`LittleParams`
and :class:`BigParams`; the underscore-prefixed ``_raw`` helpers take plain
floats and skip validation, which the connection-matrix symmetry checks need
because they evaluate formulas at parameter permutations outside the domain.

Values of the little and big polynomials at their own spectral points
(``q**k``, ``a*q**(k+1)``, ``c*q**(k+1)``) are badly conditioned in both the
series and the upward recurrence.  The ``*_on_lattice`` evaluators route
through the duality with the dual families instead, and return log-scaled
values so that Gram sums and connection matrices never overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .exceptions import DomainError
from .qcore import (
    PhiSpec,
    QBase,
    log_qpochhammer,
    phi,
    phi_log,
)

_LATTICE_RTOL = 1e-12


def _check_finite(**values):
    for name, v in values.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class LittleParams:
    """Parameters ``(q, a, b)`` of the little q-Jacobi family.

    Requires ``0 < a < 1/q``, ``b < 1/q`` and ``ab != 1/q``.
    """

    base: QBase
    a: float
    b: float

    def __post_init__(self):
        if not isinstance(self.base, QBase):
            object.__setattr__(self, "base", QBase(self.base))
        a, b = float(self.a), float(self.b)
        _check_finite(a=a, b=b)
        q = self.base.q
        if not 0.0 < a < 1.0 / q:
            raise DomainError(f"a must lie in (0, 1/q) = (0, {1 / q:g}), got {a:g}")
        if not b < 1.0 / q:
            raise DomainError(f"b must be below 1/q = {1 / q:g}, got {b:g}")
        if math.isclose(a * b * q, 1.0, rel_tol=1e-12):
            raise DomainError("a*b*q = 1 makes the normalization singular")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def q(self) -> float:
        return self.base.q

    @property
    def lowest_weight(self) -> float:
        """``l`` with ``a = q**(2l - 1)``."""
        return 0.5 * (1.0 + math.log(self.a) / math.log(self.q))

    def as_dict(self) -> dict:
        return {"q": self.q, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class BigParams:
    """Parameters ``(q, a, b, c)`` of the big q-Jacobi family.

    Requires ``0 < a < 1/q``, ``0 < b < 1/q`` and ``c < 0``.
    """

    base: QBase
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not isinstance(self.base, QBase):
            object.__setattr__(self, "base", QBase(self.base))
        a, b, c = float(self.a), float(self.b), float(self.c)
        _check_finite(a=a, b=b, c=c)
        q = self.base.q
        if not 0.0 < a < 1.0 / q:
            raise DomainError(f"a must lie in (0, 1/q) = (0, {1 / q:g}), got {a:g}")
        if not 0.0 < b < 1.0 / q:
            raise DomainError(f"b must lie in (0, 1/q) = (0, {1 / q:g}), got {b:g}")
        if not c < 0.0:
            raise DomainError(f"c must be negative, got {c:g}")
        if math.isclose(a * b * q, 1.0, rel_tol=1e-12):
            raise DomainError("a*b*q = 1 makes the normalization singular")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def q(self) -> float:
        return self.base.q

    @property
    def lowest_weight(self) -> float:
        return 0.5 * (1.0 + math.log(self.a) / math.log(self.q))

    def as_dict(self) -> dict:
        return {"q": self.q, "a": self.a, "b": self.b, "c": self.c}

    def swapped_ab(self) -> "BigParams":
        """``(b, a, ab/c)``: the parameters of the second lattice branch."""
        return BigParams(self.base, self.b, self.a, self.a * self.b / self.c)


@dataclass(frozen=True)
class LatticePoint:
    m: int
    mu: float


def _check_index(**values):
    for name, v in values.items():
        if int(v) != v or v < 0:
            raise DomainError(f"{name} must be a nonnegative integer, got {v!r}")


def mu_lattice(m: int, p) -> LatticePoint:
    """The q-quadratic lattice point ``q**-m + a*b*q**(m+1)``."""
    _check_index(m=m)
    q = p.q
    return LatticePoint(int(m), q ** (-m) + p.a * p.b * q ** (m + 1))


def _spec(num, den, q, z, stop):
    return PhiSpec(tuple(num), tuple(den), QBase(q), z, terminate_at=stop)


def _recurrence_log(n, step):
    """Run ``cur <- step(k, prev, cur)`` n times, rescaling to avoid overflow.

    Returns ``(mantissa, log_scale)``; rescaling both terms by the same factor
    leaves a linear three-term recurrence invariant.
    """
    prev, cur, log = 0.0, 1.0, 0.0
    for k in range(n):
        prev, cur = cur, step(k, prev, cur)
        size = abs(cur)
        if size > 1e100 or 0.0 < size < 1e-100:
            prev /= size
            cur /= size
            log += math.log(size)
    return cur, log


def _exp_scaled(pair):
    mant, log = pair
    if mant == 0.0 or not math.isfinite(mant):
        return mant
    return math.copysign(math.exp(math.log(abs(mant)) + log), mant)


# ---------------------------------------------------------------- little

def _little_series_raw(n, lam, q, a, b):
    return phi(_spec((q ** -n, a * b * q ** (n + 1)), (a * q,), q, q * lam, n)).value


def _little_coeffs(k, q, a, b):
    ab = a * b
    A = q ** k * (1 - a * q ** (k + 1)) * (1 - ab * q ** (k + 1)) / (
        (1 - ab * q ** (2 * k + 1)) * (1 - ab * q ** (2 * k + 2)))
    if k == 0:
        return A, 0.0
    C = a * q ** k * (1 - q ** k) * (1 - b * q ** k) / (
        (1 - ab * q ** (2 * k)) * (1 - ab * q ** (2 * k + 1)))
    return A, C


def _little_recur_log_raw(n, lam, q, a, b):
    def step(k, prev, cur):
        A, C = _little_coeffs(k, q, a, b)
        return ((A + C - lam) * cur - C * prev) / A
    return _recurrence_log(n, step)


def little_qjacobi(n: int, lam: float, p: LittleParams) -> float:
    """``p_n(lam; a, b | q)`` from its terminating 2phi1 series.

    >>> little_qjacobi(0, 0.7, LittleParams(0.5, 0.3, 0.4))
    1.0
    """
    _check_index(n=n)
    return _little_series_raw(int(n), float(lam), p.q, p.a, p.b)


def little_qjacobi_recur(n: int, lam: float, p: LittleParams) -> float:
    """``p_n(lam)`` by the upward three-term recurrence from ``p_{-1}=0, p_0=1``."""
    return _exp_scaled(little_qjacobi_recur_log(n, lam, p))


def little_qjacobi_log(n: int, lam: float, p: LittleParams) -> Tuple[float, float]:
    """Series value as ``(mantissa, log_scale)``."""
    _check_index(n=n)
    q, a, b = p.q, p.a, p.b
    return phi_log(_spec((q ** -n, a * b * q ** (n + 1)), (a * q,), q, q * lam, int(n)))


def little_qjacobi_recur_log(n: int, lam: float, p: LittleParams) -> Tuple[float, float]:
    _check_index(n=n)
    return _little_recur_log_raw(int(n), float(lam), p.q, p.a, p.b)


# ---------------------------------------------------------------- big

def _big_series_raw(n, lam, q, a, b, c):
    return phi(_spec((q ** -n, a * b * q ** (n + 1), lam), (a * q, c * q), q, q, n)).value


def _big_coeffs(k, q, a, b, c):
    ab = a * b
    A = (1 - a * q ** (k + 1)) * (1 - c * q ** (k + 1)) * (1 - ab * q ** (k + 1)) / (
        (1 - ab * q ** (2 * k + 1)) * (1 - ab * q ** (2 * k + 2)))
    if k == 0:
        return A, 0.0
    C = -a * c * q ** (k + 1) * (1 - q ** k) * (1 - b * q ** k) * (1 - ab * q ** k / c) / (
        (1 - ab * q ** (2 * k)) * (1 - ab * q ** (2 * k + 1)))
    return A, C


def _big_recur_log_raw(n, lam, q, a, b, c):
    def step(k, prev, cur):
        A, C = _big_coeffs(k, q, a, b, c)
        return ((lam + A + C - 1.0) * cur - C * prev) / A
    return _recurrence_log(n, step)


def big_qjacobi(n: int, lam: float, p: BigParams) -> float:
    """``P_n(lam; a, b, c; q)`` from its terminating 3phi2 series."""
    _check_index(n=n)
    return _big_series_raw(int(n), float(lam), p.q, p.a, p.b, p.c)


def big_qjacobi_recur(n: int, lam: float, p: BigParams) -> float:
    return _exp_scaled(big_qjacobi_recur_log(n, lam, p))


def big_qjacobi_log(n: int, lam: float, p: BigParams) -> Tuple[float, float]:
    _check_index(n=n)
    q, a, b, c = p.q, p.a, p.b, p.c
    return phi_log(_spec((q ** -n, a * b * q ** (n + 1), lam), (a * q, c * q), q, q, int(n)))


def big_qjacobi_recur_log(n: int, lam: float, p: BigParams) -> Tuple[float, float]:
    _check_index(n=n)
    return _big_recur_log_raw(int(n), float(lam), p.q, p.a, p.b, p.c)


# ---------------------------------------------------------------- dual little

def _dual_little_spec(n, x, q, a, b, m=None):
    stop = n if m is None else min(n, m)
    return _spec((x, a * b * q / x, q ** -n), (b * q,), q, q ** n / a, stop)


def _dual_little_recur_log_raw(n, x, q, a, b):
    mu = x + a * b * q / x

    def step(k, prev, cur):
        qk = q ** -k
        up = -a * qk * (1 - b * q ** (k + 1))
        down = -qk * (1 - q ** k)
        return ((mu - qk * (1 + a)) * cur - down * prev) / up
    return _recurrence_log(n, step)


def dual_little(n: int, m: int, p: LittleParams) -> float:
    """``d_n(mu(m); a, b | q)``, the 3phi1 dual of the little family."""
    _check_index(n=n, m=m)
    q = p.q
    return phi(_dual_little_spec(int(n), q ** -m, q, p.a, p.b, int(m))).value


def dual_little_at(n: int, x: float, p: LittleParams) -> float:
    """``d_n`` at ``mu = x + ab*q/x`` for any nonzero real ``x`` (``x = q**-m`` on the lattice)."""
    _check_index(n=n)
    if x == 0:
        raise DomainError("x must be nonzero")
    return phi(_dual_little_spec(int(n), float(x), p.q, p.a, p.b)).value


def dual_little_recur(n: int, m: int, p: LittleParams) -> float:
    _check_index(n=n, m=m)
    return _exp_scaled(_dual_little_recur_log_raw(int(n), p.q ** -m, p.q, p.a, p.b))


def dual_little_recur_at(n: int, x: float, p: LittleParams) -> float:
    return _exp_scaled(dual_little_recur_at_log(n, x, p))


def dual_little_at_log(n: int, x: float, p: LittleParams) -> Tuple[float, float]:
    _check_index(n=n)
    if x == 0:
        raise DomainError("x must be nonzero")
    return phi_log(_dual_little_spec(int(n), float(x), p.q, p.a, p.b))


def dual_little_recur_at_log(n: int, x: float, p: LittleParams) -> Tuple[float, float]:
    _check_index(n=n)
    if x == 0:
        raise DomainError("x must be nonzero")
    return _dual_little_recur_log_raw(int(n), float(x), p.q, p.a, p.b)


# ---------------------------------------------------------------- dual big

def _dual_big_spec(n, x, q, a, b, c, m=None):
    stop = n if m is None else min(n, m)
    return _spec((x, a * b * q / x, q ** -n), (a * q, a * b * q / c), q,
                 a * q ** (n + 1) / c, stop)


def _dual_big_series_raw(n, x, q, a, b, c):
    return phi(_dual_big_spec(n, x, q, a, b, c)).value


def _dual_big_coeffs(k, q, a, b, c):
    """Recurrence coefficients of ``D_n``, the ``N -> inf`` limit of the q-Racah ones."""
    A = c / a * q ** (-2 * k - 1) * (1 - a * q ** (k + 1)) * (1 - a * b * q ** (k + 1) / c)
    C = c / a * q ** (-2 * k) * (1 - q ** k) * (1 - a * q ** k / c)
    return A, C


def _dual_big_recur_log_raw(n, x, q, a, b, c):
    shifted = x + a * b * q / x - 1.0 - a * b * q

    def step(k, prev, cur):
        A, C = _dual_big_coeffs(k, q, a, b, c)
        return ((shifted + A + C) * cur - C * prev) / A
    return _recurrence_log(n, step)


def dual_big(n: int, m: int, p: BigParams) -> float:
    """``D_n(mu(m); a, b, c | q)``, the 3phi2 dual of the big family."""
    _check_index(n=n, m=m)
    q = p.q
    return phi(_dual_big_spec(int(n), q ** -m, q, p.a, p.b, p.c, int(m))).value


def dual_big_at(n: int, x: float, p: BigParams) -> float:
    _check_index(n=n)
    if x == 0:
        raise DomainError("x must be nonzero")
    return _dual_big_series_raw(int(n), float(x), p.q, p.a, p.b, p.c)


def dual_big_recur(n: int, m: int, p: BigParams) -> float:
    """``D_n(mu(m))`` by upward recurrence in ``n``.

    The recurrence is ``(q^-m - 1)(1 - ab q^{m+1}) D_n = A_n D_{n+1} - (A_n + C_n) D_n + C_n D_{n-1}``
    with ``A_n = (c/a) q^{-2n-1} (1 - a q^{n+1})(1 - ab q^{n+1}/c)`` and
    ``C_n = (c/a) q^{-2n} (1 - q^n)(1 - a q^n / c)``.
    """
    _check_index(n=n, m=m)
    return _exp_scaled(_dual_big_recur_log_raw(int(n), p.q ** -m, p.q, p.a, p.b, p.c))


def dual_big_recur_at(n: int, x: float, p: BigParams) -> float:
    return _exp_scaled(dual_big_recur_at_log(n, x, p))


def dual_big_at_log(n: int, x: float, p: BigParams) -> Tuple[float, float]:
    _check_index(n=n)
    if x == 0:
        raise DomainError("x must be nonzero")
    return phi_log(_dual_big_spec(int(n), float(x), p.q, p.a, p.b, p.c))


def dual_big_recur_at_log(n: int, x: float, p: BigParams) -> Tuple[float, float]:
    _check_index(n=n)
    if x == 0:
        raise DomainError("x must be nonzero")
    return _dual_big_recur_log_raw(int(n), float(x), p.q, p.a, p.b, p.c)


# ---------------------------------------------------------------- other families

def _as_float_q(base):
    return base.q if isinstance(base, QBase) else QBase(base).q


def _positive(a, name="a"):
    a = float(a)
    if not (a > 0.0 and math.isfinite(a)):
        raise DomainError(f"{name} must be positive, got {a!r}")
    return a


def asc2_reduced(n: int, x_exponent: int, a: float, base) -> float:
    """``(-a)^{-n} q^{n(n-1)/2} V_n^{(a)}(q**-x; q)``: the bare 2phi0 sum, free of overflow."""
    _check_index(n=n, x_exponent=x_exponent)
    a = _positive(a)
    q = _as_float_q(base)
    return phi(_spec((q ** -n, q ** -x_exponent), (), q, q ** n / a, min(n, x_exponent))).value


def asc2(n: int, x_exponent: int, a: float, base) -> float:
    """Al-Salam--Carlitz II polynomial ``V_n^{(a)}(q**-x; q)`` via its 2phi0 form."""
    s = asc2_reduced(n, x_exponent, a, base)
    q = _as_float_q(base)
    return (-a) ** n * q ** (-n * (n - 1) / 2) * s


def alt_qcharlier(n: int, x: float, a: float, base) -> float:
    """Alternative q-Charlier polynomial ``K_n(x; a; q) = 2phi1(q^-n, -a q^n; 0; q, qx)``."""
    _check_index(n=n)
    a = _positive(a)
    q = _as_float_q(base)
    return phi(_spec((q ** -n, -a * q ** n), (0.0,), q, q * x, n)).value


def alt_qcharlier_recur(n: int, x: float, a: float, base) -> float:
    """``K_n`` by its three-term recurrence ``-x K_n = A K_{n+1} - (A + C) K_n + C K_{n-1}``."""
    return _exp_scaled(alt_qcharlier_recur_log(n, x, a, base))


def alt_qcharlier_log(n: int, x: float, a: float, base) -> Tuple[float, float]:
    _check_index(n=n)
    a = _positive(a)
    q = _as_float_q(base)
    return phi_log(_spec((q ** -n, -a * q ** n), (0.0,), q, q * x, int(n)))


def alt_qcharlier_recur_log(n: int, x: float, a: float, base) -> Tuple[float, float]:
    _check_index(n=n)
    a = _positive(a)
    q = _as_float_q(base)

    def step(k, prev, cur):
        A = q ** k * (1 + a * q ** k) / ((1 + a * q ** (2 * k)) * (1 + a * q ** (2 * k + 1)))
        C = 0.0
        if k:
            C = a * q ** (2 * k - 1) * (1 - q ** k) / (
                (1 + a * q ** (2 * k - 1)) * (1 + a * q ** (2 * k)))
        return ((A + C - x) * cur - C * prev) / A
    return _recurrence_log(int(n), step)


def _alt_dual_spec(m, n, a, q):
    return _spec((q ** -n, -a * q ** n, q ** -m), (), q, -q ** m / a, min(m, n))


def alt_qcharlier_dual(m: int, n: int, a: float, base) -> float:
    """Dual of the alternative q-Charlier family on the lattice ``q**-n - a*q**n``."""
    _check_index(m=m, n=n)
    a = _positive(a)
    q = _as_float_q(base)
    return phi(_alt_dual_spec(int(m), int(n), a, q)).value


# ---------------------------------------------------------------- normalizations

def _log_radicand(sign, log):
    if sign < 0:
        raise DomainError("negative radicand in a normalization factor")
    return 0.5 * log


def _log_norm_little_raw(m, q, a, b):
    """``log`` of the square root in the expansion coefficient of the I1 eigenvector."""
    sign, log = 1, 0.0
    for par, power in ((a * b * q, 1), (a * q, 1), (b * q, -1), (q, -1)):
        s, lg = log_qpochhammer(par, q, m)
        sign *= s
        log += power * lg
    f = (1 - a * b * q ** (2 * m + 1)) / (1 - a * b * q)
    sign *= 1 if f > 0 else -1
    log += math.log(abs(f)) - m * math.log(a * q)
    return _log_radicand(sign, log)


def _log_norm_big_raw(m, q, a, b, c):
    sign, log = 1, 0.0
    for par, power in ((a * b * q, 1), (a * q, 1), (c * q, 1),
                       (a * b * q / c, -1), (b * q, -1), (q, -1)):
        s, lg = log_qpochhammer(par, q, m)
        sign *= s
        log += power * lg
    f = (1 - a * b * q ** (2 * m + 1)) / (1 - a * b * q)
    sign *= 1 if f > 0 else -1
    if -a * c <= 0:
        raise DomainError("-a*c must be positive")
    log += math.log(abs(f)) - m * math.log(-a * c) - m * (m + 3) / 2 * math.log(q)
    return _log_radicand(sign, log)


# ---------------------------------------------------------------- lattice values

def _signed_log_pochhammer_ratio(num, den, q, m):
    s1, l1 = log_qpochhammer(num, q, m)
    s2, l2 = log_qpochhammer(den, q, m)
    return s1 * s2, l1 - l2


def _little_lattice_log_raw(m, n, q, a, b) -> Tuple[float, float]:
    sign, log = _signed_log_pochhammer_ratio(b * q, a * q, q, m)
    sign *= (-1) ** m
    log += m * math.log(a) + m * (m + 1) / 2 * math.log(q)
    mant, scale = phi_log(_dual_little_spec(n, q ** -m, q, a, b, m))
    return sign * mant, log + scale


def _big_lattice_log_raw(m, n, q, a, b, c) -> Tuple[float, float]:
    """``P_m(a q^{n+1}; a, b, c)`` through the dual big family, log-scaled."""
    sign, log = _signed_log_pochhammer_ratio(a * b * q / c, c * q, q, m)
    if c < 0:
        log += m * math.log(-c)
    else:
        sign *= (-1) ** m
        log += m * math.log(c)
    log += m * (m + 1) / 2 * math.log(q)
    mant, scale = phi_log(_dual_big_spec(n, q ** -m, q, a, b, c, m))
    return sign * mant, log + scale


def _big_c_lattice_log_raw(m, n, q, a, b, c) -> Tuple[float, float]:
    """``P_m(c q^{n+1}; a, b, c)`` through ``D_n(mu(m); b, a, ab/c)``, log-scaled."""
    sign, log = _signed_log_pochhammer_ratio(b * q, a * q, q, m)
    if a > 0:
        sign *= (-1) ** m
        log += m * math.log(a)
    else:
        log += m * math.log(-a)
    log += m * (m + 1) / 2 * math.log(q)
    mant, scale = phi_log(_dual_big_spec(n, q ** -m, q, b, a, a * b / c, m))
    return sign * mant, log + scale


def _dual_lattice_log_matrix(M, N, q, ab, den, z, power):
    """Terminating duals at every ``(m, n)``, ``m < M``, ``n < N``, as log-scaled arrays.

    Sums ``sum_k (q^-m, ab q^{m+1}, q^-n;q)_k / (den, q;q)_k
    ((-1)^k q^{k(k-1)/2})^power z_n^k`` up to ``k = min(m, n)``.
    """
    m = np.arange(M, dtype=float)[:, None]
    n = np.arange(N, dtype=float)[None, :]
    x, y, w = q ** -m, ab * q ** (m + 1), q ** -n
    kmax = np.minimum(m, n)
    logt = np.zeros((M, N))
    sign = np.ones((M, N))
    logs, signs = [logt.copy()], [sign.copy()]
    with np.errstate(divide="ignore", invalid="ignore"):
        for k in range(int(min(M, N)) - 1):
            qk = q ** k
            # factor by factor in log form: the products overflow for large m, n
            factors = [1 - x * qk, 1 - y * qk, 1 - w * qk, z]
            inverse = [1 - q * qk] + [1 - d * qk for d in den]
            if power:
                factors.append((-qk) ** power)
            lr = sum(np.log(np.abs(f)) for f in factors) - sum(np.log(np.abs(f)) for f in inverse)
            sr = np.prod([np.sign(f) for f in np.broadcast_arrays(*factors, *inverse)], axis=0)
            alive = (k + 1) <= kmax
            logt = np.where(alive, logt + lr, -np.inf)
            sign = np.where(alive, sign * sr, 0.0)
            logs.append(logt)
            signs.append(sign)
    L = np.array(logs)
    top = L.max(axis=0)
    mant = np.sum(np.array(signs) * np.exp(L - top), axis=0)
    return mant, top


def _prefactor_log(M, q, num, den, scale):
    """``(sign, log)`` arrays of ``(num;q)_m / (den;q)_m scale^m q^{m(m+1)/2}``."""
    sign = np.empty(M)
    log = np.empty(M)
    for m in range(M):
        s, lg = _signed_log_pochhammer_ratio(num, den, q, m)
        if scale < 0 and m % 2:
            s = -s
        sign[m] = s
        log[m] = lg + m * math.log(abs(scale)) + m * (m + 1) / 2 * math.log(q)
    return sign, log


def little_lattice_matrix_log(M, N, q, a, b):
    """Arrays ``(mant, log)`` with ``p_m(q^n) = mant * exp(log)``."""
    mant, log = _dual_lattice_log_matrix(M, N, q, a * b, (b * q,), q ** np.arange(N)[None, :] / a, -1)
    s, pre = _prefactor_log(M, q, b * q, a * q, -a)
    return mant * s[:, None], log + pre[:, None]


def big_lattice_matrix_log(M, N, q, a, b, c):
    """Arrays for ``P_m(a q^{n+1})``."""
    z = a * q ** (np.arange(N)[None, :] + 1.0) / c
    mant, log = _dual_lattice_log_matrix(M, N, q, a * b, (a * q, a * b * q / c), z, 0)
    s, pre = _prefactor_log(M, q, a * b * q / c, c * q, -c)
    return mant * s[:, None], log + pre[:, None]


def big_c_lattice_matrix_log(M, N, q, a, b, c):
    """Arrays for ``P_m(c q^{n+1})`` through ``D_n(mu(m); b, a, ab/c)``."""
    c2 = a * b / c
    z = b * q ** (np.arange(N)[None, :] + 1.0) / c2
    mant, log = _dual_lattice_log_matrix(M, N, q, a * b, (b * q, a * b * q / c2), z, 0)
    s, pre = _prefactor_log(M, q, b * q, a * q, -a)
    return mant * s[:, None], log + pre[:, None]


def little_on_lattice(m: int, k: int, p: LittleParams) -> float:
    """``p_m(q**k)`` evaluated through the duality with ``d_k(mu(m))``."""
    _check_index(m=m, k=k)
    return _exp_scaled(_little_lattice_log_raw(int(m), int(k), p.q, p.a, p.b))


def little_on_lattice_log(m: int, k: int, p: LittleParams) -> Tuple[float, float]:
    """``(mantissa, log_scale)`` with ``p_m(q**k) = mantissa * exp(log_scale)``."""
    _check_index(m=m, k=k)
    return _little_lattice_log_raw(int(m), int(k), p.q, p.a, p.b)


def big_on_lattice_log(m: int, k: int, p: BigParams, branch: str = "a") -> Tuple[float, float]:
    """Log-scaled ``P_m(a q^{k+1})`` (branch ``'a'``) or ``P_m(c q^{k+1})`` (branch ``'c'``)."""
    _check_index(m=m, k=k)
    q, a, b, c = p.q, p.a, p.b, p.c
    if branch == "a":
        return _big_lattice_log_raw(int(m), int(k), q, a, b, c)
    if branch == "c":
        return _big_c_lattice_log_raw(int(m), int(k), q, a, b, c)
    raise DomainError(f"branch must be 'a' or 'c', got {branch!r}")


def big_on_lattice(m: int, k: int, p: BigParams, branch: str = "a") -> float:
    return _exp_scaled(big_on_lattice_log(m, k, p, branch))


def _match_power(lam, scale, q):
    """``k`` if ``lam == scale * q**k`` to 1e-12 relative, else None."""
    if lam == 0 or scale == 0 or (lam > 0) != (scale > 0):
        return None
    r = lam / scale
    k = round(math.log(r) / math.log(q))
    if k >= 0 and math.isclose(r, q ** k, rel_tol=_LATTICE_RTOL):
        return int(k)
    return None


def little_qjacobi_stable(n: int, lam: float, p: LittleParams) -> float:
    """``p_n(lam)`` using the duality route on the spectrum ``{q^k}`` and the recurrence elsewhere.

    The recurrence is used off the lattice because the series cancels badly
    for small ``|lam|`` once ``n`` is moderate.
    """
    k = _match_power(lam, 1.0, p.q)
    if k is not None:
        return little_on_lattice(n, k, p)
    return little_qjacobi_recur(n, lam, p)


def big_qjacobi_stable(n: int, lam: float, p: BigParams) -> float:
    """``P_n(lam)`` using the duality route on ``{a q^{k+1}}`` and ``{c q^{k+1}}``, the recurrence elsewhere."""
    k = _match_power(lam, p.a * p.q, p.q)
    if k is not None:
        return big_on_lattice(n, k, p, "a")
    k = _match_power(lam, p.c * p.q, p.q)
    if k is not None:
        return big_on_lattice(n, k, p, "c")
    return big_qjacobi_recur(n, lam, p)


# ---------------------------------------------------------------- derived quantities

def beta_coefficient(m: int, lam: float, p, family: str) -> float:
    """Coefficient of the canonical basis vector ``f_m`` in the I1 (``'little'``) or I2 (``'big'``) eigenvector."""
    _check_index(m=m)
    if family == "little":
        if not isinstance(p, LittleParams):
            raise DomainError("family 'little' needs LittleParams")
        log_n = _log_norm_little_raw(int(m), p.q, p.a, p.b)
        return math.exp(log_n) * little_qjacobi_stable(m, lam, p)
    if family == "big":
        if not isinstance(p, BigParams):
            raise DomainError("family 'big' needs BigParams")
        log_n = _log_norm_big_raw(int(m), p.q, p.a, p.b, p.c)
        return math.exp(log_n) * big_qjacobi_stable(m, lam, p)
    raise DomainError(f"family must be 'little' or 'big', got {family!r}")


def _qdiff_little_terms(n, lam, p):
    q, a, b = p.q, p.a, p.b
    lhs = (q ** -n + a * b * q ** (n + 1)) * little_qjacobi_stable(n, lam, p)
    rhs = (a / lam * (b * q * lam - 1) * little_qjacobi_stable(n, q * lam, p),
           (1 + a) / lam * little_qjacobi_stable(n, lam, p),
           (lam - 1) / lam * little_qjacobi_stable(n, lam / q, p))
    return lhs, rhs


def _qdiff_big_terms(n, lam, p):
    q, a, b, c = p.q, p.a, p.b, p.c
    lhs = (q ** -n + a * b * q ** (n + 1)) * big_qjacobi_stable(n, lam, p)
    mid = a * c * q * (1 + q) / lam ** 2 - q * (a * b + a * c + a + c) / lam
    rhs = (a * q / lam ** 2 * (lam - 1) * (b * lam - c) * big_qjacobi_stable(n, q * lam, p),
           -mid * big_qjacobi_stable(n, lam, p),
           (lam - a * q) * (lam - c * q) / lam ** 2 * big_qjacobi_stable(n, lam / q, p))
    return lhs, rhs


def _residual(terms, with_scale):
    lhs, rhs = terms
    res = lhs - math.fsum(rhs)
    if with_scale:
        return res, max(abs(lhs), *(abs(t) for t in rhs))
    return res


def qdiff_residual_little(n: int, lam: float, p: LittleParams, with_scale: bool = False):
    """LHS minus RHS of the q-difference equation in ``lam`` satisfied by ``p_n``.

    With ``with_scale=True`` returns ``(residual, largest |term|)``.
    """
    _check_index(n=n)
    if lam == 0:
        raise DomainError("lam must be nonzero")
    return _residual(_qdiff_little_terms(int(n), float(lam), p), with_scale)


def qdiff_residual_big(n: int, lam: float, p: BigParams, with_scale: bool = False):
    _check_index(n=n)
    if lam == 0:
        raise DomainError("lam must be nonzero")
    return _residual(_qdiff_big_terms(int(n), float(lam), p), with_scale)


def _qracah(n, x, N, q, a, b, c):
    """q-Racah ``R_n(mu(x); q^{-N-1}, a/c, a, b | q)`` from its 4phi3 form (test oracle)."""
    num = (q ** -n, q ** -N * a * q ** n / c, q ** -x, a * b * q ** (x + 1))
    den = (q ** -N, a * b * q / c, a * q)
    return phi(_spec(num, den, q, q, min(n, x))).value
