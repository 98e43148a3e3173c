"""q-numbers, q-Pochhammer symbols and basic hypergeometric series.

Everything here works in IEEE double precision.  Series loops accumulate with
a Neumaier compensated sum, and terminating series (a numerator parameter
equal to ``q**-n``) are cut exactly after the ``n``-th term instead of relying
on ``1 - q**-n * q**n`` rounding to zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Tuple, Union

from .exceptions import DenominatorPole, DomainError, NonConvergence

DEFAULT_TOL = 1e-15
MAX_TERMS = 10_000
# consecutive small terms required before a non-terminating series is cut
SMALL_RUN = 3
_POLE_EPS = 1e-13
_TERMINATE_RTOL = 1e-12


@dataclass(frozen=True)
class QBase:
    """A validated base ``0 < q < 1``."""

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 < q < 1.0) or not math.isfinite(q):
            raise DomainError(f"q must lie in (0, 1), got {self.q!r}")
        object.__setattr__(self, "q", q)

    def __float__(self):
        return self.q


QLike = Union[QBase, float]


def as_q(base: QLike) -> float:
    """Return ``q`` as a float, validating plain numbers on the way."""
    if isinstance(base, QBase):
        return base.q
    return QBase(base).q


class CompensatedSum:
    """Neumaier's improved Kahan summation.

    >>> s = CompensatedSum()
    >>> for x in (1e16, 1.0, -1e16):
    ...     s += x
    >>> s.value
    1.0
    """

    __slots__ = ("_sum", "_comp", "max_abs", "abs_total", "count")

    def __init__(self):
        self._sum = 0.0
        self._comp = 0.0
        self.max_abs = 0.0
        self.abs_total = 0.0
        self.count = 0

    def __iadd__(self, x: float) -> "CompensatedSum":
        t = self._sum + x
        if abs(self._sum) >= abs(x):
            self._comp += (self._sum - t) + x
        else:
            self._comp += (x - t) + self._sum
        self._sum = t
        ax = abs(x)
        if ax > self.max_abs:
            self.max_abs = ax
        self.abs_total += ax
        self.count += 1
        return self

    @property
    def value(self) -> float:
        return self._sum + self._comp


def compensated_sum(values) -> float:
    acc = CompensatedSum()
    for v in values:
        acc += v
    return acc.value


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated series or product.

    ``max_abs_term`` is the largest absolute summand seen; it is the natural
    scale for judging the rounding error of sums with heavy cancellation.
    ``abs_sum`` is the sum of absolute summands, a bound on the value.
    """

    value: float
    terms_used: int
    tail_estimate: float
    converged: bool
    max_abs_term: float = 0.0
    abs_sum: float = 0.0

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class PhiSpec:
    """Parameters of the series ``r phi s (numerator; denominator; q, argument)``."""

    numerator_params: Tuple[float, ...]
    denominator_params: Tuple[float, ...]
    base: QBase
    argument: float
    terminate_at: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "numerator_params", tuple(float(x) for x in self.numerator_params))
        object.__setattr__(self, "denominator_params", tuple(float(x) for x in self.denominator_params))
        if not isinstance(self.base, QBase):
            object.__setattr__(self, "base", QBase(self.base))
        object.__setattr__(self, "argument", float(self.argument))
        if self.terminate_at is None:
            degrees = [terminating_degree(x, self.base.q) for x in self.numerator_params]
            degrees = [d for d in degrees if d is not None]
            if degrees:
                object.__setattr__(self, "terminate_at", min(degrees))

    @property
    def r(self) -> int:
        return len(self.numerator_params)

    @property
    def s(self) -> int:
        return len(self.denominator_params)


def terminating_degree(x: float, q: float) -> Optional[int]:
    """Return ``n`` if ``x == q**-n`` for an integer ``n >= 0`` (to 1e-12), else None."""
    if not x > 0.0:
        return None
    n = round(-math.log(x) / math.log(q))
    if n < 0:
        return None
    if math.isclose(x, q ** (-n), rel_tol=_TERMINATE_RTOL):
        return int(n)
    return None


def q_number(a: float, base: QLike) -> float:
    """Symmetric q-number ``(q^{a/2} - q^{-a/2}) / (q^{1/2} - q^{-1/2})``."""
    q = as_q(base)
    h = math.sqrt(q)
    return (q ** (a / 2) - q ** (-a / 2)) / (h - 1.0 / h)


def qpochhammer(a: float, base: QLike, n: int) -> float:
    """Finite product ``(a; q)_n``; the empty product ``n = 0`` is 1."""
    q = as_q(base)
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    out = 1.0
    qk = 1.0
    for _ in range(n):
        out *= 1.0 - a * qk
        qk *= q
    return out


def qpochhammer_multi(params: Sequence[float], base: QLike, n: int) -> float:
    """Shorthand ``(a_1, ..., a_k; q)_n``."""
    out = 1.0
    for a in params:
        out *= qpochhammer(a, base, n)
    return out


def log_qpochhammer(a: float, q: float, n: int) -> Tuple[int, float]:
    """``(sign, log|(a;q)_n|)``, with sign 0 when a factor vanishes."""
    sign = 1
    acc = CompensatedSum()
    qk = 1.0
    for _ in range(n):
        f = 1.0 - a * qk
        if f == 0.0:
            return 0, -math.inf
        if f < 0:
            sign = -sign
        acc += math.log(abs(f))
        qk *= q
    return sign, acc.value


def qpochhammer_inf(a: float, base: QLike, tol: float = DEFAULT_TOL,
                    max_terms: int = MAX_TERMS) -> SeriesResult:
    """Infinite product ``(a; q)_inf`` truncated by a rigorous log-tail bound.

    After ``K`` factors the remaining log is bounded by
    ``|a| q^K / ((1 - q) (1 - |a| q^K))`` whenever ``|a| q^K < 1``.
    """
    q = as_q(base)
    if tol <= 0:
        raise DomainError("tol must be positive")
    if a == 0.0:
        return SeriesResult(1.0, 0, 0.0, True)
    j = terminating_degree(a, q)
    if j is not None:
        return SeriesResult(0.0, j + 1, 0.0, True)
    out = 1.0
    qk = 1.0
    aa = abs(a)
    for k in range(max_terms):
        x = aa * qk
        if x < 1.0:
            bound = x / ((1.0 - q) * (1.0 - x))
            if bound <= tol:
                return SeriesResult(out, k, bound, True)
        out *= 1.0 - a * qk
        qk *= q
    raise NonConvergence(f"(a;q)_inf with a={a}, q={q} did not reach tol={tol} "
                         f"within {max_terms} factors")


def qpinf(params: Sequence[float], base: QLike, tol: float = DEFAULT_TOL) -> float:
    """Value of ``(a_1, ..., a_k; q)_inf``."""
    out = 1.0
    for a in params:
        out *= qpochhammer_inf(a, base, tol).value
    return out


def _term_ratios(spec: PhiSpec) -> Iterator[Tuple[int, float]]:
    """Yield ``(k, t_{k+1} / t_k)`` for k = 0, 1, ... until termination."""
    q = spec.base.q
    power = 1 + spec.s - spec.r
    z = spec.argument
    stop = spec.terminate_at
    k = 0
    qk = 1.0
    while stop is None or k < stop:
        num = 1.0
        for x in spec.numerator_params:
            num *= 1.0 - x * qk
        if num == 0.0:
            return
        den = 1.0 - qk * q
        for y in spec.denominator_params:
            f = 1.0 - y * qk
            if abs(f) <= _POLE_EPS * max(1.0, abs(y * qk)):
                raise DenominatorPole(
                    f"denominator parameter {y} hits q^-{k} before the series terminates")
            den *= f
        ratio = num / den * z
        if power:
            ratio *= (-qk) ** power
        yield k, ratio
        k += 1
        qk *= q


def _tail(last: float, ratio: float) -> float:
    r = abs(ratio)
    if r < 1.0:
        return abs(last) * r / (1.0 - r)
    return abs(last)


def phi(spec: PhiSpec, tol: float = DEFAULT_TOL, max_terms: int = MAX_TERMS) -> SeriesResult:
    """Evaluate a basic hypergeometric series.

    The k-th term is
    ``prod (a_i;q)_k / prod (b_j;q)_k * ((-1)^k q^{k(k-1)/2})^{1+s-r} z^k / (q;q)_k``.
    Terminating series are summed exactly up to their last term.  Otherwise
    the sum stops once ``SMALL_RUN`` consecutive terms are below
    ``tol * |partial sum|`` and the ratio-based tail bound is below
    ``tol * max(1, |value|)``.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    acc = CompensatedSum()
    acc += 1.0
    term = 1.0
    small = 0
    tail = 0.0
    ratio = 0.0
    for k, ratio in _term_ratios(spec):
        if k + 1 > max_terms:
            raise NonConvergence(f"series did not converge within {max_terms} terms")
        term *= ratio
        if not math.isfinite(term):
            raise NonConvergence("series terms overflowed; argument outside convergence region")
        acc += term
        if spec.terminate_at is not None:
            continue
        if abs(term) <= tol * abs(acc.value):
            small += 1
        else:
            small = 0
        if small >= SMALL_RUN:
            tail = _tail(term, ratio)
            if tail <= tol * max(1.0, abs(acc.value)):
                break
    else:
        tail = 0.0
    value = acc.value
    return SeriesResult(value, acc.count, tail, True, acc.max_abs, acc.abs_total + tail)


def phi_log(spec: PhiSpec) -> Tuple[float, float]:
    """Terminating series as ``(mantissa, log_scale)``, value ``mantissa * exp(log_scale)``.

    Used where the terms or the value would overflow a double.
    """
    if spec.terminate_at is None:
        raise DomainError("phi_log only handles terminating series")
    signs = [1]
    logs = [0.0]
    sign, lg = 1, 0.0
    for _, ratio in _term_ratios(spec):
        if ratio == 0.0:
            break
        if ratio < 0:
            sign = -sign
        lg += math.log(abs(ratio))
        signs.append(sign)
        logs.append(lg)
    top = max(logs)
    acc = CompensatedSum()
    for s, g in zip(signs, logs):
        acc += s * math.exp(g - top)
    return acc.value, top


def rphis(numerator: Sequence[float], denominator: Sequence[float], base: QLike,
          argument: float, tol: float = DEFAULT_TOL) -> float:
    """Convenience wrapper returning only the value of :func:`phi`."""
    return phi(PhiSpec(tuple(numerator), tuple(denominator), QBase(as_q(base)), argument), tol).value
