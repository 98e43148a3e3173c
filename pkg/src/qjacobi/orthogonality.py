"""Weighted inner products on the discrete supports of each family.

Every Gram matrix is assembled in log space: a summand is
``sign * mant_i * mant_j * exp(log w_k + log|v_ik| + log|v_jk| - (log h_i + log h_j)/2)``,
so the normalized entries stay O(1) even where the raw values span hundreds
of orders of magnitude.  Each entry is accumulated with ``math.fsum``.

Polynomial values come from the duality-based lattice evaluators rather than
the upward recurrences, which lose all accuracy at spectral points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .exceptions import DomainError, NonConvergence
from .families import (
    BigParams,
    LittleParams,
    _alt_dual_spec,
    _as_float_q,
    _big_c_lattice_log_raw,
    _big_lattice_log_raw,
    _dual_big_spec,
    _dual_little_spec,
    _little_lattice_log_raw,
    _dual_lattice_log_matrix,
    _positive,
    big_c_lattice_matrix_log,
    big_lattice_matrix_log,
)
from .qcore import log_qpochhammer, phi_log, qpinf
from .reports import IdentityReport, make_report

LogValue = Tuple[float, float]

DEFAULT_TRUNC = 200
TAIL_TOL = 1e-10


@dataclass(frozen=True)
class WeightedSupport:
    """Truncated point measure.  ``weights`` may underflow to 0; ``log_weights`` do not."""

    points: np.ndarray
    weights: np.ndarray
    signs: np.ndarray
    log_weights: np.ndarray
    tail_bound: float
    family: str


@dataclass(frozen=True)
class GramReport:
    """Raw Gram matrix, closed-form norms and deviations in normalized units.

    ``max_offdiag_abs`` divides each entry by the geometric mean of the two
    norms; ``tail_bound`` is in the same normalized units.
    """

    gram: np.ndarray
    rhs_diag: np.ndarray
    max_offdiag_abs: float
    max_diag_reldev: float
    tail_bound: float
    terms_used: int

    def passed(self, tol: float) -> bool:
        return self.max_offdiag_abs <= tol and self.max_diag_reldev <= tol


# ---------------------------------------------------------------- helpers

def _log_poch(params: Sequence[float], q: float, n: int) -> Tuple[int, float]:
    sign, log = 1, 0.0
    for par in params:
        s, lg = log_qpochhammer(par, q, n)
        sign *= s
        log += lg
    return sign, log


def _log_ratio(num, den, q, n) -> Tuple[int, float]:
    s1, l1 = _log_poch(num, q, n)
    s2, l2 = _log_poch(den, q, n)
    return s1 * s2, l1 - l2


def _log_const(num, den, q) -> float:
    top, bottom = qpinf(num, q), qpinf(den, q)
    if not (top > 0 and bottom > 0):
        raise DomainError("normalizing infinite product is not positive")
    return math.log(top) - math.log(bottom)


def _check_sizes(K, trunc):
    for name, v in (("K", K), ("trunc", trunc)):
        if int(v) != v or v < 1:
            raise DomainError(f"{name} must be a positive integer, got {v!r}")
    return int(K), int(trunc)


def _support(family, trunc, log_weight: Callable[[int], Tuple[int, float]], ratio):
    """Weights for nodes ``0..trunc-1`` plus the first omitted node (for the tail)."""
    signs, logs = [], []
    for k in range(trunc + 1):
        s, lg = log_weight(k)
        signs.append(s)
        logs.append(lg)
    signs = np.array(signs, dtype=float)
    logs = np.array(logs)
    with np.errstate(under="ignore", over="ignore"):
        weights = signs[:trunc] * np.exp(logs[:trunc])
    # growing weights (rho) are only summable against decaying functions
    tail = math.inf
    if ratio < 1.0 and logs[trunc] < 700:
        tail = math.exp(logs[trunc]) / (1.0 - ratio)
    return WeightedSupport(np.arange(trunc), weights, signs[:trunc], logs[:trunc], tail, family)


def _gram(K, trunc, support: WeightedSupport, value: Callable[[int, int], LogValue],
          log_h: List[float], tail_ratio: float, extra_log_weight: Tuple[int, float]) -> GramReport:
    """Assemble the Gram matrix and compare against the norms ``exp(log_h)``."""
    vals = [[value(i, k) for k in range(trunc + 1)] for i in range(K)]
    lw = list(support.log_weights) + [extra_log_weight[1]]
    sw = list(support.signs) + [extra_log_weight[0]]
    norm = np.empty((K, K))
    for i in range(K):
        for j in range(i, K):
            terms = []
            for k in range(trunc):
                mi, li = vals[i][k]
                mj, lj = vals[j][k]
                if mi == 0.0 or mj == 0.0 or sw[k] == 0:
                    continue
                terms.append(sw[k] * mi * mj * math.exp(lw[k] + li + lj - 0.5 * (log_h[i] + log_h[j])))
            norm[i, j] = norm[j, i] = math.fsum(terms)
    # first omitted term, continued geometrically
    tail = 0.0
    for i in range(K):
        mi, li = vals[i][trunc]
        if mi != 0.0 and sw[trunc] != 0:
            t = mi * mi * math.exp(lw[trunc] + 2 * li - log_h[i])
            tail = max(tail, abs(t))
    if tail_ratio >= 1.0:
        tail = math.inf if tail > 0 else 0.0
    else:
        tail /= 1.0 - tail_ratio
    h = np.exp(np.array(log_h))
    gram = norm * np.sqrt(np.outer(h, h))
    off = norm - np.diag(np.diag(norm))
    return GramReport(gram, h, float(np.max(np.abs(off))) if K > 1 else 0.0,
                      float(np.max(np.abs(np.diag(norm) - 1.0))), float(tail), trunc)


def _require_tail(report: GramReport, tail_tol: float) -> GramReport:
    if not report.tail_bound <= tail_tol:
        raise NonConvergence(f"tail bound {report.tail_bound:.3g} exceeds {tail_tol:g}; increase trunc")
    return report


# ---------------------------------------------------------------- little side

def little_support(p: LittleParams, trunc: int) -> WeightedSupport:
    """Weights ``(bq;q)_n (aq)^n / (q;q)_n`` on the points ``q^n``."""
    q, a, b = p.q, p.a, p.b
    return _support("little", trunc,
                    lambda n: _shift(_log_ratio((b * q,), (q,), q, n), n * math.log(a * q)),
                    _little_ratio(p, trunc))


def _shift(pair, add):
    return pair[0], pair[1] + add


def _little_ratio(p, K):
    q, a, b = p.q, p.a, p.b
    worst = max(1.0, (1 - b * q ** (K + 1)) / (1 - q ** (K + 1)))
    return a * q * worst


def _log_abq_factor(sign, m, abq, q):
    """``log((1 - abq) / (1 - abq q^{2m}))`` folded with the sign of the Pochhammer ratio.

    Both change sign when ``abq > 1``; their product is a positive norm.
    """
    f = (1 - abq) / (1 - abq * q ** (2 * m))
    if sign * f <= 0:
        raise DomainError("norm is not positive at these parameters")
    return math.log(abs(f))


def _log_h_little(m, q, a, b, const):
    s, lg = _log_ratio((b * q, q), (a * b * q, a * q), q, m)
    return const + lg + _log_abq_factor(s, m, a * b * q, q) + m * math.log(a * q)


def norm_little(m: int, p: LittleParams) -> float:
    """Closed-form squared norm of ``p_m`` under the weight ``(bq;q)_n (aq)^n / (q;q)_n`` on ``{q^n}``."""
    q, a, b = p.q, p.a, p.b
    return math.exp(_log_h_little(int(m), q, a, b, _log_const((a * b * q * q,), (a * q,), q)))


def gram_little(K: int, p: LittleParams, trunc: int = DEFAULT_TRUNC,
                tail_tol: float = TAIL_TOL) -> GramReport:
    """Gram matrix of ``p_0..p_{K-1}`` against the weight on ``{q^n : n < trunc}``."""
    K, trunc = _check_sizes(K, trunc)
    q, a, b = p.q, p.a, p.b
    sup = little_support(p, trunc)
    const = _log_const((a * b * q * q,), (a * q,), q)
    log_h = [_log_h_little(m, q, a, b, const) for m in range(K)]
    extra = _shift(_log_ratio((b * q,), (q,), q, trunc), trunc * math.log(a * q))
    rep = _gram(K, trunc, sup, lambda m, n: _little_lattice_log_raw(m, n, q, a, b),
                log_h, _little_ratio(p, trunc), extra)
    return _require_tail(rep, tail_tol)


def _log_w_dual_little(m, q, a, b):
    s, lg = _log_ratio((a * b * q, b * q), (a * q, q), q, m)
    f = (1 - a * b * q ** (2 * m + 1)) / (1 - a * b * q)
    return s * (1 if f > 0 else -1), lg + math.log(abs(f)) + m * math.log(a) + m * m * math.log(q)


def dual_little_support(p: LittleParams, trunc: int) -> WeightedSupport:
    q, a, b = p.q, p.a, p.b
    return _support("dual_little", trunc, lambda m: _log_w_dual_little(m, q, a, b), q)


def _dual_value(spec_fn):
    def value(n, m):
        return phi_log(spec_fn(n, m))
    return value


def gram_dual_little(K: int, p: LittleParams, trunc: int = DEFAULT_TRUNC,
                     tail_tol: float = TAIL_TOL) -> GramReport:
    """Gram matrix of ``d_0..d_{K-1}`` on the lattice ``mu(m)``, ``m < trunc``."""
    K, trunc = _check_sizes(K, trunc)
    q, a, b = p.q, p.a, p.b
    sup = dual_little_support(p, trunc)
    const = _log_const((a * b * q * q,), (a * q,), q)
    log_h = []
    for n in range(K):
        s, lg = _log_ratio((q,), (b * q,), q, n)
        log_h.append(const + lg - n * math.log(a * q))
    value = _dual_value(lambda n, m: _dual_little_spec(n, q ** -m, q, a, b, m))
    rep = _gram(K, trunc, sup, value, log_h, q, _log_w_dual_little(trunc, q, a, b))
    return _require_tail(rep, tail_tol)


# ---------------------------------------------------------------- big side

def _big_branch_weights(p: BigParams):
    """Log weight functions on ``a q^{n+1}`` and ``c q^{n+1}``."""
    q, a, b, c = p.q, p.a, p.b, p.c
    ca = _log_const((b * q, c * q), (a * b * q * q, c / a), q)
    cc = _log_const((a * q, a * b * q / c), (a * b * q * q, a / c), q)

    def wa(n):
        s, lg = _log_ratio((a * b * q / c, a * q), (a * q / c, q), q, n)
        return s, ca + lg + n * math.log(q)

    def wc(n):
        s, lg = _log_ratio((b * q, c * q), (c * q / a, q), q, n)
        return s, cc + lg + n * math.log(q)
    return wa, wc


def big_support(p: BigParams, trunc: int, branch: str) -> WeightedSupport:
    wa, wc = _big_branch_weights(p)
    if branch not in ("a", "c"):
        raise DomainError(f"branch must be 'a' or 'c', got {branch!r}")
    return _support(f"big_{branch}", trunc, wa if branch == "a" else wc, _big_ratio(p, trunc, branch))


def _big_ratio(p, K, branch):
    q, a, b, c = p.q, p.a, p.b, p.c
    k = K + 1
    if branch == "a":
        r = (1 - a * b * q ** k / c) * (1 - a * q ** k) / ((1 - a * q ** k / c) * (1 - q ** k))
    else:
        r = (1 - b * q ** k) * (1 - c * q ** k) / ((1 - c * q ** k / a) * (1 - q ** k))
    return q * max(1.0, r)


def _log_h_big(m, q, a, b, c):
    s, lg = _log_ratio((b * q, a * b * q / c, q), (a * q, a * b * q, c * q), q, m)
    return lg + _log_abq_factor(s, m, a * b * q, q) + m * math.log(-a * c) + m * (m + 3) / 2 * math.log(q)


def norm_big(m: int, p: BigParams) -> float:
    """Closed-form squared norm of ``P_m`` under the unit-mass two-branch weight."""
    return math.exp(_log_h_big(int(m), p.q, p.a, p.b, p.c))


def gram_big(K: int, p: BigParams, trunc: int = DEFAULT_TRUNC,
             tail_tol: float = TAIL_TOL) -> GramReport:
    """Two-branch Gram matrix of ``P_0..P_{K-1}`` on ``{a q^{n+1}} U {c q^{n+1}}``."""
    K, trunc = _check_sizes(K, trunc)
    q, a, b, c = p.q, p.a, p.b, p.c
    wa, wc = _big_branch_weights(p)
    log_h = [_log_h_big(m, q, a, b, c) for m in range(K)]
    left = _gram(K, trunc, big_support(p, trunc, "a"),
                 lambda m, n: _big_lattice_log_raw(m, n, q, a, b, c),
                 log_h, _big_ratio(p, trunc, "a"), wa(trunc))
    right = _gram(K, trunc, big_support(p, trunc, "c"),
                  lambda m, n: _big_c_lattice_log_raw(m, n, q, a, b, c),
                  log_h, _big_ratio(p, trunc, "c"), wc(trunc))
    h = left.rhs_diag
    gram = left.gram + right.gram
    norm = gram / np.sqrt(np.outer(h, h))
    off = norm - np.diag(np.diag(norm))
    rep = GramReport(gram, h, float(np.max(np.abs(off))) if K > 1 else 0.0,
                     float(np.max(np.abs(np.diag(norm) - 1.0))),
                     left.tail_bound + right.tail_bound, 2 * trunc)
    return _require_tail(rep, tail_tol)


def _log_w_dual_big(m, q, a, b, c):
    s, lg = _log_ratio((a * q, a * b * q, a * b * q / c), (b * q, c * q, q), q, m)
    f = (1 - a * b * q ** (2 * m + 1)) / (1 - a * b * q)
    return (s * (1 if f > 0 else -1),
            lg + math.log(abs(f)) + m * math.log(-c / a) + m * (m - 1) / 2 * math.log(q))


def dual_big_support(p: BigParams, trunc: int) -> WeightedSupport:
    q, a, b, c = p.q, p.a, p.b, p.c
    return _support("dual_big", trunc, lambda m: _log_w_dual_big(m, q, a, b, c), q)


def gram_dual_big(K: int, p: BigParams, trunc: int = DEFAULT_TRUNC,
                  tail_tol: float = TAIL_TOL) -> GramReport:
    """Gram matrix of ``D_0..D_{K-1}`` on the lattice ``mu(m)``, ``m < trunc``."""
    K, trunc = _check_sizes(K, trunc)
    q, a, b, c = p.q, p.a, p.b, p.c
    const = _log_const((a * b * q * q, c / a), (b * q, c * q), q)
    log_h = []
    for n in range(K):
        s, lg = _log_ratio((a * q / c, q), (a * q, a * b * q / c), q, n)
        log_h.append(const + lg - n * math.log(q))
    value = _dual_value(lambda n, m: _dual_big_spec(n, q ** -m, q, a, b, c, m))
    rep = _gram(K, trunc, dual_big_support(p, trunc), value, log_h, q,
                _log_w_dual_big(trunc, q, a, b, c))
    return _require_tail(rep, tail_tol)


def _cancelling_sum(terms: List[float]):
    """``(|sum| / max|term|, sum, max|term|)`` for a sum expected to vanish."""
    total = math.fsum(terms)
    scale = max((abs(t) for t in terms), default=0.0)
    return (abs(total) / scale if scale else abs(total)), total, scale


def cross_orth_dual_big(n: int, n_prime: int, p: BigParams, trunc: int = DEFAULT_TRUNC,
                        tol: float = 1e-10) -> IdentityReport:
    """Alternating sum pairing ``D_n(a, b, c)`` with ``D_{n'}(b, a, abq/c)``; it should vanish.

    The residual is ``|sum| / max|term|``.
    """
    for name, v in (("n", n), ("n_prime", n_prime), ("trunc", trunc)):
        if int(v) != v or v < 0:
            raise DomainError(f"{name} must be a nonnegative integer")
    q, a, b, c = p.q, p.a, p.b, p.c
    c2 = a * b * q / c
    terms = []
    for m in range(int(trunc)):
        s, lg = _log_ratio((a * b * q,), (q,), q, m)
        f = (1 - a * b * q ** (2 * m + 1)) / (1 - a * b * q)
        m1, l1 = phi_log(_dual_big_spec(int(n), q ** -m, q, a, b, c, m))
        m2, l2 = phi_log(_dual_big_spec(int(n_prime), q ** -m, q, b, a, c2, m))
        t = (-1) ** m * s * f * m1 * m2 * math.exp(lg + m * (m - 1) / 2 * math.log(q) + l1 + l2)
        terms.append(t)
    res, total, scale = _cancelling_sum(terms)
    return make_report("cross-8.12", dict(p.as_dict(), n=n, n_prime=n_prime, trunc=trunc),
                       total, 0.0, tol, terms_used=len(terms), residual=res,
                       detail=f"residual = |sum| / max|term|, max|term| = {scale:.6g}")


def _pairwise_cancellation(log_w, sign_w, A, B):
    """Worst ``|sum_m w_m A[m,i] B[m,j]| / max|term|`` over all ``(i, j)``.

    ``A`` and ``B`` are ``(mant, log)`` arrays indexed ``[m, i]``.
    """
    (ma, la), (mb, lb) = A, B
    worst, where = 0.0, (0, 0)
    for i in range(ma.shape[1]):
        for j in range(mb.shape[1]):
            with np.errstate(invalid="ignore"):
                logs = log_w + la[:, i] + lb[:, j]
            mant = sign_w * ma[:, i] * mb[:, j]
            keep = (mant != 0) & np.isfinite(logs)
            terms = mant[keep] * np.exp(logs[keep])
            if not len(terms):
                continue
            r = abs(math.fsum(terms)) / np.max(np.abs(terms))
            if r >= worst:
                worst, where = r, (i, j)
    return worst, where


def cross_orth_dual_big_all(n_max: int, p: BigParams, trunc: int = DEFAULT_TRUNC,
                            tol: float = 1e-10) -> IdentityReport:
    """Worst case of :func:`cross_orth_dual_big` over ``n, n' <= n_max``."""
    q, a, b, c = p.q, p.a, p.b, p.c
    ab = a * b
    N = int(n_max) + 1
    m = np.arange(trunc)
    z1 = a * q ** (np.arange(N)[None, :] + 1.0) / c
    c2 = ab * q / c
    z2 = b * q ** (np.arange(N)[None, :] + 1.0) / c2
    D1 = _dual_lattice_log_matrix(trunc, N, q, ab, (a * q, ab * q / c), z1, 0)
    D2 = _dual_lattice_log_matrix(trunc, N, q, ab, (b * q, ab * q / c2), z2, 0)
    log_w, sign_w = np.empty(trunc), np.empty(trunc)
    for k in m:
        s, lg = _log_ratio((ab * q,), (q,), q, int(k))
        f = (1 - ab * q ** (2 * k + 1)) / (1 - ab * q)
        sign_w[k] = (-1) ** int(k) * s * (1 if f > 0 else -1)
        log_w[k] = lg + math.log(abs(f)) + k * (k - 1) / 2 * math.log(q)
    worst, (i, j) = _pairwise_cancellation(log_w, sign_w, D1, D2)
    return make_report("cross-8.12", dict(p.as_dict(), n_max=n_max, trunc=trunc), worst, 0.0, tol,
                       terms_used=trunc, residual=worst,
                       detail=f"worst |sum| / max|term| at (n, n') = ({i}, {j})")


def cross_functions_big_all(n_max: int, p: BigParams, trunc: int = DEFAULT_TRUNC,
                            tol: float = 1e-10) -> IdentityReport:
    """Worst case of :func:`cross_functions_big` over ``n, n' <= n_max``."""
    q, a, b, c = p.q, p.a, p.b, p.c
    N = int(n_max) + 1
    F = big_lattice_matrix_log(trunc, N, q, a, b, c)
    G = big_c_lattice_matrix_log(trunc, N, q, a, b, c)
    log_w, sign_w = np.empty(trunc), np.empty(trunc)
    for k in range(trunc):
        sign_w[k], log_w[k] = _log_rho(k, q, a, b, c)
    worst, (i, j) = _pairwise_cancellation(log_w, sign_w, F, G)
    return make_report("orth-8.6", dict(p.as_dict(), n_max=n_max, trunc=trunc), worst, 0.0, tol,
                       terms_used=trunc, residual=worst,
                       detail=f"cross relation F vs F'; worst at (n, n') = ({i}, {j})")


# ---------------------------------------------------------------- functions of the lattice

def _log_rho(m, q, a, b, c):
    s, lg = _log_ratio((a * q, a * b * q, c * q), (b * q, a * b * q / c, q), q, m)
    f = (1 - a * b * q ** (2 * m + 1)) / (1 - a * b * q)
    return (s * (1 if f > 0 else -1),
            lg + math.log(abs(f)) - m * math.log(-a * c) - m * (m + 3) / 2 * math.log(q))


def _function_value(branch, p):
    q, a, b, c = p.q, p.a, p.b, p.c
    if branch == "F":
        return lambda n, m: _big_lattice_log_raw(m, n, q, a, b, c)
    if branch in ("F'", "F′"):
        return lambda n, m: _big_c_lattice_log_raw(m, n, q, a, b, c)
    raise DomainError(f"branch must be 'F' or \"F'\", got {branch!r}")


def gram_functions_big(K: int, p: BigParams, trunc: int = DEFAULT_TRUNC, branch: str = "F",
                       tail_tol: float = TAIL_TOL) -> GramReport:
    """Orthogonality of ``F_n(q^-m) = P_m(a q^{n+1})`` (or ``F'_n``, from ``c q^{n+1}``) under ``rho(m)``."""
    K, trunc = _check_sizes(K, trunc)
    q, a, b, c = p.q, p.a, p.b, p.c
    value = _function_value(branch, p)
    if branch == "F":
        const = _log_const((b * q, c * q), (a * b * q * q, c / a), q)
        num, den = (a * q / c, q), (a * q, a * b * q / c)
    else:
        const = _log_const((a * q, a * b * q / c), (a * b * q * q, a / c), q)
        num, den = (c * q / a, q), (b * q, c * q)
    log_h = []
    for n in range(K):
        s, lg = _log_ratio(num, den, q, n)
        log_h.append(lg - n * math.log(q))

    def log_w(m):
        s, lg = _log_rho(m, q, a, b, c)
        return s, lg + const
    sup = _support(f"functions_{branch}", trunc, log_w, q)
    rep = _gram(K, trunc, sup, value, log_h, q, log_w(trunc))
    return _require_tail(rep, tail_tol)


def cross_functions_big(n: int, n_prime: int, p: BigParams, trunc: int = DEFAULT_TRUNC,
                        tol: float = 1e-10) -> IdentityReport:
    """``sum_m rho(m) F_n(q^-m) F'_{n'}(q^-m)`` should vanish; residual relative to max|term|."""
    q, a, b, c = p.q, p.a, p.b, p.c
    terms = []
    for m in range(int(trunc)):
        s, lw = _log_rho(m, q, a, b, c)
        m1, l1 = _big_lattice_log_raw(m, int(n), q, a, b, c)
        m2, l2 = _big_c_lattice_log_raw(m, int(n_prime), q, a, b, c)
        terms.append(s * m1 * m2 * math.exp(lw + l1 + l2))
    res, total, scale = _cancelling_sum(terms)
    return make_report("orth-8.6", dict(p.as_dict(), n=n, n_prime=n_prime, trunc=trunc),
                       total, 0.0, tol, terms_used=len(terms), residual=res,
                       detail=f"cross relation F_n vs F'_n'; max|term| = {scale:.6g}")


# ---------------------------------------------------------------- alternative q-Charlier

def _log_w_alt(n, q, a):
    s, lg = _log_ratio((-a,), (q,), q, n)
    return s, lg + math.log1p(a * q ** (2 * n)) + n * math.log(a) + (3 * n - 1) * n / 2 * math.log(q)


def alt_qcharlier_support(a: float, base, trunc: int) -> WeightedSupport:
    q = _as_float_q(base)
    a = _positive(a)
    return _support("alt_qcharlier_dual", trunc, lambda n: _log_w_alt(n, q, a), q)


def gram_alt_qcharlier_dual(K: int, a: float, base, trunc: int = DEFAULT_TRUNC,
                            tail_tol: float = TAIL_TOL) -> GramReport:
    """Orthogonality of the alternative q-Charlier duals on ``q^-n - a q^n``, ``n < trunc``."""
    K, trunc = _check_sizes(K, trunc)
    q = _as_float_q(base)
    a = _positive(a)
    const = math.log(qpinf((-a,), q))
    log_h = []
    for m in range(K):
        s, lg = log_qpochhammer(q, q, m)
        log_h.append(const + lg - m * math.log(a) - m * (m + 1) / 2 * math.log(q))
    value = _dual_value(lambda m, n: _alt_dual_spec(m, n, a, q))
    rep = _gram(K, trunc, alt_qcharlier_support(a, q, trunc), value, log_h, q,
                _log_w_alt(trunc, q, a))
    return _require_tail(rep, tail_tol)
