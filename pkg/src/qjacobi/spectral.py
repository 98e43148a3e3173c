"""Truncated Jacobi matrices, their spectra and the normalized connection matrices."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .exceptions import NonConvergence, ConvergenceFailure, DomainError
from .families import (
    BigParams,
    LittleParams,
    _big_c_lattice_log_raw,
    _big_lattice_log_raw,
    _dual_big_coeffs,
    big_c_lattice_matrix_log,
    big_lattice_matrix_log,
    little_lattice_matrix_log,
    _log_norm_big_raw,
    _log_norm_little_raw,
    _little_lattice_log_raw,
    _exp_scaled,
)
from .qcore import log_qpochhammer, qpinf
from .reports import IdentityReport, make_report

LABELS = ("I1", "I2", "J_canonical", "J_dual_little", "J_dual_big_a", "J_dual_big_c")


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix stored as its diagonal and one off-diagonal."""

    size: int
    diag: np.ndarray
    offdiag: np.ndarray
    label: str

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if self.size < 1 or d.shape != (self.size,) or e.shape != (self.size - 1,):
            raise DomainError("diag must have length size and offdiag length size - 1")
        if self.label not in LABELS:
            raise DomainError(f"unknown operator label {self.label!r}")
        if self.label in ("I1", "I2") and np.any(e == 0.0):
            raise DomainError("a Jacobi matrix needs nonzero off-diagonal entries")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[:-1] += self.offdiag * x[1:]
        y[1:] += self.offdiag * x[:-1]
        return y


def _sqrt_checked(x, what):
    if x < 0:
        raise DomainError(f"negative radicand in {what}")
    return math.sqrt(x)


def _check_size(N):
    if int(N) != N or N < 2:
        raise DomainError(f"matrix size must be an integer >= 2, got {N!r}")
    return int(N)


def i1_coefficients(n: int, p: LittleParams) -> Tuple[float, float]:
    """``(a_n, b_n)`` of the I1 Jacobi matrix."""
    q, a, b = p.q, p.a, p.b
    ab = a * b
    rad = (1 - q ** (n + 1)) * (1 - a * q ** (n + 1)) * (1 - b * q ** (n + 1)) * (1 - ab * q ** (n + 1))
    den = (1 - ab * q ** (2 * n + 1)) * (1 - ab * q ** (2 * n + 3))
    an = math.sqrt(a) * q ** (n + 0.5) * _sqrt_checked(rad, "a_n") / (
        (1 - ab * q ** (2 * n + 2)) * _sqrt_checked(den, "a_n"))
    tail = 0.0
    if n:
        tail = a * (1 - q ** n) * (1 - b * q ** n) / (1 - ab * q ** (2 * n))
    bn = q ** n / (1 - ab * q ** (2 * n + 1)) * (
        (1 - a * q ** (n + 1)) * (1 - ab * q ** (n + 1)) / (1 - ab * q ** (2 * n + 2)) + tail)
    return an, bn


def i2_coefficients(n: int, p: BigParams) -> Tuple[float, float]:
    """``(a_n, b_n)`` of the I2 Jacobi matrix."""
    q, a, b, c = p.q, p.a, p.b, p.c
    ab = a * b
    k = n + 1
    rad = ((1 - q ** k) * (1 - a * q ** k) * (1 - b * q ** k) * (1 - ab * q ** k)
           * (1 - c * q ** k) * (1 - ab * q ** k / c))
    den = (1 - ab * q ** (2 * k - 1)) * (1 - ab * q ** (2 * k + 1))
    an = _sqrt_checked(-a * c * q ** (k + 1), "a_n") * _sqrt_checked(rad, "a_n") / (
        (1 - ab * q ** (2 * k)) * _sqrt_checked(den, "a_n"))
    first = (1 - a * q ** (n + 1)) * (1 - ab * q ** (n + 1)) * (1 - c * q ** (n + 1)) / (
        (1 - ab * q ** (2 * n + 1)) * (1 - ab * q ** (2 * n + 2)))
    second = 0.0
    if n:
        second = a * c * q ** (n + 1) * (1 - q ** n) * (1 - b * q ** n) * (1 - ab * q ** n / c) / (
            (1 - ab * q ** (2 * n)) * (1 - ab * q ** (2 * n + 1)))
    return an, first - second - 1.0


def build_I1(N: int, p: LittleParams) -> TridiagonalOperator:
    """N x N truncation of I1: diagonal ``b_n``, off-diagonal ``-a_n``."""
    N = _check_size(N)
    coeffs = [i1_coefficients(n, p) for n in range(N)]
    diag = np.array([bn for _, bn in coeffs])
    off = -np.array([an for an, _ in coeffs[:-1]])
    return TridiagonalOperator(N, diag, off, "I1")


def build_I2(N: int, p: BigParams) -> TridiagonalOperator:
    """N x N truncation of I2: diagonal ``-b_n``, off-diagonal ``+a_n``."""
    N = _check_size(N)
    coeffs = [i2_coefficients(n, p) for n in range(N)]
    diag = -np.array([bn for _, bn in coeffs])
    off = np.array([an for an, _ in coeffs[:-1]])
    return TridiagonalOperator(N, diag, off, "I2")


def build_J_canonical(N: int, p) -> TridiagonalOperator:
    """J is diagonal in the canonical basis with entries ``mu(n)``."""
    N = _check_size(N)
    q = p.q
    diag = np.array([q ** -n + p.a * p.b * q ** (n + 1) for n in range(N)])
    return TridiagonalOperator(N, diag, np.zeros(N - 1), "J_canonical")


def eigenvalues(op: TridiagonalOperator) -> np.ndarray:
    """All eigenvalues, sorted descending (LAPACK symmetric tridiagonal solver)."""
    if op.size == 1:
        return op.diag.copy()
    try:
        w = eigh_tridiagonal(op.diag, op.offdiag, eigvals_only=True)
    except LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise ConvergenceFailure("eigensolver returned non-finite values")
    return np.sort(w)[::-1]


def eigenpairs(op: TridiagonalOperator) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching unit eigenvectors as columns."""
    try:
        w, v = eigh_tridiagonal(op.diag, op.offdiag)
    except LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


@dataclass(frozen=True)
class SpectrumReport:
    computed: np.ndarray
    predicted: np.ndarray
    matched_count: int
    max_abs_dev: float
    truncation_size: int

    @property
    def deviations(self) -> np.ndarray:
        return np.abs(self.computed - self.predicted)

    def to_dict(self) -> dict:
        return {
            "computed": [float(x) for x in self.computed],
            "predicted": [float(x) for x in self.predicted],
            "matched_count": int(self.matched_count),
            "max_abs_dev": float(self.max_abs_dev),
            "truncation_size": int(self.truncation_size),
        }


def _guard_top(N, top_k):
    if int(top_k) != top_k or top_k < 1:
        raise DomainError(f"top_k must be a positive integer, got {top_k!r}")
    if top_k > N / 4:
        raise DomainError(f"top_k={top_k} exceeds N/4={N / 4:g}; truncation pollutes the lower spectrum")


def verify_spectrum_I1(N: int, p: LittleParams, top_k: int) -> SpectrumReport:
    """Compare the ``top_k`` largest eigenvalues of truncated I1 with ``q**n``."""
    N = _check_size(N)
    _guard_top(N, top_k)
    w = eigenvalues(build_I1(N, p))[:top_k]
    pred = p.q ** np.arange(top_k, dtype=float)
    return SpectrumReport(w, pred, int(top_k), float(np.max(np.abs(w - pred))), N)


def verify_spectrum_I2(N: int, p: BigParams, top_k: int) -> SpectrumReport:
    """Match the positive branch with ``a q^{n+1}`` and the negative branch with ``c q^{n+1}``.

    Each branch is sorted by decreasing magnitude and paired positionally.
    """
    N = _check_size(N)
    _guard_top(N, top_k)
    w = eigenvalues(build_I2(N, p))
    pos = w[w > 0][:top_k]
    neg = np.sort(w[w < 0])[:top_k]
    if len(pos) < top_k or len(neg) < top_k:
        raise DomainError("truncation has fewer eigenvalues of one sign than top_k")
    k = np.arange(1, top_k + 1, dtype=float)
    pred_pos = p.a * p.q ** k
    pred_neg = p.c * p.q ** k
    computed = np.concatenate([pos, neg[::-1]])
    predicted = np.concatenate([pred_pos, pred_neg[::-1]])
    dev = float(np.max(np.abs(computed - predicted)))
    return SpectrumReport(computed, predicted, 2 * int(top_k), dev, N)


# ---------------------------------------------------------------- connection matrices

@dataclass(frozen=True)
class ConnectionMatrix:
    rows: int
    cols: int
    entries: np.ndarray
    family: str


def _log_ratio_inf(num, den, q):
    """``log`` of ``prod (num;q)_inf / prod (den;q)_inf``; DomainError unless positive."""
    top = qpinf(num, q)
    bottom = qpinf(den, q)
    if not (top > 0 and bottom > 0):
        raise DomainError("infinite-product normalization constant is not positive")
    return math.log(top) - math.log(bottom)


def _log_poch_ratio(num, den, q, n):
    sign, log = 1, 0.0
    for par in num:
        s, lg = log_qpochhammer(par, q, n)
        sign *= s
        log += lg
    for par in den:
        s, lg = log_qpochhammer(par, q, n)
        sign *= s
        log -= lg
    return sign, log


def _half_log_positive(sign, log, what):
    if sign <= 0:
        raise DomainError(f"negative radicand in {what}")
    return 0.5 * log


def _log_cn_little(n, q, a, b, log_const):
    s, lg = _log_poch_ratio((b * q,), (q,), q, n)
    return _half_log_positive(s, log_const + lg + n * math.log(a * q), "c_n")


def _log_cn_big(n, q, a, b, c, log_const):
    s, lg = _log_poch_ratio((a * b * q / c, a * q), (a * q / c, q), q, n)
    return _half_log_positive(s, log_const + lg + n * math.log(q), "c_n")


def _log_cn_big_c(n, q, a, b, c, log_const):
    s, lg = _log_poch_ratio((b * q, c * q), (c * q / a, q), q, n)
    return _half_log_positive(s, log_const + lg + n * math.log(q), "c'_n")


def _fill(log_cn, log_nm, values):
    mant, log = values
    with np.errstate(under="ignore", over="ignore"):
        return mant * np.exp(log + np.asarray(log_cn)[None, :] + np.asarray(log_nm)[:, None])


def _little_matrix_raw(M, Ncols, q, a, b):
    const = _log_ratio_inf((a * q,), (a * b * q * q,), q)
    log_cn = [_log_cn_little(n, q, a, b, const) for n in range(Ncols)]
    log_nm = [_log_norm_little_raw(m, q, a, b) for m in range(M)]
    return _fill(log_cn, log_nm, little_lattice_matrix_log(M, Ncols, q, a, b))


def _big_a_matrix_raw(M, Ncols, q, a, b, c):
    const = _log_ratio_inf((b * q, c * q), (a * b * q * q, c / a), q)
    log_cn = [_log_cn_big(n, q, a, b, c, const) for n in range(Ncols)]
    log_nm = [_log_norm_big_raw(m, q, a, b, c) for m in range(M)]
    return _fill(log_cn, log_nm, big_lattice_matrix_log(M, Ncols, q, a, b, c))


def _big_c_matrix_raw(M, Ncols, q, a, b, c):
    const = _log_ratio_inf((a * q, a * b * q / c), (a * b * q * q, a / c), q)
    log_cn = [_log_cn_big_c(n, q, a, b, c, const) for n in range(Ncols)]
    log_nm = [_log_norm_big_raw(m, q, a, b, c) for m in range(M)]
    return _fill(log_cn, log_nm, big_c_lattice_matrix_log(M, Ncols, q, a, b, c))


def connection_matrix_little(M: int, Ncols: int, p: LittleParams) -> ConnectionMatrix:
    """Entries ``c_n beta_m(q^n)`` for ``m < M``, ``n < Ncols``."""
    return ConnectionMatrix(M, Ncols, _little_matrix_raw(int(M), int(Ncols), p.q, p.a, p.b), "little")


def connection_matrix_big(M: int, Ncols: int, p: BigParams) -> Tuple[ConnectionMatrix, ConnectionMatrix]:
    """The two blocks of the I2 connection matrix: support ``a q^{n+1}`` and ``c q^{n+1}``."""
    q, a, b, c = p.q, p.a, p.b, p.c
    left = _big_a_matrix_raw(int(M), int(Ncols), q, a, b, c)
    right = _big_c_matrix_raw(int(M), int(Ncols), q, a, b, c)
    return (ConnectionMatrix(M, Ncols, left, "big_a_branch"),
            ConnectionMatrix(M, Ncols, right, "big_c_branch"))


def connection_symmetry_defect(M: int, Ncols: int, p: BigParams) -> float:
    """Max ``|a'_{mn}(a,b,c) - a_{mn}(c, ab/c, a)|`` over the block.

    The right side is the a-branch formula evaluated at permuted parameters,
    which leave the big-family domain, so the raw evaluator is used.
    """
    _, right = connection_matrix_big(M, Ncols, p)
    q, a, b, c = p.q, p.a, p.b, p.c
    swapped = _big_a_matrix_raw(int(M), int(Ncols), q, c, a * b / c, a)
    return float(np.max(np.abs(right.entries - swapped)))


def _window(M):
    return max(1, int(M) // 3)


def _gram_defect(G, k):
    k = max(1, k)
    if not np.all(np.isfinite(G[:k, :k])):
        raise NonConvergence("connection matrix entries overflowed; reduce M")
    block = G[:k, :k]
    return float(np.max(np.abs(block - np.eye(k))))


def unitarity_defect_little(M: int, p: LittleParams) -> Dict[str, float]:
    """Defects of both orthogonality relations of the M x M truncated matrix.

    Inner products are restricted to indices below ``M // 3`` so that every
    checked row or column keeps its dominant mass inside the truncation
    (column ``n`` of the big blocks peaks near row ``2n``).
    """
    A = connection_matrix_little(M, M, p).entries
    h = _window(M)
    rows = _gram_defect(A @ A.T, h)
    cols = _gram_defect(A.T @ A, h)
    return {"rows": rows, "cols": cols, "max": max(rows, cols)}


def unitarity_defect_big(M: int, p: BigParams) -> Dict[str, float]:
    """Defects of the column relations within and across branches and the combined row relation."""
    left, right = connection_matrix_big(M, M, p)
    A, B = left.entries, right.entries
    h = _window(M)
    cols_a = _gram_defect(A.T @ A, h)
    cols_c = _gram_defect(B.T @ B, h)
    X = (A.T @ B)[:h, :h]
    if not np.all(np.isfinite(X)):
        raise NonConvergence("connection matrix entries overflowed; reduce M")
    cross = float(np.max(np.abs(X)))
    rows = _gram_defect(A @ A.T + B @ B.T, h)
    return {"cols_a": cols_a, "cols_c": cols_c, "cross": cross, "rows": rows,
            "max": max(cols_a, cols_c, cross, rows)}


# ---------------------------------------------------------------- eigenvectors

def _cosine(u, v):
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    return float(abs(u @ v) / (nu * nv))


def eigenvector_alignment_I1(N: int, p: LittleParams, n_max: int) -> np.ndarray:
    """Cosine similarity between the eigenvector for ``q^n`` and ``(beta_m(q^n))_m``, n <= n_max."""
    w, V = eigenpairs(build_I1(N, p))
    q, a, b = p.q, p.a, p.b
    log_nm = [_log_norm_little_raw(m, q, a, b) for m in range(N)]
    out = []
    for n in range(n_max + 1):
        beta = np.array([_exp_scaled(_shift(_little_lattice_log_raw(m, n, q, a, b), log_nm[m]))
                         for m in range(N)])
        out.append(_cosine(V[:, n], beta))
    return np.array(out)


def eigenvector_alignment_I2(N: int, p: BigParams, n_max: int) -> Dict[str, np.ndarray]:
    """Same check for I2 on both branches, ``a q^{n+1}`` and ``c q^{n+1}``."""
    w, V = eigenpairs(build_I2(N, p))
    q, a, b, c = p.q, p.a, p.b, p.c
    log_nm = [_log_norm_big_raw(m, q, a, b, c) for m in range(N)]
    neg = np.where(w < 0)[0][::-1]
    res = {"a": [], "c": []}
    for n in range(n_max + 1):
        beta_a = np.array([_exp_scaled(_shift(_big_lattice_log_raw(m, n, q, a, b, c), log_nm[m]))
                           for m in range(N)])
        beta_c = np.array([_exp_scaled(_shift(_big_c_lattice_log_raw(m, n, q, a, b, c), log_nm[m]))
                           for m in range(N)])
        res["a"].append(_cosine(V[:, n], beta_a))
        res["c"].append(_cosine(V[:, neg[n]], beta_c))
    return {k: np.array(v) for k, v in res.items()}


def _shift(pair, log):
    return pair[0], pair[1] + log


# ---------------------------------------------------------------- J in the dual bases

def _log_cn_ratio_little(n, p):
    """``log(c_{n+1} / c_n)`` from the closed form of ``c_n``."""
    q, a, b = p.q, p.a, p.b
    return 0.5 * (math.log(a * q) + math.log(1 - b * q ** (n + 1)) - math.log(1 - q ** (n + 1)))


def _dual_j_pairs(p, family: str, n_max: int):
    """Yield ``(upper_n, lower_{n+1})`` normalized off-diagonal coefficients of J."""
    q = p.q
    if family == "little":
        a, b = p.a, p.b
        const = _log_ratio_inf((a * q,), (a * b * q * q,), q)
        log_c = [_log_cn_little(n, q, a, b, const) for n in range(n_max + 2)]
        for n in range(n_max + 1):
            r = math.exp(log_c[n] - log_c[n + 1])
            up = r * (-a * q ** -n * (1 - b * q ** (n + 1)))
            low = (1 / r) * (-q ** -(n + 1) * (1 - q ** (n + 1)))
            yield up, low
        return
    a, b, c = p.a, p.b, p.c
    if family == "big_a":
        const = _log_ratio_inf((b * q, c * q), (a * b * q * q, c / a), q)
        log_c = [_log_cn_big(n, q, a, b, c, const) for n in range(n_max + 2)]
        for n in range(n_max + 1):
            r = math.exp(log_c[n] - log_c[n + 1])
            up = r * c / a * q ** (-2 * n - 1) * (1 - a * q ** (n + 1)) * (1 - a * b * q ** (n + 1) / c)
            low = (1 / r) * c / a * q ** (-2 * n - 2) * (1 - a * q ** (n + 1) / c) * (1 - q ** (n + 1))
            yield up, low
        return
    if family == "big_c":
        const = _log_ratio_inf((a * q, a * b * q / c), (a * b * q * q, a / c), q)
        log_c = [_log_cn_big_c(n, q, a, b, c, const) for n in range(n_max + 2)]
        for n in range(n_max + 1):
            r = math.exp(log_c[n] - log_c[n + 1])
            up = r * a / c * q ** (-2 * n - 1) * (1 - b * q ** (n + 1)) * (1 - c * q ** (n + 1))
            low = (1 / r) * a / c * q ** (-2 * n - 2) * (1 - c * q ** (n + 1) / a) * (1 - q ** (n + 1))
            yield up, low
        return
    raise DomainError(f"family must be 'little', 'big_a' or 'big_c', got {family!r}")


def build_J_dual(N: int, p, family: str) -> TridiagonalOperator:
    """Matrix of J in a normalized eigenbasis of I1 (``'little'``) or I2 (``'big_a'``/``'big_c'``)."""
    N = _check_size(N)
    q = p.q
    off = np.array([up for up, _ in _dual_j_pairs(p, family, N - 2)])
    n = np.arange(N, dtype=float)
    if family == "little":
        diag = q ** -n * (1 + p.a)
        label = "J_dual_little"
    else:
        a, b, c = p.a, p.b, p.c
        if family == "big_c":
            a, b, c = b, a, a * b / c
            label = "J_dual_big_c"
        else:
            label = "J_dual_big_a"
        A, C = _dual_big_coeffs(n, q, a, b, c)
        diag = 1 + a * b * q - A - C
    return TridiagonalOperator(N, diag, off, label)


def j_dual_symmetry_check(p, family: str, n_max: int, tol: float = 1e-13) -> IdentityReport:
    """Check that the stated ``c_n`` make J symmetric in the normalized dual basis."""
    if int(n_max) != n_max or n_max < 2:
        raise DomainError("n_max must be an integer >= 2")
    worst, worst_pair = 0.0, (0.0, 0.0)
    for up, low in _dual_j_pairs(p, family, int(n_max)):
        r = abs(up - low) / max(abs(up), abs(low))
        if r >= worst:
            worst, worst_pair = r, (up, low)
    ident = "jsym-4.4" if family == "little" else "jsym-7.4"
    params = dict(p.as_dict(), branch=family)
    return make_report(ident, params, worst_pair[0], worst_pair[1], tol,
                       terms_used=int(n_max) + 1, residual=worst,
                       detail=f"{family}: max relative asymmetry of J over n <= {n_max}")
