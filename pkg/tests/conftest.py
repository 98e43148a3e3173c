"""Independent high-precision oracles shared by the test modules.

Float inputs are converted to mpf exactly, so every oracle is the true value
at the same double-precision parameters the package sees.
"""
import itertools

import mpmath
import pytest

from qjacobi import BigParams, LittleParams

REF_LITTLE = (0.5, 0.3, 0.4)
REF_BIG = (0.5, 0.3, 0.4, -0.2)

GRID_Q = (0.3, 0.5, 0.7)
GRID_C = (-0.1, -0.5, -2.0)


def grid_ab(q):
    return (0.2, 0.5, 0.891 / q)


def little_grid():
    return [(q, a, b) for q in GRID_Q for a, b in itertools.product(grid_ab(q), grid_ab(q))]


def big_grid():
    return [(q, a, b, c) for q in GRID_Q
            for a, b, c in itertools.product(grid_ab(q), grid_ab(q), GRID_C)]


def scalar_grid():
    return [(q, a) for q in GRID_Q for a in grid_ab(q)]


def mp_poch(a, q, n):
    out = mpmath.mpf(1)
    for k in range(n):
        out *= 1 - a * q ** k
    return out


def mp_phi(num, den, q, z, n_terms):
    """Truncated ``r phi s`` with the standard balancing factor, summed term by term."""
    r, s = len(num), len(den)
    total = mpmath.mpf(0)
    for k in range(n_terms + 1):
        t = z ** k / mp_poch(q, q, k)
        for x in num:
            t *= mp_poch(x, q, k)
        for y in den:
            t /= mp_poch(y, q, k)
        t *= ((-1) ** k * q ** (k * (k - 1) / 2)) ** (1 + s - r)
        total += t
    return total


def mpf(*xs):
    return [mpmath.mpf(x) for x in xs]


def mp_little(n, lam, q, a, b, dps=80):
    with mpmath.workdps(dps):
        q, a, b, lam = mpf(q, a, b, lam)
        return mp_phi((q ** -n, a * b * q ** (n + 1)), (a * q,), q, q * lam, n)


def mp_big(n, lam, q, a, b, c, dps=80):
    with mpmath.workdps(dps):
        q, a, b, c, lam = mpf(q, a, b, c, lam)
        return mp_phi((q ** -n, a * b * q ** (n + 1), lam), (a * q, c * q), q, q, n)


def mp_dual_little(n, x, q, a, b, dps=80):
    with mpmath.workdps(dps):
        q, a, b, x = mpf(q, a, b, x)
        return mp_phi((x, a * b * q / x, q ** -n), (b * q,), q, q ** n / a, n)


def mp_dual_big(n, x, q, a, b, c, dps=80, stop=None):
    """``stop`` cuts the sum early; on the lattice ``x = q**-m`` terms past ``m`` vanish."""
    with mpmath.workdps(dps):
        q, a, b, c, x = mpf(q, a, b, c, x)
        return mp_phi((x, a * b * q / x, q ** -n), (a * q, a * b * q / c), q, a * q ** (n + 1) / c,
                      n if stop is None else min(n, stop))


def mp_alt_charlier(n, x, a, q, dps=80):
    with mpmath.workdps(dps):
        q, a, x = mpf(q, a, x)
        return mp_phi((q ** -n, -a * q ** n), (mpmath.mpf(0),), q, q * x, n)


def rel(x, y):
    return abs(x - y) / abs(y)


@pytest.fixture
def little_ref():
    return LittleParams(*REF_LITTLE)


@pytest.fixture
def big_ref():
    return BigParams(*REF_BIG)
