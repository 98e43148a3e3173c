import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qjacobi import spectral as sp
from qjacobi.exceptions import DomainError
from qjacobi.families import BigParams, LittleParams

from conftest import REF_BIG, REF_LITTLE


def test_tridiagonal_operator_matches_dense(little_ref):
    op = sp.build_I1(20, little_ref)
    D = op.to_dense()
    assert np.allclose(D, D.T)
    x = np.linspace(-1, 1, 20)
    assert np.allclose(op.matvec(x), D @ x, rtol=1e-14, atol=1e-16)


def test_operator_validation():
    with pytest.raises(DomainError):
        sp.TridiagonalOperator(3, np.ones(3), np.ones(3), "I1")
    with pytest.raises(DomainError):
        sp.TridiagonalOperator(3, np.ones(3), np.array([1.0, 0.0]), "I1")
    with pytest.raises(DomainError):
        sp.TridiagonalOperator(3, np.ones(3), np.ones(2), "nonsense")
    with pytest.raises(DomainError):
        sp.build_I1(1, LittleParams(*REF_LITTLE))


@pytest.mark.parametrize("builder,params", [(sp.build_I1, REF_LITTLE), (sp.build_I2, REF_BIG)])
def test_eigenvalues_match_dense_solver(builder, params):
    p = LittleParams(*params) if len(params) == 3 else BigParams(*params)
    op = builder(60, p)
    dense = np.sort(np.linalg.eigvalsh(op.to_dense()))[::-1]
    assert np.allclose(sp.eigenvalues(op), dense, rtol=0, atol=1e-14)


def test_eigenpairs_are_eigenpairs(big_ref):
    op = sp.build_I2(40, big_ref)
    w, V = sp.eigenpairs(op)
    D = op.to_dense()
    assert np.max(np.abs(D @ V - V * w)) < 1e-13
    assert np.allclose(V.T @ V, np.eye(40), atol=1e-13)


def test_I1_spectrum_is_q_powers(little_ref):
    rep = sp.verify_spectrum_I1(120, little_ref, 20)
    assert rep.max_abs_dev < 1e-12
    assert rep.matched_count == 20
    assert set(rep.to_dict()) == {"computed", "predicted", "matched_count", "max_abs_dev", "truncation_size"}


def test_I2_spectrum_has_two_branches(big_ref):
    rep = sp.verify_spectrum_I2(120, big_ref, 15)
    assert rep.max_abs_dev < 1e-12
    assert np.sum(rep.computed > 0) == 15 and np.sum(rep.computed < 0) == 15


def test_top_k_guard(little_ref):
    with pytest.raises(DomainError):
        sp.verify_spectrum_I1(300, little_ref, 100)
    with pytest.raises(DomainError):
        sp.verify_spectrum_I1(300, little_ref, 0)


def test_eigenvectors_follow_expansion_coefficients(little_ref, big_ref):
    assert np.all(sp.eigenvector_alignment_I1(80, little_ref, 8) > 1 - 1e-12)
    al = sp.eigenvector_alignment_I2(80, big_ref, 6)
    assert np.all(al["a"] > 1 - 1e-12) and np.all(al["c"] > 1 - 1e-12)


def test_canonical_J_is_diagonal_lattice(little_ref):
    op = sp.build_J_canonical(5, little_ref)
    q, a, b = REF_LITTLE
    assert np.allclose(op.diag, [q ** -n + a * b * q ** (n + 1) for n in range(5)])
    assert not np.any(op.offdiag)


def test_dual_little_J_spectrum(little_ref):
    # the truncated J in the dual little basis reproduces mu(m) at the top of its spectrum
    op = sp.build_J_dual(60, little_ref, "little")
    w = np.sort(np.linalg.eigvalsh(op.to_dense()))
    q, a, b = REF_LITTLE
    mu = np.array([q ** -m + a * b * q ** (m + 1) for m in range(6)])
    assert np.allclose(w[:6], mu, rtol=1e-10)


@pytest.mark.parametrize("family", ["little", "big_a", "big_c"])
def test_J_symmetric_in_normalized_basis(family, little_ref, big_ref):
    p = little_ref if family == "little" else big_ref
    assert sp.j_dual_symmetry_check(p, family, 30).passed


def test_connection_matrix_unitarity_converges(little_ref, big_ref):
    d6, d12, d24 = (sp.unitarity_defect_little(M, little_ref)["max"] for M in (6, 12, 24))
    assert d12 <= d6 / 2 and d24 <= d12 / 2
    big = [sp.unitarity_defect_big(M, big_ref) for M in (6, 12, 24)]
    assert big[1]["max"] <= big[0]["max"] / 2 and big[2]["max"] <= big[1]["max"] / 2
    assert set(big[0]) == {"cols_a", "cols_c", "cross", "rows", "max"}


def test_connection_matrix_dense_check(little_ref):
    # independent recomputation of the column relation on the window
    M = 45
    A = sp.connection_matrix_little(M, M, little_ref).entries
    h = M // 3
    assert np.max(np.abs((A.T @ A)[:h, :h] - np.eye(h))) < 1e-10


def test_connection_symmetry_defect(big_ref):
    assert sp.connection_symmetry_defect(30, 30, big_ref) < 1e-12


@settings(max_examples=15, deadline=None)
@given(q=st.sampled_from([0.3, 0.5, 0.7]), a=st.floats(0.1, 0.9), b=st.floats(0.1, 0.9))
def test_I1_top_eigenvalues_property(q, a, b):
    p = LittleParams(q, a, b)
    rep = sp.verify_spectrum_I1(80, p, 10)
    assert rep.max_abs_dev < 1e-10
