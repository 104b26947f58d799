import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from jsrcert.families import ALPHA_STAR
from jsrcert.linalg import (
    EigenvalueError,
    NormKind,
    as_matrix,
    determinant,
    eigenvalues,
    eigenvalues_batch,
    induced_norm,
    rotation,
    spectral_radius,
)

import oracles

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def square(d):
    return arrays(np.float64, (d, d), elements=finite)


def test_jordan_block_eigenvalues():
    spec = eigenvalues([[1, 1], [0, 1]])
    assert np.allclose(spec.eigenvalues, [1, 1])
    assert spec.rho == 1.0


@pytest.mark.parametrize("d", [2, 3, 5, 16])
def test_identity_spectrum(d):
    spec = eigenvalues(np.eye(d))
    assert np.allclose(spec.eigenvalues, np.ones(d))
    assert spec.rho == 1.0 and spec.min_modulus == 1.0


def test_antidiagonal_swap():
    lam = 0.5
    spec = eigenvalues([[0, lam], [lam, 0]])
    assert sorted(spec.eigenvalues.real) == [-0.5, 0.5]
    assert spec.rho == 0.5


def test_alpha_star_lower_triangular():
    s2 = ALPHA_STAR * np.array([[1.0, 0.0], [1.0, 1.0]])
    assert abs(spectral_radius(s2) - ALPHA_STAR) <= 1e-15


def test_zero_matrix():
    assert spectral_radius(np.zeros((3, 3))) == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_spectral_radius_against_polynomial_roots(seed):
    a = np.random.default_rng(seed).normal(size=(4, 4))
    roots = oracles.durand_kerner(oracles.charpoly(a))
    assert abs(spectral_radius(a) - np.max(np.abs(roots))) <= 1e-8


def test_companion_fallback_agrees():
    from jsrcert.linalg import _eig_companion

    a = np.random.default_rng(11).normal(size=(5, 5))
    got = np.sort_complex(_eig_companion(a))
    want = np.sort_complex(np.linalg.eigvals(a))
    assert np.allclose(got, want, atol=1e-8)


def test_eigenvalue_error_carries_matrix():
    err = EigenvalueError("boom", np.eye(2))
    assert np.array_equal(err.matrix, np.eye(2))


def test_determinant_small_cases():
    lam = 0.3
    assert determinant([[0, lam], [lam, 0]]) == pytest.approx(-lam ** 2)
    a = np.random.default_rng(0).normal(size=(2, 2))
    b = np.random.default_rng(1).normal(size=(2, 2))
    assert determinant(a @ b) == pytest.approx(determinant(a) * determinant(b), rel=1e-12)


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_determinant_against_leibniz(d):
    a = np.random.default_rng(d).normal(size=(d, d))
    want = oracles.leibniz_det(a)
    assert abs(determinant(a) - want) <= 1e-9 * max(1.0, abs(want))


def test_complex_determinant():
    a = np.array([[1 + 1j, 2], [0.5j, -1]])
    assert determinant(a) == pytest.approx(complex(oracles.leibniz_det(a)))


def test_norm_examples():
    assert induced_norm([[1, 0], [0, 0.5]], "inf") == 1.0
    assert induced_norm(rotation(0.7), "two") == pytest.approx(1.0, abs=1e-15)
    assert induced_norm([[1, 1], [0, 1]], "one") == 2.0


@pytest.mark.parametrize("kind", list(NormKind))
def test_norm_matches_numpy(kind):
    a = np.random.default_rng(4).normal(size=(5, 5))
    ord_ = {"one": 1, "inf": np.inf, "two": 2}[kind.value]
    assert induced_norm(a, kind) == pytest.approx(np.linalg.norm(a, ord_), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5).flatmap(lambda d: st.tuples(square(d), square(d))))
def test_norm_properties(pair):
    a, b = pair
    rho = spectral_radius(a)
    for kind in NormKind:
        na, nb = induced_norm(a, kind), induced_norm(b, kind)
        assert induced_norm(a @ b, kind) <= na * nb * (1 + 1e-12) + 1e-12
        assert rho <= na * (1 + 1e-9) + 1e-12
    d = a.shape[0]
    assert abs(determinant(a)) ** (1.0 / d) <= rho * (1 + 1e-9) + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6).flatmap(square))
def test_eigenvalue_residual(a):
    ev = eigenvalues(a).eigenvalues
    assert ev.shape == (a.shape[0],)
    bound = 1e-8 * max(1.0, np.linalg.norm(a, 2))
    for lam in ev:
        smin = np.linalg.svd(a - lam * np.eye(a.shape[0]), compute_uv=False)[-1]
        assert smin <= bound


@pytest.mark.parametrize("seed", range(10))
def test_cyclic_similarity(seed):
    rng = np.random.default_rng(seed)
    d = 2 + seed % 4
    a, b = rng.normal(size=(2, d, d))
    ab = np.sort_complex(eigenvalues(a @ b).eigenvalues)
    ba = np.sort_complex(eigenvalues(b @ a).eigenvalues)
    # sort_complex orders by real part, so near-ties can swap; match greedily
    for lam in ab:
        j = int(np.argmin(np.abs(ba - lam)))
        assert abs(ba[j] - lam) <= 1e-9 * max(1.0, abs(lam))
        ba = np.delete(ba, j)


def test_batch_and_single_are_bit_identical():
    rng = np.random.default_rng(0)
    for d in (2, 3, 4):
        stack = rng.normal(size=(20, d, d))
        batch = eigenvalues_batch(stack)
        for i in range(20):
            assert np.array_equal(batch[i], eigenvalues(stack[i]).eigenvalues)


def test_deterministic():
    a = np.random.default_rng(3).normal(size=(6, 6))
    assert np.array_equal(eigenvalues(a).eigenvalues, eigenvalues(a.copy()).eigenvalues)


def test_as_matrix_validation():
    with pytest.raises(ValueError):
        as_matrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        as_matrix([[1, math.nan], [0, 1]])
    with pytest.raises(ValueError):
        as_matrix([[1j, 0], [0, 1]], field="real")
    assert as_matrix([[1, 0], [0, 1]], field="complex").dtype == np.complex128
