"""Small dense matrix arithmetic over the reals and complexes.

Matrices are plain 2-D numpy arrays (``float64`` for real sets, ``complex128``
for complex ones).  Most routines also accept a stack of shape ``(m, d, d)``
and work along the leading axis; the single-matrix entry points route through
the stacked versions so a matrix gives bit-identical answers whether it is
processed alone or inside a batch.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

MAX_DIM = 16


class NormKind(str, Enum):
    ONE = "one"
    INF = "inf"
    TWO = "two"


class EigenvalueError(ArithmeticError):
    """Raised when the eigenvalue iteration fails to converge."""

    def __init__(self, message: str, matrix: np.ndarray):
        super().__init__(message)
        self.matrix = matrix


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    rho: float
    min_modulus: float


def as_matrix(a, field: str | None = None) -> np.ndarray:
    """Validate and convert ``a`` to a square real or complex array."""
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not 1 <= arr.shape[0] <= MAX_DIM:
        raise ValueError(f"dimension {arr.shape[0]} outside supported range 1..{MAX_DIM}")
    if field is None:
        field = "complex" if np.iscomplexobj(arr) else "real"
    if field == "real":
        if np.iscomplexobj(arr):
            if np.any(arr.imag != 0):
                raise ValueError("real field requested for a matrix with complex entries")
            arr = arr.real
        arr = np.array(arr, dtype=np.float64)
    elif field == "complex":
        arr = np.array(arr, dtype=np.complex128)
    else:
        raise ValueError(f"unknown field {field!r}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


# ---------------------------------------------------------------------------
# eigenvalues


def _eig2(stack: np.ndarray) -> np.ndarray:
    a = stack[:, 0, 0].astype(np.complex128)
    b = stack[:, 0, 1]
    c = stack[:, 1, 0]
    d = stack[:, 1, 1]
    half_tr = 0.5 * (a + d)
    # discriminant written as ((a-d)/2)^2 + bc avoids cancellation in tr^2/4 - det
    disc = (0.5 * (a - d)) ** 2 + b * c
    s = np.sqrt(disc)
    big = np.where(np.abs(half_tr + s) >= np.abs(half_tr - s), half_tr + s, half_tr - s)
    det = a * d - b * c
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big != 0, det / np.where(big != 0, big, 1), 0.0)
    return np.stack([big, small], axis=-1)


def _charpoly(a: np.ndarray) -> np.ndarray:
    # Faddeev-LeVerrier; coefficients highest degree first, monic
    d = a.shape[0]
    coeffs = np.zeros(d + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    m = np.zeros_like(a, dtype=np.complex128)
    eye = np.eye(d)
    for k in range(1, d + 1):
        m = a @ m + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(a @ m) / k
    return coeffs


def _eig_companion(a: np.ndarray) -> np.ndarray:
    roots = np.roots(_charpoly(a))
    if roots.size != a.shape[0] or not np.all(np.isfinite(roots)):
        raise EigenvalueError("companion-matrix fallback failed", a)
    return roots.astype(np.complex128)


def eigenvalues_batch(stack: np.ndarray) -> np.ndarray:
    """Eigenvalues of each matrix in ``stack`` (shape ``(m, d, d)``) as ``(m, d)``.

    2x2 matrices use the closed form; larger ones go through LAPACK's
    Hessenberg/shifted-QR driver, with a characteristic-polynomial fallback
    for any matrix on which it fails to converge.
    """
    stack = np.asarray(stack)
    m, d, _ = stack.shape
    if d == 1:
        return stack[:, :, 0].astype(np.complex128)
    if d == 2:
        return _eig2(stack)
    try:
        return np.linalg.eigvals(stack).astype(np.complex128)
    except np.linalg.LinAlgError:
        out = np.empty((m, d), dtype=np.complex128)
        for i in range(m):
            try:
                out[i] = np.linalg.eigvals(stack[i])
            except np.linalg.LinAlgError:
                out[i] = _eig_companion(stack[i])
        return out


def spectral_radius_batch(stack: np.ndarray) -> np.ndarray:
    return np.max(np.abs(eigenvalues_batch(stack)), axis=-1)


def eigenvalues(a) -> Spectrum:
    """All ``d`` eigenvalues of ``a`` with multiplicity, plus max/min modulus."""
    a = np.asarray(a)
    ev = eigenvalues_batch(a[None])[0]
    mod = np.abs(ev)
    return Spectrum(eigenvalues=ev, rho=float(mod.max()), min_modulus=float(mod.min()))


def spectral_radius(a) -> float:
    return float(spectral_radius_batch(np.asarray(a)[None])[0])


# ---------------------------------------------------------------------------
# determinants and norms


def _cofactor_det(stack: np.ndarray) -> np.ndarray:
    d = stack.shape[-1]
    if d == 1:
        return stack[..., 0, 0]
    if d == 2:
        return stack[..., 0, 0] * stack[..., 1, 1] - stack[..., 0, 1] * stack[..., 1, 0]
    total = 0
    cols = np.arange(d)
    for j in range(d):
        minor = stack[..., 1:, :][..., cols != j]
        term = stack[..., 0, j] * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def determinant_batch(stack: np.ndarray) -> np.ndarray:
    stack = np.asarray(stack)
    if stack.shape[-1] <= 4:
        return np.asarray(_cofactor_det(stack))
    return np.linalg.det(stack)


def determinant(a) -> float | complex:
    """Cofactor expansion for ``d <= 4``, LU with partial pivoting above."""
    a = np.asarray(a)
    val = determinant_batch(a[None])[0]
    return complex(val) if np.iscomplexobj(val) else float(val)


def induced_norm_batch(stack: np.ndarray, kind: NormKind | str = NormKind.INF) -> np.ndarray:
    kind = NormKind(kind)
    stack = np.asarray(stack)
    if kind is NormKind.INF:
        return np.abs(stack).sum(axis=-1).max(axis=-1)
    if kind is NormKind.ONE:
        return np.abs(stack).sum(axis=-2).max(axis=-1)
    gram = np.conj(np.swapaxes(stack, -1, -2)) @ stack
    top = np.linalg.eigvalsh(gram)[..., -1]
    return np.sqrt(np.maximum(top, 0.0))


def induced_norm(a, kind: NormKind | str = NormKind.INF) -> float:
    """Operator norm induced by the 1-, infinity- or 2-vector norm."""
    return float(induced_norm_batch(np.asarray(a)[None], kind)[0])


def vector_norm(x: np.ndarray, kind: NormKind | str = NormKind.TWO) -> float:
    kind = NormKind(kind)
    if kind is NormKind.ONE:
        return float(np.abs(x).sum())
    if kind is NormKind.INF:
        return float(np.abs(x).max())
    return float(np.linalg.norm(x))


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])
