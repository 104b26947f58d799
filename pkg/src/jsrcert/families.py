"""Named matrix families used throughout the tests and the command line."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .linalg import MAX_DIM, rotation
from .products import MatrixSet

# value of alpha for which hare_family(alpha) lacks the finiteness property;
# kept as the published decimal, no exact form is known
ALPHA_STAR_DECIMAL = "0.749326546330367557943961948091344672091327370236064317358024"
ALPHA_STAR = float(ALPHA_STAR_DECIMAL)


@dataclass
class FamilySpec:
    name: str
    params: dict[str, float] = field(default_factory=dict)
    matrix_set: MatrixSet | None = None


def hare_family(alpha: float) -> MatrixSet:
    """``{[[1, 1], [0, 1]], alpha * [[1, 0], [1, 1]]}`` for ``0 < alpha <= 1``."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    s1 = np.array([[1.0, 1.0], [0.0, 1.0]])
    s2 = alpha * np.array([[1.0, 0.0], [1.0, 1.0]])
    return MatrixSet(np.stack([s1, s2]), name=f"hare(alpha={alpha!r})")


def morris_family(lam: float) -> MatrixSet:
    """``{diag(1, lam), [[0, lam], [lam, 0]]}`` for ``0 < |lam| < 1``.

    Has the finiteness property (``rho = 1`` at the first generator) while
    every nonzero limit point has rank one.
    """
    if not 0 < abs(lam) < 1:
        raise ValueError("lambda must satisfy 0 < |lambda| < 1")
    s1 = np.array([[1.0, 0.0], [0.0, lam]])
    s2 = np.array([[0.0, lam], [lam, 0.0]])
    return MatrixSet(np.stack([s1, s2]), name=f"morris(lambda={lam!r})")


def scaled_rotation_family(scales: Sequence[float], angles: Sequence[float]) -> MatrixSet:
    """Generators ``c_j * R(theta_j)``; every product is a scaled rotation."""
    if len(scales) != len(angles) or len(scales) < 2:
        raise ValueError("need equal-length scale and angle lists with at least two entries")
    if any(c <= 0 for c in scales):
        raise ValueError("scales must be positive")
    gens = np.stack([c * rotation(t) for c, t in zip(scales, angles)])
    return MatrixSet(gens, name="scaled_rotation")


def triangular_family(diagonals: Sequence[Sequence[float]], strict_upper_seed: int = 0,
                      scale: float = 1.0) -> MatrixSet:
    """Upper-triangular generators with the given diagonals.

    The strictly upper parts are uniform in ``[-scale, scale]`` from
    ``strict_upper_seed``; they do not affect any product's spectrum, so
    ``rho(S)`` is the largest absolute diagonal entry.
    """
    diags = [np.asarray(dg, dtype=float) for dg in diagonals]
    if len(diags) < 2:
        raise ValueError("need at least two diagonals")
    d = diags[0].size
    if any(dg.size != d for dg in diags):
        raise ValueError("diagonals must share a length")
    rng = np.random.default_rng(strict_upper_seed)
    gens = []
    for dg in diags:
        m = np.triu(rng.uniform(-scale, scale, size=(d, d)), k=1)
        m[np.diag_indices(d)] = dg
        gens.append(m)
    return MatrixSet(np.stack(gens), name="triangular")


def triangular_rho(diagonals: Sequence[Sequence[float]]) -> float:
    return float(max(np.max(np.abs(dg)) for dg in diagonals))


def sign_matrices(d: int = 2) -> list[np.ndarray]:
    if d != 2:
        raise ValueError("sign-matrix enumeration is only supported for d = 2")
    return [np.array(v, dtype=float).reshape(2, 2)
            for v in itertools.product((-1, 0, 1), repeat=4)]


def sign_pair_enumerator(d: int = 2) -> Iterator[MatrixSet]:
    """All unordered pairs (with repetition) of 2x2 matrices with entries in {-1, 0, 1}."""
    mats = sign_matrices(d)
    for i, j in itertools.combinations_with_replacement(range(len(mats)), 2):
        yield MatrixSet(np.stack([mats[i], mats[j]]), name=f"sign_pair({i},{j})")


def random_family(seed: int, d: int = 2, k: int = 2, scale: float = 1.0) -> MatrixSet:
    """``k`` generators with i.i.d. entries uniform in ``[-scale, scale]``."""
    if not 2 <= d <= MAX_DIM or k < 2:
        raise ValueError("need 2 <= d <= 16 and k >= 2")
    rng = np.random.default_rng(seed)
    gens = rng.uniform(-scale, scale, size=(k, d, d))
    return MatrixSet(gens, name=f"random(seed={seed},d={d},k={k},scale={scale!r})")


# ---------------------------------------------------------------------------
# command-line constructors: name -> builder(params)


def _float_list(v) -> list[float]:
    if isinstance(v, (list, tuple)):
        return [float(x) for x in v]
    return [float(x) for x in str(v).split(",") if x]


def _parse_angle(tok: str) -> float:
    tok = tok.strip()
    if tok.startswith("sqrt"):
        return math.sqrt(float(tok[4:].strip("()")))
    return float(tok)


def _build_scaled_rotation(p: dict) -> MatrixSet:
    scales = _float_list(p.get("scales", "0.9,0.8"))
    angles = [_parse_angle(t) for t in str(p.get("angles", "1,sqrt2")).split(",")]
    return scaled_rotation_family(scales, angles)


def _build_triangular(p: dict) -> MatrixSet:
    diags = [_float_list(g) for g in str(p.get("diagonals", "0.8,0.5;0.6,0.7")).split(";")]
    return triangular_family(diags, int(p.get("seed", 0)))


def _build_hare(p: dict) -> MatrixSet:
    raw = p.get("alpha", "alpha_star")
    alpha = ALPHA_STAR if str(raw).lower() in ("alpha_star", "alpha*", "star") else float(raw)
    return hare_family(alpha)


FAMILIES: dict[str, Callable[[dict], MatrixSet]] = {
    "hare": _build_hare,
    "morris": lambda p: morris_family(float(p.get("lambda", 0.5))),
    "scaled_rotation": _build_scaled_rotation,
    "rotation": lambda p: scaled_rotation_family([1.0, 1.0], [1.0, math.sqrt(2.0)]),
    "triangular": _build_triangular,
    "random": lambda p: random_family(int(p.get("seed", 0)), int(p.get("d", 2)),
                                      int(p.get("k", 2)), float(p.get("scale", 1.0))),
}


def build_family(name: str, params: dict | None = None) -> FamilySpec:
    try:
        builder = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; choose from {', '.join(sorted(FAMILIES))}")
    params = dict(params or {})
    return FamilySpec(name, params, builder(params))
