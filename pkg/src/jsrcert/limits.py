"""Numerical exploration of the limit semigroup.

The limit semigroup of a set is the collection of accumulation points of
``rho(S) ** -n * S_w`` as ``|w| = n -> oo``.  For an irreducible set without
the finiteness property every such point is singular; contrapositively, one
nonsingular limit point certifies the finiteness property.  Sampling can only
ever produce evidence for the certified direction, never against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bounds import DEFAULT_BUDGET, bounds_table
from .linalg import NormKind, determinant_batch, induced_norm_batch
from .products import LN2, MatrixSet, Word, evaluate_words, format_word

INVARIANCE_TOL = 1e-8
CLUSTER_RADIUS = 1e-4
NORM_FILTER = (0.1, 10.0)
RANK_TOL = 1e-6


@dataclass
class IrreducibilityVerdict:
    verdict: str  # irreducible | reducible | inconclusive
    method: str
    witness: np.ndarray | None = None  # rows span an invariant subspace of row vectors
    algebra_dim: int | None = None

    @property
    def irreducible(self) -> bool:
        return self.verdict == "irreducible"


@dataclass
class LimitPoint:
    matrix: np.ndarray
    word: Word
    length: int
    radius: float
    abs_det: float
    rank: int
    multiplicity: int

    def as_record(self, cluster_id: int) -> dict:
        m = self.matrix
        entries = m.tolist() if not np.iscomplexobj(m) else [
            [[z.real, z.imag] for z in row] for row in m]
        return {
            "cluster": cluster_id,
            "entries": entries,
            "abs_det": self.abs_det,
            "rank": self.rank,
            "word_length": self.length,
            "word": [i + 1 for i in self.word],
            "radius": self.radius,
            "multiplicity": self.multiplicity,
        }


@dataclass
class LimitPointSet:
    rho_estimate: float
    points: list[LimitPoint]
    count: int
    max_len: int
    seed: int
    min_len: int
    mode: str
    drawn: int = 0
    kept: int = 0

    def records(self) -> list[dict]:
        return [p.as_record(i) for i, p in enumerate(self.points)]


@dataclass
class LimitCertificate:
    certified: bool
    message: str
    irreducibility: IrreducibilityVerdict
    witness: LimitPoint | None = None

    def as_record(self) -> dict:
        out = {"certified": self.certified, "message": self.message,
               "irreducibility": self.irreducibility.verdict,
               "irreducibility_method": self.irreducibility.method}
        if self.witness is not None:
            out["witness"] = self.witness.as_record(0)
        return out


# ---------------------------------------------------------------------------
# irreducibility


def _is_invariant(mset: MatrixSet, basis: np.ndarray, tol: float = INVARIANCE_TOL) -> bool:
    # rows of ``basis`` orthonormal; xS must stay in their span for every S
    q = basis
    for g in mset.generators:
        img = q @ g
        resid = img - (img @ np.conj(q.T)) @ q
        if np.linalg.norm(resid) > tol * max(1.0, np.linalg.norm(g)):
            return False
    return True


def _orth_rows(vectors: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    if vectors.size == 0:
        return vectors
    u, s, vh = np.linalg.svd(vectors, full_matrices=False)
    r = int(np.sum(s > tol * max(1.0, s[0])))
    return vh[:r]


def _left_eigvecs(a: np.ndarray, real: bool) -> list[np.ndarray]:
    # row vectors x with x A = mu x, i.e. eigenvectors of A^T
    vals, vecs = np.linalg.eig(a.T)
    out = []
    for i in range(len(vals)):
        v = vecs[:, i]
        if real:
            if abs(vals[i].imag) > 1e-12 * max(1.0, abs(vals[i])):
                continue
            v = v.real if np.linalg.norm(v.real) >= np.linalg.norm(v.imag) else v.imag
        out.append(v / np.linalg.norm(v))
    return out


def _common_eigvec_2x2(mset: MatrixSet) -> IrreducibilityVerdict:
    real = mset.field == "real"
    gens = mset.generators
    method = "common-eigenvector search (d=2)"
    ref = None
    for g in gens:
        if not np.allclose(g, g[0, 0] * np.eye(2), rtol=0, atol=INVARIANCE_TOL * max(1.0, np.abs(g).max())):
            ref = g
            break
    if ref is None:
        # every generator is scalar: any line is invariant
        return IrreducibilityVerdict("reducible", method, np.array([[1.0, 0.0]]))
    # a non-scalar 2x2 matrix has at most two invariant lines, its eigenlines
    for v in _left_eigvecs(ref, real):
        basis = v[None, :]
        if _is_invariant(mset, basis):
            return IrreducibilityVerdict("reducible", method, basis)
    return IrreducibilityVerdict("irreducible", method)


def _algebra_dim(mset: MatrixSet) -> int:
    d = mset.d
    gens = mset.generators
    span = _orth_rows(np.concatenate([np.eye(d)[None], gens]).reshape(-1, d * d))
    frontier = list(gens)
    while frontier:
        new = []
        for m in frontier:
            for g in gens:
                p = m @ g
                v = p.reshape(1, -1)
                resid = v - (v @ np.conj(span.T)) @ span
                if np.linalg.norm(resid) > 1e-9 * max(1.0, np.linalg.norm(v)):
                    span = _orth_rows(np.concatenate([span, v]))
                    new.append(p / max(np.linalg.norm(p), 1e-300))
        if span.shape[0] == d * d:
            break
        frontier = new
    return span.shape[0]


def _cyclic_subspace(mset: MatrixSet, start: np.ndarray) -> np.ndarray:
    q = _orth_rows(start)
    while True:
        imgs = np.concatenate([q @ g for g in mset.generators])
        nq = _orth_rows(np.concatenate([q, imgs]))
        if nq.shape[0] == q.shape[0]:
            return q
        q = nq


def _search_invariant(mset: MatrixSet, rng: np.random.Generator) -> np.ndarray | None:
    real = mset.field == "real"
    d = mset.d
    gens = mset.generators
    candidates = list(gens)
    for _ in range(3):
        c = rng.normal(size=len(gens))
        candidates.append(np.tensordot(c, gens, axes=1))
    for a in candidates:
        vals, vecs = np.linalg.eig(a.T)
        for i in range(d):
            v = vecs[:, i]
            start = np.stack([v.real, v.imag]) if real else v[None, :]
            q = _cyclic_subspace(mset, start)
            if 0 < q.shape[0] < d and _is_invariant(mset, q):
                return q
    return None


def irreducibility(mset: MatrixSet, seed: int = 0) -> IrreducibilityVerdict:
    """Decide whether the generators share a proper invariant subspace.

    Invariance is for the row-vector action ``x -> x S``.  In dimension 2 the
    test is exact: a proper invariant subspace is a common eigenline.  In
    higher dimension a full-dimensional generated algebra means irreducible;
    otherwise the search for an explicit invariant subspace either finds
    one or the verdict is inconclusive (over the reals a deficient algebra
    does not imply reducibility).
    """
    if mset.d == 2:
        return _common_eigvec_2x2(mset)
    dim = _algebra_dim(mset)
    if dim == mset.d ** 2:
        return IrreducibilityVerdict("irreducible", "algebra-span dimension", algebra_dim=dim)
    q = _search_invariant(mset, np.random.default_rng(seed))
    if q is not None:
        return IrreducibilityVerdict("reducible", "randomized", q, algebra_dim=dim)
    return IrreducibilityVerdict("inconclusive", "algebra-span dimension", algebra_dim=dim)


# ---------------------------------------------------------------------------
# limit points


def rank_profile(a, tol: float = RANK_TOL) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    s = np.linalg.svd(np.asarray(a), compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def default_rho_estimate(mset: MatrixSet, depth: int = 8, budget: int = DEFAULT_BUDGET) -> float:
    while depth > 1 and mset.k ** depth > budget:
        depth -= 1
    return bounds_table(mset, depth, NormKind.INF, budget).best_lo


def _draw_words(mset: MatrixSet, rng: np.random.Generator, count: int, min_len: int,
                max_len: int, mode: str, guides: Sequence[Word]) -> list[Word]:
    k = mset.k
    words: list[Word] = []
    for i in range(count):
        guided = mode == "guided" or (mode == "mixed" and i % 2 == 1)
        if guided:
            g = guides[int(rng.integers(len(guides)))]
            lo_r = max(1, -(-min_len // len(g)))
            hi_r = max(lo_r, max_len // len(g))
            r = int(rng.integers(lo_r, hi_r + 1))
            words.append(tuple(g) * r)
        else:
            n = int(rng.integers(min_len, max_len + 1))
            words.append(tuple(int(x) for x in rng.integers(0, k, size=n)))
    return words


def normalized_products(mset: MatrixSet, words: Sequence[Word], rho_est: float) -> list[np.ndarray]:
    """``rho_est ** -|w| * S_w`` for each word, via the log-scaled product."""
    out = []
    log_rho = math.log(rho_est)
    for w in words:
        b = evaluate_words(mset, np.array([w]))
        shift = b.exponents[0] * LN2 - len(w) * log_rho
        with np.errstate(over="ignore", under="ignore"):
            out.append(b.bases[0] * math.exp(shift) if shift < 700 else b.bases[0] * math.inf)
    return out


def sample_limit_points(mset: MatrixSet, rho_est: float | None = None, count: int = 200,
                        max_len: int = 60, seed: int = 0, *, min_len: int | None = None,
                        mode: str = "mixed", guides: Sequence[Sequence[int]] | None = None,
                        radius: float = CLUSTER_RADIUS, rank_tol: float = RANK_TOL
                        ) -> LimitPointSet:
    """Sample normalised long products and cluster them into limit-point candidates.

    Words are drawn uniformly at random, as repetitions of guide words, or
    alternately both (``mode`` = ``random`` | ``guided`` | ``mixed``), with
    lengths in ``[min_len, max_len]`` (``min_len`` defaults to half of
    ``max_len``).  Guides default to the depth maximisers of a short bounds
    run.  Products are scaled by ``rho_est ** -n``; those with inf-norm
    outside ``[0.1, 10]`` are discarded and the rest are grouped by
    single-linkage at inf-distance ``radius``.  Each cluster is represented
    by its member with the longest word.
    """
    if rho_est is None:
        rho_est = default_rho_estimate(mset)
    if not rho_est > 0:
        raise ValueError("rho_est must be positive")
    if max_len < 1 or count < 0:
        raise ValueError("need max_len >= 1 and count >= 0")
    if min_len is None:
        min_len = max(1, max_len // 2)
    min_len = min(min_len, max_len)
    if mode not in ("mixed", "random", "guided"):
        raise ValueError(f"unknown sampling mode {mode!r}")
    if guides is None:
        table = bounds_table(mset, min(4, max_len))
        guides = sorted({r.lo_word for r in table.rows})
    guides = [mset.check_word(g) for g in guides]
    if mode != "random" and not guides:
        raise ValueError("guided sampling needs at least one guide word")

    rng = np.random.default_rng(seed)
    words = _draw_words(mset, rng, count, min_len, max_len, mode, guides)
    mats = normalized_products(mset, words, rho_est)
    lo, hi = NORM_FILTER
    kept = []
    for w, m in zip(words, mats):
        nrm = float(induced_norm_batch(m[None], "inf")[0])
        if lo <= nrm <= hi:
            kept.append((w, m))

    clusters = _single_linkage([m for _, m in kept], radius)
    points = []
    for members in clusters:
        rep_i = max(members, key=lambda i: (len(kept[i][0]), -i))
        rep_w, rep = kept[rep_i]
        rad = max(float(np.abs(kept[i][1] - rep).sum(axis=1).max()) for i in members)
        points.append(LimitPoint(
            matrix=rep,
            word=rep_w,
            length=len(rep_w),
            radius=rad,
            abs_det=float(abs(complex(determinant_batch(rep[None])[0]))),
            rank=rank_profile(rep, rank_tol),
            multiplicity=len(members),
        ))
    return LimitPointSet(rho_est, points, count, max_len, seed, min_len, mode,
                         drawn=len(words), kept=len(kept))


def _single_linkage(mats: list[np.ndarray], radius: float) -> list[list[int]]:
    n = len(mats)
    if n == 0:
        return []
    stack = np.stack(mats)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        dist = np.abs(stack[i + 1:] - stack[i]).sum(axis=2).max(axis=1)
        for j in np.nonzero(dist <= radius)[0]:
            a, b = find(i), find(i + 1 + int(j))
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[r] for r in sorted(groups)]


def nonsingular_limit_certificate(mset: MatrixSet, lps: LimitPointSet,
                                  det_tol: float = 1e-6) -> LimitCertificate:
    """Certify the finiteness property from a nonsingular limit-point candidate.

    Requires an irreducible set.  Absence of a nonsingular point is reported
    as "no certificate", never as failure of the finiteness property.
    """
    verdict = irreducibility(mset)
    if not verdict.irreducible:
        return LimitCertificate(False, f"no certificate: irreducibility {verdict.verdict} "
                                       f"({verdict.method})", verdict)
    good = [p for p in lps.points if p.abs_det >= det_tol]
    if not good:
        return LimitCertificate(False, f"no certificate: no sampled limit point with "
                                       f"|det| >= {det_tol:g}", verdict)
    best = max(good, key=lambda p: p.abs_det)
    return LimitCertificate(True, "finiteness property certified: nonsingular limit point "
                                  f"from word {format_word(best.word)}",
                            verdict, best)
