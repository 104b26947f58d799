"""Peripheral-spectrum ratios and the uniformly sub-peripheral finiteness certificate.

If a sequence of products ``S_w(l)`` with lengths ``n_l -> oo`` has all
eigenvalue moduli within a fixed factor ``kappa`` of the spectral radius, then

    kappa * rho(S_w) <= |det S_w| ** (1/d) = prod_i |det S_i| ** (1/d)
                     <= prod_i rho(S_i) <= (max_k rho(S_k)) ** n,

so whenever ``rho(S_w) ** (1/n)`` approaches the joint spectral radius, that
radius is already attained by a single generator.  :func:`certify_finiteness`
checks a finite surrogate of this argument; a rejection says nothing about
whether the finiteness property fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bounds import DEFAULT_BUDGET, bounds_table
from .linalg import determinant_batch, eigenvalues_batch, spectral_radius_batch
from .products import LN2, MatrixSet, ScaledMatrix, Word, evaluate_word

DEFAULT_TOL = 1e-6
SANDWICH_TOL = 1e-10


@dataclass(frozen=True)
class PeripheralReport:
    word: Word
    rho: float
    kappa: float
    det_root: float
    log_rho: float
    log_det_root: float

    @property
    def value(self) -> float:
        """``rho(S_w) ** (1/|w|)``."""
        return math.exp(self.log_rho / len(self.word)) if self.log_rho > -math.inf else 0.0


@dataclass
class Certificate:
    status: str
    kappa_floor: float
    words: list[Word]
    tolerance: float
    certified_value: float | None = None
    reason: str | None = None
    failed_clause: str | None = None
    values: list[float] = field(default_factory=list)
    kappas: list[float] = field(default_factory=list)
    sandwich_residuals: list[float] = field(default_factory=list)
    generator_rho: float = 0.0
    note: str = ("limit approximated by the two longest words; "
                 "a rejection does not assert failure of the finiteness property")

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def as_record(self) -> dict:
        return {
            "status": self.status,
            "kappa_floor": self.kappa_floor,
            "tolerance": self.tolerance,
            "words": [[i + 1 for i in w] for w in self.words],
            "values": self.values,
            "kappas": self.kappas,
            "sandwich_residuals": self.sandwich_residuals,
            "certified_value": self.certified_value,
            "failed_clause": self.failed_clause,
            "reason": self.reason,
            "note": self.note,
        }


def peripheral_ratio(a) -> float:
    """``min |lambda| / max |lambda|``; 1.0 for a matrix with zero spectrum."""
    mod = np.abs(eigenvalues_batch(np.asarray(a)[None])[0])
    top = mod.max()
    return float(mod.min() / top) if top > 0 else 1.0


def peripheral_report(mset: MatrixSet, word: Sequence[int]) -> PeripheralReport:
    w = mset.check_word(word)
    prod = evaluate_word(mset, w)
    return _report(w, prod)


def _report(word: Word, prod: ScaledMatrix) -> PeripheralReport:
    d = prod.base.shape[0]
    mod = np.abs(eigenvalues_batch(prod.base[None])[0])
    top = float(mod.max())
    kappa = float(mod.min() / top) if top > 0 else 1.0
    det = abs(complex(determinant_batch(prod.base[None])[0]))
    with np.errstate(divide="ignore"):
        log_rho = float(np.log(top)) + prod.exponent * LN2 if top > 0 else -math.inf
        log_det_root = float(np.log(det)) / d + prod.exponent * LN2 if det > 0 else -math.inf
    return PeripheralReport(
        word=word,
        rho=math.exp(log_rho) if log_rho > -math.inf else 0.0,
        kappa=kappa,
        det_root=math.exp(log_det_root) if log_det_root > -math.inf else 0.0,
        log_rho=log_rho,
        log_det_root=log_det_root,
    )


def check_uniform_subperipheral(reports: Sequence[PeripheralReport], kappa_min: float) -> bool:
    """True iff every report has ``kappa >= kappa_min`` (inclusive)."""
    if not reports:
        raise ValueError("at least one report required")
    if not 0 < kappa_min < 1:
        raise ValueError("kappa_min must lie in (0, 1)")
    return all(r.kappa >= kappa_min for r in reports)


def _sandwich_residual(r: PeripheralReport, gen_log_det_roots: np.ndarray,
                       gen_log_rhos: np.ndarray, log_sup: float) -> float:
    """Largest relative violation along the inequality chain (<= 0 when it holds).

    Compares, in log space, kappa*rho <= |det|^(1/d), |det|^(1/d) <=
    prod rho(S_i) and prod rho(S_i) <= sup^n.
    """
    n = len(r.word)
    idx = np.array(r.word)
    log_kr = math.log(r.kappa) + r.log_rho if r.kappa > 0 and r.log_rho > -math.inf else -math.inf
    log_det = r.log_det_root
    log_prod_rho = float(gen_log_rhos[idx].sum())
    log_prod_det = float(gen_log_det_roots[idx].sum())
    steps = [
        (log_kr, log_det),
        (log_det, log_prod_det),
        (log_prod_det, log_prod_rho),
        (log_prod_rho, n * log_sup),
    ]
    worst = -math.inf
    for lhs, rhs in steps:
        if lhs == -math.inf:
            continue
        if rhs == -math.inf:
            return math.inf
        worst = max(worst, math.expm1(lhs - rhs))
    return worst


def certify_finiteness(mset: MatrixSet, words: Sequence[Sequence[int]], kappa_min: float,
                       tol: float = DEFAULT_TOL) -> Certificate:
    """Check the uniformly sub-peripheral finiteness condition on a word sequence.

    Clauses, checked in order:

    (a) every product has peripheral ratio ``>= kappa_min``;
    (b) ``rho(S_w) ** (1/|w|)`` for the two longest words is within
        ``tol * sup_k rho(S_k)`` of ``sup_k rho(S_k)``;
    (c) the determinant chain bounding ``kappa * rho(S_w)`` by
        ``(sup_k rho(S_k)) ** |w|`` holds numerically for every word.

    On success the certified value is ``sup_k rho(S_k)``.
    """
    if not 0 < kappa_min < 1:
        raise ValueError("kappa_min must lie in (0, 1)")
    ws = [mset.check_word(w) for w in words]
    if len(ws) < 3:
        raise ValueError("at least three words required")
    if any(len(b) <= len(a) for a, b in zip(ws, ws[1:])):
        raise ValueError("word lengths must be strictly increasing")

    gens = mset.generators
    gen_rho = spectral_radius_batch(gens)
    sup = float(gen_rho.max())
    d = mset.d
    with np.errstate(divide="ignore"):
        gen_log_rho = np.log(gen_rho)
        gen_log_det_root = np.log(np.abs(determinant_batch(gens))) / d
    log_sup = math.log(sup) if sup > 0 else -math.inf

    reports = [peripheral_report(mset, w) for w in ws]
    cert = Certificate(
        status="rejected",
        kappa_floor=kappa_min,
        words=ws,
        tolerance=tol,
        values=[r.value for r in reports],
        kappas=[r.kappa for r in reports],
        sandwich_residuals=[_sandwich_residual(r, gen_log_det_root, gen_log_rho, log_sup)
                            for r in reports],
        generator_rho=sup,
    )

    if not check_uniform_subperipheral(reports, kappa_min):
        i = next(i for i, r in enumerate(reports) if r.kappa < kappa_min)
        cert.failed_clause = "a"
        cert.reason = (f"uniform sub-peripherality fails: word {i + 1} has kappa "
                       f"{reports[i].kappa:.6g} < {kappa_min}")
        return cert
    for r in reports[-2:]:
        if abs(r.value - sup) > tol * sup:
            cert.failed_clause = "b"
            cert.reason = (f"value {r.value:.12g} of a length-{len(r.word)} word is not within "
                           f"{tol:g} (relative) of max generator radius {sup:.12g}")
            return cert
    bad = [i for i, res in enumerate(cert.sandwich_residuals) if res > SANDWICH_TOL]
    if bad:
        cert.failed_clause = "c"
        cert.reason = (f"determinant sandwich violated for word {bad[0] + 1} "
                       f"(residual {cert.sandwich_residuals[bad[0]]:.3g})")
        return cert
    cert.status = "certified"
    cert.certified_value = sup
    return cert


def r1_diagnostic(mset: MatrixSet, depth: int, budget: int = DEFAULT_BUDGET
                  ) -> list[tuple[int, float]]:
    """Peripheral ratio of the depth-``n`` spectral maximiser for ``n = 1..depth``.

    For a set without the finiteness property this ratio must tend to zero
    along any maximising sequence; no monotonicity is implied at finite depth.
    """
    table = bounds_table(mset, depth, budget=budget)
    return [(r.n, r.lo_kappa) for r in table.rows]
