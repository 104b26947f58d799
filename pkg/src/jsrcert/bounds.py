"""Lower and upper bounds on the joint spectral radius by product enumeration.

For every depth ``n`` and every induced norm,

    max_{|w|=n} rho(S_w) ** (1/n)  <=  rho(S)  <=  max_{|w|=n} ||S_w|| ** (1/n),

so exhaustive enumeration at increasing depth gives a shrinking bracket.  The
spectral side only needs one word per cyclic class because ``rho(S_uv) ==
rho(S_vu)``; the norm side needs every word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .linalg import NormKind, eigenvalues_batch, induced_norm_batch
from .products import (
    LN2,
    MatrixSet,
    ScaledBatch,
    Word,
    _rescale,
    canonical_rotation,
    evaluate_words,
    iter_all_products,
    necklace_representatives,
    primitive_root,
)

DEFAULT_BUDGET = 20_000_000
_CHUNK = 1 << 15
# products of this many words are cheap enough to enumerate for suffix bounds
_EXACT_HAT_CAP = 4096


class BudgetExceeded(RuntimeError):
    """Enumeration would need more product evaluations than allowed."""

    def __init__(self, depth: int, needed: int, budget: int):
        super().__init__(
            f"depth {depth} needs {needed} product evaluations, budget is {budget}")
        self.depth = depth
        self.needed = needed
        self.budget = budget


@dataclass
class DepthRow:
    n: int
    lo: float
    lo_word: Word
    lo_kappa: float
    hi: float
    hi_word: Word | None
    best_lo: float
    best_hi: float
    hi_exact: bool = True

    def as_record(self) -> dict:
        return {
            "n": self.n,
            "lo": self.lo,
            "lo_word": [i + 1 for i in self.lo_word],
            "lo_kappa": self.lo_kappa,
            "hi": self.hi,
            "hi_word": None if self.hi_word is None else [i + 1 for i in self.hi_word],
            "hi_exact": self.hi_exact,
            "best_lo": self.best_lo,
            "best_hi": self.best_hi,
        }


@dataclass
class BoundsTable:
    norm: NormKind
    rows: list[DepthRow] = field(default_factory=list)
    nodes: int = 0
    exhausted: bool = False

    @property
    def depth(self) -> int:
        return len(self.rows)

    @property
    def best_lo(self) -> float:
        return self.rows[-1].best_lo

    @property
    def best_hi(self) -> float:
        return self.rows[-1].best_hi

    def row(self, n: int) -> DepthRow:
        return self.rows[n - 1]

    def _append(self, n, lo, lo_word, lo_kappa, hi, hi_word, hi_exact=True):
        best_lo = max(lo, self.rows[-1].best_lo) if self.rows else lo
        best_hi = min(hi, self.rows[-1].best_hi) if self.rows else hi
        self.rows.append(DepthRow(n, lo, lo_word, lo_kappa, hi, hi_word, best_lo, best_hi,
                                  hi_exact))

    def format(self, digits: int = 12) -> str:
        from .products import format_word

        head = f"{'n':>3}  {'lo_n':>16}  {'hi_n':>16}  {'best_lo':>16}  {'best_hi':>16}  lo_word"
        lines = [f"norm: {self.norm.value}", head]
        for r in self.rows:
            mark = "" if r.hi_exact else "*"
            lines.append(
                f"{r.n:>3}  {r.lo:>16.{digits}g}  {r.hi:>15.{digits}g}{mark:1}  "
                f"{r.best_lo:>16.{digits}g}  {r.best_hi:>16.{digits}g}  {format_word(r.lo_word)}")
        if any(not r.hi_exact for r in self.rows):
            lines.append("* submultiplicative upper bound, not an exhaustive maximum")
        if self.exhausted:
            lines.append(f"budget exhausted after depth {self.depth} ({self.nodes} nodes)")
        return "\n".join(lines)


@dataclass
class SmpCandidate:
    word: Word
    value: float
    kappa: float


# ---------------------------------------------------------------------------
# per-word quantities


def log_spectral_radii(batch: ScaledBatch) -> np.ndarray:
    with np.errstate(divide="ignore"):
        rho = np.max(np.abs(eigenvalues_batch(batch.bases)), axis=-1)
        return np.log(rho) + batch.exponents * LN2


def log_norms(batch: ScaledBatch, norm: NormKind | str) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(induced_norm_batch(batch.bases, norm)) + batch.exponents * LN2


def peripheral_ratios(batch: ScaledBatch) -> np.ndarray:
    mod = np.abs(eigenvalues_batch(batch.bases))
    top = mod.max(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(top > 0, mod.min(axis=-1) / np.where(top > 0, top, 1.0), 1.0)


def word_log_rho(mset: MatrixSet, words: Sequence[Word]) -> np.ndarray:
    """Canonical ``log rho(S_w)`` for each word (fixed evaluation order)."""
    if not words:
        return np.empty(0)
    return log_spectral_radii(evaluate_words(mset, np.array(words, dtype=np.int64)))


def word_kappa(mset: MatrixSet, word: Word) -> float:
    return float(peripheral_ratios(evaluate_words(mset, np.array([word])))[0])


def _root(logval: float, n: int) -> float:
    return math.exp(logval / n) if logval > -math.inf else 0.0


def _chunks(it: Iterator[Word], size: int) -> Iterator[list[Word]]:
    buf: list[Word] = []
    for w in it:
        buf.append(w)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


def _check_budget(mset: MatrixSet, n: int, budget: int) -> None:
    if n < 1:
        raise ValueError("depth must be >= 1")
    needed = mset.k ** n
    if needed > budget:
        raise BudgetExceeded(n, needed, budget)


def _max_rho_log(mset: MatrixSet, n: int, budget: int) -> tuple[float, Word]:
    _check_budget(mset, n, budget)
    best, best_word = -math.inf, None
    for chunk in _chunks(necklace_representatives(mset.k, n), _CHUNK):
        logs = word_log_rho(mset, chunk)
        i = int(np.argmax(logs))
        # argmax returns the first maximum; chunks arrive in lexicographic order
        if best_word is None or logs[i] > best:
            best, best_word = float(logs[i]), chunk[i]
    return best, best_word


def _max_norm_log(mset: MatrixSet, n: int, norm: NormKind, budget: int) -> tuple[float, Word]:
    _check_budget(mset, n, budget)
    best, best_idx, offset = -math.inf, None, 0
    for batch in iter_all_products(mset, n):
        logs = log_norms(batch, norm)
        i = int(np.argmax(logs))
        if best_idx is None or logs[i] > best:
            best, best_idx = float(logs[i]), offset + i
        offset += len(batch)
    return best, _unrank(best_idx, mset.k, n)


def _unrank(idx: int, k: int, n: int) -> Word:
    digits = []
    for _ in range(n):
        idx, r = divmod(idx, k)
        digits.append(r)
    return tuple(reversed(digits))


# ---------------------------------------------------------------------------
# public operations


def rho_n(mset: MatrixSet, n: int, budget: int = DEFAULT_BUDGET) -> tuple[float, Word]:
    """``max rho(S_w)`` over words of length ``n`` and the lexicographically
    least necklace representative attaining it."""
    logval, word = _max_rho_log(mset, n, budget)
    return (math.exp(logval) if logval > -math.inf else 0.0), word


def rho_hat_n(mset: MatrixSet, n: int, norm: NormKind | str = NormKind.INF,
              budget: int = DEFAULT_BUDGET) -> tuple[float, Word]:
    """``max ||S_w||`` over all words of length ``n`` with its least argmax word."""
    logval, word = _max_norm_log(mset, n, NormKind(norm), budget)
    return (math.exp(logval) if logval > -math.inf else 0.0), word


def bounds_table(mset: MatrixSet, depth: int, norm: NormKind | str = NormKind.INF,
                 budget: int = DEFAULT_BUDGET) -> BoundsTable:
    """Exhaustive bracket ``[rho_n^(1/n), rho_hat_n^(1/n)]`` for ``n = 1..depth``."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    norm = NormKind(norm)
    for n in range(1, depth + 1):
        _check_budget(mset, n, budget)
    table = BoundsTable(norm)
    for n in range(1, depth + 1):
        lo_log, lo_word = _max_rho_log(mset, n, budget)
        hi_log, hi_word = _max_norm_log(mset, n, norm, budget)
        table.nodes += mset.k ** n + len(lo_word)
        table._append(n, _root(lo_log, n), lo_word, word_kappa(mset, lo_word),
                      _root(hi_log, n), hi_word)
    return table


def refine_bounds(mset: MatrixSet, budget: int = 1_000_000,
                  norm: NormKind | str = NormKind.INF,
                  max_depth: int | None = None) -> BoundsTable:
    """Depth-by-depth branch and bound for ``rho_n`` (Gripenberg-style pruning).

    At target depth ``n`` a prefix ``p`` of length ``m`` is discarded when

        ||S_p|| * U(n - m) < incumbent_n,

    where ``U(j)`` bounds every length-``j`` product norm from above (exact
    maxima for short lengths, submultiplicative products otherwise) and the
    incumbent is the best spectral radius seen so far at depth ``n``.  The
    bound holds for every completion of ``p``, so the depth maximum is never
    lost.  Only prenecklaces are expanded; leaves are necklace
    representatives and are scored with the same evaluation order as
    :func:`rho_n`, so fully explored depths reproduce it exactly, word
    included.

    Upper bounds ``hi_n`` are exact where ``k**n`` is small and
    submultiplicative otherwise (flagged ``hi_exact=False``).  When the node
    budget runs out the partially explored depth is dropped and the table is
    returned with ``exhausted`` set.
    """
    norm = NormKind(norm)
    k = mset.k
    if budget < k:
        raise ValueError(f"budget must be at least card(K) = {k}")
    table = BoundsTable(norm)
    limit = max_depth if max_depth is not None else 64

    hat_logs: dict[int, tuple[float, Word]] = {}
    spent_hat = 0
    j = 1
    while j <= limit and k ** j <= _EXACT_HAT_CAP and spent_hat + k ** j <= budget // 4:
        hat_logs[j] = _max_norm_log(mset, j, norm, budget)
        spent_hat += k ** j
        j += 1
    table.nodes = spent_hat
    ubound = [0.0]

    def upper(jj: int) -> float:
        while len(ubound) <= jj:
            t = len(ubound)
            cands = [ubound[a] + ubound[t - a] for a in range(1, t)]
            if t in hat_logs:
                cands.append(hat_logs[t][0])
            ubound.append(min(cands))
        return ubound[jj]

    gens = mset.generators
    best_words: dict[int, Word] = {}
    for n in range(1, limit + 1):
        result = _refine_depth(mset, gens, n, norm, upper, best_words, budget - table.nodes)
        if result is None:
            table.exhausted = True
            break
        lo_log, lo_word, used = result
        table.nodes += used
        best_words[n] = lo_word
        if n in hat_logs:
            hi_log, hi_word, exact = hat_logs[n][0], hat_logs[n][1], True
        else:
            hi_log, hi_word, exact = upper(n), None, False
        table._append(n, _root(lo_log, n), lo_word, word_kappa(mset, lo_word),
                      _root(hi_log, n), hi_word, exact)
    return table


def _refine_depth(mset, gens, n, norm, upper, best_words, budget):
    k, d = mset.k, mset.d
    seeds = {(0,) * n} if not best_words else {best_words[1] * n}
    if n - 1 in best_words:
        prev = best_words[n - 1]
        seeds.update(canonical_rotation(prev + (c,)) for c in range(k))
    for m, w in best_words.items():
        if n % m == 0:
            seeds.add(w * (n // m))
    seeds = sorted(seeds)
    used = len(seeds)
    if used > budget:
        return None
    seed_logs = word_log_rho(mset, seeds)
    incumbent = float(seed_logs.max())
    margin = 1e-9 * n

    words = np.arange(k, dtype=np.int64)[:, None]
    period = np.ones(k, dtype=np.int64)
    bases = gens.copy()
    exps = np.zeros(k, dtype=np.int64)
    used += k
    def survivors(words, period, bases, exps, m):
        keep = log_norms(ScaledBatch(bases, exps), norm) + upper(n - m) + margin >= incumbent
        return words[keep], period[keep], bases[keep], exps[keep]

    words, period, bases, exps = survivors(words, period, bases, exps, 1)
    for m in range(1, n):
        f = words.shape[0]
        if used + f * k > budget:
            return None
        used += f * k
        # prenecklace extension: letter b must be >= the letter one period back
        ref = words[np.arange(f), m - period]
        letters = np.tile(np.arange(k), f)
        parent = np.repeat(np.arange(f), k)
        ok = letters >= ref[parent]
        parent, letters = parent[ok], letters[ok]
        new_words = np.concatenate([words[parent], letters[:, None]], axis=1)
        new_period = np.where(letters == ref[parent], period[parent], m + 1)
        new_bases = bases[parent] @ gens[letters]
        new_exps = exps[parent].copy()
        _rescale(new_bases, new_exps)
        words, period, bases, exps = survivors(new_words, new_period, new_bases, new_exps, m + 1)
    leaves = [tuple(int(x) for x in w) for w in words[n % period == 0]]
    if used + len(leaves) > budget:
        return None
    used += len(leaves)
    if not leaves:
        i = int(np.argmax(seed_logs))
        return float(seed_logs[i]), seeds[i], used
    logs = word_log_rho(mset, leaves)
    i = int(np.argmax(logs))
    return float(logs[i]), leaves[i], used


def smp_candidates(table: BoundsTable, top: int = 5) -> list[SmpCandidate]:
    """Best spectral words of the table, ranked by ``rho(S_w)^(1/|w|)``.

    Ties go to the shorter word, then the lexicographically smaller one.
    Powers of an already listed cyclic class are dropped.
    """
    rows = sorted(table.rows, key=lambda r: (-r.lo, len(r.lo_word), r.lo_word))
    seen: set[Word] = set()
    out: list[SmpCandidate] = []
    for r in rows:
        key = canonical_rotation(primitive_root(r.lo_word))
        if key in seen:
            continue
        seen.add(key)
        out.append(SmpCandidate(r.lo_word, r.lo, r.lo_kappa))
        if len(out) == top:
            break
    return out
