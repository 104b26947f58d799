"""Matrix sets, words over the index set and overflow-safe product evaluation.

Words are tuples of 0-based generator indices.  ``S_w`` for ``w = (i1, ..., in)``
is the ordered product ``S[i1] @ S[i2] @ ... @ S[in]``, built left to right.
Text interfaces (set files, word files, records) print indices 1-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .linalg import MAX_DIM, as_matrix, induced_norm_batch

Word = tuple[int, ...]

LN2 = math.log(2.0)
# rescale only when the inf-norm leaves [2^-8, 2^8]
_LOW_EXP, _HIGH_EXP = -8, 8


@dataclass(frozen=True, eq=False)
class MatrixSet:
    """An indexed family of at least two ``d x d`` matrices over one field."""

    generators: np.ndarray
    labels: tuple[str, ...] = ()
    field: str = "real"
    name: str = ""

    def __post_init__(self):
        mats = [as_matrix(g, self.field) for g in self.generators]
        if len(mats) < 2:
            raise ValueError("card(K) >= 2 required")
        d = mats[0].shape[0]
        if d < 2:
            raise ValueError("dimension must be at least 2")
        if any(m.shape != (d, d) for m in mats):
            raise ValueError("all generators must share the same dimension")
        gens = np.stack(mats)
        gens.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        labels = tuple(self.labels) or tuple(f"S{i + 1}" for i in range(len(mats)))
        if len(labels) != len(mats):
            raise ValueError("one label per generator required")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_matrices(cls, mats: Sequence, labels: Sequence[str] = (), name: str = "",
                      field: str | None = None) -> "MatrixSet":
        if field is None:
            field = "complex" if any(np.iscomplexobj(np.asarray(m)) for m in mats) else "real"
        return cls(np.asarray([np.asarray(m, dtype=complex if field == "complex" else float)
                               for m in mats]), tuple(labels), field, name)

    @property
    def k(self) -> int:
        return self.generators.shape[0]

    @property
    def d(self) -> int:
        return self.generators.shape[1]

    def scaled(self, c: float) -> "MatrixSet":
        return MatrixSet(self.generators * c, self.labels, self.field, self.name)

    def check_word(self, word: Sequence[int]) -> Word:
        w = tuple(int(i) for i in word)
        if not w:
            raise ValueError("words must have length >= 1")
        bad = [i for i in w if not 0 <= i < self.k]
        if bad:
            raise ValueError(f"word index {bad[0]} out of range for {self.k} generators")
        return w

    def __eq__(self, other):
        if not isinstance(other, MatrixSet):
            return NotImplemented
        return (self.field == other.field and self.labels == other.labels
                and np.array_equal(self.generators, other.generators))

    def __hash__(self):
        return hash((self.field, self.labels, self.generators.tobytes()))


@dataclass(frozen=True)
class ScaledMatrix:
    """``base * 2**exponent``; ``log_scale = exponent * ln 2``.

    Scaling is by exact powers of two, so the represented value is the
    floating-point product with no extra rounding from the rescales.
    """

    base: np.ndarray
    exponent: int = 0

    @property
    def log_scale(self) -> float:
        return self.exponent * LN2

    def value(self) -> np.ndarray:
        return np.ldexp(self.base, self.exponent) if not np.iscomplexobj(self.base) \
            else self.base * 2.0 ** self.exponent


@dataclass
class ScaledBatch:
    """A stack of scaled products sharing the shape ``(m, d, d)``."""

    bases: np.ndarray
    exponents: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.exponents is None:
            self.exponents = np.zeros(self.bases.shape[0], dtype=np.int64)

    def __len__(self):
        return self.bases.shape[0]

    def __getitem__(self, i) -> ScaledMatrix:
        return ScaledMatrix(self.bases[i].copy(), int(self.exponents[i]))


def _rescale(bases: np.ndarray, exps: np.ndarray, force: bool = False) -> None:
    norms = induced_norm_batch(bases, "inf")
    nz = norms > 0
    _, e = np.frexp(np.where(nz, norms, 1.0))
    # norm = m * 2^e, m in [0.5, 1); dividing by 2^(e-1) lands in [1, 2)
    shift = (e - 1).astype(np.int64)
    if not force:
        shift = np.where((shift < _LOW_EXP) | (shift >= _HIGH_EXP), shift, 0)
    shift = np.where(nz, shift, 0)
    todo = shift != 0
    if np.any(todo):
        bases[todo] = bases[todo] * np.ldexp(1.0, -shift[todo])[:, None, None]
        exps[todo] += shift[todo]


def _raw_products(gens: np.ndarray, words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    bases = gens[words[:, 0]].copy()
    exps = np.zeros(words.shape[0], dtype=np.int64)
    for j in range(1, words.shape[1]):
        bases = bases @ gens[words[:, j]]
        _rescale(bases, exps)
    return bases, exps


def evaluate_words(mset: MatrixSet, words: np.ndarray) -> ScaledBatch:
    """Evaluate every row of the integer array ``words`` (shape ``(m, n)``).

    Each row's result depends only on that row, so a word yields the same
    bits no matter which batch it is evaluated in.
    """
    words = np.asarray(words, dtype=np.int64)
    if words.ndim != 2 or words.shape[1] < 1:
        raise ValueError("words must be a non-empty 2-D index array")
    bases, exps = _raw_products(mset.generators, words)
    _rescale(bases, exps, force=True)
    return ScaledBatch(bases, exps)


def evaluate_word(mset: MatrixSet, word: Sequence[int]) -> ScaledMatrix:
    """The ordered product ``S_w`` as a :class:`ScaledMatrix`.

    The base is renormalised to an inf-norm in ``[1, 2)`` (or left at zero).
    """
    w = mset.check_word(word)
    return evaluate_words(mset, np.array([w]))[0]


def iter_all_products(mset: MatrixSet, n: int, block: int = 1 << 16) -> Iterator[ScaledBatch]:
    """Products of all ``k**n`` words of length ``n`` in lexicographic blocks.

    Every product is formed left to right with the same rescaling rule as
    :func:`evaluate_words`, so values agree bit for bit with it.
    """
    gens = mset.generators
    k, d = mset.k, mset.d
    m = n
    while m > 1 and k ** m > block:
        m -= 1
    head = n - m
    for prefix in itertools.product(range(k), repeat=head):
        if head:
            bases, exps = _raw_products(gens, np.array([prefix], dtype=np.int64))
            steps = m
        else:
            bases, exps = gens.copy(), np.zeros(k, dtype=np.int64)
            steps = m - 1
        for _ in range(steps):
            bases = (bases[:, None] @ gens[None, :]).reshape(-1, d, d)
            exps = np.repeat(exps, k)
            _rescale(bases, exps)
        _rescale(bases, exps, force=True)
        yield ScaledBatch(bases, exps)


def all_products(mset: MatrixSet, n: int) -> ScaledBatch:
    """Products of all ``k**n`` words of length ``n``, in lexicographic order."""
    blocks = list(iter_all_products(mset, n, block=max(mset.k ** n, 1)))
    return blocks[0]


def words_array(k: int, n: int) -> np.ndarray:
    """All words of length ``n`` as rows, lexicographic order."""
    grids = np.indices((k,) * n).reshape(n, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def enumerate_words(k: int, n: int, prefix: Sequence[int] = ()) -> Iterator[Word]:
    """Yield all ``k**n`` words of length ``n`` lexicographically.

    With ``prefix``, only the words starting with it are produced, which lets
    callers split the word space into disjoint blocks.
    """
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    prefix = tuple(prefix)
    if len(prefix) > n:
        return
    for tail in itertools.product(range(k), repeat=n - len(prefix)):
        yield prefix + tail


def necklace_representatives(k: int, n: int) -> Iterator[Word]:
    """Lexicographically least rotation of every cyclic class of length-``n`` words.

    Fredricksen-Kessler-Maiorana generation: walk the prenecklaces in
    lexicographic order and keep those whose length is a multiple of the
    length of their longest Lyndon prefix.
    """
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    a = [0] * (n + 1)

    def gen(t: int, p: int):
        if t > n:
            if n % p == 0:
                yield tuple(a[1:])
            return
        a[t] = a[t - p]
        yield from gen(t + 1, p)
        for j in range(a[t - p] + 1, k):
            a[t] = j
            yield from gen(t + 1, t)

    yield from gen(1, 1)


def necklace_count(k: int, n: int) -> int:
    total = 0
    for dv in range(1, n + 1):
        if n % dv == 0:
            total += _totient(dv) * k ** (n // dv)
    return total // n


def _totient(m: int) -> int:
    return sum(1 for i in range(1, m + 1) if math.gcd(i, m) == 1)


def canonical_rotation(word: Sequence[int]) -> Word:
    w = tuple(word)
    return min(w[i:] + w[:i] for i in range(len(w)))


def primitive_root(word: Sequence[int]) -> Word:
    """Shortest ``u`` with ``word == u * r`` for some ``r``."""
    w = tuple(word)
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w


def format_word(word: Sequence[int]) -> str:
    return ",".join(str(i + 1) for i in word)


def parse_word(text: str) -> Word:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise ValueError("empty word")
    return tuple(int(p) - 1 for p in parts)


def check_dimension(d: int) -> None:
    if not 2 <= d <= MAX_DIM:
        raise ValueError(f"dimension must lie in 2..{MAX_DIM}")
