"""Stability decisions for discrete-time switched linear systems ``x_t = x_{t-1} S_{i_t}``.

Two depth-``n`` certificates are each sound on their own:

* ``max ||S_w|| < 1`` over ``|w| = n`` forces every product to decay, so the
  system is stable under arbitrary switching;
* ``max rho(S_w) >= 1`` over ``|w| = n`` exhibits a periodic switching law
  that does not decay, so it is not.

Trying both for ``n = 1, 2, ...`` terminates whenever the joint spectral
radius is not exactly 1 and the set has the finiteness property.  (The
commonly quoted pairing of "rho < 1" with "rho_n < 1" and "rho >= 1" with
"rho_hat_n >= 1" states the non-certifying directions; the procedure here
uses the certifying ones.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bounds import DEFAULT_BUDGET, _max_norm_log, _max_rho_log
from .linalg import NormKind, vector_norm
from .products import MatrixSet, Word

# values within this relative distance of 1 are treated as undecided
GUARD = 1e-9


@dataclass
class Decision:
    outcome: str  # stable | unstable | unknown
    depth: int
    witness: Word | None = None
    norm: NormKind | None = None
    value: float | None = None

    def as_record(self) -> dict:
        return {
            "outcome": self.outcome,
            "witness_depth": self.depth,
            "witness": None if self.witness is None else [i + 1 for i in self.witness],
            "norm": None if self.norm is None else self.norm.value,
            "value": self.value,
        }


def periodically_switched_stable(mset: MatrixSet, depth: int, budget: int = DEFAULT_BUDGET,
                                  guard: float = GUARD) -> tuple[bool, Word | None]:
    """Whether ``rho(S_w) < 1`` for every word up to length ``depth``.

    Returns ``(True, None)`` or ``(False, first violating word)``.  Radii in
    ``[1 - guard, 1)`` count as violations because they cannot be told apart
    from 1 in floating point.
    """
    for n in range(1, depth + 1):
        logval, word = _max_rho_log(mset, n, budget)
        if logval >= math.log1p(-guard):
            return False, word
    return True, None


def decide_stability(mset: MatrixSet, max_depth: int, norm: NormKind | str = NormKind.INF,
                     budget: int = DEFAULT_BUDGET, guard: float = GUARD) -> Decision:
    """Interleave the norm (stable) and spectral (unstable) tests by depth.

    Returns the first depth at which either test fires, or ``unknown`` after
    ``max_depth``.  The ``guard`` band around 1 keeps rounding from deciding
    boundary cases such as pure rotations.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    norm = NormKind(norm)
    for n in range(1, max_depth + 1):
        hat_log, hat_word = _max_norm_log(mset, n, norm, budget)
        if hat_log < math.log1p(-guard):
            return Decision("stable", n, hat_word, norm, math.exp(hat_log))
        rho_log, rho_word = _max_rho_log(mset, n, budget)
        if rho_log >= math.log1p(guard):
            return Decision("unstable", n, rho_word, None, math.exp(rho_log))
    return Decision("unknown", max_depth)


# ---------------------------------------------------------------------------
# switching sequences and trajectories


class SwitchingSequence:
    """An infinite index sequence ``i_1, i_2, ...`` over ``range(k)``.

    Build with :meth:`periodic`, :meth:`random` or :meth:`sturmian`.
    """

    def __init__(self, kind: str, params: dict):
        self.kind = kind
        self.params = params

    @classmethod
    def periodic(cls, word: Sequence[int]) -> "SwitchingSequence":
        w = tuple(int(i) for i in word)
        if not w:
            raise ValueError("periodic switching needs a non-empty word")
        return cls("periodic", {"word": w})

    @classmethod
    def random(cls, seed: int) -> "SwitchingSequence":
        return cls("random", {"seed": int(seed)})

    @classmethod
    def sturmian(cls, gamma: float, delta: float = 0.0) -> "SwitchingSequence":
        if not 0 <= gamma <= 1:
            raise ValueError("gamma must lie in [0, 1]")
        return cls("sturmian", {"gamma": float(gamma), "delta": float(delta)})

    def take(self, k: int, steps: int) -> np.ndarray:
        if self.kind == "periodic":
            w = np.array(self.params["word"])
            if w.max() >= k:
                raise ValueError("switching index out of range")
            return np.resize(w, steps)
        if self.kind == "random":
            return np.random.default_rng(self.params["seed"]).integers(0, k, size=steps)
        if k < 2:
            raise ValueError("sturmian switching needs two generators")
        return np.array(sturmian_word(self.params["gamma"], self.params["delta"], steps))

    def describe(self) -> str:
        if self.kind == "periodic":
            return "periodic:" + ",".join(str(i + 1) for i in self.params["word"])
        if self.kind == "random":
            return f"random:{self.params['seed']}"
        return f"sturmian:{self.params['gamma']!r},{self.params['delta']!r}"


def sturmian_word(gamma: float, delta: float, length: int) -> Word:
    """Mechanical word ``s_t = floor((t+1) gamma + delta) - floor(t gamma + delta)``.

    Letters 0 and 1 are the first and second generator indices.  The floors
    are taken exactly on the binary values of ``gamma`` and ``delta``; float
    rounding near integers would otherwise break the balance property
    (e.g. ``gamma = delta = 1/3``).
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    g, dl = Fraction(gamma), Fraction(delta)
    den = g.denominator * dl.denominator // math.gcd(g.denominator, dl.denominator)
    a, b = g.numerator * (den // g.denominator), dl.numerator * (den // dl.denominator)
    if max(length * abs(a) + abs(b), den) < 2 ** 62:
        t = np.arange(length + 1, dtype=np.int64)
        fl = (t * a + b) // den
    else:
        fl = np.array([(t * a + b) // den for t in range(length + 1)], dtype=object)
    return tuple(int(x) for x in np.diff(fl))


def simulate_trajectory(mset: MatrixSet, seq: SwitchingSequence, x0, steps: int,
                        norm: NormKind | str = NormKind.TWO) -> np.ndarray:
    """Log-norm trajectory of ``x_t = x_{t-1} S_{i_t}`` for ``t = 0..steps``.

    Returns an array of shape ``(steps + 1, 2)`` holding ``(t, log ||x_t||)``.
    The state is renormalised each step so long runs neither overflow nor
    underflow; a state that hits exactly zero gives ``-inf`` thereafter.
    """
    x = np.asarray(x0, dtype=mset.generators.dtype).reshape(-1)
    if x.shape != (mset.d,):
        raise ValueError(f"x0 must have length {mset.d}")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    n0 = vector_norm(x, norm)
    if n0 == 0:
        raise ValueError("x0 must be nonzero")
    idx = seq.take(mset.k, steps)
    gens = mset.generators
    out = np.empty((steps + 1, 2))
    logn = math.log(n0)
    x = x / n0
    out[0] = (0, logn)
    for t in range(1, steps + 1):
        x = x @ gens[idx[t - 1]]
        nx = vector_norm(x, norm)
        if nx == 0:
            out[t:, 0] = np.arange(t, steps + 1)
            out[t:, 1] = -math.inf
            return out
        logn += math.log(nx)
        x = x / nx
        out[t] = (t, logn)
    return out


def growth_exponent(traj: np.ndarray) -> float:
    """Least-squares slope of ``log ||x_t||`` against ``t`` over the last half."""
    tail = traj[len(traj) // 2:]
    if not np.all(np.isfinite(tail[:, 1])):
        return -math.inf
    t, y = tail[:, 0], tail[:, 1]
    return float(np.polyfit(t, y, 1)[0])
