import math
from decimal import Decimal
from math import comb

import numpy as np
import pytest

from jsrcert.bounds import bounds_table
from jsrcert.families import (
    ALPHA_STAR,
    ALPHA_STAR_DECIMAL,
    FAMILIES,
    build_family,
    hare_family,
    morris_family,
    random_family,
    scaled_rotation_family,
    sign_pair_enumerator,
    triangular_family,
    triangular_rho,
)
from jsrcert.limits import irreducibility
from jsrcert.linalg import induced_norm, spectral_radius


def test_alpha_star_constant():
    assert ALPHA_STAR_DECIMAL.startswith("0.749326546330")
    assert abs(Decimal(ALPHA_STAR) - Decimal(ALPHA_STAR_DECIMAL)) < Decimal("1e-16")


def test_hare_examples():
    h = hare_family(ALPHA_STAR)
    assert abs(spectral_radius(h.generators[0]) - 1.0) <= 1e-12
    assert abs(spectral_radius(h.generators[1]) - ALPHA_STAR) <= 1e-12
    ones = hare_family(1.0)
    assert [spectral_radius(g) for g in ones.generators] == [1.0, 1.0]
    assert spectral_radius(hare_family(0.5).generators[1]) == 0.5
    assert np.array_equal(h.generators[0], [[1, 1], [0, 1]])


@pytest.mark.parametrize("alpha", [0.0, -0.1, 1.01, math.nan])
def test_hare_domain(alpha):
    with pytest.raises(ValueError):
        hare_family(alpha)


def test_morris_examples():
    m = morris_family(0.5)
    assert spectral_radius(m.generators[0]) == 1.0
    assert spectral_radius(m.generators[1]) == 0.5
    t = bounds_table(m, 1, "inf")
    assert t.best_lo == t.best_hi == 1.0
    assert np.array_equal(morris_family(-0.5).generators[1], [[0, -0.5], [-0.5, 0]])
    for bad in (1.0, 0.0, -1.0, 2.0):
        with pytest.raises(ValueError):
            morris_family(bad)


def test_scaled_rotation_examples():
    s = scaled_rotation_family([0.9, 0.8], [1.0, math.sqrt(2)])
    assert bounds_table(s, 4).best_lo == pytest.approx(0.9, abs=1e-14)
    r = scaled_rotation_family([1.0, 1.0], [1.0, math.sqrt(2)])
    assert all(induced_norm(g, "two") == pytest.approx(1.0, abs=1e-15) for g in r.generators)
    a, b = s.generators
    assert spectral_radius(a @ b) == pytest.approx(spectral_radius(a) * spectral_radius(b),
                                                   rel=1e-12)
    with pytest.raises(ValueError):
        scaled_rotation_family([0.9, 0.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        scaled_rotation_family([0.9, 0.8], [1.0])


def test_triangular_examples():
    diags = [(0.8, 0.5), (0.6, 0.7)]
    t = triangular_family(diags, strict_upper_seed=3)
    assert triangular_rho(diags) == 0.8
    assert bounds_table(t, 10).best_lo == pytest.approx(0.8, rel=1e-12)
    for seed in range(5):
        other = triangular_family(diags, strict_upper_seed=seed)
        assert bounds_table(other, 6).best_lo == pytest.approx(0.8, rel=1e-12)
        assert np.allclose(np.tril(other.generators[0], -1), 0)
    z = triangular_family([(0, 0, 0), (0, 0, 0)], strict_upper_seed=1)
    assert bounds_table(z, 3).best_lo == 0.0
    assert not np.any(z.generators[0] @ z.generators[1] @ z.generators[0])


def test_sign_pairs():
    pairs = list(sign_pair_enumerator(2))
    assert len(pairs) == comb(81, 2) + 81 == 3321
    ident = next(p for p in pairs
                 if np.array_equal(p.generators[0], -np.eye(2))
                 and np.array_equal(p.generators[1], np.eye(2)))
    assert bounds_table(ident, 2).best_lo == 1.0
    zero = pairs[next(i for i, p in enumerate(pairs) if not p.generators.any())]
    assert bounds_table(zero, 2).best_hi == 0.0
    with pytest.raises(ValueError):
        next(sign_pair_enumerator(3))


def test_random_family():
    a, b = random_family(3, 3, 2, 0.7), random_family(3, 3, 2, 0.7)
    assert np.array_equal(a.generators, b.generators)
    assert np.abs(a.generators).max() <= 0.7
    assert not random_family(1, scale=0.0).generators.any()
    for seed in range(10):
        assert bounds_table(random_family(seed, 2, 2, 0.1), 1).row(1).hi < 1
    with pytest.raises(ValueError):
        random_family(0, d=17)
    with pytest.raises(ValueError):
        random_family(0, k=1)


def test_morris_and_scaled_rotation_irreducible():
    assert irreducibility(morris_family(0.5)).irreducible
    assert irreducibility(scaled_rotation_family([0.9, 0.8], [1.0, math.sqrt(2)])).irreducible


def test_build_family_registry():
    assert set(FAMILIES) >= {"hare", "morris", "scaled_rotation", "rotation", "triangular",
                             "random"}
    spec = build_family("hare")
    assert spec.matrix_set.generators[1, 0, 0] == ALPHA_STAR
    spec = build_family("morris", {"lambda": "0.25"})
    assert spec.matrix_set.generators[1, 0, 1] == 0.25
    spec = build_family("scaled_rotation", {"scales": "0.9,0.8", "angles": "1,sqrt2"})
    assert np.array_equal(spec.matrix_set.generators,
                          scaled_rotation_family([0.9, 0.8], [1, math.sqrt(2)]).generators)
    spec = build_family("triangular", {"diagonals": "0.8,0.5;0.6,0.7", "seed": "3"})
    assert spec.matrix_set.d == 2
    with pytest.raises(ValueError):
        build_family("nope")


def test_constructors_deterministic():
    for name in FAMILIES:
        a, b = build_family(name).matrix_set, build_family(name).matrix_set
        assert a == b
